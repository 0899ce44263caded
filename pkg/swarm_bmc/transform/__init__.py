"""Program rewrites: variants, inlining, unrolling and SSA conversion."""

from swarm_bmc.transform.inline import inline_calls
from swarm_bmc.transform.ssa import SsaProgram, dump_ssa, to_ssa
from swarm_bmc.transform.unroll import unroll
from swarm_bmc.transform.variants import VariantProgram, make_variant, omit_features, require_features

__all__ = [
    "SsaProgram", "VariantProgram", "dump_ssa", "inline_calls", "make_variant", "omit_features",
    "require_features", "to_ssa", "unroll",
]
