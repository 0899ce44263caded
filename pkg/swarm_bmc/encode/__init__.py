"""CNF encoding: DIMACS container, gate builder, bit-blaster and slicer."""

from swarm_bmc.encode.bitblast import EncodedInstance, encode, export_dimacs
from swarm_bmc.encode.cnf import CnfFormula, parse_dimacs, write_dimacs
from swarm_bmc.encode.slicer import slice_ssa

__all__ = ["CnfFormula", "EncodedInstance", "encode", "export_dimacs", "parse_dimacs", "slice_ssa", "write_dimacs"]
