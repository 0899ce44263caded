"""Human readable rendering of outcomes and swarm reports."""

from swarm_bmc.bmc.pipeline import Status, VerificationOutcome
from swarm_bmc.swarm.report import Falsified, PartiallyVerified, SwarmReport, VerifiedToDepth

STATUS_TEXT = {
    Status.COUNTEREXAMPLE: "Counterexample",
    Status.VERIFIED: "Verified",
    Status.RESOURCE_OUT: "Resource out",
}

HEADER = ("Omitted Feature", "Status", "vars", "clauses", "solve ms")


def status_text(outcome: VerificationOutcome) -> str:
    text = STATUS_TEXT[outcome.status]
    if outcome.status is Status.RESOURCE_OUT and outcome.reason:
        text += f" ({outcome.reason})"
    return text


def format_table(rows: list[tuple[str, ...]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [cell.ljust(w) if i < 2 else cell.rjust(w) for i, (cell, w) in enumerate(zip(row, widths))]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def swarm_table(report: SwarmReport) -> str:
    rows = [HEADER]
    for result in report.per_config:
        m = result.outcome.metrics
        omitted = ", ".join(result.config.omitted) or "(none)"
        rows.append((omitted, status_text(result.outcome), str(m.num_vars), str(m.num_clauses),
                     f"{m.solve_ms:.1f}"))
    return format_table(rows)


def verdict_text(report: SwarmReport) -> str:
    match report.verdict:
        case Falsified(cex, config):
            return f"falsified by config {config.label}: {cex}"
        case VerifiedToDepth(depth):
            return f"verified to depth {depth}"
        case PartiallyVerified(configs):
            return f"partially verified: {', '.join(c.label for c in configs)}"
    return "inconclusive"


def outcome_text(outcome: VerificationOutcome, stats: bool = False) -> str:
    lines = [str(outcome)]
    cex = outcome.counterexample
    if cex is not None:
        for step in cex.trace:
            values = " ".join(f"{name}={value}" for name, value in step.values.items())
            lines.append(f"  line {step.line}: {values}")
    if stats:
        m = outcome.metrics
        lines.append(f"vars={m.num_vars} clauses={m.num_clauses} encode_ms={m.encode_ms:.1f} "
                     f"solve_ms={m.solve_ms:.1f} sliced={m.sliced}")
    return "\n".join(lines)
