"""Run manifest embedded in every JSON report."""

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from swarm_bmc import __version__


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def plain(value: Any) -> Any:
    match value:
        case Path():
            return str(value)
        case list() | tuple():
            return [plain(v) for v in value]
        case dict():
            return {str(k): plain(v) for k, v in value.items()}
        case str() | int() | float() | bool() | None:
            return value
    return str(value)


@dataclass(frozen=True)
class RunManifest:
    argv: tuple[str, ...]
    options: dict[str, Any] = field(default_factory=dict)
    version: str = __version__
    input_sha256: Optional[str] = None

    @staticmethod
    def build(argv: Sequence[str], options: dict[str, Any], source: Optional[str | Path] = None) -> "RunManifest":
        resolved = {k: plain(v) for k, v in sorted(options.items()) if not callable(v)}
        digest = file_digest(source) if source is not None else None
        return RunManifest(tuple(argv), resolved, __version__, digest)

    def to_json(self) -> dict[str, Any]:
        return {
            "argv": list(self.argv),
            "options": self.options,
            "version": self.version,
            "input_sha256": self.input_sha256,
        }
