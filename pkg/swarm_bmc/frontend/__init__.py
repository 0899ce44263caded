"""Mini-language frontend: lexer, parser, printer, validator and feature discovery."""

from pathlib import Path
from typing import Mapping, Optional

from swarm_bmc.errors import ValidationFailed
from swarm_bmc.frontend.features import FeatureSet, extract_features
from swarm_bmc.frontend.parser import parse, parse_file
from swarm_bmc.frontend.printer import pretty_print
from swarm_bmc.frontend.syntax import Program
from swarm_bmc.frontend.validate import SemanticError, SemanticErrorKind, validate


def load_program(filename: str | Path, defines: Optional[Mapping[str, int]] = None) -> Program:
    """Parse and validate a file, raising ValidationFailed on semantic errors."""
    program = parse_file(filename, defines)
    errors = validate(program)
    if errors:
        raise ValidationFailed(errors)
    return program


def load_source(source: str, defines: Optional[Mapping[str, int]] = None) -> Program:
    program = parse(source, defines=defines)
    errors = validate(program)
    if errors:
        raise ValidationFailed(errors)
    return program


__all__ = [
    "FeatureSet", "Program", "SemanticError", "SemanticErrorKind", "extract_features", "load_program",
    "load_source", "parse", "parse_file", "pretty_print", "validate",
]
