"""Exception hierarchy. Every error carries a stable machine-readable code
so the HTTP layer can surface them as structured {code, message, detail}."""

from __future__ import annotations


class DockdrillError(Exception):
    code = "internal"

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def payload(self) -> dict:
        return {"code": self.code, "message": self.message, "detail": self.detail}


class ParseError(DockdrillError):
    """Malformed coordinate record; carries the 1-based line number."""

    code = "parse_error"

    def __init__(self, message: str, line_number: int | None = None):
        detail = None if line_number is None else f"line {line_number}"
        super().__init__(message, detail)
        self.line_number = line_number


class EmptyStructureError(ParseError):
    code = "empty_structure"


class MappingError(DockdrillError):
    """Chain mapping inconsistent with the input (missing chain, bad colors)."""

    code = "mapping_error"


class IntegrityError(DockdrillError):
    """Ensemble-wide consistency violated (residue/atom lists differ across
    configurations of the same protein)."""

    code = "integrity_error"


class InputError(DockdrillError):
    """Invalid user-supplied value or file outside the parse/integrity cases."""

    code = "input_error"


class UnknownEntityError(DockdrillError):
    """Reference to a protein, pair, configuration, or filter that does not
    exist in the current ensemble/session."""

    code = "unknown_entity"


class DegenerateGeometryError(DockdrillError):
    """Superposition input with fewer than 3 atoms or collinear atoms."""

    code = "degenerate_geometry"
