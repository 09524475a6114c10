"""Exception hierarchy shared across the package."""


class TechgapError(Exception):
    """Base class for all package errors."""

    code = "TechgapError"

    def payload(self) -> dict:
        return {"code": self.code, "message": str(self)}


# --- ontology ---------------------------------------------------------------

class OntologyFormatError(TechgapError):
    code = "OntologyFormatError"


class DuplicateConceptId(OntologyFormatError):
    code = "DuplicateConceptId"


class DanglingEdge(OntologyFormatError):
    code = "DanglingEdge"


class CycleDetected(OntologyFormatError):
    code = "CycleDetected"

    def __init__(self, relation: str, witness):
        self.relation = relation
        self.witness = list(witness)
        super().__init__(f"cycle in relation {relation!r} through {self.witness}")


class UnknownConcept(TechgapError):
    code = "UnknownConcept"


class UnknownTerm(TechgapError):
    code = "UnknownTerm"

    def __init__(self, term: str):
        self.term = term
        super().__init__(f"term {term!r} does not resolve to any concept")


class EmptyExpansion(TechgapError):
    code = "EmptyExpansion"


# --- store / ingest ---------------------------------------------------------

class ParseError(TechgapError):
    code = "ParseError"

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class SchemaViolation(ParseError):
    code = "SchemaViolation"

    def __init__(self, line: int, field: str, message: str):
        self.field = field
        super(ParseError, self).__init__(f"line {line}: field {field!r}: {message}")
        self.line = line


class MappingConflict(TechgapError):
    code = "MappingConflict"


class OrphanEdge(TechgapError):
    code = "OrphanEdge"


class InfeasibleSpec(TechgapError):
    code = "InfeasibleSpec"


# --- analytics / landscape / gap --------------------------------------------

class UnknownNode(TechgapError):
    code = "UnknownNode"


class UnstampedEdge(TechgapError):
    code = "UnstampedEdge"


class UnknownOrganization(TechgapError):
    code = "UnknownOrganization"


class UnknownDimension(TechgapError):
    code = "UnknownDimension"


class UnknownLandscape(TechgapError):
    code = "UnknownLandscape"


class UnknownChartKind(TechgapError):
    code = "UnknownChartKind"


class DimensionMismatch(TechgapError):
    code = "DimensionMismatch"


class UnknownField(TechgapError):
    code = "UnknownField"


class MissingSnapshot(TechgapError):
    code = "MissingSnapshot"
