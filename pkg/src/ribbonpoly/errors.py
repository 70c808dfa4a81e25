"""Exception hierarchy.  Everything subclasses ``ValueError`` so callers can catch broadly."""


class RibbonPolyError(ValueError):
    """Base class for precondition violations (CLI exit code 1)."""


class InvalidGraphError(RibbonPolyError):
    pass


class UnknownIdError(RibbonPolyError):
    pass


class InvalidArcError(RibbonPolyError):
    pass


class LoopContractionError(RibbonPolyError):
    pass


class PlanarityError(RibbonPolyError):
    pass


class OrientabilityError(RibbonPolyError):
    pass


class BudgetExceededError(RibbonPolyError):
    pass


class DuplicateLabelError(RibbonPolyError):
    pass


class ConstructionError(RibbonPolyError):
    """An internal self-check failed; indicates a bug rather than bad input."""


class ParseError(ValueError):
    """Malformed input text (CLI exit code 2)."""


class PDParseError(ParseError):
    pass


class GraphFormatError(ParseError):
    pass
