"""Exception hierarchy.

Every error carries an ``exit_code`` used by the CLI: parse problems exit 2,
semantic problems (bad declarations, shapes, broken preconditions) exit 3,
mathematical verdict failures exit 1.
"""


class OmegaNijError(Exception):
    exit_code = 3

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(OmegaNijError):
    exit_code = 2

    def __init__(self, message: str, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.line = line
        self.field = field


class SemanticError(OmegaNijError):
    exit_code = 3


class ShapeMismatch(SemanticError):
    pass


class NonAssociativeTable(SemanticError):
    pass


class BadUnit(SemanticError):
    pass


class NoUnit(SemanticError):
    pass


class BimoduleAxiomsFail(SemanticError):
    pass


class NotNijenhuis(SemanticError):
    pass


class NotNFBimodule(SemanticError):
    pass


class NotASection(SemanticError):
    pass


class OrderTooLow(SemanticError):
    pass


class OrderMismatch(SemanticError):
    pass


class IncompatibleContexts(SemanticError):
    pass


class MathVerdictError(OmegaNijError):
    """A mathematical statement checked at runtime turned out false."""

    exit_code = 1


class NoSolution(MathVerdictError):
    pass


class NotCocycle(MathVerdictError):
    pass


class NotCoboundary(MathVerdictError):
    pass


class DiagramFails(MathVerdictError):
    pass


class BudgetExceeded(SemanticError):
    pass
