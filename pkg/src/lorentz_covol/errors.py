"""Exception hierarchy shared by all modules."""


class CovolError(Exception):
    """Base class for every error raised by this package."""


class InvalidDError(CovolError, ValueError):
    """The discriminant parameter d violates odd / square-free / positive."""


class EvenD(InvalidDError):
    pass


class NotSquareFree(InvalidDError):
    pass


class NonPositive(InvalidDError):
    pass


class BudgetExceeded(CovolError):
    """An exhaustive search would exceed its configured work budget."""


class NonIntegerResult(CovolError, ArithmeticError):
    """A closed-form count failed to divide exactly."""


class NonRationalResult(CovolError, ArithmeticError):
    """A quantity expected to be rational kept an irrational surd part."""


class AssemblyMismatch(CovolError):
    """Siegel-product assembly disagrees with the closed-form covolume."""


class RatioMismatch(CovolError):
    """A symbolic quotient disagrees with its closed form."""


class Table1Mismatch(CovolError):
    """A recomputed table row disagrees with the stored fixture."""


class ParseError(CovolError, ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class LabelOutOfRange(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class NotUnitNormal(CovolError, ValueError):
    """A Lorentz normal vector does not have unit norm."""

    def __init__(self, index: int, norm):
        self.index = index
        self.norm = norm
        super().__init__(f"normal {index} has <e,e> = {norm}, expected 1")


class NotHyperbolic(CovolError, ValueError):
    """Requested triangle/simplex is spherical or Euclidean."""


class DegenerateSpec(CovolError):
    """Monte-Carlo sampling never landed inside the polytope."""
