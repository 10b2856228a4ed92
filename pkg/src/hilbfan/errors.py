"""Exception types shared across the package."""


class HilbfanError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HilbfanError):
    """Input lies outside the mathematical domain of the operation."""


class RankError(HilbfanError):
    """A one-parameter family of subspaces is not of constant rank."""


class UnsupportedMeasuringSequence(HilbfanError):
    """No implemented group action moves the given ideal."""


class StructuralZero(HilbfanError):
    """A requested minor vanishes identically in the parameters."""


class ParseError(HilbfanError):
    """Invalid ideal or substitution expression.

    Carries the offending text and a 0-based position when known, so the
    CLI can point at the character that broke parsing.
    """

    def __init__(self, message: str, text: str | None = None, pos: int | None = None):
        super().__init__(message)
        self.text = text
        self.pos = pos

    def __str__(self) -> str:
        base = super().__str__()
        if self.text is None or self.pos is None:
            return base
        return f"{base}\n  {self.text}\n  {' ' * self.pos}^"
