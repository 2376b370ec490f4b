class OrdinalError(ValueError):
    """Base class for every domain error raised by the calculator."""


class OrdinalParseError(OrdinalError):
    """Expression text does not match the ordinal grammar."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NegativeResultError(OrdinalError, ArithmeticError):
    """Subtraction or predecessor would leave the ordinals."""


class UnsupportedCaseError(OrdinalError):
    """The input is outside the cases the calculator handles exactly."""


class MagnitudeError(UnsupportedCaseError):
    """The input is not below epsilon_0."""


class UnknownOracleError(OrdinalError):
    """A finite Ramsey quantity is neither registered nor within the search budget."""


class NoRuleError(OrdinalError):
    """No bound rule applies to a query."""
