"""Exception hierarchy shared by every module."""


class RydgateError(Exception):
    """Base class for all errors raised by the package."""


class ValidationError(RydgateError, ValueError):
    """Invalid user input or configuration (CLI exit code 2)."""


class NumericalError(RydgateError, ArithmeticError):
    """A numerical procedure failed or is ill-conditioned (CLI exit code 3)."""


class UnitMismatchError(ValidationError):
    """Conversion or arithmetic between dimensionally incompatible units."""

    def __init__(self, source, target):
        self.source = source
        self.target = target
        super().__init__(f"cannot convert between units '{source}' and '{target}'")


class IntegrationError(NumericalError):
    """Numerov integration produced an unusable wavefunction."""


class NearResonanceError(NumericalError):
    """Light frequency falls inside the resonance guard band of a transition."""

    def __init__(self, transition, detuning):
        self.transition = transition
        self.detuning = detuning
        super().__init__(
            f"laser within guard band of {transition} (detuning {detuning:.6g} rad/s)"
        )


class IncompleteBudgetError(ValidationError):
    """A budget is missing required mechanism rows."""

    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__("budget is missing rows: " + ", ".join(self.missing))


class ConfigurationError(ValidationError):
    """Configuration is structurally valid but cannot be used as requested."""
