class ModelError(ValueError):
    """A model geometry was constructed with out-of-range parameters."""


class NotApplicable(ValueError):
    """The requested quantity does not exist for this family."""


class FormulaInapplicable(ArithmeticError):
    """A printed closed form cannot be evaluated or fails its residual check.

    ``expression`` names the failing formula and ``reason`` says what went
    wrong; ``value`` holds whatever was computed before the failure.
    """

    def __init__(self, expression: str, reason: str, value=None, residual=None):
        super().__init__(f"{expression}: {reason}")
        self.expression = expression
        self.reason = reason
        self.value = value
        self.residual = residual


class ResidualCheckFailed(RuntimeError):
    """A certified root failed the independent tension-field check."""
