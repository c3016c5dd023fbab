class ValidationError(ValueError):
    """Input violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (integration blow-up, no convergence)."""


class IntegrationError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual
