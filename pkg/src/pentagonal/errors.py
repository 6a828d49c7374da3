"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An input failed validation (length, sign, ordering, angle sum...)."""


class ConvergenceError(RuntimeError):
    """The maximizer could not produce a trustworthy optimum.

    ``diagnostics`` carries whatever the solver gathered before giving up.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
