"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


class CapacityError(MemoryError):
    """A requested simulation does not fit in addressable memory."""

    def __init__(self, message: str, required_bytes: int):
        super().__init__(message)
        self.required_bytes = required_bytes


class NumericError(ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""
