from dataclasses import dataclass


class DomainError(Exception):
    """Mathematically invalid input: bad Cartan data, a twist that does not permute S~, a reducible modulus, ..."""
    pass


class ResourceError(Exception):
    """A configured budget (length bound, memo size, frontier size) was exceeded."""
    pass


class ConsistencyError(Exception):
    """An internal cross-check disagreed. Always a bug or an unsupported input, never a user error."""
    pass


class ExpressionError(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


class CommandParseError(Exception):
    def __init__(self, message: str, token: str | None = None, position: int | None = None):
        where = f" near '{token}' (argument {position})" if token is not None else ""
        super().__init__(f"{message}{where}")
        self.message = message
        self.token = token
        self.position = position


@dataclass(frozen=True)
class Undecided:
    """Result of a bounded search that neither proved nor refuted its question."""
    reason: str

    def __bool__(self):
        raise TypeError("Undecided has no truth value; test with isinstance()")
