"""Exception hierarchy shared across the package."""


class UnevalError(Exception):
    """Base class for all errors raised by this package."""


class JsonParseError(UnevalError):
    """Instance text is not valid JSON."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (offset {offset})")
        self.offset = offset


class DuplicateKeyError(JsonParseError):
    """A JSON object defines the same member name twice."""


class SchemaParseError(UnevalError):
    """Schema text does not conform to the supported grammar."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


class RefResolutionError(UnevalError):
    """A reference does not resolve inside the current document."""


class GuardednessError(UnevalError):
    """A reference cycle crosses only boolean keywords and references."""

    def __init__(self, cycle: list[str]):
        super().__init__("unguarded recursion through " + " -> ".join(cycle))
        self.cycle = cycle


class EliminationError(UnevalError):
    """Internal invariant of the rewriting pipeline was violated."""
