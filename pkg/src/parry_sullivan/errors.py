"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ParseError(ValueError):
    """Malformed graph text. ``lineno`` is 1-based, or 0 when not tied to a line."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno else ""
        super().__init__(prefix + message)


class ResourceLimitError(RuntimeError):
    """A configured enumeration cap or size limit was exceeded."""

    def __init__(self, cap_name: str, cap: int, message: str = ""):
        self.cap_name = cap_name
        self.cap = cap
        super().__init__(message or f"{cap_name} of {cap} exceeded")
