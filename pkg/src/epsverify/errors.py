"""Exception types raised by the engine."""


class EpsverifyError(Exception):
    """Base class for all engine errors."""


class ConfigError(EpsverifyError):
    """Invalid configuration: bad ranges, unbound symbols, schema violations.

    ``path`` is a JSON-path-like locator when the error comes from a config
    document.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class ParseError(EpsverifyError):
    """Lexical or syntax error in an expression string."""

    def __init__(self, message, text, offset, expected=()):
        self.text = text
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class EvaluationError(EpsverifyError):
    """Numerical failure while evaluating at a point (domain, singularity)."""

    def __init__(self, message, point=None, value=None):
        self.point = None if point is None else tuple(float(p) for p in point)
        self.value = value
        self.reason = message
        super().__init__(self._render())

    def _render(self):
        msg = self.reason
        if self.value is not None:
            msg += f" (value {self.value!r})"
        if self.point is not None:
            msg += f" at point {self.point}"
        return msg

    def at(self, point):
        """Return a copy of this error located at ``point``."""
        return EvaluationError(self.reason, point=point, value=self.value)
