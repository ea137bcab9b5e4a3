"""Exception hierarchy shared by every racforge module."""


class RacForgeError(Exception):
    """Base class for all domain errors."""


class InvalidParameter(RacForgeError, ValueError):
    pass


class InvalidAttachment(RacForgeError, ValueError):
    pass


class DegenerateDrawing(RacForgeError):
    """Raised when a drawing violates the simple-drawing convention.

    ``offenders`` lists every degeneracy found, not just the first one.
    """

    def __init__(self, offenders):
        self.offenders = list(offenders)
        preview = "; ".join(str(o) for o in self.offenders[:5])
        more = "" if len(self.offenders) <= 5 else f" (+{len(self.offenders) - 5} more)"
        super().__init__(f"degenerate drawing: {preview}{more}")


class GraphMismatch(RacForgeError, ValueError):
    pass


class DimacsSyntaxError(RacForgeError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class Not3Sat(RacForgeError, ValueError):
    pass


class UnsatAssignment(RacForgeError):
    pass


class InconsistentGeometry(RacForgeError):
    pass


class NonFinite(RacForgeError, FloatingPointError):
    pass


class SchemaError(RacForgeError, ValueError):
    def __init__(self, message, path="$"):
        self.path = path
        super().__init__(f"{path}: {message}")
