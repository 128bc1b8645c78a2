class HallforgeError(Exception):
    """Base class for errors raised by this package."""


class BudgetExceeded(HallforgeError):
    """A desk-scale enumeration guard would be exceeded."""


class QuiverSchemaError(HallforgeError, ValueError):
    """Malformed quiver document, or a quiver the engine refuses (loops)."""


class ConsistencyError(HallforgeError):
    """An internal identity failed: a count is negative or not integral."""


class KindMismatch(HallforgeError, TypeError):
    """Hall elements of different basis kinds were combined."""
