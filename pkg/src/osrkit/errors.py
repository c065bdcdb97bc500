"""Exception hierarchy shared by the library, service, and CLI.

Exit-code / HTTP mapping lives at the edges (cli, service.app); the core
raises these types only.
"""


class OsrkitError(Exception):
    """Base class for all library errors."""


class DimensionError(OsrkitError):
    """Input shapes are inconsistent (non-square, mismatched sizes, ...)."""


class DomainError(OsrkitError):
    """A mathematical precondition is violated (e.g. tuple not contractive)."""


class ResourceBudgetError(DomainError):
    """A configured size budget would be exceeded."""


class NumericalFailureError(OsrkitError):
    """A numerical routine failed or produced an unusable result."""


class TupleFileError(OsrkitError):
    """A tuple file could not be parsed or has an invalid shape."""
