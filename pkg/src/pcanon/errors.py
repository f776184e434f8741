"""Exception hierarchy shared across the package.

The CLI maps these to exit codes: InputError -> 1, ResourceCapError -> 2,
InternalInconsistencyError -> 3.
"""


class InputError(ValueError):
    """Bad user-supplied data."""


class ResourceCapError(RuntimeError):
    """An enumeration or walk exceeded its configured cap."""


class InternalInconsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""
