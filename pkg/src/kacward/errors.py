"""Exception hierarchy shared across the package.

The CLI maps each class to a distinct exit code, so keep the split:
format problems (bad file), embedding problems (bad geometry), and
numerical problems (determinant misbehaving) stay separate.
"""


class KacwardError(Exception):
    """Base class for all package-specific errors."""


class GraphFormatError(KacwardError):
    """The graph file (or raw graph data) is malformed."""


class InvalidEmbeddingError(KacwardError):
    """An operation required a valid straight-line embedding and did not get one."""


class NumericalError(KacwardError):
    """A numerical identity that should hold failed (singular or non-real determinant)."""
