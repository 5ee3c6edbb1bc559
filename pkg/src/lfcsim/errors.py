"""Exception types shared across the package."""


class DatasetError(ValueError):
    """A dataset file violates the schema or an invariant.

    The message always names the offending field or section.
    """


class ConvergenceError(RuntimeError):
    """An iterative numerical routine failed to converge."""
