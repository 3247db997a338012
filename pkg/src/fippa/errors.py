"""Exception hierarchy shared across the pipeline.

The CLI maps these onto exit codes: config errors exit 2, data errors
exit 3, numerical failures exit 4.
"""


class FippaError(Exception):
    """Base class for all package errors."""


class ConfigError(FippaError):
    """Invalid pipeline configuration (bad ranges, missing inputs)."""


class DataError(FippaError):
    """Malformed or inconsistent input data."""


class NumericalError(FippaError):
    """A numerical routine failed beyond repair (degenerate matrices, NaNs)."""


class PipelineStageError(FippaError):
    """Failure inside one pipeline stage, annotated with stage and C context."""

    def __init__(self, stage: str, n_clusters: int, original: BaseException):
        super().__init__(
            f"stage '{stage}' failed for C={n_clusters}: {original}"
        )
        self.stage = stage
        self.n_clusters = n_clusters
        self.original = original
