"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
TrainingError -> 4. See ``runner.cli``.
"""


class AbuseBenchError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(AbuseBenchError):
    """Invalid, unknown, or inconsistent configuration."""


class DataError(AbuseBenchError):
    """Problem with an input file or with dataset contents."""


class TrainingError(AbuseBenchError):
    """Failure while fitting or applying a model."""


# --- data errors ---------------------------------------------------------

class ParseError(DataError):
    """Malformed input row or header; message carries the line number."""


class DuplicateId(DataError):
    """The same example identifier appears more than once."""


class UnknownLabel(DataError):
    """A label value in the file is not covered by the label map."""


class EmptyText(DataError):
    """Example text is empty after normalization."""


class DegenerateClass(DataError):
    """An operation requires at least one example of each class."""


class DegenerateLabels(DataError):
    """Ranking metrics need both a positive and a negative label."""


class EmptyDataset(DataError):
    """Training was asked to run on a dataset with no examples."""


class MissingEmbedding(DataError):
    """An expected id has no vector in the embedding file."""


class RaggedEmbeddings(DataError):
    """Vectors in an embedding file differ in dimension."""


class NonFiniteEmbedding(DataError):
    """An embedding vector contains NaN or infinity."""


class BatchEmbedError(DataError):
    """An embedding provider failed on one example; names its id."""


# --- model / training errors ---------------------------------------------

class ShapeError(TrainingError):
    """Arrays passed to a model do not line up."""


class NonFiniteInput(TrainingError):
    """Training inputs contain NaN or infinity."""


class NonFiniteGradient(TrainingError):
    """A gradient turned non-finite; message names the parameter."""


class EmptySequence(TrainingError):
    """A token sequence contains no non-padding positions."""


class CheckpointError(TrainingError):
    """A model checkpoint is unreadable or has a mismatched manifest."""


class ExperimentError(AbuseBenchError):
    """Wraps an error raised inside an experiment with its stage label."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r}: {cause}")
        self.stage = stage
        self.cause = cause
