"""Typed errors raised across the toolkit.

Every recoverable failure raises a subclass of ToolkitError so that callers
(and the CLI, which maps them to exit code 1) can rely on stable names.
"""


class ToolkitError(Exception):
    """Base class for all typed toolkit errors."""


# ---------------------------------------------------------------------------
# embedding files

class DimensionMismatch(ToolkitError):
    """A vector or matrix does not have the expected number of entries."""


class DuplicateToken(ToolkitError):
    """The same token appears more than once in an embedding file."""


class MalformedHeader(ToolkitError):
    """A word2vec header is invalid or disagrees with the stream body."""


class NonFiniteValue(ToolkitError):
    """A vector entry is NaN, infinite, or not parseable as a finite number."""


class UnencodableToken(ToolkitError):
    """A token contains a byte that is a delimiter in the target format."""


# ---------------------------------------------------------------------------
# principal components

class DegenerateInput(ToolkitError):
    """Too few samples for the requested statistic."""


class NumericalFailure(ToolkitError):
    """The eigensolver failed to converge."""


class RankOutOfBounds(ToolkitError):
    """A component rank lies outside [0, dim)."""


class NonDivisibleDim(ToolkitError):
    """The dimension cannot be cut into the requested equal pieces."""


# ---------------------------------------------------------------------------
# evaluation

class LengthMismatch(ToolkitError):
    """Two sequences that must be aligned have different lengths."""


class ZeroVariance(ToolkitError):
    """A rank correlation input is constant."""


class TooFewEvaluablePairs(ToolkitError):
    """Fewer than two similarity pairs survive vocabulary lookup."""


class SingleClass(ToolkitError):
    """Classifier training data contains fewer than two distinct labels."""


class NonFiniteFeature(ToolkitError):
    """Classifier features contain NaN or infinite entries."""


# ---------------------------------------------------------------------------
# datasets and harness

class MalformedRecord(ToolkitError):
    """A dataset line does not match the documented TSV grammar."""


class UnknownSplit(ToolkitError):
    """A dataset record names a split other than train/test."""


class TooFewRecords(ToolkitError):
    """A required dataset split is empty."""
