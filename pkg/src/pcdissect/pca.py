"""Principal components of an embedding matrix.

The fit forms the d x d covariance from centered data (block-accumulated
in float64, fixed order) and eigendecomposes it; with vocabulary sizes
near 4e5 and d <= 1000 this is far cheaper than a full SVD and the d^3
eigendecomposition is negligible.  Eigenvector sign is fixed so that each
component's largest-magnitude entry is positive (ties to the lowest
index), which makes two fits of the same matrix bit-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import scipy.linalg

from .embeddings import EmbeddingSet
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    MalformedHeader,
    NumericalFailure,
    RankOutOfBounds,
)

_BLOCK_ROWS = 16384  # accumulation block; constant so the reduction order is fixed

_MAGIC = b"PCAM"


@dataclass(frozen=True)
class ComponentRange:
    """Half-open range [start, end) of 0-based component ranks."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise RankOutOfBounds(
                f"need 0 <= start < end, got [{self.start}, {self.end})"
            )

    @property
    def width(self) -> int:
        return self.end - self.start

    def check_dim(self, dim: int) -> None:
        if self.end > dim:
            raise DimensionMismatch(
                f"component range [{self.start}, {self.end}) exceeds dim {dim}"
            )


@dataclass(frozen=True)
class PcaModel:
    """Mean, orthonormal components (columns, by descending variance), and
    per-component sample variances of the centered data."""

    mean: np.ndarray
    components: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        mean = np.ascontiguousarray(self.mean, dtype=np.float64)
        comps = np.ascontiguousarray(self.components, dtype=np.float64)
        variances = np.ascontiguousarray(self.variances, dtype=np.float64)
        d = mean.shape[0]
        if comps.shape != (d, d) or variances.shape != (d,):
            raise DimensionMismatch("inconsistent model array shapes")
        if not (
            np.isfinite(mean).all()
            and np.isfinite(comps).all()
            and np.isfinite(variances).all()
        ):
            raise NumericalFailure("model contains non-finite entries")
        if np.any(variances < 0) or np.any(np.diff(variances) > 0):
            raise NumericalFailure("variances must be non-negative and non-increasing")
        gram = comps.T @ comps
        if np.abs(gram - np.eye(d)).max() > 1e-6:
            raise NumericalFailure("components are not orthonormal within 1e-6")
        for arr in (mean, comps, variances):
            arr.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "variances", variances)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    # -- binary persistence: b"PCAM", uint32 d, then mean, components
    #    (column-major), variances, all little-endian float64.

    def save(self, path: Union[str, Path]) -> None:
        out = bytearray(_MAGIC)
        out += struct.pack("<I", self.dim)
        out += self.mean.astype("<f8").tobytes()
        out += np.asfortranarray(self.components).astype("<f8").tobytes(order="F")
        out += self.variances.astype("<f8").tobytes()
        Path(path).write_bytes(bytes(out))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PcaModel":
        data = Path(path).read_bytes()
        if len(data) < 8 or data[:4] != _MAGIC:
            raise MalformedHeader("not a PCAM model file")
        d = struct.unpack("<I", data[4:8])[0]
        expect = 8 + 8 * (d + d * d + d)
        if len(data) != expect:
            raise MalformedHeader(
                f"PCAM file length {len(data)} does not match dim {d}"
            )
        body = np.frombuffer(data, dtype="<f8", offset=8).astype(np.float64)
        mean = body[:d]
        comps = body[d:d + d * d].reshape((d, d), order="F")
        variances = body[d + d * d:]
        return cls(mean, comps, variances)


def _column_mean(matrix: np.ndarray) -> np.ndarray:
    """Block-accumulated float64 column mean (fixed reduction order)."""
    n = matrix.shape[0]
    total = np.zeros(matrix.shape[1], dtype=np.float64)
    for start in range(0, n, _BLOCK_ROWS):
        block = matrix[start:start + _BLOCK_ROWS].astype(np.float64)
        total += block.sum(axis=0)
    return total / n


def _scatter(matrix: np.ndarray, mean: np.ndarray) -> np.ndarray:
    n, d = matrix.shape
    scatter = np.zeros((d, d), dtype=np.float64)
    for start in range(0, n, _BLOCK_ROWS):
        block = matrix[start:start + _BLOCK_ROWS].astype(np.float64)
        block -= mean
        scatter += block.T @ block
    return scatter


def fit_pca(emb: EmbeddingSet) -> PcaModel:
    """Fit all d principal components of the embedding matrix.

    Uses the 1/(N-1) variance divisor.  Components with negligible
    variance are kept so band splits always see exactly d components.
    """
    n = len(emb)
    if n < 2:
        raise DegenerateInput(f"need at least 2 rows to fit, got {n}")
    mean = _column_mean(emb.matrix)
    cov = _scatter(emb.matrix, mean) / (n - 1)
    try:
        eigvals, eigvecs = scipy.linalg.eigh(cov)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    # descending variance; stable so equal eigenvalues keep solver order
    order = np.argsort(-eigvals, kind="stable")
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]
    # sign convention: largest-magnitude entry positive, ties to lowest index
    lead = np.argmax(np.abs(eigvecs), axis=0)
    flip = eigvecs[lead, np.arange(eigvecs.shape[1])] < 0
    eigvecs[:, flip] *= -1.0
    return PcaModel(mean, eigvecs, eigvals)


def explained_variance_ratio(model: PcaModel, crange: ComponentRange) -> float:
    """Fraction of total variance carried by the ranks in ``crange``.

    A model whose total variance is zero (all rows identical) has no
    meaningful ratio; the range's width fraction is returned so that
    disjoint covers still sum to one.
    """
    crange.check_dim(model.dim)
    total = float(model.variances.sum())
    if total == 0.0:
        return crange.width / model.dim
    return float(model.variances[crange.start:crange.end].sum() / total)


def project(
    emb: EmbeddingSet, model: PcaModel, crange: ComponentRange
) -> EmbeddingSet:
    """Project every vector onto the given component range.

    Output row i is components[:, start:end].T @ (v_i - mean); vocabulary
    order is preserved and the result has dim = range width.
    """
    crange.check_dim(model.dim)
    if emb.dim != model.dim:
        raise DimensionMismatch(
            f"embedding dim {emb.dim} does not match model dim {model.dim}"
        )
    u = model.components[:, crange.start:crange.end]
    n = len(emb)
    out = np.empty((n, crange.width), dtype=np.float32)
    for start in range(0, n, _BLOCK_ROWS):
        block = emb.matrix[start:start + _BLOCK_ROWS].astype(np.float64)
        block -= model.mean
        out[start:start + _BLOCK_ROWS] = (block @ u).astype(np.float32)
    return EmbeddingSet(emb.words, out)
