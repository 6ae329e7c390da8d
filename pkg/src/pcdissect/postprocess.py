"""Post-processing of embeddings in their principal-component basis.

``ppa`` is the all-but-the-top style post-processing: subtract the mean
embedding, fit PCA, and remove each vector's projections onto the top D
components.  The mean is deliberately not restored afterwards; callers
wanting mean-only removal use D=0.  ``ppa_pca_reduce`` chains it with a
PCA truncation (process, reduce, process again) to shrink dimensionality.
Band and single-component projections feed the split evaluation and the
per-component probing harness.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import kernels
from .embeddings import EmbeddingSet
from .errors import DimensionMismatch, NonDivisibleDim, RankOutOfBounds
from .pca import ComponentRange, PcaModel, _BLOCK_ROWS, _column_mean, fit_pca, project


@dataclass(frozen=True)
class PpaConfig:
    """Number of top components to remove; 5 is the conventional default
    for 300-dimensional embeddings."""

    d_top: int = 5

    def __post_init__(self):
        if self.d_top < 0:
            raise RankOutOfBounds(f"d_top must be >= 0, got {self.d_top}")


class SplitBand(Enum):
    """Top / middle / bottom third of the component ranks.

    For 300-dim models these are the [0,100), [100,200), [200,300) bands;
    other dims are cut into three equal contiguous bands.
    """

    T = "T"
    M = "M"
    B = "B"

    def component_range(self, dim: int) -> ComponentRange:
        if dim % 3 != 0:
            raise NonDivisibleDim(
                f"dim {dim} is not divisible into three equal bands"
            )
        width = dim // 3
        offset = {"T": 0, "M": 1, "B": 2}[self.value] * width
        return ComponentRange(offset, offset + width)


def _centered_minus_top(
    emb: EmbeddingSet, mean: np.ndarray, u_top: np.ndarray
) -> np.ndarray:
    """float32 result of (v - mean) minus its projections onto u_top."""
    n = len(emb)
    out = np.empty((n, emb.dim), dtype=np.float32)
    for start in range(0, n, _BLOCK_ROWS):
        block = emb.matrix[start:start + _BLOCK_ROWS].astype(np.float64)
        block -= mean
        kernels.remove_projections(block, u_top)
        out[start:start + _BLOCK_ROWS] = block.astype(np.float32)
    return out


def ppa(emb: EmbeddingSet, cfg: PpaConfig = PpaConfig()) -> EmbeddingSet:
    """Subtract the mean embedding and null the top ``cfg.d_top``
    principal directions from every vector.

    Output rows are v' = (v - mean) - sum_i (u_i . (v - mean)) u_i over
    the top components; dimension and vocabulary are unchanged.
    """
    if cfg.d_top > emb.dim:
        raise DimensionMismatch(
            f"cannot remove {cfg.d_top} components from dim {emb.dim}"
        )
    if cfg.d_top == 0:
        mean = _column_mean(emb.matrix)
        u_top = np.zeros((emb.dim, 0), dtype=np.float64)
    else:
        model = fit_pca(emb)
        mean = model.mean
        u_top = np.ascontiguousarray(model.components[:, :cfg.d_top])
    return EmbeddingSet(emb.words, _centered_minus_top(emb, mean, u_top))


def ppa_pca_reduce(
    emb: EmbeddingSet,
    cfg: PpaConfig,
    k: int,
    second_d_top: Optional[int] = None,
) -> EmbeddingSet:
    """Reduce to ``k`` dims: post-process, project onto the top-k
    components of the result, then post-process the k-dim embeddings again
    (same depth unless ``second_d_top`` overrides it)."""
    if not 1 <= k < emb.dim:
        raise DimensionMismatch(
            f"target dim must satisfy 1 <= k < {emb.dim}, got {k}"
        )
    first = ppa(emb, cfg)
    model = fit_pca(first)
    reduced = project(first, model, ComponentRange(0, k))
    again = cfg if second_d_top is None else PpaConfig(second_d_top)
    return ppa(reduced, again)


def split_projection(
    emb: EmbeddingSet, model: PcaModel, band: SplitBand
) -> EmbeddingSet:
    """Embeddings built from one third of the component ranks."""
    return project(emb, model, band.component_range(model.dim))


def component_projection(
    emb: EmbeddingSet, model: PcaModel, rank: int
) -> EmbeddingSet:
    """One-dimensional embeddings from a single principal component."""
    if not 0 <= rank < model.dim:
        raise RankOutOfBounds(
            f"component rank {rank} outside [0, {model.dim})"
        )
    return project(emb, model, ComponentRange(rank, rank + 1))
