"""Word-similarity evaluation and the sentence-vector baseline.

Sentences are represented by the arithmetic mean of their in-vocabulary
word vectors.  Word-pair benchmarks are scored with Spearman's rank
correlation between model cosine similarities and the human ratings.

Out-of-vocabulary policy (applied per token): exact match first, then a
lowercase fallback, then skip.  A similarity pair is skipped when either
token stays unresolved; sentences fall back to the zero vector when no
token resolves.  Skip counts are surfaced in results for transparency.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from math import isfinite
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

import numpy as np
import scipy.stats

from .embeddings import EmbeddingSet
from .errors import (
    DimensionMismatch,
    LengthMismatch,
    MalformedRecord,
    TooFewEvaluablePairs,
    ZeroVariance,
)


@dataclass(frozen=True)
class SimilarityDataset:
    """Word pairs with human similarity ratings (TSV: a, b, score)."""

    name: str
    pairs: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        if len(self.pairs) < 2:
            raise MalformedRecord(
                f"dataset {self.name!r} needs at least 2 pairs"
            )
        for a, b, score in self.pairs:
            if not isfinite(score):
                raise MalformedRecord(
                    f"non-finite score for pair ({a!r}, {b!r})"
                )

    def __len__(self) -> int:
        return len(self.pairs)


def load_similarity_dataset(
    source: Union[bytes, str, TextIO], name: str = "similarity"
) -> SimilarityDataset:
    """Read "token_a<TAB>token_b<TAB>score" lines; '#' lines are comments."""
    if isinstance(source, bytes):
        source = source.decode("utf-8", "surrogateescape")
    if isinstance(source, str):
        source = io.StringIO(source)
    pairs = []
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise MalformedRecord(
                f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}"
            )
        try:
            score = float(fields[2])
        except ValueError:
            raise MalformedRecord(
                f"line {lineno}: unparseable score {fields[2]!r}"
            ) from None
        pairs.append((fields[0], fields[1], score))
    return SimilarityDataset(name, tuple(pairs))


def load_similarity_file(path: Union[str, Path]) -> SimilarityDataset:
    p = Path(path)
    return load_similarity_dataset(p.read_bytes(), name=p.stem)


@dataclass(frozen=True)
class SimilarityResult:
    """Spearman rho plus how many pairs were evaluated vs skipped for OOV."""

    rho: float
    evaluated_pairs: int
    skipped_pairs: int


def resolve_token(emb: EmbeddingSet, token: str) -> Optional[np.ndarray]:
    """Exact-match lookup with a lowercase fallback."""
    vec = emb.lookup(token)
    if vec is None:
        vec = emb.lookup(token.lower())
    return vec


def compose_sentence(tokens: Sequence[str], emb: EmbeddingSet) -> np.ndarray:
    """Mean of the resolvable word vectors (float64); zero vector if none
    resolve."""
    total = np.zeros(emb.dim, dtype=np.float64)
    hits = 0
    for token in tokens:
        vec = resolve_token(emb, token)
        if vec is not None:
            total += vec
            hits += 1
    if hits:
        total /= hits
    return total


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine similarity in float64; 0.0 if either norm is below 1e-12."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(
            f"cosine of shapes {u.shape} and {v.shape}"
        )
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu < 1e-12 or nv < 1e-12:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman's rho: Pearson correlation of fractional (average) ranks."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise LengthMismatch(f"{xs.shape} vs {ys.shape}")
    if xs.size < 2:
        raise LengthMismatch("need at least 2 observations")
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        raise ZeroVariance("an input is constant; ranks are undefined")
    rx = scipy.stats.rankdata(xs)
    ry = scipy.stats.rankdata(ys)
    rx -= rx.mean()
    ry -= ry.mean()
    rho = float((rx @ ry) / np.sqrt((rx @ rx) * (ry @ ry)))
    return max(-1.0, min(1.0, rho))


def eval_word_similarity(
    dataset: SimilarityDataset, emb: EmbeddingSet
) -> SimilarityResult:
    """Score a similarity benchmark; OOV pairs are skipped and counted."""
    sims = []
    human = []
    skipped = 0
    for a, b, score in dataset.pairs:
        va = resolve_token(emb, a)
        vb = resolve_token(emb, b)
        if va is None or vb is None:
            skipped += 1
            continue
        sims.append(cosine(va, vb))
        human.append(score)
    if len(sims) < 2:
        raise TooFewEvaluablePairs(
            f"only {len(sims)} of {len(dataset)} pairs are in vocabulary"
        )
    return SimilarityResult(
        rho=spearman(sims, human),
        evaluated_pairs=len(sims),
        skipped_pairs=skipped,
    )
