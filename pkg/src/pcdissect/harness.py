"""Experiment orchestration: dimension sweeps, band-split evaluation,
post-processing comparison, and per-component probing.

Every operation returns an EvalReport that echoes its full effective
configuration, so a report alone identifies the run that produced it.
All evaluation is deterministic: the classifier is seed-free and the
random-embedding baseline uses a documented fixed-seed generator.
"""

from __future__ import annotations

from dataclasses import asdict
from typing import Optional, Sequence, Union

import numpy as np

from .datasets import LabeledTextDataset
from .embeddings import EmbeddingSet
from .errors import NonDivisibleDim, TooFewRecords
from .logreg import LogRegConfig, accuracy, predict, train_logreg
from .pca import ComponentRange, PcaModel, explained_variance_ratio, project
from .postprocess import PpaConfig, SplitBand, component_projection, ppa
from .reports import EvalReport, ResultEntry, new_provenance
from .texteval import SimilarityDataset, compose_sentence, eval_word_similarity

Dataset = Union[SimilarityDataset, LabeledTextDataset]

PROBE_MAX_ITERS = 200  # cap per probe so a full d-component sweep stays cheap

RANDOM_BASELINE_SEED = 0


def random_embeddings(
    words: Sequence[str], dim: int, seed: int = RANDOM_BASELINE_SEED
) -> EmbeddingSet:
    """Random baseline: entries uniform in [-0.5, 0.5]/dim, fixed seed."""
    rng = np.random.default_rng(seed)
    matrix = rng.uniform(-0.5, 0.5, size=(len(words), dim)) / dim
    return EmbeddingSet(words, matrix.astype(np.float32))


def _sentence_features(
    rows: Sequence[tuple[str, tuple[str, ...]]], emb: EmbeddingSet
) -> tuple[np.ndarray, list[str]]:
    features = np.empty((len(rows), emb.dim), dtype=np.float64)
    labels = []
    for i, (label, tokens) in enumerate(rows):
        features[i] = compose_sentence(tokens, emb)
        labels.append(label)
    return features, labels


def classification_accuracy(
    emb: EmbeddingSet,
    dataset: LabeledTextDataset,
    cfg: LogRegConfig = LogRegConfig(),
    protocol: str = "fixed",
    folds: int = 10,
) -> float:
    """Sentence-average features + logistic regression test accuracy.

    ``fixed`` trains on the train split and scores the test split;
    ``kfold`` concatenates all records in file order and averages accuracy
    over contiguous folds.
    """
    if protocol == "fixed":
        train_rows = dataset.require_split("train")
        test_rows = dataset.require_split("test")
        x_train, y_train = _sentence_features(train_rows, emb)
        x_test, y_test = _sentence_features(test_rows, emb)
        model = train_logreg(x_train, y_train, cfg)
        return accuracy(predict(model, x_test), y_test)
    if protocol == "kfold":
        rows = [(label, toks) for _, label, toks in dataset.records]
        if folds < 2 or folds > len(rows):
            raise TooFewRecords(
                f"cannot cut {len(rows)} records into {folds} folds"
            )
        x_all, y_all = _sentence_features(rows, emb)
        bounds = np.linspace(0, len(rows), folds + 1, dtype=int)
        scores = []
        for k in range(folds):
            lo, hi = bounds[k], bounds[k + 1]
            mask = np.zeros(len(rows), dtype=bool)
            mask[lo:hi] = True
            model = train_logreg(
                x_all[~mask], [y for y, m in zip(y_all, mask) if not m], cfg
            )
            scores.append(
                accuracy(
                    predict(model, x_all[mask]),
                    [y for y, m in zip(y_all, mask) if m],
                )
            )
        return float(np.mean(scores))
    raise ValueError(f"unknown protocol {protocol!r}")


def evaluate_dataset(
    emb: EmbeddingSet,
    dataset: Dataset,
    cfg: LogRegConfig = LogRegConfig(),
    protocol: str = "fixed",
    folds: int = 10,
) -> float:
    """Spearman rho for similarity datasets, accuracy for labeled ones."""
    if isinstance(dataset, SimilarityDataset):
        return eval_word_similarity(dataset, emb).rho
    return classification_accuracy(emb, dataset, cfg, protocol, folds)


def _classifier_echo(cfg: LogRegConfig, protocol: str, folds: int) -> dict:
    echo = asdict(cfg)
    echo["protocol"] = protocol
    echo["folds"] = folds if protocol == "kfold" else None
    return echo


def dimension_sweep(
    emb: EmbeddingSet,
    model: PcaModel,
    datasets: Sequence[Dataset],
    step: int,
    cfg: LogRegConfig = LogRegConfig(),
    protocol: str = "fixed",
    folds: int = 10,
    embedding_name: str = "embeddings",
) -> EvalReport:
    """Cumulative principal-component sweep.

    For k = step, 2*step, ..., d the embeddings are projected onto the
    first k components and every dataset is re-evaluated, yielding one
    curve per dataset (d/step points each).
    """
    if step < 1 or model.dim % step != 0:
        raise NonDivisibleDim(
            f"step {step} does not divide dim {model.dim}"
        )
    results = []
    for k in range(step, model.dim + 1, step):
        reduced = project(emb, model, ComponentRange(0, k))
        for ds in datasets:
            value = evaluate_dataset(reduced, ds, cfg, protocol, folds)
            results.append(ResultEntry(key=ds.name, x=k, value=value))
    return EvalReport(
        kind="dimension_sweep",
        embedding=embedding_name,
        config={
            "step": step,
            "dim": model.dim,
            "datasets": [ds.name for ds in datasets],
            "classifier": _classifier_echo(cfg, protocol, folds),
        },
        results=results,
        provenance=new_provenance(),
    )


def split_eval(
    emb: EmbeddingSet,
    model: PcaModel,
    datasets: Sequence[Dataset],
    cfg: LogRegConfig = LogRegConfig(),
    protocol: str = "fixed",
    folds: int = 10,
    embedding_name: str = "embeddings",
) -> EvalReport:
    """Evaluate the top/middle/bottom component bands.

    Emits each band's share of total variance, per-dataset metrics for the
    full embeddings and every band, and a fixed-seed random-embedding
    baseline of the band width.
    """
    bands = {band: band.component_range(model.dim) for band in SplitBand}
    width = model.dim // 3
    results = []
    for band, crange in bands.items():
        results.append(
            ResultEntry(
                key=f"variance_ratio/{band.value}",
                value=explained_variance_ratio(model, crange),
            )
        )
    baseline = random_embeddings(emb.words, width)
    projections = {
        band.value: project(emb, model, crange) for band, crange in bands.items()
    }
    for ds in datasets:
        results.append(
            ResultEntry(
                key=f"{ds.name}/full",
                value=evaluate_dataset(emb, ds, cfg, protocol, folds),
            )
        )
        for band_name, banded in projections.items():
            results.append(
                ResultEntry(
                    key=f"{ds.name}/{band_name}",
                    value=evaluate_dataset(banded, ds, cfg, protocol, folds),
                )
            )
        results.append(
            ResultEntry(
                key=f"{ds.name}/random",
                value=evaluate_dataset(baseline, ds, cfg, protocol, folds),
            )
        )
    return EvalReport(
        kind="split_eval",
        embedding=embedding_name,
        config={
            "band_width": width,
            "datasets": [ds.name for ds in datasets],
            "random_seed": RANDOM_BASELINE_SEED,
            "classifier": _classifier_echo(cfg, protocol, folds),
        },
        results=results,
        provenance=new_provenance(),
    )


def ppa_compare(
    emb: EmbeddingSet,
    ppa_cfg: PpaConfig,
    datasets: Sequence[Dataset],
    cfg: LogRegConfig = LogRegConfig(),
    protocol: str = "fixed",
    folds: int = 10,
    embedding_name: str = "embeddings",
) -> EvalReport:
    """Original vs post-processed vs mean-only-removed embeddings.

    The mean-only column (removal depth 0) is included because it
    isolates how much of any change comes from centering alone.
    """
    variants = {
        "original": emb,
        "ppa": ppa(emb, ppa_cfg),
        "mean_only": ppa(emb, PpaConfig(0)),
    }
    results = []
    for ds in datasets:
        scores = {
            name: evaluate_dataset(variant, ds, cfg, protocol, folds)
            for name, variant in variants.items()
        }
        for name, value in scores.items():
            results.append(ResultEntry(key=f"{ds.name}/{name}", value=value))
        results.append(
            ResultEntry(
                key=f"{ds.name}/delta_ppa",
                value=scores["ppa"] - scores["original"],
            )
        )
        results.append(
            ResultEntry(
                key=f"{ds.name}/delta_mean_only",
                value=scores["mean_only"] - scores["original"],
            )
        )
    return EvalReport(
        kind="ppa_compare",
        embedding=embedding_name,
        config={
            "d_top": ppa_cfg.d_top,
            "datasets": [ds.name for ds in datasets],
            "classifier": _classifier_echo(cfg, protocol, folds),
        },
        results=results,
        provenance=new_provenance(),
    )


def probe_components(
    emb: EmbeddingSet,
    model: PcaModel,
    dataset: LabeledTextDataset,
    cfg: Optional[LogRegConfig] = None,
    protocol: str = "fixed",
    folds: int = 10,
    embedding_name: str = "embeddings",
) -> EvalReport:
    """Per-component probing: for every rank, build one-dimensional word
    embeddings from that component alone, compose sentences, and train
    and score the classifier.  Emits the accuracy curve plus its mean and
    (population) standard deviation."""
    if cfg is None:
        cfg = LogRegConfig(max_iters=PROBE_MAX_ITERS)
    results = []
    scores = []
    for rank in range(model.dim):
        one_dim = component_projection(emb, model, rank)
        value = classification_accuracy(one_dim, dataset, cfg, protocol, folds)
        scores.append(value)
        results.append(ResultEntry(key=dataset.name, x=rank, value=value))
    results.append(
        ResultEntry(key=f"{dataset.name}/mean", value=float(np.mean(scores)))
    )
    results.append(
        ResultEntry(key=f"{dataset.name}/std", value=float(np.std(scores)))
    )
    return EvalReport(
        kind="probe_components",
        embedding=embedding_name,
        config={
            "dataset": dataset.name,
            "dim": model.dim,
            "classifier": _classifier_echo(cfg, protocol, folds),
        },
        results=results,
        provenance=new_provenance(),
    )
