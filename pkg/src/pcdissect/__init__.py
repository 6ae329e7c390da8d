"""Dissect pretrained word embeddings through their principal components.

The package parses the released GloVe/word2vec/fastText file formats,
fits principal components, implements top-component-removal
post-processing and reduction, builds variance-band and single-component
embedding splits, and evaluates everything with a deterministic harness
(word similarity, sentence classification, per-component probing).
"""

from .datasets import LabeledTextDataset, load_labeled_dataset, load_labeled_file
from .embeddings import (
    EmbeddingFormat,
    EmbeddingSet,
    load_embeddings,
    lookup,
    parse_embeddings,
    save_embeddings,
    serialize_embeddings,
)
from .errors import ToolkitError
from .harness import (
    classification_accuracy,
    dimension_sweep,
    evaluate_dataset,
    ppa_compare,
    probe_components,
    random_embeddings,
    split_eval,
)
from .kernels import BACKEND
from .logreg import LogRegConfig, LogRegModel, accuracy, predict, train_logreg
from .pca import (
    ComponentRange,
    PcaModel,
    explained_variance_ratio,
    fit_pca,
    project,
)
from .postprocess import (
    PpaConfig,
    SplitBand,
    component_projection,
    ppa,
    ppa_pca_reduce,
    split_projection,
)
from .reports import EvalReport, ResultEntry, emit_report, load_report
from .texteval import (
    SimilarityDataset,
    SimilarityResult,
    compose_sentence,
    cosine,
    eval_word_similarity,
    load_similarity_dataset,
    load_similarity_file,
    spearman,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ComponentRange",
    "EmbeddingFormat",
    "EmbeddingSet",
    "EvalReport",
    "LabeledTextDataset",
    "LogRegConfig",
    "LogRegModel",
    "PcaModel",
    "PpaConfig",
    "ResultEntry",
    "SimilarityDataset",
    "SimilarityResult",
    "SplitBand",
    "ToolkitError",
    "accuracy",
    "classification_accuracy",
    "component_projection",
    "compose_sentence",
    "cosine",
    "dimension_sweep",
    "emit_report",
    "eval_word_similarity",
    "evaluate_dataset",
    "explained_variance_ratio",
    "fit_pca",
    "load_embeddings",
    "load_labeled_dataset",
    "load_labeled_file",
    "load_report",
    "load_similarity_dataset",
    "load_similarity_file",
    "lookup",
    "parse_embeddings",
    "ppa",
    "ppa_compare",
    "ppa_pca_reduce",
    "predict",
    "probe_components",
    "project",
    "random_embeddings",
    "save_embeddings",
    "serialize_embeddings",
    "spearman",
    "split_eval",
    "split_projection",
    "train_logreg",
]
