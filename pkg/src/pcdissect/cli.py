"""Command-line surface.

Subcommands mirror the library operations: ``convert``, ``pca fit``,
``pca project``, ``ppa``, ``reduce``, ``split``, ``eval sim``, ``eval
cls``, ``sweep``, ``compare``, ``probe``, and ``report``.  Exit code is 0
on success and 1 on a typed error, whose name is printed to stderr.

All configuration comes from flags or a JSON config file (``--config``):
the file maps subcommand names to option defaults, e.g.
``{"ppa": {"d_top": 3}, "eval": {"cls": {"max_iters": 100}}}``; explicit
flags override it.  No environment variables are required.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click

from .datasets import load_labeled_file
from .embeddings import EmbeddingFormat, load_embeddings, save_embeddings
from .errors import ToolkitError
from .harness import (
    PROBE_MAX_ITERS,
    classification_accuracy,
    dimension_sweep,
    ppa_compare,
    probe_components,
    split_eval,
)
from .logreg import LogRegConfig
from .pca import ComponentRange, PcaModel, fit_pca, project
from .postprocess import PpaConfig, SplitBand, ppa, ppa_pca_reduce, split_projection
from .reports import EvalReport, ResultEntry, emit_report, load_report, new_provenance
from .texteval import eval_word_similarity, load_similarity_file

FORMAT_NAMES = [fmt.value for fmt in EmbeddingFormat]


class _ToolkitGroup(click.Group):
    """Group that maps typed errors to exit code 1 with the error name."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ToolkitError as exc:
            click.echo(f"{type(exc).__name__}: {exc}", err=True)
            ctx.exit(1)


def _apply_config(ctx, _param, value):
    if value is not None:
        ctx.default_map = json.loads(Path(value).read_text())


def _embedding_options(f):
    f = click.option(
        "--embeddings",
        required=True,
        type=click.Path(exists=True, dir_okay=False),
        help="Path to the embedding file.",
    )(f)
    f = click.option(
        "--format",
        "fmt",
        required=True,
        type=click.Choice(FORMAT_NAMES),
        help="Embedding file format.",
    )(f)
    return f


def _report_options(f):
    f = click.option(
        "--report",
        "report_fmt",
        default="json",
        type=click.Choice(["json", "csv"]),
        show_default=True,
        help="Report output format.",
    )(f)
    f = click.option(
        "--out",
        type=click.Path(dir_okay=False),
        default=None,
        help="Report output path (stdout when omitted).",
    )(f)
    return f


def _classifier_options(f):
    f = click.option("--l2", type=float, default=None,
                     help="L2 strength (default: 1/n_samples).")(f)
    f = click.option("--max-iters", type=int, default=500, show_default=True)(f)
    f = click.option("--tolerance", type=float, default=1e-6, show_default=True)(f)
    f = click.option("--standardize", is_flag=True,
                     help="Standardize classifier features before training.")(f)
    f = click.option("--protocol", type=click.Choice(["fixed", "kfold"]),
                     default="fixed", show_default=True)(f)
    f = click.option("--folds", type=int, default=10, show_default=True)(f)
    return f


def _load(embeddings: str, fmt: str):
    return load_embeddings(embeddings, EmbeddingFormat.from_name(fmt))


def _model_for(emb, model_path):
    return PcaModel.load(model_path) if model_path else fit_pca(emb)


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_report(report, report_fmt, out, input_paths):
    report.provenance["inputs"] = {p: _digest(p) for p in input_paths}
    data = emit_report(report, report_fmt)
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)


def _logreg_config(l2, max_iters, tolerance, standardize=False) -> LogRegConfig:
    return LogRegConfig(
        l2_strength=l2,
        max_iters=max_iters,
        tolerance=tolerance,
        standardize=standardize,
    )


def _load_datasets(sim_paths, cls_paths, include_dev=False):
    datasets = [load_similarity_file(p) for p in sim_paths]
    datasets += [load_labeled_file(p, fold_dev_into_train=include_dev)
                 for p in cls_paths]
    if not datasets:
        raise click.UsageError("provide at least one --sim or --cls dataset")
    return datasets


@click.group(cls=_ToolkitGroup)
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    is_eager=True,
    expose_value=False,
    callback=_apply_config,
    help="JSON file of option defaults per subcommand.",
)
@click.version_option(package_name="pcdissect")
def main():
    """Dissect pretrained word embeddings through their principal
    components: post-processing, band splits, reduction, and a
    deterministic evaluation harness."""


# ---------------------------------------------------------------------------
# embedding transforms


@main.command()
@_embedding_options
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--out-format", required=True, type=click.Choice(FORMAT_NAMES))
def convert(embeddings, fmt, out, out_format):
    """Convert an embedding file between formats."""
    emb = _load(embeddings, fmt)
    save_embeddings(emb, out, EmbeddingFormat.from_name(out_format))


@main.group()
def pca():
    """Fit or apply a principal-component model."""


@pca.command("fit")
@_embedding_options
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output path for the binary model file.")
def pca_fit(embeddings, fmt, out):
    """Fit all principal components and save the model."""
    fit_pca(_load(embeddings, fmt)).save(out)


@pca.command("project")
@_embedding_options
@click.option("--model", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Model file (fit from the embeddings when omitted).")
@click.option("--start", type=int, required=True, help="First rank, inclusive.")
@click.option("--end", type=int, required=True, help="Last rank, exclusive.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--out-format", default="glove-text", type=click.Choice(FORMAT_NAMES),
              show_default=True)
def pca_project(embeddings, fmt, model, start, end, out, out_format):
    """Project embeddings onto a component range."""
    emb = _load(embeddings, fmt)
    pca_model = _model_for(emb, model)
    projected = project(emb, pca_model, ComponentRange(start, end))
    save_embeddings(projected, out, EmbeddingFormat.from_name(out_format))


@main.command("ppa")
@_embedding_options
@click.option("-D", "--d-top", default=5, show_default=True,
              help="Number of top components to remove.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--out-format", default="glove-text", type=click.Choice(FORMAT_NAMES),
              show_default=True)
def ppa_cmd(embeddings, fmt, d_top, out, out_format):
    """Remove the mean and the top-D principal directions."""
    emb = _load(embeddings, fmt)
    save_embeddings(ppa(emb, PpaConfig(d_top)), out,
                    EmbeddingFormat.from_name(out_format))


@main.command()
@_embedding_options
@click.option("-D", "--d-top", default=5, show_default=True)
@click.option("-k", "--target-dim", type=int, required=True)
@click.option("--second-d-top", type=int, default=None,
              help="Removal depth of the second stage (default: same as -D).")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--out-format", default="glove-text", type=click.Choice(FORMAT_NAMES),
              show_default=True)
def reduce(embeddings, fmt, d_top, target_dim, second_d_top, out, out_format):
    """Reduce dimensionality via post-process, PCA-truncate, post-process."""
    emb = _load(embeddings, fmt)
    reduced = ppa_pca_reduce(emb, PpaConfig(d_top), target_dim, second_d_top)
    save_embeddings(reduced, out, EmbeddingFormat.from_name(out_format))


# ---------------------------------------------------------------------------
# evaluation


@main.command()
@_embedding_options
@click.option("--model", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--band", type=click.Choice(["T", "M", "B"]), default=None,
              help="Write this band's projected embeddings instead of evaluating.")
@click.option("--sim", "sim_paths", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Similarity dataset (repeatable).")
@click.option("--cls", "cls_paths", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Labeled sentence dataset (repeatable).")
@click.option("--out-format", default="glove-text", type=click.Choice(FORMAT_NAMES),
              show_default=True)
@_report_options
@_classifier_options
def split(embeddings, fmt, model, band, sim_paths, cls_paths, out_format,
          report_fmt, out, l2, max_iters, tolerance, standardize, protocol, folds):
    """Band-split embeddings: write one band, or evaluate all three.

    With --band, the projected embeddings are written to --out.  Without
    it, every dataset is evaluated on the full embeddings, each band, and
    a random baseline, and a report is emitted.
    """
    emb = _load(embeddings, fmt)
    pca_model = _model_for(emb, model)
    if band is not None:
        if out is None:
            raise click.UsageError("--band requires --out")
        banded = split_projection(emb, pca_model, SplitBand(band))
        save_embeddings(banded, out, EmbeddingFormat.from_name(out_format))
        return
    datasets = _load_datasets(sim_paths, cls_paths)
    report = split_eval(
        emb, pca_model, datasets,
        cfg=_logreg_config(l2, max_iters, tolerance, standardize),
        protocol=protocol, folds=folds,
        embedding_name=Path(embeddings).name,
    )
    inputs = [embeddings, *sim_paths, *cls_paths] + ([model] if model else [])
    _write_report(report, report_fmt, out, inputs)


@main.group("eval")
def eval_group():
    """Evaluate embeddings on a benchmark dataset."""


@eval_group.command("sim")
@_embedding_options
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@_report_options
def eval_sim(embeddings, fmt, dataset, report_fmt, out):
    """Word-similarity evaluation (Spearman rho over cosines)."""
    emb = _load(embeddings, fmt)
    ds = load_similarity_file(dataset)
    result = eval_word_similarity(ds, emb)
    report = EvalReport(
        kind="eval_sim",
        embedding=Path(embeddings).name,
        config={"dataset": ds.name, "oov_policy": "exact-then-lowercase-then-skip"},
        results=[
            ResultEntry(key=f"{ds.name}/rho", value=result.rho),
            ResultEntry(key=f"{ds.name}/evaluated_pairs",
                        value=float(result.evaluated_pairs)),
            ResultEntry(key=f"{ds.name}/skipped_pairs",
                        value=float(result.skipped_pairs)),
        ],
        provenance=new_provenance(),
    )
    _write_report(report, report_fmt, out, [embeddings, dataset])


@eval_group.command("cls")
@_embedding_options
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--include-dev", is_flag=True,
              help="Fold dev records into train instead of rejecting them.")
@_report_options
@_classifier_options
def eval_cls(embeddings, fmt, dataset, include_dev, report_fmt, out,
             l2, max_iters, tolerance, standardize, protocol, folds):
    """Sentence-classification evaluation (logistic regression accuracy)."""
    emb = _load(embeddings, fmt)
    ds = load_labeled_file(dataset, fold_dev_into_train=include_dev)
    cfg = _logreg_config(l2, max_iters, tolerance, standardize)
    value = classification_accuracy(emb, ds, cfg, protocol, folds)
    report = EvalReport(
        kind="eval_cls",
        embedding=Path(embeddings).name,
        config={
            "dataset": ds.name,
            "include_dev": include_dev,
            "classifier": {
                "l2_strength": l2, "max_iters": max_iters,
                "tolerance": tolerance, "standardize": standardize,
                "protocol": protocol,
                "folds": folds if protocol == "kfold" else None,
            },
        },
        results=[ResultEntry(key=f"{ds.name}/accuracy", value=value)],
        provenance=new_provenance(),
    )
    _write_report(report, report_fmt, out, [embeddings, dataset])


@main.command()
@_embedding_options
@click.option("--model", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--step", default=10, show_default=True,
              help="Component increment between sweep points.")
@click.option("--sim", "sim_paths", multiple=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--cls", "cls_paths", multiple=True,
              type=click.Path(exists=True, dir_okay=False))
@_report_options
@_classifier_options
def sweep(embeddings, fmt, model, step, sim_paths, cls_paths,
          report_fmt, out, l2, max_iters, tolerance, standardize, protocol, folds):
    """Cumulative component sweep over all datasets."""
    emb = _load(embeddings, fmt)
    pca_model = _model_for(emb, model)
    datasets = _load_datasets(sim_paths, cls_paths)
    report = dimension_sweep(
        emb, pca_model, datasets, step,
        cfg=_logreg_config(l2, max_iters, tolerance, standardize),
        protocol=protocol, folds=folds,
        embedding_name=Path(embeddings).name,
    )
    inputs = [embeddings, *sim_paths, *cls_paths] + ([model] if model else [])
    _write_report(report, report_fmt, out, inputs)


@main.command()
@_embedding_options
@click.option("-D", "--d-top", default=5, show_default=True)
@click.option("--sim", "sim_paths", multiple=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--cls", "cls_paths", multiple=True,
              type=click.Path(exists=True, dir_okay=False))
@_report_options
@_classifier_options
def compare(embeddings, fmt, d_top, sim_paths, cls_paths,
            report_fmt, out, l2, max_iters, tolerance, standardize, protocol, folds):
    """Original vs post-processed vs mean-only embeddings per dataset."""
    emb = _load(embeddings, fmt)
    datasets = _load_datasets(sim_paths, cls_paths)
    report = ppa_compare(
        emb, PpaConfig(d_top), datasets,
        cfg=_logreg_config(l2, max_iters, tolerance, standardize),
        protocol=protocol, folds=folds,
        embedding_name=Path(embeddings).name,
    )
    _write_report(report, report_fmt, out, [embeddings, *sim_paths, *cls_paths])


@main.command()
@_embedding_options
@click.option("--model", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--dataset", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--max-iters", default=PROBE_MAX_ITERS, show_default=True,
              help="Iteration cap per per-component classifier.")
@click.option("--l2", type=float, default=None)
@click.option("--protocol", type=click.Choice(["fixed", "kfold"]), default="fixed",
              show_default=True)
@click.option("--folds", type=int, default=10, show_default=True)
@_report_options
def probe(embeddings, fmt, model, dataset, max_iters, l2, protocol, folds,
          report_fmt, out):
    """Per-component probing: a classifier per principal component."""
    emb = _load(embeddings, fmt)
    pca_model = _model_for(emb, model)
    ds = load_labeled_file(dataset)
    report = probe_components(
        emb, pca_model, ds,
        cfg=LogRegConfig(l2_strength=l2, max_iters=max_iters),
        protocol=protocol, folds=folds,
        embedding_name=Path(embeddings).name,
    )
    inputs = [embeddings, dataset] + ([model] if model else [])
    _write_report(report, report_fmt, out, inputs)


@main.command("report")
@click.option("--in", "in_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON report to re-emit.")
@click.option("--report", "report_fmt", default="csv",
              type=click.Choice(["json", "csv"]), show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def report_cmd(in_path, report_fmt, out):
    """Re-emit a stored JSON report, e.g. as plot-ready CSV."""
    report = load_report(Path(in_path).read_bytes())
    data = emit_report(report, report_fmt)
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)


if __name__ == "__main__":
    main()
