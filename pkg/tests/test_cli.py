import json
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

import synth
from pcdissect.cli import main
from pcdissect.embeddings import (
    EmbeddingFormat,
    load_embeddings,
    save_embeddings,
)
from pcdissect.pca import PcaModel
from pcdissect.reports import load_report

GLOVE = EmbeddingFormat.GLOVE_TEXT


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def workdir(tmp_path):
    emb, cls_ds = synth.planted_band_fixture(n=90, dim=6, signal_rank=2, seed=9)
    emb_path = tmp_path / "emb.txt"
    save_embeddings(emb, emb_path, GLOVE)

    cls_path = tmp_path / "cls.tsv"
    lines = [
        f"{split}\t{label}\t{' '.join(tokens)}" for split, label, tokens in cls_ds.records
    ]
    cls_path.write_text("\n".join(lines) + "\n")

    sim_emb, sim_ds = synth.shared_direction_fixture(n_words=20, dim=6, n_pairs=30)
    sim_emb_path = tmp_path / "sim_emb.txt"
    save_embeddings(sim_emb, sim_emb_path, GLOVE)
    sim_path = tmp_path / "sim.tsv"
    sim_lines = [f"{a}\t{b}\t{score}" for a, b, score in sim_ds.pairs]
    sim_path.write_text("\n".join(sim_lines) + "\n")

    return tmp_path


def run_ok(runner, args):
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output + str(result.exception)
    return result


def normalized(path):
    payload = json.loads(path.read_bytes())
    payload["provenance"].pop("created_at")
    return json.dumps(payload, sort_keys=True)


def test_convert_roundtrip(runner, workdir):
    out = workdir / "emb.bin"
    back = workdir / "back.txt"
    run_ok(runner, ["convert", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--out", str(out),
                    "--out-format", "word2vec-binary"])
    run_ok(runner, ["convert", "--embeddings", str(out),
                    "--format", "word2vec-binary", "--out", str(back),
                    "--out-format", "glove-text"])
    a = load_embeddings(workdir / "emb.txt", GLOVE)
    b = load_embeddings(back, GLOVE)
    assert a == b


def test_pca_fit_and_project(runner, workdir):
    model_path = workdir / "model.pcam"
    run_ok(runner, ["pca", "fit", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--out", str(model_path)])
    model = PcaModel.load(model_path)
    assert model.dim == 6
    out = workdir / "proj.txt"
    run_ok(runner, ["pca", "project", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--model", str(model_path),
                    "--start", "0", "--end", "3", "--out", str(out)])
    assert load_embeddings(out, GLOVE).dim == 3


def test_ppa_and_reduce(runner, workdir):
    out = workdir / "ppa.txt"
    run_ok(runner, ["ppa", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "-D", "2", "--out", str(out)])
    assert load_embeddings(out, GLOVE).dim == 6
    red = workdir / "red.txt"
    run_ok(runner, ["reduce", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "-D", "1", "-k", "3",
                    "--out", str(red)])
    assert load_embeddings(red, GLOVE).dim == 3


def test_split_band_transform(runner, workdir):
    out = workdir / "band.txt"
    run_ok(runner, ["split", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--band", "M", "--out", str(out)])
    assert load_embeddings(out, GLOVE).dim == 2


def test_split_evaluation_report(runner, workdir):
    out = workdir / "split.json"
    run_ok(runner, ["split", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--cls", str(workdir / "cls.tsv"),
                    "--max-iters", "100", "--out", str(out)])
    report = load_report(out.read_bytes())
    assert report.kind == "split_eval"
    total = sum(report.value(f"variance_ratio/{b}") for b in ("T", "M", "B"))
    assert abs(total - 1.0) < 1e-9
    assert set(report.provenance["inputs"]) == {
        str(workdir / "emb.txt"), str(workdir / "cls.tsv")
    }


def test_eval_sim(runner, workdir):
    out = workdir / "sim.json"
    run_ok(runner, ["eval", "sim", "--embeddings", str(workdir / "sim_emb.txt"),
                    "--format", "glove-text", "--dataset", str(workdir / "sim.tsv"),
                    "--out", str(out)])
    report = load_report(out.read_bytes())
    assert report.kind == "eval_sim"
    assert -1.0 <= report.value("sim/rho") <= 1.0
    assert report.value("sim/skipped_pairs") == 0.0


def test_eval_cls_fixed_and_kfold(runner, workdir):
    out = workdir / "cls.json"
    run_ok(runner, ["eval", "cls", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--dataset", str(workdir / "cls.tsv"),
                    "--max-iters", "100", "--out", str(out)])
    report = load_report(out.read_bytes())
    assert 0.0 <= report.value("cls/accuracy") <= 1.0
    run_ok(runner, ["eval", "cls", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--dataset", str(workdir / "cls.tsv"),
                    "--max-iters", "50", "--protocol", "kfold", "--folds", "3",
                    "--out", str(out)])
    assert load_report(out.read_bytes()).config["classifier"]["folds"] == 3


def test_sweep_and_report_csv(runner, workdir):
    out = workdir / "sweep.json"
    run_ok(runner, ["sweep", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--step", "2",
                    "--cls", str(workdir / "cls.tsv"),
                    "--max-iters", "100", "--out", str(out)])
    report = load_report(out.read_bytes())
    assert len(report.curve("cls")) == 3
    csv_out = workdir / "sweep.csv"
    run_ok(runner, ["report", "--in", str(out), "--report", "csv",
                    "--out", str(csv_out)])
    lines = csv_out.read_text().splitlines()
    assert lines[0] == "key,x,value"
    assert len(lines) == 4


def test_compare(runner, workdir):
    out = workdir / "cmp.json"
    run_ok(runner, ["compare", "--embeddings", str(workdir / "sim_emb.txt"),
                    "--format", "glove-text", "-D", "1",
                    "--sim", str(workdir / "sim.tsv"), "--out", str(out)])
    report = load_report(out.read_bytes())
    assert report.value("sim/delta_ppa") > 0


def test_probe(runner, workdir):
    out = workdir / "probe.json"
    run_ok(runner, ["probe", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--dataset", str(workdir / "cls.tsv"),
                    "--max-iters", "60", "--out", str(out)])
    report = load_report(out.read_bytes())
    assert len(report.curve("cls")) == 6
    # the planted component sits at rank 2 of the band fixture
    curve = dict(report.curve("cls"))
    assert max(curve, key=curve.get) == 2


def test_eval_cls_standardize_flag(runner, workdir):
    out = workdir / "std.json"
    run_ok(runner, ["eval", "cls", "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--dataset", str(workdir / "cls.tsv"),
                    "--max-iters", "100", "--standardize", "--out", str(out)])
    report = load_report(out.read_bytes())
    assert report.config["classifier"]["standardize"] is True
    assert 0.0 <= report.value("cls/accuracy") <= 1.0


def test_typed_error_exit_code_and_name(runner, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_bytes(b"a 1.0\nb 1.0 2.0\n")
    result = runner.invoke(main, ["convert", "--embeddings", str(bad),
                                  "--format", "glove-text",
                                  "--out", str(tmp_path / "x"),
                                  "--out-format", "glove-text"])
    assert result.exit_code == 1
    assert "DimensionMismatch" in result.stderr


def test_config_file_defaults_and_flag_override(runner, workdir):
    cfg = workdir / "cfg.json"
    cfg.write_text(json.dumps({"ppa": {"d_top": 0}}))
    out_cfg = workdir / "from_cfg.txt"
    run_ok(runner, ["--config", str(cfg), "ppa",
                    "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "--out", str(out_cfg)])
    out_flag = workdir / "from_flag.txt"
    run_ok(runner, ["--config", str(cfg), "ppa",
                    "--embeddings", str(workdir / "emb.txt"),
                    "--format", "glove-text", "-D", "2", "--out", str(out_flag)])
    a = load_embeddings(out_cfg, GLOVE)
    b = load_embeddings(out_flag, GLOVE)
    assert not np.array_equal(a.matrix, b.matrix)
    # config default d_top=0 means mean-only removal: column means ~ 0
    assert np.abs(a.matrix.mean(axis=0)).max() < 1e-6


def test_reports_byte_identical_modulo_timestamp(runner, workdir):
    outs = []
    for name in ("r1.json", "r2.json"):
        out = workdir / name
        run_ok(runner, ["eval", "cls", "--embeddings", str(workdir / "emb.txt"),
                        "--format", "glove-text",
                        "--dataset", str(workdir / "cls.tsv"),
                        "--max-iters", "100", "--out", str(out)])
        outs.append(out)
    assert normalized(outs[0]) == normalized(outs[1])


def test_stdout_report_via_console_script(workdir):
    proc = subprocess.run(
        [sys.executable, "-m", "pcdissect.cli", "eval", "sim",
         "--embeddings", str(workdir / "sim_emb.txt"), "--format", "glove-text",
         "--dataset", str(workdir / "sim.tsv")],
        capture_output=True,
    )
    assert proc.returncode == 0, proc.stderr
    report = load_report(proc.stdout)
    assert report.kind == "eval_sim"
