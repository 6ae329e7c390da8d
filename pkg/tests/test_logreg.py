import numpy as np
import pytest

from pcdissect import kernels
from pcdissect.errors import (
    DegenerateInput,
    DimensionMismatch,
    LengthMismatch,
    NonFiniteFeature,
    SingleClass,
)
from pcdissect.logreg import (
    LogRegConfig,
    LogRegModel,
    accuracy,
    predict,
    train_logreg,
)


def separable_blobs(n_per=25, seed=0):
    # two gaussian blobs around (+2,+2) and (-2,-2): margin comfortably >= 1
    rng = np.random.default_rng(seed)
    x = np.vstack([
        rng.normal(size=(n_per, 2)) * 0.3 + 2.0,
        rng.normal(size=(n_per, 2)) * 0.3 - 2.0,
    ])
    y = ["pos"] * n_per + ["neg"] * n_per
    return x, y


def objective(xb, y, w, l2):
    loss = kernels.logreg_loss(xb, y, w)
    return loss + 0.5 * l2 * float(np.sum(w[:, :-1] ** 2))


class TestTrain:
    def test_separable_blobs_fit_perfectly(self):
        x, y = separable_blobs()
        model = train_logreg(x, y, LogRegConfig(l2_strength=1e-4))
        assert accuracy(predict(model, x), y) == 1.0

    def test_zero_features_predict_majority(self):
        x = np.zeros((10, 3))
        y = ["a"] * 7 + ["b"] * 3
        model = train_logreg(x, y)
        preds = predict(model, x)
        assert preds == ["a"] * 10
        assert accuracy(preds, y) == 0.7

    def test_bit_identical_retraining(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(30, 4))
        y = [f"c{i % 3}" for i in range(30)]
        a = train_logreg(x, y)
        b = train_logreg(x, y)
        assert a.weights.tobytes() == b.weights.tobytes()
        assert a.metadata["loss_history"] == b.metadata["loss_history"]

    def test_loss_history_non_increasing(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(40, 5))
        y = [f"c{i % 4}" for i in range(40)]
        model = train_logreg(x, y, LogRegConfig(max_iters=150))
        history = model.metadata["loss_history"]
        assert all(b <= a for a, b in zip(history, history[1:]))

    def test_classes_ordered_by_first_appearance(self):
        x = np.eye(4)
        y = ["zebra", "ant", "zebra", "mole"]
        model = train_logreg(x, y)
        assert model.classes == ("zebra", "ant", "mole")

    def test_resolved_l2_in_metadata(self):
        x, y = separable_blobs(n_per=10)
        model = train_logreg(x, y)
        assert model.metadata["l2_strength"] == 1.0 / 20

    def test_single_class_rejected(self):
        with pytest.raises(SingleClass):
            train_logreg(np.eye(3), ["same"] * 3)

    def test_nonfinite_features_rejected(self):
        x = np.ones((4, 2))
        x[1, 1] = np.nan
        with pytest.raises(NonFiniteFeature):
            train_logreg(x, ["a", "b", "a", "b"])

    def test_too_few_rows(self):
        with pytest.raises(DegenerateInput):
            train_logreg(np.ones((1, 2)), ["a"])

    def test_nonconvergence_is_flagged_not_raised(self):
        x, y = separable_blobs()
        model = train_logreg(x, y, LogRegConfig(l2_strength=0.0, max_iters=5))
        assert model.metadata["converged"] is False
        assert model.metadata["iterations"] == 5

    def test_same_objective_across_runs(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(50, 3))
        y = [f"c{i % 2}" for i in range(50)]
        cfg = LogRegConfig(max_iters=300)
        a = train_logreg(x, y, cfg).metadata["loss_history"][-1]
        b = train_logreg(x, y, cfg).metadata["loss_history"][-1]
        assert abs(a - b) <= 1e-10


class TestStandardize:
    def test_off_by_default(self):
        x, y = separable_blobs(n_per=8)
        assert train_logreg(x, y).metadata["standardize"] is False

    def test_column_scale_invariance(self):
        # standardization makes training blind to per-column rescaling;
        # folded weights must yield identical predictions on the
        # correspondingly scaled inputs
        rng = np.random.default_rng(6)
        x = rng.normal(size=(60, 3))
        y = [f"c{i % 3}" for i in range(60)]
        scales = np.array([1000.0, 1.0, 1e-3])
        cfg = LogRegConfig(standardize=True, max_iters=200)
        a = train_logreg(x, y, cfg)
        b = train_logreg(x * scales, y, cfg)
        assert predict(a, x) == predict(b, x * scales)

    def test_folded_model_predicts_on_raw_features(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(50, 4)) * np.array([100.0, 1.0, 0.01, 5.0]) + 3.0
        y = ["a" if i % 2 else "b" for i in range(50)]
        model = train_logreg(x, y, LogRegConfig(standardize=True))
        preds = predict(model, x)
        assert set(preds) <= {"a", "b"}
        assert accuracy(preds, y) >= 0.5


class TestGradient:
    def test_analytic_matches_central_differences(self):
        rng = np.random.default_rng(4)
        for trial in range(5):
            x = rng.normal(size=(10, 4))
            labels = rng.integers(0, 3, size=10)
            labels[:3] = [0, 1, 2]  # all classes present
            y = labels.astype(np.int64)
            xb = np.ascontiguousarray(np.hstack([x, np.ones((10, 1))]))
            w = np.ascontiguousarray(rng.normal(size=(3, 5)) * 0.1)
            l2 = 0.05
            _, grad = kernels.logreg_loss_grad(xb, y, w)
            grad = grad.copy()
            grad[:, :-1] += l2 * w[:, :-1]
            fd = np.zeros_like(w)
            h = 1e-6
            for i in range(w.shape[0]):
                for j in range(w.shape[1]):
                    wp = w.copy()
                    wp[i, j] += h
                    wm = w.copy()
                    wm[i, j] -= h
                    fd[i, j] = (
                        objective(xb, y, wp, l2) - objective(xb, y, wm, l2)
                    ) / (2 * h)
            rel = np.linalg.norm(grad - fd) / np.linalg.norm(fd)
            assert rel < 1e-5, f"trial {trial}: {rel}"


class TestPredict:
    def test_tied_logits_pick_first_class(self):
        model = LogRegModel(("first", "second"), np.zeros((2, 3)), {})
        assert predict(model, np.ones((4, 2))) == ["first"] * 4

    def test_training_row_keeps_label(self):
        x, y = separable_blobs()
        model = train_logreg(x, y, LogRegConfig(l2_strength=1e-4))
        assert predict(model, x[:1]) == [y[0]]
        assert predict(model, x[-1:]) == [y[-1]]

    def test_logit_shift_invariance(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(20, 3))
        y = [f"c{i % 3}" for i in range(20)]
        model = train_logreg(x, y)
        shifted = LogRegModel(
            model.classes, model.weights + np.full((1, 4), 2.5), model.metadata
        )
        assert predict(model, x) == predict(shifted, x)

    def test_dim_mismatch(self):
        x, y = separable_blobs(n_per=5)
        model = train_logreg(x, y)
        with pytest.raises(DimensionMismatch):
            predict(model, np.ones((2, 5)))


class TestAccuracy:
    def test_exact_fractions(self):
        assert accuracy(["a", "b"], ["a", "b"]) == 1.0
        assert accuracy(["a", "b"], ["b", "a"]) == 0.0
        assert accuracy(["a", "a", "b", "b"], ["a", "a", "b", "c"]) == 0.75

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            accuracy(["a"], ["a", "b"])
        with pytest.raises(LengthMismatch):
            accuracy([], [])


class TestPersistence:
    def test_json_roundtrip(self):
        x, y = separable_blobs(n_per=8)
        model = train_logreg(x, y)
        back = LogRegModel.from_json(model.to_json())
        assert back.classes == model.classes
        assert np.array_equal(back.weights, model.weights)
        assert back.metadata["iterations"] == model.metadata["iterations"]
        assert "loss_history" not in back.metadata
