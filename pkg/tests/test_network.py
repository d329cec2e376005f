import numpy as np
import pytest

from cubicmaps.dataset import DatasetRecord
from cubicmaps.network import (
    Adam,
    NetworkParams,
    TargetScaler,
    TrainConfig,
    evaluate,
    features_and_labels,
    forward,
    gradient_check,
    init_params,
    load_checkpoint,
    loss_and_grad,
    mean_prediction,
    record_matrix,
    save_checkpoint,
    scale_features,
    split_indices,
    train,
    write_history,
)


def small_instance(seed=5, n=6, w=5, filters=3, hidden=4):
    rng = np.random.Generator(np.random.PCG64(seed))
    params = init_params(w, rng, filters=filters, hidden=hidden)
    x = rng.standard_normal((n, 3, w, 1))
    y = rng.standard_normal((n, 1))
    return params, x, y


class TestScaling:
    def test_per_column_standardization(self):
        raw = np.array([[0.0, 1.0, 0.0], [1.0, 1.0, 0.0], [1.0, 1.0, 1.0]])
        sample = scale_features(raw)
        for j in range(3):
            col = raw[:, j]
            if col.std() < 1e-6:
                assert np.allclose(sample.matrix[:, j], col - col.mean())
            else:
                assert np.allclose(sample.matrix[:, j], (col - col.mean()) / col.std())

    def test_constant_columns_collapse_to_zero(self):
        all_zero = np.zeros((3, 5))
        all_one = np.ones((3, 5))
        assert np.array_equal(scale_features(all_zero).matrix, np.zeros((3, 5)))
        assert np.array_equal(scale_features(all_one).matrix, np.zeros((3, 5)))

    def test_record_matrix_rows_are_v_u_t(self):
        rec = DatasetRecord((1, 0, 0, 0, 0), (0, 0, 0, 1, 0), (1, 1, 0, 0, 1), 1)
        mat = record_matrix(rec)
        assert mat.shape == (3, 5)
        assert list(mat[0]) == [1, 0, 0, 0, 0]
        assert list(mat[2]) == [1, 1, 0, 0, 1]

    def test_features_and_labels_shapes(self, five_records):
        x, y = features_and_labels(five_records[:10])
        assert x.shape == (10, 3, 5, 1)
        assert y.shape == (10, 1)

    def test_target_scaler_round_trip(self):
        y = np.array([[0.0], [1.0], [0.0], [0.0]])
        scaler = TargetScaler.fit(y)
        assert np.allclose(scaler.inverse_transform(scaler.transform(y)), y)

    def test_target_scaler_constant_guard(self):
        y = np.zeros((4, 1))
        scaler = TargetScaler.fit(y)
        assert scaler.std == 1.0


class TestInitialization:
    def test_shapes(self):
        rng = np.random.Generator(np.random.PCG64(42))
        params = init_params(5, rng, filters=256, hidden=256)
        assert params.conv_w.shape == (2, 2, 1, 256)
        assert params.conv_b.shape == (256,)
        assert params.w1.shape == (2 * 4 * 256, 256)
        assert params.b1.shape == (256,)
        assert params.w2.shape == (256, 1)
        assert params.b2.shape == (1,)

    def test_glorot_bounds_and_zero_biases(self):
        rng = np.random.Generator(np.random.PCG64(0))
        params = init_params(4, rng, filters=8, hidden=16)
        conv_limit = np.sqrt(6.0 / (4 + 4 * 8))
        assert np.max(np.abs(params.conv_w)) <= conv_limit
        fan_in = 2 * 3 * 8
        w1_limit = np.sqrt(6.0 / (fan_in + 16))
        assert np.max(np.abs(params.w1)) <= w1_limit
        assert not params.conv_b.any()
        assert not params.b1.any()
        assert not params.b2.any()

    def test_same_seed_same_params(self):
        a = init_params(5, np.random.Generator(np.random.PCG64(7)), filters=4, hidden=4)
        b = init_params(5, np.random.Generator(np.random.PCG64(7)), filters=4, hidden=4)
        for x, y in zip(a.arrays(), b.arrays()):
            assert np.array_equal(x, y)


class TestForward:
    def test_against_naive_loops(self):
        params, x, _ = small_instance()
        n, _, w, _ = x.shape
        filters = params.conv_w.shape[-1]
        hidden = params.w1.shape[1]
        out = forward(params, x)
        for i in range(n):
            conv = np.zeros((2, w - 1, filters))
            for r in range(2):
                for c in range(w - 1):
                    patch = x[i, r:r + 2, c:c + 2, 0]
                    for f in range(filters):
                        conv[r, c, f] = np.sum(patch * params.conv_w[:, :, 0, f]) + params.conv_b[f]
            conv = np.maximum(conv, 0.0)
            flat = conv.reshape(-1)  # (row, column, channel) order
            h = np.maximum(flat @ params.w1 + params.b1, 0.0)
            val = h @ params.w2 + params.b2
            assert np.allclose(out[i], val, atol=1e-12)

    def test_output_shape(self):
        params, x, _ = small_instance(n=3, w=4)
        assert forward(params, x).shape == (3, 1)


class TestGradients:
    def test_matches_central_differences(self):
        params, x, y = small_instance()
        assert gradient_check(params, x, y) < 1e-4

    def test_loss_is_mean_squared_error(self):
        params, x, y = small_instance()
        loss, _ = loss_and_grad(params, x, y)
        assert np.isclose(loss, float(np.mean((forward(params, x) - y) ** 2)))

    def test_duplicated_batch_same_gradient(self):
        params, x, y = small_instance(n=4)
        _, g1 = loss_and_grad(params, x, y)
        _, g2 = loss_and_grad(params, np.concatenate([x, x]), np.concatenate([y, y]))
        for a, b in zip(g1, g2):
            assert np.allclose(a, b, atol=1e-12)


class TestAdam:
    def test_single_step_closed_form(self):
        cfg = TrainConfig(learning_rate=0.01)
        params, x, y = small_instance(n=3)
        opt = Adam(params, cfg)
        _, grads = loss_and_grad(params, x, y)
        before = [a.copy() for a in params.arrays()]
        opt.step(params, grads)
        for prev, arr, g in zip(before, params.arrays(), grads):
            m_hat = g  # first step: m = (1-b1)g / (1-b1) = g
            v_hat = g * g
            want = prev - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
            assert np.allclose(arr, want, atol=1e-12)


class TestSplit:
    def test_split_sizes_and_disjointness(self):
        cfg = TrainConfig()
        rng = np.random.Generator(np.random.PCG64(42))
        train_idx, test_idx = split_indices(10, cfg, rng)
        assert len(test_idx) == 2
        assert len(train_idx) == 8
        assert not set(train_idx) & set(test_idx)
        assert sorted(list(train_idx) + list(test_idx)) == list(range(10))

    def test_split_is_deterministic(self):
        cfg = TrainConfig()
        a = split_indices(50, cfg, np.random.Generator(np.random.PCG64(42)))
        b = split_indices(50, cfg, np.random.Generator(np.random.PCG64(42)))
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_too_few_records(self):
        with pytest.raises(ValueError):
            split_indices(3, TrainConfig(), np.random.Generator(np.random.PCG64(1)))


class TestTraining:
    def test_history_and_metrics(self, five_records, quick_model):
        model, test_idx, history = quick_model
        assert [e for e, _ in history] == [1, 2]
        assert all(np.isfinite(mse) for _, mse in history)
        mse = evaluate(model, five_records, test_idx)
        assert np.isfinite(mse)
        assert np.isfinite(mean_prediction(model, five_records, test_idx))

    def test_predict_raw(self, quick_model):
        model, _, _ = quick_model
        value = model.predict_raw(((1, 0, 0, 0, 0), (0, 0, 0, 1, 0), (1, 1, 0, 0, 1)))
        assert np.isfinite(value)

    def test_rerun_is_bitwise_identical(self, five_records, tmp_path, quick_model):
        model, _, _ = quick_model
        rerun, _, _ = train(five_records, TrainConfig(epochs=2))
        p1, p2 = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
        save_checkpoint(model, p1)
        save_checkpoint(rerun, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)
        with pytest.raises(ValueError):
            TrainConfig(test_fraction=1.5)
        with pytest.raises(ValueError):
            TrainConfig(batch_size=0)


class TestCheckpoint:
    def test_round_trip(self, quick_model, tmp_path):
        model, _, _ = quick_model
        path = tmp_path / "model.ckpt"
        save_checkpoint(model, path)
        loaded = load_checkpoint(path)
        for a, b in zip(model.params.arrays(), loaded.params.arrays()):
            assert np.array_equal(a, b)
        assert loaded.scaler.mean == model.scaler.mean
        assert loaded.scaler.std == model.scaler.std
        assert loaded.cfg.to_dict() == model.cfg.to_dict()

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bogus.ckpt"
        path.write_bytes(b"NOTAMODELxxxx")
        with pytest.raises(ValueError, match="not a model checkpoint"):
            load_checkpoint(path)

    def test_truncated_payload(self, quick_model, tmp_path):
        model, _, _ = quick_model
        path = tmp_path / "model.ckpt"
        save_checkpoint(model, path)
        data = path.read_bytes()
        path.write_bytes(data[:-16])
        with pytest.raises(ValueError, match="truncated"):
            load_checkpoint(path)

    def test_trailing_bytes(self, quick_model, tmp_path):
        model, _, _ = quick_model
        path = tmp_path / "model.ckpt"
        save_checkpoint(model, path)
        path.write_bytes(path.read_bytes() + b"x")
        with pytest.raises(ValueError, match="trailing"):
            load_checkpoint(path)


class TestHistory:
    def test_csv_format(self, tmp_path):
        path = tmp_path / "hist.csv"
        write_history([(1, 0.5), (2, 0.25)], path)
        lines = path.read_text().splitlines()
        assert lines[0] == "epoch,train_mse"
        assert lines[1] == "1,0.5"
        assert lines[2] == "2,0.25"
