import numpy as np
import pytest

from equimine import sensnet
from equimine.errors import TrainingError, ValidationError
from equimine.sensnet import (
    BackwardTrace,
    LayerSpec,
    NetworkParams,
    TrainConfig,
    backward,
    forward,
    input_sensitivities,
    output_input_gradient,
    sensitivity_sweep,
    train,
)


def forward_oracle(x, params):
    """Independent loop-based forward pass."""
    a = list(map(float, x))
    for w, b in zip(params.weights, params.biases):
        z = []
        for j in range(w.shape[0]):
            acc = float(b[j])
            for k in range(w.shape[1]):
                acc += float(w[j, k]) * a[k]
            z.append(acc)
        a = [1.0 / (1.0 + np.exp(-v)) for v in z]
    return np.array(a)


def loss_of(params, x, y):
    out = forward(x, params).activations[-1]
    return 0.5 * float(((out - y) ** 2).sum())


class TestForward:
    def test_zero_params_give_half_everywhere(self):
        spec = LayerSpec((3, 4, 2))
        params = NetworkParams(weights=[np.zeros((4, 3)), np.zeros((2, 4))],
                               biases=[np.zeros(4), np.zeros(2)])
        trace = forward(np.array([0.3, -1.0, 2.0]), params)
        for a in trace.activations[1:]:
            assert np.allclose(a, 0.5)

    def test_saturation_with_large_bias(self):
        params = NetworkParams(weights=[np.zeros((1, 1))], biases=[np.array([20.0])])
        trace = forward(np.array([0.7]), params)
        assert trace.activations[-1][0] == pytest.approx(1.0, abs=1e-8)

    def test_matches_oracle_on_random(self, rng):
        for seed in range(5):
            params = NetworkParams.initialize(LayerSpec((7, 16, 1)), seed=seed)
            x = rng.uniform(-2, 2, 7)
            trace = forward(x, params)
            assert np.allclose(trace.activations[-1], forward_oracle(x, params), atol=1e-12)

    def test_trace_invariant(self, rng):
        params = NetworkParams.initialize(LayerSpec((4, 5, 3)), seed=1)
        trace = forward(rng.uniform(-1, 1, 4), params)
        for z, a in zip(trace.pre_activations, trace.activations[1:]):
            assert np.allclose(a, sensnet.sigmoid(z))

    def test_shape_validation(self):
        params = NetworkParams.initialize(LayerSpec((4, 2)), seed=0)
        with pytest.raises(ValidationError):
            forward(np.zeros(3), params)

    def test_deterministic_initialization(self):
        a = NetworkParams.initialize(LayerSpec((7, 16, 1)), seed=9)
        b = NetworkParams.initialize(LayerSpec((7, 16, 1)), seed=9)
        for wa, wb in zip(a.weights, b.weights):
            assert np.array_equal(wa, wb)
        assert all(np.all(np.abs(w) <= 0.5) for w in a.weights)


class TestBackward:
    def test_zero_error_gives_zero_gradients(self):
        params = NetworkParams.initialize(LayerSpec((3, 4, 1)), seed=0)
        trace = forward(np.array([0.1, 0.2, 0.3]), params)
        bt = backward(trace, trace.activations[-1], params)
        assert bt.loss == 0.0
        for g in bt.weight_grads:
            assert np.all(g == 0.0)
        assert np.all(bt.input_delta == 0.0)

    def test_one_one_network_hand_case(self):
        # a = 0.5, y = 0, z = 0: delta = (0.5 - 0) * 0.25 = 0.125
        params = NetworkParams(weights=[np.zeros((1, 1))], biases=[np.zeros(1)])
        trace = forward(np.array([0.0]), params)
        bt = backward(trace, np.array([0.0]), params)
        assert bt.deltas[-1][0] == pytest.approx(0.125, abs=1e-15)

    def test_gradients_match_finite_differences(self, rng):
        h = 1e-5
        for seed in range(3):
            params = NetworkParams.initialize(LayerSpec((5, 8, 1)), seed=seed)
            x = rng.uniform(-1, 1, 5)
            y = rng.uniform(0.2, 0.8, 1)
            bt = backward(forward(x, params), y, params)
            for l, w in enumerate(params.weights):
                for j in range(w.shape[0]):
                    for k in range(w.shape[1]):
                        orig = w[j, k]
                        w[j, k] = orig + h
                        up = loss_of(params, x, y)
                        w[j, k] = orig - h
                        down = loss_of(params, x, y)
                        w[j, k] = orig
                        fd = (up - down) / (2 * h)
                        got = bt.weight_grads[l][j, k]
                        assert abs(fd - got) <= 1e-5 * max(abs(fd), abs(got), 1e-8)

    def test_bias_gradients_are_deltas(self, rng):
        h = 1e-5
        params = NetworkParams.initialize(LayerSpec((4, 6, 1)), seed=2)
        x = rng.uniform(-1, 1, 4)
        y = np.array([0.3])
        bt = backward(forward(x, params), y, params)
        for l, b in enumerate(params.biases):
            for j in range(b.shape[0]):
                orig = b[j]
                b[j] = orig + h
                up = loss_of(params, x, y)
                b[j] = orig - h
                down = loss_of(params, x, y)
                b[j] = orig
                fd = (up - down) / (2 * h)
                assert abs(fd - bt.deltas[l][j]) <= 1e-5 * max(abs(fd), 1e-8)

    def test_delta_linearity(self, rng):
        # scaling the output-layer error seed by c scales every delta and
        # gradient by c; realized by moving the target to c * (a - y)
        params = NetworkParams.initialize(LayerSpec((6, 10, 1)), seed=4)
        x = rng.uniform(-1, 1, 6)
        y = np.array([0.25])
        trace = forward(x, params)
        base = backward(trace, y, params)
        c = 3.75
        out = trace.activations[-1]
        scaled_target = out - c * (out - y)
        scaled = backward(trace, scaled_target, params)
        for d1, d2 in zip(base.deltas, scaled.deltas):
            assert np.allclose(d2, c * d1, rtol=1e-12, atol=1e-15)
        for g1, g2 in zip(base.weight_grads, scaled.weight_grads):
            assert np.allclose(g2, c * g1, rtol=1e-12, atol=1e-15)

    def test_target_shape_validated(self):
        params = NetworkParams.initialize(LayerSpec((3, 2)), seed=0)
        trace = forward(np.zeros(3), params)
        with pytest.raises(ValidationError):
            backward(trace, np.zeros(2), NetworkParams.initialize(LayerSpec((3, 2, 2)), seed=0))
        with pytest.raises(ValidationError):
            backward(trace, np.zeros(5), params)


class TestOutputInputGradient:
    def test_matches_finite_differences(self, rng):
        h = 1e-6
        params = NetworkParams.initialize(LayerSpec((5, 9, 1)), seed=7)
        x = rng.uniform(-1, 1, 5)
        grad = output_input_gradient(forward(x, params), params)
        for j in range(5):
            xp = x.copy()
            xp[j] += h
            xm = x.copy()
            xm[j] -= h
            fd = (forward(xp, params).activations[-1][0]
                  - forward(xm, params).activations[-1][0]) / (2 * h)
            assert grad[j] == pytest.approx(fd, rel=1e-6, abs=1e-10)

    def test_needs_scalar_output(self):
        params = NetworkParams.initialize(LayerSpec((3, 4, 2)), seed=0)
        with pytest.raises(ValidationError):
            output_input_gradient(forward(np.zeros(3), params), params)


class TestTrain:
    def test_loss_decreases_on_learnable_data(self, rng):
        x = rng.uniform(0, 1, (20, 4))
        y = 0.3 + 0.4 * x[:, 0]
        params, losses = train(x, y, LayerSpec((4, 8, 1)),
                               TrainConfig(learning_rate=0.5, epochs=6000, seed=0))
        assert losses[-1] < losses[0] * 0.1

    def test_forward_determinism(self, rng):
        x = rng.uniform(0, 1, (15, 3))
        y = x.mean(axis=1) * 0.5 + 0.2
        spec = LayerSpec((3, 5, 1))
        config = TrainConfig(epochs=200, seed=11)
        p1, l1 = train(x, y, spec, config)
        p2, l2 = train(x, y, spec, config)
        assert l1 == l2
        for w1, w2 in zip(p1.weights, p2.weights):
            assert np.array_equal(w1, w2)

    def test_divergence_raises_with_epoch(self, rng):
        # an absurd step size overflows the weights; the nan shows up in the
        # next epoch's loss
        x = rng.uniform(0.5, 1.0, (10, 3))
        y = np.full(10, 1e6)
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(TrainingError) as err:
                train(x, y, LayerSpec((3, 4, 1)),
                      TrainConfig(learning_rate=1e306, epochs=5, seed=0))
        assert err.value.epoch == 1

    def test_shape_mismatch(self, rng):
        with pytest.raises(ValidationError):
            train(rng.uniform(size=(10, 3)), np.zeros(10), LayerSpec((4, 2, 1)),
                  TrainConfig(epochs=1))


class TestSensitivitySweep:
    def test_single_factor_data_ranks_that_factor_first(self):
        for seed in range(3):
            rng = np.random.default_rng(200 + seed)
            x = rng.uniform(0, 1, (40, 7))
            y = 0.3 + 0.4 * x[:, 0]
            sweep = sensitivity_sweep(x, y, LayerSpec((7, 16, 1)),
                                      TrainConfig(learning_rate=0.5, epochs=1500, seed=seed),
                                      points=3)
            assert sweep.sensitivities[0] > sweep.sensitivities[1:].max()

    def test_constant_target_input_deltas_vanish(self):
        # At the converged zero-gradient fixed point the backpropagated loss
        # gradient at the input layer goes to zero.
        rng = np.random.default_rng(0)
        x = rng.uniform(0, 1, (30, 7))
        x_std, _, _ = sensnet.standardize_columns(x)
        y = np.full(30, 0.5)
        params, losses = train(x_std, y, LayerSpec((7, 16, 1)),
                               TrainConfig(learning_rate=0.5, epochs=8000, seed=1))
        deltas = np.array([
            np.abs(backward(forward(row, params), np.array([0.5]), params).input_delta)
            for row in x_std
        ])
        assert losses[-1] < 1e-5
        assert deltas.mean(axis=0).max() < 1e-3

    def test_needs_ten_samples(self, rng):
        with pytest.raises(ValidationError):
            sensitivity_sweep(rng.uniform(size=(5, 7)), np.zeros(5))

    def test_standardize_handles_constant_column(self):
        x = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
        out, means, stds = sensnet.standardize_columns(x)
        assert stds[1] == 1.0
        assert np.all(out[:, 1] == 0.0)

    def test_perturbation_rows_cover_every_weight(self, rng):
        x = rng.uniform(0, 1, (12, 3))
        y = 0.4 + 0.2 * x[:, 1]
        sweep = sensitivity_sweep(x, y, LayerSpec((3, 4, 1)),
                                  TrainConfig(epochs=50, seed=0), points=5)
        n_weights = 3 * 4 + 4 * 1
        assert len(sweep.variations) == n_weights
        assert len(sweep.perturbation_rows) == n_weights * 5
        assert sweep.max_variation == max(sweep.variations.values())
        assert all(v >= 0 for v in sweep.variations.values())
