"""Small sigmoid feedforward network with hand-rolled backpropagation.

Used to quantify how sensitive the development score is to each input
indicator: train on (indicators -> score) pairs, then backpropagate to the
input layer and average absolute gradients per indicator. A weight
perturbation sweep records how much the output moves when individual weights
are displaced from their trained values.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import TrainingError, ValidationError

DEFAULT_LAYER_SIZES = (7, 16, 1)
INIT_HALF_RANGE = 0.5  # weights and biases start uniform in [-0.5, 0.5]


def sigmoid(x):
    # exp may overflow for very negative x; the result saturates to 0 cleanly
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-x))


def sigmoid_prime(z):
    s = sigmoid(z)
    return s * (1.0 - s)


@dataclass
class LayerSpec:
    sizes: tuple = DEFAULT_LAYER_SIZES

    def __post_init__(self):
        self.sizes = tuple(int(s) for s in self.sizes)
        if len(self.sizes) < 2:
            raise ValidationError("need at least an input and an output layer")
        if any(s < 1 for s in self.sizes):
            raise ValidationError("layer widths must be >= 1")

    @property
    def depth(self) -> int:
        return len(self.sizes) - 1


@dataclass
class NetworkParams:
    weights: list  # layer l: array (N_l, N_{l-1})
    biases: list  # layer l: array (N_l,)
    seed: int = None

    def __post_init__(self):
        if len(self.weights) != len(self.biases):
            raise ValidationError("weights and biases must have one entry per layer")
        for l, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[0],):
                raise ValidationError(f"layer {l + 1}: bias shape {b.shape} does not match {w.shape}")
            if l > 0 and w.shape[1] != self.weights[l - 1].shape[0]:
                raise ValidationError(f"layer {l + 1}: input width does not match previous layer")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValidationError(f"layer {l + 1}: parameters must be finite")

    @classmethod
    def initialize(cls, spec: LayerSpec, seed: int = 0):
        """Deterministic uniform init in [-0.5, 0.5] from the seed."""
        rng = np.random.default_rng(seed)
        weights, biases = [], []
        for n_in, n_out in zip(spec.sizes, spec.sizes[1:]):
            weights.append(rng.uniform(-INIT_HALF_RANGE, INIT_HALF_RANGE, size=(n_out, n_in)))
            biases.append(rng.uniform(-INIT_HALF_RANGE, INIT_HALF_RANGE, size=n_out))
        return cls(weights=weights, biases=biases, seed=seed)

    @property
    def layer_sizes(self) -> tuple:
        return (self.weights[0].shape[1],) + tuple(w.shape[0] for w in self.weights)


@dataclass
class ForwardTrace:
    pre_activations: list  # z^1 .. z^L
    activations: list  # a^0 (the input) .. a^L


@dataclass
class BackwardTrace:
    deltas: list  # delta^1 .. delta^L (also the bias gradients)
    weight_grads: list
    input_delta: np.ndarray  # loss gradient propagated to the input layer
    loss: float


def forward(x, params: NetworkParams) -> ForwardTrace:
    """Run the network on one input vector, recording z and a per layer."""
    a = np.asarray(x, dtype=float)
    n_in = params.weights[0].shape[1]
    if a.shape != (n_in,):
        raise ValidationError(f"expected input of shape ({n_in},), got {a.shape}")
    zs, activations = [], [a]
    for w, b in zip(params.weights, params.biases):
        z = w @ a + b
        a = sigmoid(z)
        zs.append(z)
        activations.append(a)
    return ForwardTrace(pre_activations=zs, activations=activations)


def backward(trace: ForwardTrace, target, params: NetworkParams) -> BackwardTrace:
    """Backpropagate the quadratic loss C = 0.5 * ||a_out - target||^2.

    Output layer: delta = (a - y) * sigma'(z). Hidden layers: delta =
    (W_next^T delta_next) * sigma'(z). Weight gradient: outer(delta, a_prev).
    """
    y = np.asarray(target, dtype=float)
    out = trace.activations[-1]
    if y.shape != out.shape:
        raise ValidationError(f"target shape {y.shape} does not match output {out.shape}")
    if len(trace.pre_activations) != len(params.weights):
        raise ValidationError("trace depth does not match params")

    depth = len(params.weights)
    deltas = [None] * depth
    weight_grads = [None] * depth

    delta = (out - y) * sigmoid_prime(trace.pre_activations[-1])
    for l in range(depth - 1, -1, -1):
        deltas[l] = delta
        weight_grads[l] = np.outer(delta, trace.activations[l])
        back = params.weights[l].T @ delta
        if l > 0:
            delta = back * sigmoid_prime(trace.pre_activations[l - 1])
    loss = 0.5 * float(((out - y) ** 2).sum())
    return BackwardTrace(deltas=deltas, weight_grads=weight_grads, input_delta=back, loss=loss)


def output_input_gradient(trace: ForwardTrace, params: NetworkParams) -> np.ndarray:
    """Gradient of the scalar output activation with respect to the input."""
    if params.weights[-1].shape[0] != 1:
        raise ValidationError("output-input gradient is defined for a single output neuron")
    d = sigmoid_prime(trace.pre_activations[-1])
    for l in range(len(params.weights) - 1, 0, -1):
        d = (params.weights[l].T @ d) * sigmoid_prime(trace.pre_activations[l - 1])
    return params.weights[0].T @ d


@dataclass
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValidationError("epochs must be >= 1")


def _forward_batch(x, params):
    # x: (samples, n_in); returns per-layer Z and A lists with A[0] = x
    a = x
    zs, activations = [], [x]
    for w, b in zip(params.weights, params.biases):
        z = a @ w.T + b
        a = sigmoid(z)
        zs.append(z)
        activations.append(a)
    return zs, activations


def train(inputs, targets, spec: LayerSpec, config: TrainConfig):
    """Full-batch gradient descent on the mean quadratic loss.

    Returns (trained NetworkParams, per-epoch loss list). Raises
    TrainingError with the epoch index if the loss stops being finite.
    """
    x = np.asarray(inputs, dtype=float)
    y = np.asarray(targets, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    n_samples = x.shape[0]
    if x.shape != (n_samples, spec.sizes[0]) or y.shape != (n_samples, spec.sizes[-1]):
        raise ValidationError("data shapes do not match the layer spec")

    params = NetworkParams.initialize(spec, seed=config.seed)
    depth = spec.depth
    losses = []
    for epoch in range(config.epochs):
        zs, activations = _forward_batch(x, params)
        err = activations[-1] - y
        loss = 0.5 * float((err * err).sum()) / n_samples
        if not np.isfinite(loss):
            raise TrainingError("training loss diverged", epoch)
        losses.append(loss)

        delta = err * sigmoid_prime(zs[-1])
        for l in range(depth - 1, -1, -1):
            w_grad = delta.T @ activations[l] / n_samples
            b_grad = delta.mean(axis=0)
            if l > 0:
                delta = (delta @ params.weights[l]) * sigmoid_prime(zs[l - 1])
            params.weights[l] = params.weights[l] - config.learning_rate * w_grad
            params.biases[l] = params.biases[l] - config.learning_rate * b_grad
    return params, losses


def input_sensitivities(inputs, params: NetworkParams) -> np.ndarray:
    """Mean absolute output gradient per input component, over all samples."""
    x = np.asarray(inputs, dtype=float)
    grads = np.empty_like(x)
    for i in range(x.shape[0]):
        grads[i] = output_input_gradient(forward(x[i], params), params)
    return np.abs(grads).mean(axis=0)


@dataclass
class SweepResult:
    indicator_names: list
    sensitivities: np.ndarray  # per indicator, standardized-input space
    params: NetworkParams
    final_loss: float
    input_means: np.ndarray
    input_stds: np.ndarray
    perturbation_rows: list  # (weight_id, weight_value, mean_output)
    variations: dict  # weight_id -> relative output variation over its sweep
    max_variation: float = field(init=False)

    def __post_init__(self):
        self.max_variation = max(self.variations.values()) if self.variations else 0.0


def standardize_columns(x):
    """Z-score per column; constant columns keep std 1 so they pass through."""
    x = np.asarray(x, dtype=float)
    means = x.mean(axis=0)
    stds = x.std(axis=0)
    stds = np.where(stds == 0, 1.0, stds)
    return (x - means) / stds, means, stds


def perturbation_sweep(params: NetworkParams, inputs, span: float = 0.1, points: int = 11):
    """Sweep every weight across +/- span (relative) around its trained value.

    For each weight the mean network output over `inputs` is recorded at each
    grid point; the per-weight variation is (max - min) / baseline output.
    Weights exactly at zero sweep the absolute band [-span, span].
    """
    x = np.asarray(inputs, dtype=float)
    _, activations = _forward_batch(x, params)
    baseline = float(activations[-1].mean())
    rows, variations = [], {}
    for l, w in enumerate(params.weights):
        for j in range(w.shape[0]):
            for k in range(w.shape[1]):
                weight_id = f"w{l + 1}[{j},{k}]"
                center = w[j, k]
                half = abs(center) * span if center != 0 else span
                outputs = []
                for value in np.linspace(center - half, center + half, points):
                    w[j, k] = value
                    _, acts = _forward_batch(x, params)
                    out = float(acts[-1].mean())
                    outputs.append(out)
                    rows.append((weight_id, float(value), out))
                w[j, k] = center
                variations[weight_id] = (max(outputs) - min(outputs)) / abs(baseline)
    return rows, variations, baseline


def sensitivity_sweep(inputs, targets, spec: LayerSpec = None, config: TrainConfig = None,
                      indicator_names=None, span: float = 0.1, points: int = 11) -> SweepResult:
    """Train on (indicator table -> scores) and measure per-indicator sensitivity.

    Inputs are z-score standardized per indicator before training. Sensitivity
    of an indicator is the mean over samples of the absolute gradient of the
    network output with respect to that (standardized) input. Also runs the
    weight perturbation sweep on the trained network.
    """
    x = np.asarray(inputs, dtype=float)
    if x.ndim != 2 or x.shape[0] < 10:
        raise ValidationError("need a 2-D indicator table with at least 10 samples")
    spec = spec or LayerSpec((x.shape[1],) + DEFAULT_LAYER_SIZES[1:])
    config = config or TrainConfig()
    if indicator_names is None:
        indicator_names = [f"x{j + 1}" for j in range(x.shape[1])]

    x_std, means, stds = standardize_columns(x)
    params, losses = train(x_std, targets, spec, config)
    sens = input_sensitivities(x_std, params)
    rows, variations, _ = perturbation_sweep(params, x_std, span=span, points=points)
    return SweepResult(
        indicator_names=list(indicator_names),
        sensitivities=sens,
        params=params,
        final_loss=losses[-1],
        input_means=means,
        input_stds=stds,
        perturbation_rows=rows,
        variations=variations,
    )
