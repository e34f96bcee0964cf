"""Quantum kernel and variational classification.

Feature maps embed scaled inputs as statevectors; the fidelity between
two embeddings defines the kernel behind a dual-form SVM, and a shallow
variational circuit with a logistic link forms the quantum classifier
trained by parameter-shift gradients. A plain logistic regression is
included as the classical reference for the comparison protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import RandomStream
from .statevector import QuantumRegister, _apply_single_qubit, apply_diagonal_phase, overlap

__all__ = [
    "FeatureMapSpec",
    "GramMatrix",
    "QnnModel",
    "SvmModel",
    "ClassificationMetrics",
    "quantum_feature_state",
    "quantum_kernel",
    "gram_matrix",
    "svm_train",
    "svm_predict",
    "qnn_forward",
    "parameter_shift_gradient",
    "qnn_train",
    "classification_metrics",
    "logistic_regression_train",
    "logistic_regression_predict",
    "realized_volatility",
    "direction_features",
]

MAX_GRAM_ROWS = 400  # kernel-evaluation budget
QNN_LAYERS = 3


@dataclass
class FeatureMapSpec:
    """Encoding geometry plus the affine feature-to-angle scaling.

    Raw features are mapped to [-pi, pi] with the training-set min/max
    (fit with fit_scaling); out-of-range test values are clipped. Feature
    vectors shorter than n_qubits are zero padded, longer ones truncated.
    """

    n_qubits: int = 6
    encoding_layers: int = 1
    feature_low: np.ndarray | None = None
    feature_high: np.ndarray | None = None

    def __post_init__(self):
        if not 1 <= self.n_qubits <= 12:
            raise ValueError("n_qubits must lie in [1, 12]")
        if self.encoding_layers < 1:
            raise ValueError("need at least one encoding layer")

    def fit_scaling(self, features: np.ndarray) -> "FeatureMapSpec":
        features = np.atleast_2d(np.asarray(features, dtype=float))
        return FeatureMapSpec(
            n_qubits=self.n_qubits,
            encoding_layers=self.encoding_layers,
            feature_low=features.min(axis=0),
            feature_high=features.max(axis=0),
        )

    def scale(self, features: np.ndarray) -> np.ndarray:
        if self.feature_low is None or self.feature_high is None:
            raise ValueError("scaling not fitted; call fit_scaling on training data")
        x = np.atleast_2d(np.asarray(features, dtype=float))
        span = self.feature_high - self.feature_low
        safe = np.where(span > 0, span, 1.0)
        angles = -math.pi + 2.0 * math.pi * (x - self.feature_low) / safe
        angles = np.where(span > 0, angles, 0.0)
        return np.clip(angles, -math.pi, math.pi)


@dataclass
class GramMatrix:
    """Symmetric fidelity-kernel matrix with unit diagonal."""

    entries: np.ndarray
    row_index: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass
class QnnModel:
    """Variational rotation angles plus the trainable logistic link."""

    thetas: np.ndarray  # (layers, n_qubits)
    link_scale: float = 1.0
    link_bias: float = 0.0

    def __post_init__(self):
        self.thetas = np.atleast_2d(np.asarray(self.thetas, dtype=float))


@dataclass
class SvmModel:
    """Box-constrained dual solution of the kernel SVM."""

    alphas: np.ndarray
    bias: float
    support_indices: np.ndarray
    box_c: float
    labels: np.ndarray
    objective_history: list = field(default_factory=list)


@dataclass
class ClassificationMetrics:
    auc: float  # nan when only one class is present
    accuracy: float
    balanced_accuracy: float
    f1: float


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


_RING_CACHE: dict[int, np.ndarray] = {}


def _ring_phase_angles(n_qubits: int) -> np.ndarray:
    """Diagonal angles implementing a pi controlled-phase ring."""
    cached = _RING_CACHE.get(n_qubits)
    if cached is not None:
        return cached
    idx = np.arange(2**n_qubits)
    bits = (idx[:, None] >> np.arange(n_qubits)) & 1
    edges = [(q, q + 1) for q in range(n_qubits - 1)]
    if n_qubits >= 3:
        edges.append((n_qubits - 1, 0))
    count = np.zeros(idx.size)
    for a, b in edges:
        count += bits[:, a] * bits[:, b]
    angles = math.pi * count
    _RING_CACHE[n_qubits] = angles
    return angles


def _pad_angles(angles: np.ndarray, n_qubits: int) -> np.ndarray:
    angles = np.asarray(angles, dtype=float).ravel()
    if angles.size >= n_qubits:
        return angles[:n_qubits]
    return np.concatenate([angles, np.zeros(n_qubits - angles.size)])


def _rotation_layer(state: QuantumRegister, angles: np.ndarray) -> QuantumRegister:
    amps = state.amplitudes
    for qubit, theta in enumerate(angles):
        amps = _apply_single_qubit(amps, state.n_qubits, qubit, _ry(float(theta)))
    return QuantumRegister(state.n_qubits, amps, state.has_ancilla)


def _entangling_ring(state: QuantumRegister) -> QuantumRegister:
    if state.n_qubits < 2:
        return state
    return apply_diagonal_phase(state, _ring_phase_angles(state.n_qubits))


# Batched circuit evaluation: one row per sample, so training touches
# numpy once per gate instead of once per (sample, gate).


def _batch_ry(states: np.ndarray, n_qubits: int, qubit: int, thetas: np.ndarray) -> np.ndarray:
    """Row-wise Y rotations on a (rows, 2**n) amplitude batch."""
    rows = states.shape[0]
    t = states.reshape([rows] + [2] * n_qubits)
    axis = 1 + (n_qubits - 1 - qubit)
    t = np.moveaxis(t, axis, 1)
    shape = (rows,) + (1,) * (t.ndim - 2)
    c = np.cos(0.5 * thetas).reshape(shape)
    s = np.sin(0.5 * thetas).reshape(shape)
    new = np.empty_like(t)
    new[:, 0] = c * t[:, 0] - s * t[:, 1]
    new[:, 1] = s * t[:, 0] + c * t[:, 1]
    return np.moveaxis(new, 1, axis).reshape(rows, -1)


def _batch_feature_states(angle_rows: np.ndarray, spec: FeatureMapSpec) -> np.ndarray:
    rows = angle_rows.shape[0]
    dim = 2**spec.n_qubits
    padded = np.zeros((rows, spec.n_qubits))
    width = min(angle_rows.shape[1], spec.n_qubits)
    padded[:, :width] = angle_rows[:, :width]
    states = np.zeros((rows, dim), dtype=complex)
    states[:, 0] = 1.0
    ring = np.exp(-1j * _ring_phase_angles(spec.n_qubits)) if spec.n_qubits >= 2 else None
    for _ in range(spec.encoding_layers):
        for q in range(spec.n_qubits):
            states = _batch_ry(states, spec.n_qubits, q, padded[:, q])
        if ring is not None:
            states = states * ring
    return states


def _batch_qnn_expectations(angle_rows: np.ndarray, model: QnnModel, spec: FeatureMapSpec) -> np.ndarray:
    states = _batch_feature_states(np.atleast_2d(angle_rows), spec)
    ring = np.exp(-1j * _ring_phase_angles(spec.n_qubits)) if spec.n_qubits >= 2 else None
    rows = states.shape[0]
    for layer in model.thetas:
        padded = _pad_angles(layer, spec.n_qubits)
        for q in range(spec.n_qubits):
            states = _batch_ry(states, spec.n_qubits, q, np.full(rows, padded[q]))
        if ring is not None:
            states = states * ring
    probs = np.abs(states) ** 2
    return probs[:, 0::2].sum(axis=1) - probs[:, 1::2].sum(axis=1)


def quantum_feature_state(x, spec: FeatureMapSpec) -> QuantumRegister:
    """Embed one scaled feature vector: Y rotations then a phase ring,
    repeated encoding_layers times."""
    angles = _pad_angles(x, spec.n_qubits)
    dim = 2**spec.n_qubits
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0
    state = QuantumRegister(spec.n_qubits, amps, has_ancilla=False)
    for _ in range(spec.encoding_layers):
        state = _rotation_layer(state, angles)
        state = _entangling_ring(state)
    return state


def quantum_kernel(x1, x2, spec: FeatureMapSpec) -> float:
    """State fidelity |<phi(x1)|phi(x2)>|^2 in [0, 1]."""
    a = quantum_feature_state(x1, spec)
    b = quantum_feature_state(x2, spec)
    return min(abs(overlap(a, b)) ** 2, 1.0)


def gram_matrix(
    samples: np.ndarray,
    spec: FeatureMapSpec,
    row_index: list | None = None,
    max_rows: int = MAX_GRAM_ROWS,
    allow_large: bool = False,
) -> GramMatrix:
    """Fidelity kernel matrix of a scaled sample set, upper triangle only.

    Refuses more than max_rows rows unless allow_large is set; the cap
    reflects the quadratic cost of kernel evaluation.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    n = samples.shape[0]
    if n > max_rows and not allow_large:
        raise ValueError(f"{n} rows exceed the kernel budget of {max_rows}; pass allow_large=True")
    states = np.array([quantum_feature_state(x, spec).amplitudes for x in samples])
    entries = np.eye(n)
    for i in range(n - 1):
        row = np.abs(states[i + 1 :] @ states[i].conj()) ** 2
        entries[i, i + 1 :] = row
        entries[i + 1 :, i] = row
    return GramMatrix(entries=entries, row_index=list(row_index) if row_index else list(range(n)))


def _svm_dual_objective(k: np.ndarray, y: np.ndarray, alphas: np.ndarray) -> float:
    signed = alphas * y
    return float(alphas.sum() - 0.5 * signed @ k @ signed)


def _kkt_residuals(y: np.ndarray, errors: np.ndarray, alphas: np.ndarray, c: float) -> np.ndarray:
    margin = y * errors  # y_i f_i - 1
    upper = np.where(alphas < c - 1e-12, np.maximum(-margin, 0.0), 0.0)
    lower = np.where(alphas > 1e-12, np.maximum(margin, 0.0), 0.0)
    return np.maximum(upper, lower)


def svm_train(gram: GramMatrix, labels, box_c: float, tol: float = 1e-6, max_sweeps: int = 10_000) -> SvmModel:
    """Dual SVM by pairwise coordinate ascent under the balance constraint.

    Classic two-variable updates: each step solves the analytic
    subproblem for a violating pair while keeping sum(alpha * y) = 0 and
    0 <= alpha <= C, so the dual objective never decreases. Convergence
    is declared when the largest KKT violation drops below tol.
    """
    k = gram.entries
    y = np.asarray(labels, dtype=float)
    n = y.size
    if k.shape != (n, n):
        raise ValueError("gram size must match the label count")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    if np.all(y == y[0]):
        raise ValueError("both classes must be present")
    if box_c <= 0:
        raise ValueError("box constraint must be positive")

    alphas = np.zeros(n)
    bias = 0.0
    scores = np.zeros(n)  # sum_j alpha_j y_j K_ij + bias
    history: list[float] = []

    def try_pair(i: int, j: int) -> bool:
        nonlocal bias, scores
        if i == j:
            return False
        e_i = scores[i] - y[i]
        e_j = scores[j] - y[j]
        if y[i] != y[j]:
            low = max(0.0, alphas[j] - alphas[i])
            high = min(box_c, box_c + alphas[j] - alphas[i])
        else:
            low = max(0.0, alphas[i] + alphas[j] - box_c)
            high = min(box_c, alphas[i] + alphas[j])
        if high - low < 1e-12:
            return False

        eta = k[i, i] + k[j, j] - 2.0 * k[i, j]
        if eta > 1e-12:
            a_j = alphas[j] + y[j] * (e_i - e_j) / eta
            a_j = min(max(a_j, low), high)
        else:
            # Flat direction: the dual is linear along the pair line, so
            # the optimum sits at whichever end the slope points to.
            slope = y[j] * (e_i - e_j)
            if abs(slope) < 1e-12:
                return False
            a_j = high if slope > 0 else low
        if abs(a_j - alphas[j]) < 1e-10:
            return False

        a_i = alphas[i] + y[i] * y[j] * (alphas[j] - a_j)
        delta_i = a_i - alphas[i]
        delta_j = a_j - alphas[j]

        b1 = bias - e_i - y[i] * delta_i * k[i, i] - y[j] * delta_j * k[i, j]
        b2 = bias - e_j - y[i] * delta_i * k[i, j] - y[j] * delta_j * k[j, j]
        if 1e-12 < a_i < box_c - 1e-12:
            new_bias = b1
        elif 1e-12 < a_j < box_c - 1e-12:
            new_bias = b2
        else:
            new_bias = 0.5 * (b1 + b2)

        scores = scores + y[i] * delta_i * k[:, i] + y[j] * delta_j * k[:, j] + (new_bias - bias)
        alphas[i], alphas[j] = a_i, a_j
        bias = new_bias
        return True

    for _ in range(max_sweeps):
        changed = 0
        for i in range(n):
            r_i = y[i] * (scores[i] - y[i])
            if not ((alphas[i] < box_c - 1e-12 and r_i < -tol) or (alphas[i] > 1e-12 and r_i > tol)):
                continue
            # First choice: the partner with the largest error gap; fall
            # back to scanning every index so a blocked pair cannot stall
            # the sweep.
            gaps = np.abs((scores[i] - y[i]) - (scores - y))
            gaps[i] = -1.0
            order = [int(np.argmax(gaps))]
            order += [j for j in range(n) if j != i and j != order[0]]
            for j in order:
                if try_pair(i, j):
                    changed += 1
                    break

        history.append(_svm_dual_objective(k, y, alphas))
        residual = float(np.max(_kkt_residuals(y, scores - y, alphas, box_c)))
        if residual <= tol:
            break
        if changed == 0:
            break

    support = np.flatnonzero(alphas > 1e-8)
    margin = np.flatnonzero((alphas > 1e-8) & (alphas < box_c - 1e-8))
    if margin.size:
        # Candidate bias from the margin vectors; keep it only if it does
        # not worsen the final KKT residual.
        signed = alphas * y
        raw_scores = k @ signed
        candidate = float(np.mean(y[margin] - k[margin] @ signed))
        res_kept = float(np.max(_kkt_residuals(y, raw_scores + bias - y, alphas, box_c)))
        res_cand = float(np.max(_kkt_residuals(y, raw_scores + candidate - y, alphas, box_c)))
        if res_cand < res_kept:
            bias = candidate
    return SvmModel(
        alphas=alphas,
        bias=bias,
        support_indices=support,
        box_c=box_c,
        labels=y,
        objective_history=history,
    )


def svm_predict(model: SvmModel, kernel_row) -> tuple[float, int]:
    """Decision score and sign label for one kernel row against the
    training set; score ties go to +1."""
    row = np.asarray(kernel_row, dtype=float)
    if row.size != model.alphas.size:
        raise ValueError("kernel row length must match the training size")
    score = float((model.alphas * model.labels) @ row + model.bias)
    return score, (1 if score >= 0 else -1)


def _qnn_state(x, model: QnnModel, spec: FeatureMapSpec) -> QuantumRegister:
    state = quantum_feature_state(x, spec)
    for layer in model.thetas:
        state = _rotation_layer(state, _pad_angles(layer, spec.n_qubits))
        state = _entangling_ring(state)
    return state


def _z0_expectation(state: QuantumRegister) -> float:
    probs = state.probabilities()
    return float(probs[0::2].sum() - probs[1::2].sum())


def _sigmoid(v):
    return 1.0 / (1.0 + np.exp(-np.clip(v, -500, 500)))


def qnn_forward(x, model: QnnModel, spec: FeatureMapSpec) -> tuple[float, float]:
    """Observable expectation on qubit 0 and its logistic-link probability."""
    expectation = _z0_expectation(_qnn_state(x, model, spec))
    probability = float(_sigmoid(model.link_scale * expectation + model.link_bias))
    return expectation, probability


def parameter_shift_gradient(x, model: QnnModel, spec: FeatureMapSpec) -> np.ndarray:
    """Exact gradient of the circuit expectation w.r.t. every rotation angle.

    Each component is half the difference of the expectation at +-pi/2
    shifts, which is exact for rotation-generated gates.
    """
    grads = np.zeros_like(model.thetas)
    layers, width = model.thetas.shape
    for l in range(layers):
        for q in range(width):
            shifted = model.thetas.copy()
            shifted[l, q] += 0.5 * math.pi
            up = _z0_expectation(_qnn_state(x, QnnModel(shifted, 1.0, 0.0), spec))
            shifted[l, q] -= math.pi
            down = _z0_expectation(_qnn_state(x, QnnModel(shifted, 1.0, 0.0), spec))
            grads[l, q] = 0.5 * (up - down)
    return grads


def _qnn_loss(expectations: np.ndarray, y: np.ndarray, scale: float, bias: float) -> float:
    p = _sigmoid(scale * expectations + bias)
    p = np.clip(p, 1e-12, 1.0 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def qnn_train(
    features: np.ndarray,
    labels,
    spec: FeatureMapSpec,
    epochs: int = 100,
    learning_rate: float = 0.2,
    rng: RandomStream | None = None,
    layers: int = QNN_LAYERS,
    initial: QnnModel | None = None,
    loss_history: list | None = None,
) -> QnnModel:
    """Train the variational classifier by backtracked gradient descent.

    Circuit gradients come from the parameter-shift rule and the logistic
    link (scale, bias) is trained jointly. Every epoch backtracks the
    step until the training cross-entropy does not increase, so the loss
    is non-increasing; a zero learning rate leaves the model untouched.
    Pass `initial` to continue from an existing model instead of the
    seeded random start; when loss_history is a list the per-epoch loss
    is appended to it.
    """
    x = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=float).ravel()
    if x.shape[0] != y.size:
        raise ValueError("feature rows must match the label count")
    if not set(np.unique(y)) <= {0.0, 1.0}:
        raise ValueError("labels must be 0/1")
    if np.all(y == y[0]):
        raise ValueError("both classes must be present")
    rng = rng if rng is not None else RandomStream(0)
    if initial is not None:
        model = QnnModel(initial.thetas.copy(), initial.link_scale, initial.link_bias)
    else:
        thetas = 0.2 * (rng.uniform(layers * spec.n_qubits).reshape(layers, spec.n_qubits) - 0.5)
        model = QnnModel(thetas=thetas, link_scale=1.0, link_bias=0.0)

    exps = _batch_qnn_expectations(x, model, spec)
    loss = _qnn_loss(exps, y, model.link_scale, model.link_bias)
    for _ in range(epochs):
        p = _sigmoid(model.link_scale * exps + model.link_bias)
        residual = (p - y) / y.size
        grad_scale = float(residual @ exps)
        grad_bias = float(residual.sum())
        # Parameter-shift gradient of each angle, evaluated sample-batched.
        grad_thetas = np.zeros_like(model.thetas)
        for l in range(model.thetas.shape[0]):
            for q in range(spec.n_qubits):
                shifted = model.thetas.copy()
                shifted[l, q] += 0.5 * math.pi
                up = _batch_qnn_expectations(x, QnnModel(shifted, 1.0, 0.0), spec)
                shifted[l, q] -= math.pi
                down = _batch_qnn_expectations(x, QnnModel(shifted, 1.0, 0.0), spec)
                grad_thetas[l, q] = model.link_scale * float(residual @ (0.5 * (up - down)))

        step = learning_rate
        accepted = False
        for _ in range(20):
            trial = QnnModel(
                thetas=model.thetas - step * grad_thetas,
                link_scale=model.link_scale - step * grad_scale,
                link_bias=model.link_bias - step * grad_bias,
            )
            trial_exps = _batch_qnn_expectations(x, trial, spec)
            trial_loss = _qnn_loss(trial_exps, y, trial.link_scale, trial.link_bias)
            if trial_loss <= loss or step == 0.0:
                improvement = loss - trial_loss
                model, exps, loss = trial, trial_exps, trial_loss
                accepted = improvement > 1e-10
                break
            step *= 0.5
        if not accepted:
            break
    return model


def classification_metrics(y_true, scores, threshold: float = 0.5) -> ClassificationMetrics:
    """Ranking and confusion-matrix metrics for binary scores.

    AUC is the Mann-Whitney statistic with half credit for ties and is
    nan when only one class is present; the remaining metrics threshold
    the scores at `threshold`.
    """
    y = np.asarray(y_true, dtype=int).ravel()
    s = np.asarray(scores, dtype=float).ravel()
    if y.shape != s.shape:
        raise ValueError("labels and scores must align")
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())

    if n_pos == 0 or n_neg == 0:
        auc = float("nan")
    else:
        order = np.argsort(s, kind="mergesort")
        ranks = np.empty(s.size)
        sorted_scores = s[order]
        i = 0
        while i < s.size:
            j = i
            while j + 1 < s.size and sorted_scores[j + 1] == sorted_scores[i]:
                j += 1
            ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
            i = j + 1
        rank_sum = float(ranks[y == 1].sum())
        auc = (rank_sum - 0.5 * n_pos * (n_pos + 1)) / (n_pos * n_neg)

    predicted = (s >= threshold).astype(int)
    tp = int(((predicted == 1) & (y == 1)).sum())
    tn = int(((predicted == 0) & (y == 0)).sum())
    fp = int(((predicted == 1) & (y == 0)).sum())
    fn = int(((predicted == 0) & (y == 1)).sum())
    accuracy = (tp + tn) / y.size
    tpr = tp / n_pos if n_pos else 0.0
    tnr = tn / n_neg if n_neg else 0.0
    balanced = 0.5 * (tpr + tnr)
    f1 = 2 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) else 0.0
    return ClassificationMetrics(auc=auc, accuracy=accuracy, balanced_accuracy=balanced, f1=f1)


def logistic_regression_train(
    features: np.ndarray, labels, epochs: int = 500, learning_rate: float = 0.5
) -> tuple[np.ndarray, float]:
    """Plain logistic regression reference, gradient descent with backtracking."""
    x = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=float).ravel()
    w = np.zeros(x.shape[1])
    b = 0.0

    def loss_of(wv, bv):
        p = np.clip(_sigmoid(x @ wv + bv), 1e-12, 1 - 1e-12)
        return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))

    loss = loss_of(w, b)
    for _ in range(epochs):
        p = _sigmoid(x @ w + b)
        residual = (p - y) / y.size
        gw = x.T @ residual
        gb = float(residual.sum())
        step = learning_rate
        for _ in range(20):
            trial_loss = loss_of(w - step * gw, b - step * gb)
            if trial_loss <= loss:
                w, b, loss = w - step * gw, b - step * gb, trial_loss
                break
            step *= 0.5
        else:
            break
    return w, b


def logistic_regression_predict(features: np.ndarray, w: np.ndarray, b: float) -> np.ndarray:
    return _sigmoid(np.atleast_2d(np.asarray(features, dtype=float)) @ w + b)


def realized_volatility(returns: np.ndarray, window: int = 20) -> np.ndarray:
    """Rolling standard deviation of returns; nan until the window fills."""
    returns = np.asarray(returns, dtype=float)
    out = np.full(returns.size, np.nan)
    for i in range(window - 1, returns.size):
        out[i] = returns[i - window + 1 : i + 1].std(ddof=1)
    return out


def direction_features(closes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Next-day direction dataset from a close series.

    Five features per day t: the return, the previous return, 20-day
    realised volatility, 10-day mean return, and price over its 50-day
    average minus one. The label says whether the next day's return is
    positive. Rows with incomplete history or no next day are dropped.
    """
    closes = np.asarray(closes, dtype=float)
    if closes.size < 53:
        raise ValueError("need at least 53 closes for the feature windows")
    returns = np.diff(np.log(closes))
    vol = realized_volatility(returns, 20)
    momentum = np.full(returns.size, np.nan)
    for i in range(9, returns.size):
        momentum[i] = returns[i - 9 : i + 1].mean()
    trend = np.full(returns.size, np.nan)
    prices = closes[1:]  # aligned with returns index
    for i in range(49, prices.size):
        trend[i] = prices[i] / prices[i - 49 : i + 1].mean() - 1.0
    rows = []
    labels = []
    for t in range(1, returns.size - 1):
        feats = (returns[t], returns[t - 1], vol[t], momentum[t], trend[t])
        if any(math.isnan(v) for v in feats):
            continue
        rows.append(feats)
        labels.append(1 if returns[t + 1] > 0 else 0)
    return np.asarray(rows), np.asarray(labels, dtype=int)
