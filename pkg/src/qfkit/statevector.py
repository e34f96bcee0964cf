"""Dense complex statevector simulator.

Provides exactly the circuit primitives the toolkit needs: probability
loading, diagonal phases, mixer rotations, payoff rotations onto an
ancilla, Grover-iterate powers, shot sampling, and overlaps.

Bit convention: basis index x encodes qubit j in bit j of x, so qubit 0
is the lowest-order bit. When an ancilla is present it is always qubit 0.
Registers are value types: every operation returns a fresh register and
never mutates its input, so independent simulations are safe to run in
parallel as long as each task owns its own RandomStream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import RandomStream

__all__ = [
    "MAX_QUBITS",
    "CapacityError",
    "QuantumRegister",
    "PreparationOracle",
    "prepare_from_probabilities",
    "uniform_superposition",
    "apply_diagonal_phase",
    "apply_mixer_rotation",
    "attach_payoff_ancilla",
    "ancilla_one_probability",
    "sample_counts",
    "grover_power",
    "overlap",
]

MAX_QUBITS = 16  # desk-scale guard; larger registers are refused


class CapacityError(ValueError):
    """Raised when an operation would exceed the register size cap."""


@dataclass
class QuantumRegister:
    """Complex amplitude vector over 2**n_qubits basis states, norm 1."""

    n_qubits: int
    amplitudes: np.ndarray
    has_ancilla: bool = False

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "QuantumRegister":
        return QuantumRegister(self.n_qubits, self.amplitudes.copy(), self.has_ancilla)


def _new_register(n_qubits: int, amplitudes: np.ndarray, has_ancilla: bool) -> QuantumRegister:
    if n_qubits < 1:
        raise ValueError("register needs at least one qubit")
    if n_qubits > MAX_QUBITS:
        raise CapacityError(f"register of {n_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap")
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (2**n_qubits,):
        raise ValueError("amplitude vector length must be exactly 2**n_qubits")
    norm = float(np.sum(np.abs(amplitudes) ** 2))
    assert abs(norm - 1.0) < 1e-12, "statevector norm drifted"
    return QuantumRegister(n_qubits, amplitudes, has_ancilla)


@dataclass
class PreparationOracle:
    """Probability vector over 2**m bins plus normalised payoffs in [0, 1].

    Acts as the state-preparation oracle: loading the probabilities and
    rotating a payoff ancilla so its one-probability is sum(p * f).
    """

    probabilities: np.ndarray
    normalized_payoffs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        f = np.asarray(self.normalized_payoffs, dtype=float)
        if p.shape != f.shape or p.ndim != 1:
            raise ValueError("probabilities and payoffs must be equal-length vectors")
        n = p.size
        if n < 2 or n & (n - 1):
            raise ValueError("oracle length must be a power of two (at least 2)")
        if np.any(p < -1e-15):
            raise ValueError("probabilities must be nonnegative")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1 within 1e-9, got {total}")
        self.probabilities = np.maximum(p, 0.0) / total
        self.normalized_payoffs = np.clip(f, 0.0, 1.0)

    @property
    def n_qubits(self) -> int:
        return int(self.probabilities.size).bit_length() - 1

    def expected_payoff(self) -> float:
        return float(self.probabilities @ self.normalized_payoffs)


def prepare_from_probabilities(probabilities) -> QuantumRegister:
    """Load sqrt(p_j) as real nonnegative amplitudes over the basis states."""
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1:
        raise ValueError("probability vector expected")
    n = p.size
    if n < 2 or n & (n - 1):
        raise ValueError("length must be a power of two (at least 2)")
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1 within 1e-9, got {total}")
    amps = np.sqrt(p / total).astype(complex)
    return _new_register(n.bit_length() - 1, amps, has_ancilla=False)


def uniform_superposition(n_qubits: int) -> QuantumRegister:
    """Equal real amplitude on every basis state."""
    if n_qubits < 1:
        raise ValueError("register needs at least one qubit")
    if n_qubits > MAX_QUBITS:
        raise CapacityError(f"register of {n_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap")
    dim = 2**n_qubits
    amps = np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)
    return QuantumRegister(n_qubits, amps, has_ancilla=False)


def apply_diagonal_phase(state: QuantumRegister, angles) -> QuantumRegister:
    """Multiply amplitude x by exp(-i * angles[x]); probabilities unchanged."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != state.amplitudes.shape:
        raise ValueError("angle vector length must match the register dimension")
    before = state.probabilities()
    amps = state.amplitudes * np.exp(-1j * angles)
    after = np.abs(amps) ** 2
    assert np.max(np.abs(after - before)) < 1e-12, "diagonal phase changed probabilities"
    return QuantumRegister(state.n_qubits, amps, state.has_ancilla)


def _apply_single_qubit(amps: np.ndarray, n_qubits: int, qubit: int, gate: np.ndarray) -> np.ndarray:
    """Apply a 2x2 gate to one qubit of a dense amplitude vector."""
    t = amps.reshape([2] * n_qubits)
    axis = n_qubits - 1 - qubit  # axis k of the reshaped tensor is bit n-1-k
    t = np.moveaxis(t, axis, 0)
    new = np.empty_like(t)
    new[0] = gate[0, 0] * t[0] + gate[0, 1] * t[1]
    new[1] = gate[1, 0] * t[0] + gate[1, 1] * t[1]
    return np.moveaxis(new, 0, axis).reshape(-1)


def apply_mixer_rotation(state: QuantumRegister, beta: float) -> QuantumRegister:
    """Apply exp(-i * beta * X) to every non-ancilla qubit."""
    c, s = math.cos(beta), math.sin(beta)
    gate = np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    amps = state.amplitudes
    start = 1 if state.has_ancilla else 0
    for qubit in range(start, state.n_qubits):
        amps = _apply_single_qubit(amps, state.n_qubits, qubit, gate)
    return QuantumRegister(state.n_qubits, amps, state.has_ancilla)


def attach_payoff_ancilla(oracle: PreparationOracle) -> QuantumRegister:
    """Prepare |j>(sqrt(1-f_j)|0> + sqrt(f_j)|1>) with the ancilla at bit 0."""
    p = oracle.probabilities
    f = oracle.normalized_payoffs
    n = oracle.n_qubits + 1
    if n > MAX_QUBITS:
        raise CapacityError(f"register of {n} qubits exceeds the {MAX_QUBITS}-qubit cap")
    root_p = np.sqrt(p)
    amps = np.empty(2 * p.size, dtype=complex)
    amps[0::2] = root_p * np.sqrt(1.0 - f)
    amps[1::2] = root_p * np.sqrt(f)
    return _new_register(n, amps, has_ancilla=True)


def ancilla_one_probability(state: QuantumRegister) -> float:
    """Probability of reading the ancilla qubit as 1."""
    if not state.has_ancilla:
        raise ValueError("register has no ancilla")
    return float(np.sum(np.abs(state.amplitudes[1::2]) ** 2))


def sample_counts(state: QuantumRegister, shots: int, rng: RandomStream) -> dict[int, int]:
    """Multinomial shot readout; counts sum to shots, deterministic given rng."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    probs = state.probabilities()
    cumulative = np.cumsum(probs / probs.sum())
    draws = np.searchsorted(cumulative, rng.uniform(shots), side="right")
    draws = np.minimum(draws, probs.size - 1)
    values, counts = np.unique(draws, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def grover_power(oracle: PreparationOracle, k: int) -> QuantumRegister:
    """Return Q**k applied to the prepared state, with Q = -(I - 2|psi><psi|)(I - 2P).

    |psi> is the payoff-loaded state and P projects onto ancilla = 1.
    The conjugated zero reflection equals I - 2|psi><psi| exactly, so no
    circuit inversion of the loader is needed; the global minus sign is
    kept so the state matches the dense reflection-product oracle.
    """
    if k < 0:
        raise ValueError("grover power must be nonnegative")
    psi = attach_payoff_ancilla(oracle)
    v = psi.amplitudes.copy()
    base = psi.amplitudes
    for _ in range(k):
        v[1::2] = -v[1::2]  # reflection about the bad subspace
        v = 2.0 * np.vdot(base, v) * base - v  # minus the reflection about |psi>
    return QuantumRegister(psi.n_qubits, v, has_ancilla=True)


def overlap(a: QuantumRegister, b: QuantumRegister) -> complex:
    """Inner product <a|b>; |overlap|**2 is the state fidelity."""
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ValueError("registers must have equal dimension")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
