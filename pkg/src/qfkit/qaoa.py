"""p-layer QAOA over a QUBO cost diagonal.

The cost layer is applied as a diagonal phase on precomputed energies
rather than a gate-level ZZ decomposition; the action is identical and
much faster on a dense statevector. The outer loop is a restarted
Nelder-Mead search over the 2p angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .numerics import RandomStream, SimplexConfig, simplex_minimize
from .portfolio import QuboProblem, qubo_energy
from .statevector import (
    MAX_QUBITS,
    CapacityError,
    QuantumRegister,
    apply_diagonal_phase,
    apply_mixer_rotation,
    sample_counts,
    uniform_superposition,
)

__all__ = [
    "QaoaParams",
    "QaoaResult",
    "RankedSample",
    "cost_diagonal",
    "qaoa_state",
    "qaoa_expectation",
    "optimize_qaoa",
    "sample_and_rank",
]

_TWO_PI = 2.0 * math.pi
_READOUT_LABEL = 2**40  # substream reserved for the final shot readout
REPORT_SHOTS = 4096


@dataclass
class QaoaParams:
    """Cost and mixer angles for each of the p layers, wrapped to [0, 2pi)."""

    gammas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        self.gammas = np.mod(np.asarray(self.gammas, dtype=float).ravel(), _TWO_PI)
        self.betas = np.mod(np.asarray(self.betas, dtype=float).ravel(), _TWO_PI)
        if self.gammas.shape != self.betas.shape:
            raise ValueError("gamma and beta vectors must share the layer count")

    @property
    def depth(self) -> int:
        return self.gammas.size


class RankedSample(NamedTuple):
    bits: tuple[int, ...]
    frequency: int
    objective: float
    feasible: bool


@dataclass
class QaoaResult:
    best_params: QaoaParams
    best_expectation: float
    top_samples: list[tuple[tuple[int, ...], int, float]]  # (bits, frequency, objective), objective ascending
    restarts_used: int


def _index_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(n))


def cost_diagonal(problem: QuboProblem) -> np.ndarray:
    """Energy of every bit assignment, indexed with variable i at bit i."""
    n = problem.n_vars
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} variables exceed the {MAX_QUBITS}-qubit cap")
    idx = np.arange(2**n)
    bits = ((idx[:, None] >> np.arange(n)) & 1).astype(float)
    return np.einsum("xi,ij,xj->x", bits, problem.matrix, bits) + problem.offset


def qaoa_state(params: QaoaParams, diag: np.ndarray) -> QuantumRegister:
    """Alternate cost phases and mixer rotations on a uniform start state."""
    diag = np.asarray(diag, dtype=float)
    n = int(diag.size).bit_length() - 1
    if diag.size != 2**n:
        raise ValueError("cost diagonal length must be a power of two")
    state = uniform_superposition(n)
    for gamma, beta in zip(params.gammas, params.betas):
        state = apply_diagonal_phase(state, gamma * diag)
        state = apply_mixer_rotation(state, beta)
    return state


def qaoa_expectation(params: QaoaParams, diag: np.ndarray) -> float:
    """Energy expectation of the ansatz state under the cost diagonal."""
    state = qaoa_state(params, diag)
    return float(state.probabilities() @ np.asarray(diag, dtype=float))


def optimize_qaoa(
    diag: np.ndarray,
    depth: int,
    restarts: int = 8,
    rng: RandomStream | None = None,
    cfg: SimplexConfig | None = None,
    report_shots: int = REPORT_SHOTS,
) -> QaoaResult:
    """Restarted Nelder-Mead over the 2p angles, then a shot-based report.

    The cost angles are searched in energy-normalised form: the restart
    draws cover one full phase wrap of the energy spread (gamma times the
    spread uniform over [0, 2pi)) while beta ~ U[0, pi), so instances with
    large penalty scales get a usable search range. Each restart has its
    own substream, so adding restarts never changes earlier ones and the
    best expectation is non-increasing in the restart count. The
    zero-angle point (whose expectation is exactly the uniform-state mean
    energy) is always kept as a candidate. top_samples holds the
    report_shots readout of the optimised state grouped by bitstring and
    ranked by objective ascending; frequencies ride along.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if restarts < 1:
        raise ValueError("need at least one restart")
    diag = np.asarray(diag, dtype=float)
    rng = rng if rng is not None else RandomStream(0)
    spread = float(diag.max() - diag.min())
    scale = spread if spread > 0 else 1.0

    def objective(vec: np.ndarray) -> float:
        return qaoa_expectation(QaoaParams(vec[:depth] / scale, vec[depth:]), diag)

    best_vec = np.zeros(2 * depth)
    best_val = float(np.mean(diag))  # zero angles leave the state uniform
    for i in range(restarts):
        sub = rng.substream(i)
        start = np.concatenate([sub.uniform(depth) * _TWO_PI, sub.uniform(depth) * math.pi])
        result = simplex_minimize(objective, start, cfg)
        if result.fun < best_val:
            best_val, best_vec = result.fun, result.x

    params = QaoaParams(best_vec[:depth] / scale, best_vec[depth:])
    state = qaoa_state(params, diag)
    counts = sample_counts(state, report_shots, rng.substream(_READOUT_LABEL))
    n = state.n_qubits
    ranked = sorted(counts.items(), key=lambda item: (diag[item[0]], item[0]))
    top = [(_index_bits(idx, n), c, float(diag[idx])) for idx, c in ranked]
    return QaoaResult(
        best_params=params,
        best_expectation=best_val,
        top_samples=top,
        restarts_used=restarts,
    )


def sample_and_rank(
    state: QuantumRegister,
    shots: int,
    problem: QuboProblem,
    k: int,
    rng: RandomStream,
) -> list[RankedSample]:
    """Shot readout grouped by bitstring and ranked by objective ascending.

    Each entry carries its penalised objective and whether the selection
    meets the cardinality k.
    """
    counts = sample_counts(state, shots, rng)
    n = problem.n_vars
    samples = []
    for idx, freq in counts.items():
        bits = _index_bits(idx, n)
        samples.append(
            RankedSample(
                bits=bits,
                frequency=freq,
                objective=qubo_energy(problem, bits),
                feasible=sum(bits) == k,
            )
        )
    samples.sort(key=lambda s: (s.objective, s.bits))
    return samples
