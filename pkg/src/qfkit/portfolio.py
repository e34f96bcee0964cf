"""Cardinality-penalised mean-variance portfolio encoding.

Builds the penalised QUBO from price data, converts between QUBO and
Ising forms, and enumerates the feasible selections exactly as the
classical baseline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AssetUniverse",
    "QuboProblem",
    "IsingModel",
    "PortfolioRecord",
    "estimate_annualized_moments",
    "build_cardinality_qubo",
    "qubo_to_ising",
    "qubo_energy",
    "ising_energy",
    "enumerate_feasible",
]

ENUMERATION_CAP = 10**6


@dataclass
class AssetUniverse:
    """Tickers with annualised expected returns and covariance."""

    tickers: list[str]
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        n = len(self.tickers)
        if n > 16:
            raise ValueError("universe capped at 16 assets")
        if self.mu.shape != (n,) or self.sigma.shape != (n, n):
            raise ValueError("moment dimensions must match the ticker list")
        if np.max(np.abs(self.sigma - self.sigma.T), initial=0.0) > 1e-10:
            raise ValueError("covariance must be symmetric within 1e-10")
        self.sigma = 0.5 * (self.sigma + self.sigma.T)

    @property
    def n_assets(self) -> int:
        return len(self.tickers)


@dataclass
class QuboProblem:
    """Symmetric quadratic form z^T Q z plus a constant offset."""

    matrix: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError("QUBO matrix must be square")
        if np.max(np.abs(self.matrix - self.matrix.T), initial=0.0) > 1e-12:
            raise ValueError("QUBO matrix must be symmetric within 1e-12")
        self.matrix = 0.5 * (self.matrix + self.matrix.T)

    @property
    def n_vars(self) -> int:
        return self.matrix.shape[0]


@dataclass
class IsingModel:
    """Spin energy sum_{i<j} J_ij s_i s_j + sum_i h_i s_i + offset."""

    couplings: np.ndarray  # strictly upper triangular
    fields: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        self.couplings = np.asarray(self.couplings, dtype=float)
        self.fields = np.asarray(self.fields, dtype=float)
        if np.any(np.tril(self.couplings) != 0.0):
            raise ValueError("couplings must be strictly upper triangular")


@dataclass
class PortfolioRecord:
    """One selection with its reporting metrics (equal-weight convention)."""

    selection: tuple[int, ...]
    expected_return: float
    volatility: float
    penalized_objective: float
    cardinality: int = field(default=0)

    def __post_init__(self):
        self.cardinality = int(sum(self.selection))


def estimate_annualized_moments(closes: dict[str, np.ndarray], trading_days: int = 252) -> AssetUniverse:
    """Annualised sample moments from aligned close series.

    mu = trading_days * mean(log returns), sigma = trading_days * sample
    covariance with the T-1 denominator.
    """
    tickers = list(closes)
    if not tickers:
        raise ValueError("at least one asset required")
    lengths = {len(closes[t]) for t in tickers}
    if len(lengths) != 1:
        raise ValueError("close series must be aligned to the same dates")
    if lengths.pop() < 2:
        raise ValueError("need at least two observations per asset")
    prices = np.column_stack([np.asarray(closes[t], dtype=float) for t in tickers])
    if np.any(prices <= 0):
        raise ValueError("prices must be positive")
    returns = np.diff(np.log(prices), axis=0)
    mu = trading_days * returns.mean(axis=0)
    if returns.shape[0] < 2:
        sigma = np.zeros((len(tickers), len(tickers)))
    else:
        sigma = trading_days * np.cov(returns, rowvar=False, ddof=1)
        sigma = np.atleast_2d(sigma)
    return AssetUniverse(tickers=tickers, mu=mu, sigma=sigma)


def build_cardinality_qubo(
    universe: AssetUniverse, risk_aversion: float, penalty: float, k: int
) -> QuboProblem:
    """QUBO for min lambda x'Sx - mu'x + A (sum x - K)^2.

    The linear terms are folded onto the diagonal using z*z == z, so
    z^T Q z + offset reproduces the penalised objective exactly on every
    bit vector.
    """
    n = universe.n_assets
    if not 1 <= k <= n:
        raise ValueError(f"cardinality must be in [1, {n}], got {k}")
    if penalty <= 0:
        raise ValueError("penalty coefficient must be positive")
    q = risk_aversion * universe.sigma + penalty * np.ones((n, n))
    q[np.diag_indices(n)] += -universe.mu - 2.0 * penalty * k
    return QuboProblem(matrix=q, offset=penalty * float(k) ** 2)


def qubo_to_ising(problem: QuboProblem) -> IsingModel:
    """Map binary variables to spins via z = (1 + s) / 2.

    The returned model satisfies ising_energy(s) == qubo_energy(z) for
    every assignment with s = 2z - 1.
    """
    q = problem.matrix
    n = problem.n_vars
    couplings = np.triu(0.5 * q, 1)
    fields = 0.5 * q.sum(axis=1)
    constant = 0.25 * (float(q.sum()) + float(np.trace(q)))
    return IsingModel(couplings=couplings, fields=fields, offset=problem.offset + constant)


def qubo_energy(problem: QuboProblem, bits) -> float:
    """z^T Q z + offset for one bit vector."""
    z = np.asarray(bits, dtype=float)
    if z.shape != (problem.n_vars,):
        raise ValueError("bit vector length must match the QUBO size")
    return float(z @ problem.matrix @ z) + problem.offset


def ising_energy(model: IsingModel, spins) -> float:
    """Spin energy of one +-1 assignment."""
    s = np.asarray(spins, dtype=float)
    return float(s @ model.couplings @ s) + float(model.fields @ s) + model.offset


def enumerate_feasible(
    universe: AssetUniverse, risk_aversion: float, penalty: float, k: int
) -> list[PortfolioRecord]:
    """Exact classical baseline: every K-of-n selection, ranked ascending.

    Return and volatility use equal weights x / K; the objective is the
    full penalised value z^T Q z + offset (including the constant A*K*K
    from the expanded penalty). Ties rank the lexicographically smallest
    bit vector first.
    """
    n = universe.n_assets
    if math.comb(n, k) > ENUMERATION_CAP:
        raise ValueError(f"C({n},{k}) exceeds the enumeration cap of {ENUMERATION_CAP}")
    problem = build_cardinality_qubo(universe, risk_aversion, penalty, k)
    records = []
    for combo in itertools.combinations(range(n), k):
        bits = tuple(1 if i in combo else 0 for i in range(n))
        weights = np.asarray(bits, dtype=float) / k
        records.append(
            PortfolioRecord(
                selection=bits,
                expected_return=float(universe.mu @ weights),
                volatility=float(math.sqrt(max(weights @ universe.sigma @ weights, 0.0))),
                penalized_objective=qubo_energy(problem, bits),
            )
        )
    records.sort(key=lambda r: (r.penalized_objective, r.selection))
    return records
