"""Arithmetic Asian option pricing.

A geometric-Brownian-motion Monte Carlo baseline, histogram loading of
the average-price distribution, exact and shot-based amplitude readout
of the discounted payoff, and maximum-likelihood amplitude estimation
over a schedule of Grover powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import RandomStream
from .statevector import (
    PreparationOracle,
    ancilla_one_probability,
    attach_payoff_ancilla,
    grover_power,
    sample_counts,
)

__all__ = [
    "GbmSpec",
    "PayoffHistogram",
    "AmplitudeEstimate",
    "simulate_path_averages",
    "discounted_mean_payoff",
    "mc_price_asian",
    "build_payoff_histogram",
    "exact_amplitude_price",
    "shot_amplitude_price",
    "grover_ancilla_probability",
    "mlqae_estimate",
    "price_from_amplitude",
]

DEFAULT_BINS_EXPONENT = 7  # 128 bins
DEFAULT_PRESAMPLE_PATHS = 100_000


@dataclass
class GbmSpec:
    """Fixed-strike arithmetic Asian call under geometric Brownian motion."""

    spot: float
    rate: float
    volatility: float
    maturity: float
    monitorings: int
    strike: float

    def __post_init__(self):
        if self.spot <= 0:
            raise ValueError("spot must be positive")
        if self.volatility < 0:
            raise ValueError("volatility must be nonnegative")
        if self.maturity <= 0:
            raise ValueError("maturity must be positive")
        if self.monitorings < 1:
            raise ValueError("need at least one monitoring date")

    @property
    def discount(self) -> float:
        return math.exp(-self.rate * self.maturity)


@dataclass
class PayoffHistogram:
    """Discretised distribution of average prices with normalised payoffs.

    bound is the payoff normaliser: normalized[j] = max(centers[j] -
    strike, 0) / bound lies in [0, 1], and the amplitude sum(p * f)
    recovers the expected payoff after multiplying back by bound.
    """

    centers: np.ndarray
    probs: np.ndarray
    bound: float
    normalized: np.ndarray

    def as_oracle(self) -> PreparationOracle:
        return PreparationOracle(self.probs, self.normalized)


@dataclass
class AmplitudeEstimate:
    a_hat: float
    theta_hat: float
    method: str  # exact | shots | mlqae
    total_oracle_calls: int
    shots_per_level: int = 0


def _estimate(a: float, method: str, oracle_calls: int, shots_per_level: int = 0) -> AmplitudeEstimate:
    a = min(max(float(a), 0.0), 1.0)
    return AmplitudeEstimate(
        a_hat=a,
        theta_hat=math.asin(math.sqrt(a)),
        method=method,
        total_oracle_calls=oracle_calls,
        shots_per_level=shots_per_level,
    )


def simulate_path_averages(spec: GbmSpec, n_paths: int, rng: RandomStream) -> np.ndarray:
    """Arithmetic average over the monitoring dates for n_paths GBM paths.

    Uses exact log-normal increments with drift (r - sigma^2/2) dt, so
    there is no time-stepping bias.
    """
    if n_paths < 1:
        raise ValueError("need at least one path")
    m = spec.monitorings
    dt = spec.maturity / m
    drift = (spec.rate - 0.5 * spec.volatility**2) * dt
    diffusion = spec.volatility * math.sqrt(dt)
    z = rng.normal(n_paths * m).reshape(n_paths, m)
    log_paths = math.log(spec.spot) + np.cumsum(drift + diffusion * z, axis=1)
    return np.exp(log_paths).mean(axis=1)


def discounted_mean_payoff(averages: np.ndarray, spec: GbmSpec) -> tuple[float, float]:
    """Discounted sample mean of max(avg - K, 0) and its standard error."""
    averages = np.asarray(averages, dtype=float)
    if averages.size < 2:
        raise ValueError("need at least two sampled averages")
    payoffs = np.maximum(averages - spec.strike, 0.0)
    disc = spec.discount
    price = disc * float(payoffs.mean())
    stderr = disc * float(payoffs.std(ddof=1)) / math.sqrt(payoffs.size)
    return price, stderr


def mc_price_asian(spec: GbmSpec, n_paths: int, rng: RandomStream) -> tuple[float, float]:
    """Plain Monte Carlo price of the Asian call with its standard error."""
    if n_paths < 2:
        raise ValueError("need at least two paths")
    return discounted_mean_payoff(simulate_path_averages(spec, n_paths, rng), spec)


def build_payoff_histogram(
    averages: np.ndarray,
    spec: GbmSpec,
    bins_exponent: int = DEFAULT_BINS_EXPONENT,
    bound: float | None = None,
) -> PayoffHistogram:
    """Equal-width histogram of the sampled averages over 2**bins_exponent bins.

    When every sample is identical the occupied bin keeps the exact value
    as its center (and carries the maximum payoff), so the degenerate
    pipeline stays bias-free. The payoff bound defaults to the largest
    bin payoff, which keeps the normalised payoffs exactly inside [0, 1].
    """
    averages = np.asarray(averages, dtype=float)
    if averages.size == 0:
        raise ValueError("empty sample")
    if bins_exponent < 1:
        raise ValueError("need at least one bin qubit")
    n_bins = 2**bins_exponent
    lo, hi = float(averages.min()), float(averages.max())
    if hi > lo:
        counts, edges = np.histogram(averages, bins=n_bins, range=(lo, hi))
        centers = 0.5 * (edges[:-1] + edges[1:])
    else:
        # Single distinct value: occupied bin last, centered exactly on it.
        width = max(abs(lo), 1.0)
        centers = lo + width * (np.arange(n_bins) - (n_bins - 1))
        counts = np.zeros(n_bins)
        counts[-1] = averages.size
    probs = counts / counts.sum()
    payoffs = np.maximum(centers - spec.strike, 0.0)
    max_payoff = float(payoffs.max())
    if bound is None:
        bound = max_payoff
    elif bound < max_payoff:
        raise ValueError("supplied bound is below the largest bin payoff")
    normalized = payoffs / bound if bound > 0 else np.zeros_like(payoffs)
    return PayoffHistogram(centers=centers, probs=probs, bound=float(bound), normalized=normalized)


def exact_amplitude_price(
    histogram: PayoffHistogram, spec: GbmSpec
) -> tuple[float, AmplitudeEstimate]:
    """Price from the exact ancilla-one probability of the loaded state."""
    if histogram.bound == 0.0:
        return 0.0, _estimate(0.0, "exact", 1)
    state = attach_payoff_ancilla(histogram.as_oracle())
    est = _estimate(ancilla_one_probability(state), "exact", 1)
    return price_from_amplitude(est.a_hat, histogram.bound, spec.rate, spec.maturity), est


def shot_amplitude_price(
    histogram: PayoffHistogram, spec: GbmSpec, shots: int, rng: RandomStream
) -> tuple[float, AmplitudeEstimate]:
    """Price from the ancilla-one frequency over a finite shot readout."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    if histogram.bound == 0.0:
        return 0.0, _estimate(0.0, "shots", shots, shots)
    state = attach_payoff_ancilla(histogram.as_oracle())
    counts = sample_counts(state, shots, rng)
    ones = sum(c for idx, c in counts.items() if idx & 1)
    est = _estimate(ones / shots, "shots", shots, shots)
    return price_from_amplitude(est.a_hat, histogram.bound, spec.rate, spec.maturity), est


def grover_ancilla_probability(histogram: PayoffHistogram, k: int) -> float:
    """Ancilla-one probability after k Grover iterates; sin^2((2k+1) theta)."""
    return ancilla_one_probability(grover_power(histogram.as_oracle(), k))


def _log_likelihood(theta: np.ndarray, powers, shots, ones, clamp: float) -> np.ndarray:
    """Binomial log-likelihood of the ancilla counts across Grover powers."""
    theta = np.atleast_1d(theta)
    total = np.zeros_like(theta)
    for k, n_k, h_k in zip(powers, shots, ones):
        p = np.sin((2 * k + 1) * theta) ** 2
        p = np.clip(p, clamp, 1.0 - clamp)
        total += h_k * np.log(p) + (n_k - h_k) * np.log1p(-p)
    return total


def mlqae_estimate(
    histogram: PayoffHistogram,
    schedule: list[int],
    shots_per_level: int,
    rng: RandomStream,
    clamp: float = 1e-12,
) -> AmplitudeEstimate:
    """Maximum-likelihood amplitude estimate over a Grover-power schedule.

    Collects shots_per_level ancilla readouts from Q**k for each k in the
    schedule and maximises the binomial log-likelihood of the model
    sin^2((2k+1) theta) over theta in [0, pi/2]. The likelihood is highly
    multimodal at large k, so a dense 10^4-point grid locates the global
    mode before golden-section refinement; log arguments are clamped at
    `clamp` to keep degenerate counts finite.
    """
    if not schedule:
        raise ValueError("schedule must be nonempty")
    if shots_per_level < 1:
        raise ValueError("shots_per_level must be at least 1")
    powers = [int(k) for k in schedule]
    if any(k < 0 for k in powers):
        raise ValueError("grover powers must be nonnegative")
    oracle = histogram.as_oracle()
    ones = []
    for level, k in enumerate(powers):
        state = grover_power(oracle, k)
        counts = sample_counts(state, shots_per_level, rng.substream(level))
        ones.append(sum(c for idx, c in counts.items() if idx & 1))
    shots = [shots_per_level] * len(powers)

    grid = np.linspace(0.0, 0.5 * math.pi, 10_001)
    values = _log_likelihood(grid, powers, shots, ones, clamp)
    center = int(np.argmax(values))
    lo = grid[max(center - 1, 0)]
    hi = grid[min(center + 1, grid.size - 1)]

    # Golden-section refinement of the bracketed maximum.
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = float(_log_likelihood(np.array([c]), powers, shots, ones, clamp)[0])
    fd = float(_log_likelihood(np.array([d]), powers, shots, ones, clamp)[0])
    for _ in range(80):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = float(_log_likelihood(np.array([c]), powers, shots, ones, clamp)[0])
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = float(_log_likelihood(np.array([d]), powers, shots, ones, clamp)[0])
    theta = 0.5 * (a + b)
    amplitude = math.sin(theta) ** 2
    oracle_calls = sum((2 * k + 1) * shots_per_level for k in powers)
    return _estimate(amplitude, "mlqae", oracle_calls, shots_per_level)


def price_from_amplitude(amplitude: float, bound: float, rate: float, maturity: float) -> float:
    """Discounted price exp(-r T) * bound * amplitude."""
    if not -1e-12 <= amplitude <= 1.0 + 1e-12:
        raise ValueError(f"amplitude must lie in [0, 1], got {amplitude}")
    amplitude = min(max(amplitude, 0.0), 1.0)
    return math.exp(-rate * maturity) * bound * amplitude
