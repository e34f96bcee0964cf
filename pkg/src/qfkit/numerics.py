"""Shared numerical kernels.

Deterministic random streams, standard-normal distribution functions, a
derivative-free Nelder-Mead simplex minimizer, and a Jacobi eigensolver
for symmetric matrices. Everything here is pure and reproducible: the
same inputs always give the same outputs, on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RandomStream",
    "SimplexConfig",
    "SimplexResult",
    "simplex_minimize",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "symmetric_eigendecompose",
]

_U64 = 0xFFFFFFFFFFFFFFFF


def _mix64(a: int, b: int) -> int:
    """Deterministic 64-bit hash of two integers (splitmix64 finalizer)."""
    z = (a * 0x9E3779B97F4A7C15 + b + 1) & _U64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return (z ^ (z >> 31)) & _U64


class RandomStream:
    """Counter-based random stream keyed by (seed, stream_id).

    The same key always reproduces the same sequence of uniform and
    normal variates, bit for bit, regardless of platform or of how the
    draws are chunked across calls. Substreams derived with distinct
    labels are statistically independent (distinct Philox keys), so
    parallel consumers should each own their own substream.

    Normal variates use the Marsaglia polar method on top of the raw
    uniform stream; leftover variates are cached so chunking does not
    change the sequence.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _U64
        self.stream_id = int(stream_id) & _U64
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._bits = np.random.Philox(key=key)
        self._spare: list[float] = []

    def substream(self, label: int) -> "RandomStream":
        """Independent child stream; same (seed, stream_id, label) -> same stream."""
        return RandomStream(self.seed, _mix64(self.stream_id, int(label) & _U64))

    def uniform(self, n: int) -> np.ndarray:
        """n uniforms in [0, 1), built from raw 64-bit counter output."""
        if n < 0:
            raise ValueError("draw count must be nonnegative")
        if n == 0:
            return np.empty(0)
        raw = self._bits.random_raw(n)
        return (raw >> np.uint64(11)) * 2.0**-53

    def normal(self, n: int) -> np.ndarray:
        """n standard-normal variates via the polar (Marsaglia) method."""
        if n < 0:
            raise ValueError("draw count must be nonnegative")
        out = np.empty(n)
        got = 0
        while got < n:
            if self._spare:
                take = min(len(self._spare), n - got)
                out[got : got + take] = self._spare[:take]
                del self._spare[:take]
                got += take
                continue
            # Request pairs in batches; accept/reject acts per consecutive
            # pair, so the output sequence is independent of batch size.
            pairs = max(n - got, 32)
            u = 2.0 * self.uniform(2 * pairs) - 1.0
            x, y = u[0::2], u[1::2]
            s = x * x + y * y
            ok = (s > 0.0) & (s < 1.0)
            r = np.sqrt(-2.0 * np.log(s[ok]) / s[ok])
            z = np.empty(2 * int(ok.sum()))
            z[0::2] = x[ok] * r
            z[1::2] = y[ok] * r
            self._spare.extend(z.tolist())
        return out


_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def std_normal_pdf(x: float) -> float:
    """Standard normal density."""
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / _SQRT2)


def std_normal_quantile(p: float) -> float:
    """Inverse of std_normal_cdf on (0, 1).

    Bisection bracket on [-40, 40] followed by a short Newton polish;
    the result x satisfies std_normal_cdf(x) == p to ~1e-15.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile requires p in (0, 1), got {p}")
    lo, hi = -40.0, 40.0
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        if std_normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        d = std_normal_pdf(x)
        if d <= 0.0:
            break
        x -= (std_normal_cdf(x) - p) / d
    return x


@dataclass
class SimplexConfig:
    """Nelder-Mead coefficients and stopping rule.

    tol is the simplex spread (max-norm distance between vertices) below
    which the search stops; max_iter defaults to 500 * dimension.
    """

    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    tol: float = 1e-8
    max_iter: int | None = None

    def __post_init__(self):
        for name in ("reflection", "expansion", "contraction", "shrink", "tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool  # False when the iteration budget ran out


def simplex_minimize(f, x0, cfg: SimplexConfig | None = None) -> SimplexResult:
    """Minimize f by the Nelder-Mead simplex method.

    Deterministic given (f, x0, cfg); the returned value never exceeds
    f(x0). When max_iter is exhausted the best vertex so far is returned
    with converged=False.
    """
    cfg = cfg or SimplexConfig()
    x0 = np.asarray(x0, dtype=float).ravel()
    dim = x0.size
    if dim == 0:
        raise ValueError("x0 must be nonempty")
    max_iter = cfg.max_iter if cfg.max_iter is not None else 500 * dim

    verts = [x0.copy()]
    for i in range(dim):
        step = 0.05 * abs(x0[i]) if x0[i] != 0.0 else 0.1
        v = x0.copy()
        v[i] += step
        verts.append(v)
    vals = [float(f(v)) for v in verts]

    iterations = 0
    converged = False
    while iterations < max_iter:
        order = sorted(range(dim + 1), key=lambda i: (vals[i], i))
        verts = [verts[i] for i in order]
        vals = [vals[i] for i in order]

        spread = max(np.max(np.abs(v - verts[0])) for v in verts[1:])
        if spread < cfg.tol:
            converged = True
            break
        iterations += 1

        centroid = np.mean(verts[:-1], axis=0)
        worst = verts[-1]
        reflected = centroid + cfg.reflection * (centroid - worst)
        f_r = float(f(reflected))

        if f_r < vals[0]:
            expanded = centroid + cfg.expansion * (reflected - centroid)
            f_e = float(f(expanded))
            if f_e < f_r:
                verts[-1], vals[-1] = expanded, f_e
            else:
                verts[-1], vals[-1] = reflected, f_r
            continue
        if f_r < vals[-2]:
            verts[-1], vals[-1] = reflected, f_r
            continue

        if f_r < vals[-1]:  # outside contraction
            contracted = centroid + cfg.contraction * (reflected - centroid)
            f_c = float(f(contracted))
            if f_c <= f_r:
                verts[-1], vals[-1] = contracted, f_c
                continue
        else:  # inside contraction
            contracted = centroid - cfg.contraction * (centroid - worst)
            f_c = float(f(contracted))
            if f_c < vals[-1]:
                verts[-1], vals[-1] = contracted, f_c
                continue

        for i in range(1, dim + 1):  # shrink toward the best vertex
            verts[i] = verts[0] + cfg.shrink * (verts[i] - verts[0])
            vals[i] = float(f(verts[i]))

    best = int(np.argmin(vals))
    return SimplexResult(
        x=verts[best].copy(), fun=vals[best], iterations=iterations, converged=converged
    )


def symmetric_eigendecompose(matrix, sweep_history: list | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric real matrix by cyclic Jacobi sweeps.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted in
    descending order and eigenvectors as orthonormal columns, so that
    V @ diag(w) @ V.T reconstructs the (symmetrized) input. The input is
    symmetrized as (S + S.T) / 2 before sweeping; sweeps stop once the
    off-diagonal Frobenius norm falls below 1e-12 times the matrix norm.
    When sweep_history is a list, the off-diagonal norm before each sweep
    is appended to it.
    """
    s = np.asarray(matrix, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("input must be a square matrix")
    n = s.shape[0]
    a = 0.5 * (s + s.T)
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return a.diagonal().copy(), v

    def off_norm(m):
        return math.sqrt(max(np.sum(m * m) - np.sum(np.diagonal(m) ** 2), 0.0))

    for _ in range(60):  # sweeps; quadratic convergence makes this ample
        current = off_norm(a)
        if sweep_history is not None:
            sweep_history.append(current)
        if current < 1e-12 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - sn * col_q
                a[:, q] = sn * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - sn * row_q
                a[q, :] = sn * row_p + c * row_q
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - sn * vec_q
                v[:, q] = sn * vec_p + c * vec_q

    eigenvalues = a.diagonal().copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]
