"""Bundled synthetic market and macro data.

Seeded GBM paths with a fixed correlation matrix stand in for the local
daily snapshots the case studies were designed around, so every case
runs out of the box. Files are written with the snapshot-style names
(TICKER_2024-01-01_2025-12-31_daily.csv); dropping real files with the
same names into the data directory replaces the synthetic ones.
"""

from __future__ import annotations

import datetime as _dt
from pathlib import Path

import numpy as np

from .numerics import RandomStream
from .risk import FactorModel, pca_loading, simulate_correlated_returns

__all__ = [
    "PRICE_TICKERS",
    "MACRO_SERIES",
    "price_file_name",
    "macro_file_name",
    "ensure_bundled_data",
]

_DATASET_SEED = 20240102  # fixed; independent of any run seed
_START = _dt.date(2024, 1, 2)
_END = _dt.date(2025, 12, 31)
_WINDOW = "2024-01-01_2025-12-31"

# Annualised drift and volatility per synthetic ticker.
PRICE_TICKERS = {
    "AAPL": (0.18, 0.22),
    "AMD": (0.10, 0.42),
    "AMGN": (0.20, 0.17),
    "COST": (0.24, 0.16),
    "CSX": (0.12, 0.24),
    "GOOGL": (0.22, 0.26),
    "MSFT": (0.16, 0.21),
    "AMZN": (0.14, 0.30),
    "SPY": (0.11, 0.15),
}
_BASE_PRICES = {
    "AAPL": 185.0,
    "AMD": 140.0,
    "AMGN": 290.0,
    "COST": 660.0,
    "CSX": 34.0,
    "GOOGL": 140.0,
    "MSFT": 370.0,
    "AMZN": 150.0,
    "SPY": 475.0,
}
MACRO_SERIES = ("FEDFUNDS", "CPIAUCSL", "INDPRO")


def price_file_name(ticker: str) -> str:
    return f"{ticker}_{_WINDOW}_daily.csv"


def macro_file_name(name: str) -> str:
    return f"{name}_{_WINDOW}.csv"


def _trading_days() -> list[str]:
    days = []
    day = _START
    while day <= _END:
        if day.weekday() < 5:
            days.append(day.isoformat())
        day += _dt.timedelta(days=1)
    return days


def _synthetic_closes(n_days: int) -> dict[str, np.ndarray]:
    tickers = list(PRICE_TICKERS)
    n = len(tickers)
    vols = np.array([PRICE_TICKERS[t][1] for t in tickers]) / np.sqrt(252.0)
    drifts = np.array([PRICE_TICKERS[t][0] for t in tickers]) / 252.0
    correlation = 0.4 + 0.6 * np.eye(n)
    sigma = correlation * np.outer(vols, vols)
    model = FactorModel(
        mu=drifts - 0.5 * vols**2,
        sigma=sigma,
        loading=pca_loading(sigma).loading,
    )
    rng = RandomStream(_DATASET_SEED)
    log_returns = simulate_correlated_returns(model, n_days - 1, rng)
    closes = {}
    for j, ticker in enumerate(tickers):
        path = _BASE_PRICES[ticker] * np.exp(np.concatenate([[0.0], np.cumsum(log_returns[:, j])]))
        closes[ticker] = np.round(path, 4)
    return closes


def _synthetic_macro(dates: list[str]) -> dict[str, list[tuple[str, float]]]:
    """Monthly series on the first trading day of each month."""
    month_starts = []
    seen = set()
    for d in dates:
        key = d[:7]
        if key not in seen:
            seen.add(key)
            month_starts.append(d)
    rng = RandomStream(_DATASET_SEED, 1)
    n = len(month_starts)
    fed = 5.33 - 0.08 * np.arange(n) + 0.02 * rng.normal(n)
    cpi = 308.0 * np.exp(0.0022 * np.arange(n) + 0.0008 * rng.normal(n))
    ind = 102.5 * np.exp(0.0006 * np.arange(n) + 0.002 * rng.normal(n))
    return {
        "FEDFUNDS": [(d, round(float(v), 2)) for d, v in zip(month_starts, fed)],
        "CPIAUCSL": [(d, round(float(v), 3)) for d, v in zip(month_starts, cpi)],
        "INDPRO": [(d, round(float(v), 4)) for d, v in zip(month_starts, ind)],
    }


def ensure_bundled_data(data_dir) -> dict[str, Path]:
    """Create any missing snapshot files under data_dir; return all paths."""
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    paths = {t: data_dir / price_file_name(t) for t in PRICE_TICKERS}
    paths.update({m: data_dir / macro_file_name(m) for m in MACRO_SERIES})
    if all(p.exists() for p in paths.values()):
        return paths

    dates = _trading_days()
    closes = _synthetic_closes(len(dates))
    for ticker, path in ((t, paths[t]) for t in PRICE_TICKERS):
        if path.exists():
            continue
        lines = ["date,close"]
        lines += [f"{d},{c}" for d, c in zip(dates, closes[ticker])]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    macro = _synthetic_macro(dates)
    for name in MACRO_SERIES:
        path = paths[name]
        if path.exists():
            continue
        lines = ["date,value"]
        lines += [f"{d},{v}" for d, v in macro[name]]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return paths
