"""Case orchestration: CSV ingestion, alignment, runs, and reports.

Each case reads snapshot-style CSV inputs (synthesised on demand when
absent), drives the toolkit modules, and emits a CSV report plus a JSON
run manifest. Identical configurations produce byte-identical outputs.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import datasets, pricing, qml, risk
from .numerics import RandomStream, symmetric_eigendecompose
from .portfolio import build_cardinality_qubo, enumerate_feasible, estimate_annualized_moments, qubo_energy
from .qaoa import cost_diagonal, optimize_qaoa

__all__ = [
    "ConfigError",
    "DataError",
    "NumericalError",
    "PriceSeries",
    "RunConfig",
    "load_price_csv",
    "load_value_csv",
    "forward_fill_align",
    "run_case",
    "write_report",
    "CASES",
]


class ConfigError(Exception):
    """Bad or unknown configuration (exit code 2)."""


class DataError(Exception):
    """Missing or malformed input data (exit code 3)."""


class NumericalError(Exception):
    """A pipeline self-check failed (exit code 4)."""


@dataclass
class PriceSeries:
    ticker: str
    dates: list[str]
    closes: np.ndarray

    def __len__(self) -> int:
        return len(self.dates)


PORTFOLIO_TICKERS = ["AAPL", "AMD", "AMGN", "COST", "CSX", "GOOGL"]
RISK_TICKERS = ["AAPL", "MSFT", "AMZN", "GOOGL"]

CASE_DEFAULTS: dict[str, dict] = {
    "portfolio": {
        "risk_aversion": 8.0,
        "penalty": 15.0,
        "cardinality": 3,
        "depth": 2,
        "restarts": 8,
        "shots": 4096,
    },
    "price": {
        "spot": 100.0,
        "strike": 100.0,
        "rate": 0.05,
        "volatility": 0.2,
        "maturity": 1.0,
        "monitorings": 12,
        "paths": 100_000,
        "bins_exponent": 7,
        "shots": 100_000,
        "schedule": [0, 1, 2, 4, 8],
        "shots_per_level": 2000,
    },
    "risk": {
        "alpha": 0.95,
        "bins": 128,
        "scenarios": 200_000,
        "stress_factors": 3,
        "shock_sigmas": -3.0,
        "horizon": 5,
        "tau": 0.3,
    },
    "qml-a": {
        "svm_c": 1.0,
        "epochs": 40,
        "learning_rate": 0.2,
        "train_fraction": 0.7,
        "n_qubits": 6,
        "qnn_layers": 3,
        "kernel_cap": 400,
    },
    "qml-b": {
        "svm_c": 1.0,
        "epochs": 40,
        "learning_rate": 0.2,
        "train_fraction": 0.7,
        "n_qubits": 6,
        "qnn_layers": 3,
        "kernel_cap": 400,
        "vol_window": 20,
        "vol_quantile": 0.70,
    },
}
CASES = tuple(CASE_DEFAULTS)
_GLOBAL_KEYS = {"case", "seed", "data_dir"}

REPORT_HEADERS = {
    "portfolio": ["rank", "selection", "objective", "return", "volatility", "method"],
    "price": ["method", "price", "a_hat", "oracle_calls", "stderr"],
    "risk": ["method", "alpha", "var", "cvar"],
    "qml": ["family", "model", "auc", "accuracy", "balanced_accuracy", "f1"],
}


@dataclass
class RunConfig:
    """One fully resolved case run; unknown config keys are rejected."""

    case: str
    seed: int = 7
    data_dir: str = "data"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.case not in CASE_DEFAULTS:
            raise ConfigError(f"unknown case {self.case!r}; expected one of {sorted(CASE_DEFAULTS)}")
        defaults = CASE_DEFAULTS[self.case]
        unknown = set(self.params) - set(defaults)
        if unknown:
            raise ConfigError(f"unknown parameter(s) for case {self.case!r}: {sorted(unknown)}")
        merged = dict(defaults)
        merged.update(self.params)
        self.params = merged
        self.seed = int(self.seed)

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if "case" not in raw:
            raise ConfigError("config must name a case")
        case = raw["case"]
        if case not in CASE_DEFAULTS:
            raise ConfigError(f"unknown case {case!r}; expected one of {sorted(CASE_DEFAULTS)}")
        unknown = set(raw) - _GLOBAL_KEYS - set(CASE_DEFAULTS[case])
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        params = {k: v for k, v in raw.items() if k not in _GLOBAL_KEYS}
        return cls(case=case, seed=raw.get("seed", 7), data_dir=raw.get("data_dir", "data"), params=params)

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config must be a flat JSON object")
        return cls.from_dict(raw)


@dataclass
class ReportBundle:
    case: str
    reports: dict  # name -> (header, rows)
    manifest: dict


def load_price_csv(path, ticker: str | None = None, column_map: dict | None = None) -> PriceSeries:
    """Parse a `date,close` CSV into a validated series.

    column_map renames source headers (e.g. {"Adj Close": "close"}) before
    the schema check. Dates must be unique and strictly ascending, prices
    strictly positive.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"price file not found: {path}")
    column_map = column_map or {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise DataError(f"{path.name}: empty file")
        fields = [column_map.get(name, name).strip().lower() for name in reader.fieldnames]
        if "date" not in fields or "close" not in fields:
            raise DataError(f"{path.name}: header must provide date and close columns")
        date_key = reader.fieldnames[fields.index("date")]
        close_key = reader.fieldnames[fields.index("close")]
        dates: list[str] = []
        closes: list[float] = []
        for row in reader:
            date = (row[date_key] or "").strip()
            try:
                close = float(row[close_key])
            except (TypeError, ValueError) as exc:
                raise DataError(f"{path.name}: bad close value on {date!r}") from exc
            if close <= 0:
                raise DataError(f"{path.name}: nonpositive price on {date}")
            if dates and date <= dates[-1]:
                raise DataError(f"{path.name}: dates must be unique and ascending near {date}")
            dates.append(date)
            closes.append(close)
    if not dates:
        raise DataError(f"{path.name}: no data rows")
    return PriceSeries(ticker=ticker or path.stem.split("_")[0], dates=dates, closes=np.asarray(closes))


def load_value_csv(path) -> tuple[list[str], np.ndarray]:
    """Parse a sparse `date,value` CSV (macro releases)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"value file not found: {path}")
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        fields = [f.strip().lower() for f in (reader.fieldnames or [])]
        if "date" not in fields or "value" not in fields:
            raise DataError(f"{path.name}: header must provide date and value columns")
        date_key = reader.fieldnames[fields.index("date")]
        value_key = reader.fieldnames[fields.index("value")]
        dates, values = [], []
        for row in reader:
            date = (row[date_key] or "").strip()
            if dates and date <= dates[-1]:
                raise DataError(f"{path.name}: dates must be unique and ascending near {date}")
            dates.append(date)
            values.append(float(row[value_key]))
    if not dates:
        raise DataError(f"{path.name}: no data rows")
    return dates, np.asarray(values)


def forward_fill_align(market: PriceSeries, macros: dict) -> tuple[list[str], np.ndarray, dict]:
    """Carry each macro series forward onto the market dates.

    Every market date receives the latest macro value released at or
    before it; leading market dates with no release yet are dropped.
    Returns the kept dates, the matching closes, and one filled column
    per macro series.
    """
    start = 0
    for name, (dates, _) in macros.items():
        if not dates:
            raise DataError(f"macro series {name} is empty")
        first = dates[0]
        while start < len(market.dates) and market.dates[start] < first:
            start += 1
    kept = market.dates[start:]
    if not kept:
        raise DataError("no overlap between market dates and macro releases")
    columns = {}
    for name, (dates, values) in macros.items():
        filled = np.empty(len(kept))
        j = -1
        for i, day in enumerate(kept):
            while j + 1 < len(dates) and dates[j + 1] <= day:
                j += 1
            filled[i] = values[j]
        columns[name] = filled
    return kept, market.closes[start:].copy(), columns


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_bundled(data_dir, names: list[str]) -> tuple[dict[str, PriceSeries], dict[str, str]]:
    paths = datasets.ensure_bundled_data(data_dir)
    series = {}
    digests = {}
    for name in names:
        path = paths[name]
        series[name] = load_price_csv(path, ticker=name)
        digests[path.name] = _sha256(path)
    return series, digests


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.6g}"


def _align_series(series: dict[str, PriceSeries]) -> dict[str, np.ndarray]:
    dates = None
    for s in series.values():
        dates = set(s.dates) if dates is None else dates & set(s.dates)
    if not dates:
        raise DataError("price series share no dates")
    keep = sorted(dates)
    closes = {}
    for name, s in series.items():
        index = {d: i for i, d in enumerate(s.dates)}
        closes[name] = s.closes[[index[d] for d in keep]]
    return closes


def _run_portfolio(cfg: RunConfig) -> ReportBundle:
    p = cfg.params
    series, digests = _load_bundled(cfg.data_dir, PORTFOLIO_TICKERS)
    closes = _align_series(series)
    universe = estimate_annualized_moments({t: closes[t] for t in PORTFOLIO_TICKERS})
    k = int(p["cardinality"])
    records = enumerate_feasible(universe, p["risk_aversion"], p["penalty"], k)
    problem = build_cardinality_qubo(universe, p["risk_aversion"], p["penalty"], k)
    diag = cost_diagonal(problem)

    rng = RandomStream(cfg.seed)
    result = optimize_qaoa(diag, int(p["depth"]), int(p["restarts"]), rng, report_shots=int(p["shots"]))
    feasible = [s for s in result.top_samples if sum(s[0]) == k]
    flagged_infeasible = not feasible
    pick_bits = feasible[0][0] if feasible else result.top_samples[0][0]
    pick_objective = qubo_energy(problem, pick_bits)
    objectives = [r.penalized_objective for r in records]
    pick_rank = 1 + sum(1 for o in objectives if o < pick_objective - 1e-12)
    weights = np.asarray(pick_bits, dtype=float) / max(sum(pick_bits), 1)

    def names(bits):
        return "/".join(t for t, b in zip(PORTFOLIO_TICKERS, bits) if b)

    rows = [
        [i + 1, names(r.selection), r.penalized_objective, r.expected_return, r.volatility, "exact"]
        for i, r in enumerate(records)
    ]
    rows.append(
        [
            pick_rank,
            names(pick_bits),
            pick_objective,
            float(universe.mu @ weights),
            float(math.sqrt(max(weights @ universe.sigma @ weights, 0.0))),
            "qaoa",
        ]
    )
    manifest = _manifest(cfg, digests)
    manifest["qaoa"] = {
        "best_expectation": result.best_expectation,
        "restarts": result.restarts_used,
        "reported_rank": pick_rank,
        "infeasible_fallback": flagged_infeasible,
    }
    manifest["conventions"] = {
        "objective": "full penalised value z'Qz + offset, including the cardinality constant",
        "weights": "equal weighting over selected assets",
        "qaoa_report": "most frequent cardinality-feasible sampled selection",
    }
    return ReportBundle(case="portfolio", reports={"portfolio": (REPORT_HEADERS["portfolio"], rows)}, manifest=manifest)


def _run_price(cfg: RunConfig) -> ReportBundle:
    p = cfg.params
    spec = pricing.GbmSpec(
        spot=p["spot"],
        rate=p["rate"],
        volatility=p["volatility"],
        maturity=p["maturity"],
        monitorings=int(p["monitorings"]),
        strike=p["strike"],
    )
    rng = RandomStream(cfg.seed)
    averages = pricing.simulate_path_averages(spec, int(p["paths"]), rng.substream(0))
    mc_price, stderr = pricing.discounted_mean_payoff(averages, spec)
    histogram = pricing.build_payoff_histogram(averages, spec, int(p["bins_exponent"]))
    exact_price, exact_est = pricing.exact_amplitude_price(histogram, spec)

    half_width = 0.5 * float(np.diff(histogram.centers).max(initial=0.0))
    bias_bound = spec.discount * half_width + 1e-12
    if abs(exact_price - mc_price) > bias_bound:
        raise NumericalError(
            f"amplitude price deviates from the Monte Carlo mean by more than "
            f"one discounted half bin width ({abs(exact_price - mc_price):.3g} > {bias_bound:.3g})"
        )

    shot_price, shot_est = pricing.shot_amplitude_price(histogram, spec, int(p["shots"]), rng.substream(1))
    ml_est = pricing.mlqae_estimate(
        histogram, list(p["schedule"]), int(p["shots_per_level"]), rng.substream(2)
    )
    ml_price = pricing.price_from_amplitude(ml_est.a_hat, histogram.bound, spec.rate, spec.maturity)

    rows = [
        ["monte_carlo", mc_price, None, int(p["paths"]), stderr],
        ["amplitude_exact", exact_price, exact_est.a_hat, exact_est.total_oracle_calls, None],
        ["amplitude_shots", shot_price, shot_est.a_hat, shot_est.total_oracle_calls, None],
        ["mlqae", ml_price, ml_est.a_hat, ml_est.total_oracle_calls, None],
    ]
    manifest = _manifest(cfg, {})
    manifest["pricing"] = {
        "payoff_bound": histogram.bound,
        "bins": int(2 ** int(p["bins_exponent"])),
        "discretisation_bias_bound": bias_bound,
    }
    return ReportBundle(case="price", reports={"price": (REPORT_HEADERS["price"], rows)}, manifest=manifest)


def _run_risk(cfg: RunConfig) -> ReportBundle:
    p = cfg.params
    alpha = float(p["alpha"])
    series, digests = _load_bundled(cfg.data_dir, RISK_TICKERS)
    closes = _align_series(series)

    losses = risk.compute_losses(closes["AAPL"], origin="AAPL")
    historical = risk.historical_var_cvar(losses, alpha)
    parametric = risk.parametric_normal_var_cvar(
        float(losses.losses.mean()), float(losses.losses.std(ddof=1)), alpha
    )
    grid = risk.build_loss_grid(losses, int(p["bins"]))
    grid_report = risk.grid_risk_measures(grid, alpha)
    amplitude_cvar = risk.cvar_from_tail_amplitudes(grid, grid_report.var)
    if abs(amplitude_cvar - grid_report.cvar) > 1e-12:
        raise NumericalError("amplitude-form CVaR does not match the grid tail mean")

    returns = np.column_stack([np.diff(np.log(closes[t])) for t in RISK_TICKERS])
    weights = np.full(len(RISK_TICKERS), 1.0 / len(RISK_TICKERS))
    actual_losses = risk.portfolio_losses(returns, weights)
    portfolio_hist = risk.historical_var_cvar(actual_losses, alpha)

    mu = returns.mean(axis=0)
    sigma = np.cov(returns, rowvar=False, ddof=1)
    model = risk.pca_loading(sigma, mu)
    rng = RandomStream(cfg.seed)
    simulated = risk.simulate_correlated_returns(model, int(p["scenarios"]), rng.substream(0))
    scenario_losses = risk.portfolio_losses(simulated, weights)
    scenario_report = risk.historical_var_cvar(scenario_losses, alpha)

    # Stress propagation on the leading principal-component factors.
    n_factors = int(p["stress_factors"])
    _, vectors = symmetric_eigendecompose(sigma)
    factors = (returns - mu) @ vectors[:, :n_factors]
    system = risk.fit_var1(factors)
    shock = np.zeros(n_factors)
    shock[0] = float(p["shock_sigmas"]) * float(factors[:, 0].std(ddof=1))
    classical = risk.stress_propagate_classical(system, factors[-1], shock, int(p["horizon"]))
    quantum_inspired = risk.stress_propagate_quantum_inspired(system, factors[-1] + shock, float(p["tau"]))

    rows = [
        ["historical", alpha, historical.var, historical.cvar],
        ["parametric", alpha, parametric.var, parametric.cvar],
        ["grid", alpha, grid_report.var, grid_report.cvar],
        ["historical_portfolio", alpha, portfolio_hist.var, portfolio_hist.cvar],
        ["pca_scenarios", alpha, scenario_report.var, scenario_report.cvar],
    ]
    manifest = _manifest(cfg, digests)
    manifest["stress"] = {
        "factors": n_factors,
        "shock": [float(v) for v in shock],
        "horizon": int(p["horizon"]),
        "tau": float(p["tau"]),
        "classical": [float(v) for v in classical],
        "quantum_inspired": [float(v) for v in quantum_inspired],
    }
    manifest["conventions"] = {
        "losses": "negative log returns",
        "tail": "inclusive at the VaR level",
        "stress_shock": "shock_sigmas standard deviations on the leading factor",
    }
    return ReportBundle(case="risk", reports={"risk": (REPORT_HEADERS["risk"], rows)}, manifest=manifest)


def _chronological_split(n_rows: int, train_fraction: float) -> int:
    split = int(n_rows * train_fraction)
    if split < 1 or split >= n_rows:
        raise DataError("chronological split leaves an empty train or test window")
    return split


def _qml_model_rows(cfg: RunConfig, features, labels, dates) -> tuple[list, dict]:
    """Shared model battery: logistic reference, kernel SVM, variational net."""
    p = cfg.params
    split = _chronological_split(len(labels), float(p["train_fraction"]))
    if not (max(dates[:split]) < min(dates[split:])):
        raise DataError("train dates must all precede test dates")
    x_train, x_test = features[:split], features[split:]
    y_train, y_test = labels[:split], labels[split:]
    if len(set(y_train)) < 2 or len(set(y_test)) < 2:
        raise DataError("both classes must appear in each window")

    # Classical reference on z-scored features (train statistics only).
    mean = x_train.mean(axis=0)
    std = x_train.std(axis=0, ddof=0)
    std = np.where(std > 0, std, 1.0)
    w, b = qml.logistic_regression_train((x_train - mean) / std, y_train)
    lr_scores = qml.logistic_regression_predict((x_test - mean) / std, w, b)
    lr_metrics = qml.classification_metrics(y_test, lr_scores)

    spec = qml.FeatureMapSpec(n_qubits=int(p["n_qubits"])).fit_scaling(x_train)
    angles_train = spec.scale(x_train)
    angles_test = spec.scale(x_test)

    cap = int(p["kernel_cap"])
    kernel_train = angles_train[-cap:]
    kernel_labels = y_train[-cap:]
    gram = qml.gram_matrix(kernel_train, spec, max_rows=cap)
    svm = qml.svm_train(gram, 2 * kernel_labels - 1, float(p["svm_c"]))
    train_states = np.array([qml.quantum_feature_state(a, spec).amplitudes for a in kernel_train])
    test_states = np.array([qml.quantum_feature_state(a, spec).amplitudes for a in angles_test])
    cross = np.abs(test_states @ train_states.conj().T) ** 2
    svm_scores = np.array([qml.svm_predict(svm, row)[0] for row in cross])
    svm_metrics = qml.classification_metrics(y_test, qml._sigmoid(svm_scores))

    rng = RandomStream(cfg.seed)
    qnn = qml.qnn_train(
        angles_train,
        y_train,
        spec,
        epochs=int(p["epochs"]),
        learning_rate=float(p["learning_rate"]),
        rng=rng.substream(0),
        layers=int(p["qnn_layers"]),
    )
    qnn_scores = np.array([qml.qnn_forward(a, qnn, spec)[1] for a in angles_test])
    qnn_metrics = qml.classification_metrics(y_test, qnn_scores)

    def row(family, model, m):
        return [family, model, m.auc, m.accuracy, m.balanced_accuracy, m.f1]

    rows = [
        row("linear", "logistic_regression", lr_metrics),
        row("kernel", "quantum_svm", svm_metrics),
        row("nonlinear", "quantum_nn", qnn_metrics),
    ]
    info = {
        "train_rows": int(split),
        "test_rows": int(len(labels) - split),
        "kernel_rows": int(len(kernel_train)),
        "train_end": dates[split - 1],
        "test_start": dates[split],
    }
    return rows, info


def _run_qml_a(cfg: RunConfig) -> ReportBundle:
    series, digests = _load_bundled(cfg.data_dir, ["SPY"])
    spy = series["SPY"]
    features, labels = qml.direction_features(spy.closes)
    # Feature rows start once every lookback window is full and end one
    # day before the last close; align the dates accordingly.
    n = len(labels)
    dates = spy.dates[len(spy.dates) - 1 - n : len(spy.dates) - 1]
    rows, info = _qml_model_rows(cfg, features, labels, dates)
    manifest = _manifest(cfg, digests)
    manifest["protocol"] = {"target": "next-day direction", "split": info}
    return ReportBundle(case="qml-a", reports={"qml": (REPORT_HEADERS["qml"], rows)}, manifest=manifest)


def _run_qml_b(cfg: RunConfig) -> ReportBundle:
    p = cfg.params
    series, digests = _load_bundled(cfg.data_dir, ["SPY"])
    spy = series["SPY"]
    macro_paths = datasets.ensure_bundled_data(cfg.data_dir)
    macros = {}
    for name in datasets.MACRO_SERIES:
        path = macro_paths[name]
        macros[name] = load_value_csv(path)
        digests[path.name] = _sha256(path)

    dates, closes, columns = forward_fill_align(spy, macros)
    returns = np.diff(np.log(closes))
    window = int(p["vol_window"])
    vol = qml.realized_volatility(returns, window)
    running_max = np.maximum.accumulate(closes[1:])
    drawdown = closes[1:] / running_max - 1.0
    fed = columns["FEDFUNDS"][1:]
    cpi_growth = np.concatenate([[0.0], np.diff(np.log(columns["CPIAUCSL"]))])[1:]
    ind_growth = np.concatenate([[0.0], np.diff(np.log(columns["INDPRO"]))])[1:]

    keep = ~np.isnan(vol)
    features = np.column_stack([vol, drawdown, fed, cpi_growth, ind_growth])[keep]
    vol_kept = vol[keep]
    kept_dates = [d for d, k in zip(dates[1:], keep) if k]

    split = _chronological_split(len(vol_kept), float(p["train_fraction"]))
    threshold = float(np.quantile(vol_kept[:split], float(p["vol_quantile"])))
    labels = (vol_kept >= threshold).astype(int)
    rows, info = _qml_model_rows(cfg, features, labels, kept_dates)
    manifest = _manifest(cfg, digests)
    manifest["protocol"] = {
        "target": "volatility regime",
        "vol_window": window,
        "vol_quantile": float(p["vol_quantile"]),
        "threshold": threshold,
        "split": info,
    }
    return ReportBundle(case="qml-b", reports={"qml": (REPORT_HEADERS["qml"], rows)}, manifest=manifest)


def _manifest(cfg: RunConfig, digests: dict) -> dict:
    return {
        "case": cfg.case,
        "seed": cfg.seed,
        "parameters": cfg.params,
        "toolkit_version": __version__,
        "inputs": dict(sorted(digests.items())),
    }


_RUNNERS = {
    "portfolio": _run_portfolio,
    "price": _run_price,
    "risk": _run_risk,
    "qml-a": _run_qml_a,
    "qml-b": _run_qml_b,
}


def run_case(cfg: RunConfig) -> ReportBundle:
    """Execute one configured case and return its report bundle."""
    try:
        return _RUNNERS[cfg.case](cfg)
    except (ConfigError, DataError, NumericalError):
        raise
    except ValueError as exc:
        raise NumericalError(f"case {cfg.case}: {exc}") from exc


def write_report(bundle: ReportBundle, out_dir) -> list[Path]:
    """Write the bundle's CSV tables and JSON manifest.

    Fixed column order, UTF-8, LF line endings, floats at six significant
    digits; reruns of the same bundle produce identical bytes.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in bundle.reports.items():
        path = out_dir / f"{name}_report.csv"
        lines = [",".join(header)]
        lines += [",".join(_format_value(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        written.append(path)
    manifest_path = out_dir / f"{bundle.case}_manifest.json"
    manifest_path.write_text(
        json.dumps(bundle.manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    written.append(manifest_path)
    return written
