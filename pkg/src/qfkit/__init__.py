"""Hybrid quantum-classical finance toolkit.

Four benchmark pipelines on a dense statevector simulator, each paired
with its classical baseline: QAOA portfolio selection, amplitude-readout
Asian-option pricing, grid-oracle VaR/CVaR with stress propagation, and
quantum-kernel / variational classification.
"""

__version__ = "0.1.0"

from .numerics import (
    RandomStream,
    SimplexConfig,
    simplex_minimize,
    std_normal_cdf,
    std_normal_quantile,
    symmetric_eigendecompose,
)
from .statevector import (
    PreparationOracle,
    QuantumRegister,
    ancilla_one_probability,
    apply_diagonal_phase,
    apply_mixer_rotation,
    attach_payoff_ancilla,
    grover_power,
    overlap,
    prepare_from_probabilities,
    sample_counts,
    uniform_superposition,
)
from .portfolio import (
    AssetUniverse,
    IsingModel,
    QuboProblem,
    build_cardinality_qubo,
    enumerate_feasible,
    estimate_annualized_moments,
    qubo_energy,
    qubo_to_ising,
)
from .qaoa import QaoaParams, QaoaResult, cost_diagonal, optimize_qaoa, qaoa_expectation, qaoa_state, sample_and_rank
from .pricing import (
    AmplitudeEstimate,
    GbmSpec,
    PayoffHistogram,
    build_payoff_histogram,
    exact_amplitude_price,
    mc_price_asian,
    mlqae_estimate,
    price_from_amplitude,
    shot_amplitude_price,
)
from .risk import (
    FactorModel,
    LossGrid,
    LossSample,
    RiskReport,
    StressSystem,
    build_loss_grid,
    compute_losses,
    cvar_from_tail_amplitudes,
    fit_var1,
    grid_risk_measures,
    grover_tail_boost,
    historical_var_cvar,
    parametric_normal_var_cvar,
    pca_loading,
    portfolio_losses,
    simulate_correlated_returns,
    stress_propagate_classical,
    stress_propagate_quantum_inspired,
)
from .qml import (
    FeatureMapSpec,
    GramMatrix,
    QnnModel,
    SvmModel,
    classification_metrics,
    gram_matrix,
    parameter_shift_gradient,
    qnn_forward,
    qnn_train,
    quantum_feature_state,
    quantum_kernel,
    svm_predict,
    svm_train,
)
from .harness import RunConfig, forward_fill_align, load_price_csv, run_case, write_report
