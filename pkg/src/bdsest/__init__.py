"""Estimation of Bell diagonal two-qubit states from simulated measurement data."""
from .analytics import (
    avg_risk_bsm_bme,
    avg_risk_bsm_di,
    avg_risk_parity_ordered_di,
    avg_risk_parity_random_di,
    bme_parity_pointwise,
    bme_parity_upper_bound,
    fidelity_bounds,
    g_hyp,
    hs_loss,
    infidelity_loss,
    qcrb_bound,
    risk_bsm_bme,
    risk_bsm_di,
    risk_parity_ordered_di,
    risk_parity_random_di,
)
from .distinguish import DiscriminationResult, helstrom_bound, is_locc_optimal, optimal_povm
from .estimators import Estimate, PriorSpec, StateGrid, bme, build_grid, direct_inversion, mle, posterior_covariance
from .harness import ExperimentConfig, RiskCurve, analytic_curve, emit_report, run_comparison, run_experiment
from .measurements import (
    MeasurementPlan,
    OutcomeRecord,
    ProjectiveBasis,
    basis_probs,
    bell_basis,
    haar_basis,
    mub_bases,
    parity_check_probs,
    pauli_bases,
    sample_outcomes,
)
from .states import (
    BellDiagonalState,
    apply_pauli_channel,
    density_matrix,
    is_physical,
    is_separable,
    t_to_theta,
    theta_to_t,
    twirl,
)

__version__ = "0.1.0"
