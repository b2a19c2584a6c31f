"""Spectral dynamics of the free Jacobi process.

Library and CLI computing and cross-validating the explicit formulas of the
equal-rank free Jacobi process: moment hierarchies from the governing PDEs,
the characteristic-flow representation of the moment generating function,
phase-transition analysis of the rescaled deformed exponential map,
saddle-point asymptotics of the deformed chi-transform's inverse
coefficients, static and dynamical pushforward identities, and finite-size
random-matrix cross-checks.
"""

from .series import TruncatedSeries
from .fubm import (
    FubmMoments,
    cut_plane_to_disc,
    disc_to_cut_plane,
    fubm_moment_exact,
    fubm_moments,
    herglotz,
    herglotz_inverse,
)
from .hierarchy import (
    InvariantViolation,
    MomentTrajectory,
    cauchy_from_moments,
    delta_one_moments,
    equal_rank_rhs,
    half_rank_rhs,
    hankel_matrices,
    integrate,
    pde_residual,
    stationary_moments,
)
from .flow import (
    ContinuationError,
    FlowPoint,
    characteristic_endpoint,
    const_a,
    const_b,
    const_c,
    flow_point,
    integrate_characteristics,
    local_inverse,
    mgf_two_forms,
    probe_radius,
    riccati_residual,
    v_map,
)
from .vmap import (
    BracketError,
    PhaseReport,
    alpha_at_time,
    critical_points,
    phase_report,
    remark_probe,
    threshold_time,
    transition_times,
    v_tilde,
)
from .saddle import (
    SaddleReport,
    admissibility_probe,
    chi,
    coefficient_asymptotics,
    coefficient_table,
    contour_coefficient,
    contour_coefficient_log,
    deformed_s_transform,
    inverse_coefficients,
    phi_real,
    phi_second,
    saddle_report,
)
from .wachter import (
    MeasureSpec,
    angle_binomial_check,
    ac_integral,
    make_measure,
    moment,
    projection_sum_moment_check,
    pushforward_check,
    random_projection,
)
from .dynamic import (
    EvennessError,
    TransformGrid,
    build_transform_grid,
    evenness_proxy,
    initial_data_check,
    same_pde_residual,
    tilde_equal,
    tilde_half,
    u_pde_residual,
    v_transform,
)
from .matrixmc import (
    EnsembleConfig,
    haar_unitary,
    jacobi_matrix_moments,
    unitary_bm,
    unitary_trace_samples,
)

__version__ = "0.1.0"
