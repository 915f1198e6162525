"""Entanglement and assistance measures for small multipartite states, with
numerical checks of power-law polygamy inequalities."""

from ._backend import BACKEND
from .assistance import (
    concurrence_of_assistance,
    eoa,
    l_operator,
    l_operator_pairs,
    screnoa,
    sub_ca,
    sub_ca_roof,
    tau_a,
    tau_a_gs_analytic,
)
from .errors import ArgumentError, DomainError, NumericError, PolygamyLabError
from .linalg import (
    DensityOperator,
    StateVector,
    SubsystemLayout,
    haar_random_pure,
    hermitian_eigensystem,
    partial_trace,
    partial_transpose,
    psd_sqrt,
    reduced_state,
    tensor_product,
)
from .measures import (
    Bipartition,
    concurrence_pure,
    concurrence_sq_from_amplitudes,
    entanglement_entropy,
    negativity,
    negativity_pure,
    scren_pure,
    wootters_concurrence_2q,
)
from .polygamy import (
    MeasureProfile,
    OrderingClassification,
    PolygamyReport,
    check_eoa_multi,
    check_screnoa_multi,
    check_tau_multi,
    check_tau_sum,
    check_tau_tripartite,
    ckw_check,
    classify_ordering,
    lemma1_gap,
    report_from_profile,
)
from .roof import Ensemble, PureFunctional, RoofConfig, RoofResult, roof_measure, roof_optimize, scren
from .states import GenSchmidtParams, gen_schmidt_3q, ghz_state, random_mixed, w_state

__version__ = "0.1.0"
