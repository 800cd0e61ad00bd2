"""Truncated-matrix workbench for rotation-continuous operators on Fock and Bergman spaces."""

__version__ = "0.1.0"

from .bands import (
    BandOperator,
    FejerWeights,
    TruncatedOperator,
    band_adjoint,
    band_compose,
    extract_diag,
    fejer_sum,
    from_band,
    operator_norm,
    rotate_conjugate,
    rotation_distance,
    to_band,
)
from .berezin import (
    GridSpec,
    berezin_operator,
    check_berezin_commutation,
    heat_transform,
    symbol_fourier_coefficient,
)
from .bergman import (
    BergmanParams,
    bergman_basis_norm,
    bergman_classify,
    bergman_radial_toeplitz,
    bergman_toeplitz,
    bergman_toeplitz_monomial,
)
from .diagnostics import (
    DiagnosticsReport,
    MetricKind,
    Thresholds,
    band_truncation_profile,
    classify,
    fejer_profile,
    metric_eval,
    modulus_of_continuity,
    synth_band,
)
from .fock import FockParams, eval_basis, eval_normalized_kernel, rescale_symbol, rotation_phases
from .quadrature import QuadratureScheme
from .symbols import RadialProfile, SymbolSpec, load_symbol
from .toeplitz import cmk_closed_form, compactness_gap, shift_matrix, toeplitz_matrix
