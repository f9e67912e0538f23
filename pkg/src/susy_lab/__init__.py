"""Dual supersymmetric partner Hamiltonians built from an even kernel k(x)."""
from .coupling import BFamily, CouplingParam, antisymmetry_report, b_eval, g_from_s, s_from_g
from .errors import (
    ConvergenceError,
    DegenerateCouplingError,
    DomainError,
    SingularProfileError,
    SusyLabError,
    UsageError,
)
from .sl_engine import (
    ConstantSquare,
    EvenPolynomial,
    EvenTabulated,
    Grid,
    HarmonicSquare,
    LogDerivProfile,
    NegConstantSquare,
    harmonic_series_y,
    log_y_from_u,
    riccati_logderiv,
    series_coeff_c,
)
from .susy_core import (
    PotentialPair,
    Superpotential,
    build_pair,
    duality_residual,
    harmonic_sip_pair,
    inverse_square_family,
    partner_pair,
    superpotential,
    susy_W_condition,
)
