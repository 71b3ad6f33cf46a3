"""Logarithmic and Grunsky coefficients of univalent functions: computation and audits."""
from .bounds import chain_slacks, maximize, phi, psi
from .coefficients import (
    gamma_from_taylor,
    grunsky_table,
    log_coefficients,
    odd_grunsky,
    quadratic_form_slack,
    verify_eq7,
    verify_gamma_omega,
)
from .scan import CorpusSpec, build_corpus, report, scan
from .series import Series, ser_compose, ser_exp, ser_log, ser_mul, ser_sqrt
from .zoo import FamilySpec, Transform, automorph, dilate, realize, rotate, sqrt_transform

__version__ = "0.1.0"
