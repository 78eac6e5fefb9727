"""Fractional linear lower bound for the negative binomial pgf of a Galton-Watson process."""

__version__ = "0.1.0"

from .pgf import (  # noqa: E402
    MobiusMap,
    Params,
    c_g,
    f_nb,
    g_nb,
    g_tilde,
    iterate_fl,
    mobius_from_params,
    phi_fl,
    phi_nb,
    y_of_x,
    zhat,
)
from .analysis import GridSpec, extinction_probability, scan_inequality, survival_bounds  # noqa: E402
from .coeffs import cgt_closed, oracle_expand_symbolic, oracle_expand_summation, verify_all  # noqa: E402
