"""Exact moduli, Hoelder-cadlag seminorms and Besov-type functionals of step paths.

Set ``CADLAGITY_NO_NUMBA=1`` before import to run the pure-numpy kernels.
"""
from ._kernels import BACKEND
from .errors import CadlagError
from .integral_norms import (
    BesovReport,
    besov_report,
    endpoint_besov,
    endpoint_besov_power,
    lp_sup_norms,
    remark22_product_bound,
    triple_besov,
    triple_besov_power,
)
from .moduli import (
    SeminormReport,
    Window,
    delta_triple,
    delta_window,
    endpoint_seminorms,
    hat_seminorm,
    holder_seminorm,
    n_eta,
    n_window,
    seminorm_report,
    tilde_seminorm,
)
from .paths import (
    AT,
    LEFT,
    CadlagStep,
    FunctionalParams,
    SidedTime,
    constant_path,
    dist,
    eval_path,
    make_step_path,
    path_from_json,
)

__version__ = "0.1.0"

__all__ = [
    "AT",
    "BACKEND",
    "BesovReport",
    "CadlagError",
    "CadlagStep",
    "FunctionalParams",
    "LEFT",
    "SeminormReport",
    "SidedTime",
    "Window",
    "besov_report",
    "constant_path",
    "delta_triple",
    "delta_window",
    "dist",
    "endpoint_besov",
    "endpoint_besov_power",
    "endpoint_seminorms",
    "eval_path",
    "hat_seminorm",
    "holder_seminorm",
    "lp_sup_norms",
    "make_step_path",
    "n_eta",
    "n_window",
    "path_from_json",
    "remark22_product_bound",
    "seminorm_report",
    "tilde_seminorm",
    "triple_besov",
    "triple_besov_power",
]
