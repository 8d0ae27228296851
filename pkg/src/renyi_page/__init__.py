"""Average Renyi entropy of a subsystem of a Haar-random bipartite pure state."""

from .errors import ConvergenceError, DomainError, NotFoundError, NumericError
from .exact_small import FArgs, double_int_closed, f_mn, renyi2_exact_2xn, renyi2_tilde_2xn
from .moments import (
    MomentResult,
    RenyiOrder,
    SystemDims,
    info_alpha,
    page_von_neumann,
    renyi_asymptotic,
    renyi_tilde,
    z_alpha_asymptotic,
    z_alpha_int,
    z_alpha_real,
    z_inf_leading,
)
from .specfun import LogValue

__all__ = [
    "ConvergenceError",
    "DomainError",
    "FArgs",
    "LogValue",
    "MomentResult",
    "NotFoundError",
    "NumericError",
    "RenyiOrder",
    "SystemDims",
    "double_int_closed",
    "f_mn",
    "info_alpha",
    "page_von_neumann",
    "renyi2_exact_2xn",
    "renyi2_tilde_2xn",
    "renyi_asymptotic",
    "renyi_tilde",
    "z_alpha_asymptotic",
    "z_alpha_int",
    "z_alpha_real",
    "z_inf_leading",
]
