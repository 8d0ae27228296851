"""Exact average Renyi-2 entropy of a qubit subsystem (m = alpha = 2).

The average needs the double integral

    F(a, b) = int_0^inf int_0^inf x^a y^b ln(x^2 + y^2) e^{-x-y} dx dy.

With s = x + y and t = x / s the integral factorizes: ln(x^2+y^2) =
2 ln s + ln(t^2 + (1-t)^2), s is Gamma(a+b+2) distributed and t is
Beta(a+1, b+1) distributed, so

    F(a, b) = Gamma(a+1) Gamma(b+1) [2 psi(a+b+2) + E_t ln(t^2 + (1-t)^2)].

The remaining expectation has a smooth bounded integrand and is done by
Gauss-Jacobi quadrature. A tensor Gauss-Laguerre rule in (x, y) would also
work for large exponents, but at small ones the log singularity at the origin
limits it to algebraic convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .specfun import EULER_GAMMA, digamma, gauss_beta_rule, log_gamma

F_REL_TOL = 1e-8


@dataclass(frozen=True)
class FArgs:
    mx: int
    ny: int

    def __post_init__(self):
        if self.mx < 0 or self.ny < 0 or self.mx != int(self.mx) or self.ny != int(self.ny):
            raise DomainError(f"F exponents must be nonnegative integers, got ({self.mx}, {self.ny})")


def double_int_closed(p: float, q: float) -> float:
    """Closed form of int int ln(x^2+y^2) e^{-px-qy} dx dy over the positive quadrant."""
    if not (p > 0 and q > 0):
        raise DomainError(f"p and q must be positive, got ({p!r}, {q!r})")
    inner = (2 * p * p * math.log(q) + 2 * q * q * math.log(p) - math.pi * p * q) / (2 * (p * p + q * q))
    return -2.0 / (p * q) * (EULER_GAMMA + inner)


def _mean_log_angle(a: int, b: int, rule_order: int) -> float:
    t, w = gauss_beta_rule(rule_order, a, b)
    return float(np.dot(w, np.log(t * t + (1.0 - t) ** 2)))


def _mean_log_radius(a: int, b: int, rule_order: int) -> float:
    """E[ln(X^2+Y^2)] for independent X ~ Gamma(a+1), Y ~ Gamma(b+1).

    Convergence is certified by doubling the rule order up to twice.
    """
    base = 2.0 * digamma(a + b + 2.0)
    prev = _mean_log_angle(a, b, rule_order)
    estimates = [base + prev]
    order = rule_order
    for _ in range(2):
        order *= 2
        cur = _mean_log_angle(a, b, order)
        estimates.append(base + cur)
        if abs(estimates[-1] - estimates[-2]) <= F_REL_TOL * max(abs(estimates[-1]), 1.0):
            return estimates[-1]
    raise ConvergenceError(
        f"F({a}, {b}) did not converge to {F_REL_TOL:g} by rule order {order}",
        estimates,
    )


def f_mn(mx, ny: int | None = None, rule_order: int = 64) -> float:
    """F(mx, ny); accepts an :class:`FArgs` or two integers."""
    args = mx if isinstance(mx, FArgs) else FArgs(int(mx), int(ny))
    a, b = args.mx, args.ny
    scale = math.exp(log_gamma(a + 1.0) + log_gamma(b + 1.0))
    return scale * _mean_log_radius(a, b, rule_order)


def renyi2_exact_2xn(n: int, rule_order: int = 64) -> float:
    """Exact <S_2> of a qubit in a 2 x n random pure state.

    2 psi(2n) - (n-1) [F(n, n-2) - F(n-1, n-1)] / Gamma(n)^2, where each F is
    divided by Gamma(n)^2 analytically first:
    F(n, n-2)/Gamma(n)^2 = n/(n-1) E_{n,n-2} and F(n-1, n-1)/Gamma(n)^2 = E_{n-1,n-1}.
    """
    if n != int(n) or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    e_skew = _mean_log_radius(n, n - 2, rule_order)
    e_even = _mean_log_radius(n - 1, n - 1, rule_order)
    return 2.0 * digamma(2.0 * n) - (n * e_skew - (n - 1) * e_even)


def renyi2_tilde_2xn(n: int) -> float:
    """Approximate Renyi-2 entropy -ln[(n+2)/(2n+1)] of a qubit subsystem."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    return -math.log((n + 2.0) / (2.0 * n + 1.0))
