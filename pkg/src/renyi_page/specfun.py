"""Scalar special functions and quadrature primitives.

Everything downstream works with logarithms of gamma-function ratios, so the
central pieces here are :func:`log_gamma_ratio` (accurate ln Gamma(x)/Gamma(y)
even when both arguments are ~1e6) and :class:`LogValue` together with
:func:`log_sum_accumulate` for overflow-proof sums of nonnegative terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import linalg, special

from .errors import DomainError

EULER_GAMMA = 0.5772156649015329

# Tolerance used to decide that a real argument sits on a pole of Gamma.
POLE_TOL = 1e-9

# Stirling-series threshold for log_gamma_ratio; at x >= 15 the series below is
# truncated after the x^-11 term with remainder < 1e-17.
_STIRLING_MIN = 15.0
_STIRLING_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
)


@dataclass(frozen=True)
class LogValue:
    """A nonnegative number stored as its natural logarithm.

    ``is_zero`` marks an exact zero, in which case ``log_magnitude`` carries no
    meaning (it is kept at ``-inf`` by the constructors here).
    """

    log_magnitude: float
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(-math.inf, True)

    @classmethod
    def from_value(cls, x: float) -> "LogValue":
        if x < 0:
            raise DomainError(f"LogValue holds nonnegative numbers, got {x!r}")
        if x == 0:
            return cls.zero()
        return cls(math.log(x))

    @classmethod
    def from_log(cls, log_x: float) -> "LogValue":
        if log_x == -math.inf:
            return cls.zero()
        return cls(float(log_x))

    def value(self) -> float:
        """Return the number itself; may underflow to 0.0 or overflow to inf."""
        if self.is_zero:
            return 0.0
        try:
            return math.exp(self.log_magnitude)
        except OverflowError:
            return math.inf

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero or other.is_zero:
            return LogValue.zero()
        return LogValue(self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogValue")
        if self.is_zero:
            return LogValue.zero()
        return LogValue(self.log_magnitude - other.log_magnitude)


def _check_positive(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"{name} must be > 0, got {x!r}")
    return arr


def log_gamma(x):
    """ln Gamma(x) for x > 0; accepts scalars or arrays."""
    arr = _check_positive(x)
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def digamma(x):
    """psi(x) = Gamma'(x)/Gamma(x) for x > 0."""
    arr = _check_positive(x)
    out = special.psi(arr)
    return float(out) if out.ndim == 0 else out


def _stirling_tail(x):
    inv = 1.0 / x
    inv2 = inv * inv
    acc = np.zeros_like(x)
    for c in reversed(_STIRLING_COEF):
        acc = acc * inv2 + c
    return acc * inv


def log_gamma_ratio(x, y):
    """ln[Gamma(x) / Gamma(y)] for positive x, y (arrays broadcast).

    The plain difference gammaln(x) - gammaln(y) loses everything above the
    ulp of ln Gamma(x) itself (~5e-10 at x = 3e5). When both arguments are
    large the Stirling expansions are subtracted analytically instead, using
    log1p for the leading term.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(~(x > 0)) or np.any(~(y > 0)):
        raise DomainError("log_gamma_ratio needs positive arguments")
    out = np.empty(x.shape)
    big = (x >= _STIRLING_MIN) & (y >= _STIRLING_MIN)
    if np.any(big):
        xb, yb = x[big], y[big]
        d = yb - xb
        out[big] = (
            -(xb - 0.5) * np.log1p(d / xb)
            - d * np.log(yb)
            + d
            + _stirling_tail(xb)
            - _stirling_tail(yb)
        )
    small = ~big
    if np.any(small):
        out[small] = special.gammaln(x[small]) - special.gammaln(y[small])
    return float(out) if out.ndim == 0 else out


def log_inv_gamma_squared(x):
    """Vectorized ln[1/Gamma(x)^2] with a mask of exact zeros.

    Returns ``(logs, is_zero)``. At poles (nonpositive integers within
    :data:`POLE_TOL`) ``logs`` holds -inf and ``is_zero`` is True. For x < 0.5
    the reflection Gamma(x) Gamma(1-x) = pi / sin(pi x) is used; squaring drops
    the sign, so no sign is tracked.
    """
    x = np.asarray(x, dtype=float)
    logs = np.empty(x.shape)
    nearest = np.rint(x)
    is_zero = (x <= 0.5) & (nearest <= 0) & (np.abs(x - nearest) <= POLE_TOL)
    right = (x >= 0.5) & ~is_zero
    left = (x < 0.5) & ~is_zero
    logs[right] = -2.0 * special.gammaln(x[right])
    if np.any(left):
        xl = x[left]
        # |Gamma(x)| = pi / (|sin(pi x)| Gamma(1 - x))
        log_abs_gamma = math.log(math.pi) - np.log(np.abs(np.sin(math.pi * xl))) - special.gammaln(1.0 - xl)
        logs[left] = -2.0 * log_abs_gamma
    logs[is_zero] = -np.inf
    return logs, is_zero


def inv_gamma_squared(x: float) -> LogValue:
    """1/Gamma(x)^2 as a :class:`LogValue`; exactly zero at the poles of Gamma."""
    logs, is_zero = log_inv_gamma_squared(float(x))
    if bool(is_zero):
        return LogValue.zero()
    return LogValue(float(logs))


def log_sum(logs) -> float:
    """ln(sum(exp(logs))) for an array of logs; -inf for an empty/all -inf input.

    Peak-shifted and accumulated with math.fsum, so the result does not depend
    on the order of the terms.
    """
    logs = np.asarray(logs, dtype=float).ravel()
    finite = logs[logs > -np.inf]
    if finite.size == 0:
        return -math.inf
    peak = float(finite.max())
    if peak == math.inf:
        return math.inf
    return peak + math.log(math.fsum(np.exp(finite - peak)))


def log_sum_accumulate(terms: Iterable[LogValue]) -> LogValue:
    """Sum of nonnegative :class:`LogValue` terms, returned as a LogValue."""
    logs = [t.log_magnitude for t in terms if not t.is_zero]
    return LogValue.from_log(log_sum(logs))


def laguerre_p(k: int, beta: float, q):
    """p_k^beta(q) = (-1)^k k! L_k^beta(q), i.e. the monic Laguerre polynomial.

    Evaluated with the three-term recurrence
    p_{j+1} = (q - 2j - 1 - beta) p_j - j (j + beta) p_{j-1}.
    The expanded power sum cancels badly for k above ~15 and is not used.
    """
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    q = np.asarray(q, dtype=float)
    prev = np.zeros_like(q)
    cur = np.ones_like(q)
    for j in range(k):
        prev, cur = cur, (q - (2 * j + 1 + beta)) * cur - j * (j + beta) * prev
    return float(cur) if cur.ndim == 0 else cur


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight x^weight_exponent e^{-x} on (0, inf)."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int
    weight_exponent: float

    def integrate(self, f) -> float:
        """Approximate the integral of x^a e^{-x} f(x) over (0, inf)."""
        return float(np.dot(self.weights, f(self.nodes)))


def _laguerre_orthonormal(x, n_terms, beta):
    """Orthonormal Laguerre recurrence at nodes x.

    Returns ``(log_sumsq, ratio)`` where ``log_sumsq`` is
    ln sum_{k<n_terms} q_k(x)^2 with q_0 = 1, and ``ratio`` is q_n/q_n' used
    for Newton steps. Values are rescaled on the fly to stay finite.
    """
    x = np.asarray(x, dtype=float)
    q_prev = np.zeros_like(x)
    q_cur = np.ones_like(x)
    d_prev = np.zeros_like(x)
    d_cur = np.zeros_like(x)
    sumsq = np.ones_like(x)
    log_scale = np.zeros_like(x)
    sqrt_b_prev = 0.0
    for k in range(n_terms):
        a_k = 2 * k + 1 + beta
        sqrt_b = math.sqrt((k + 1) * (k + 1 + beta))
        q_next = ((x - a_k) * q_cur - sqrt_b_prev * q_prev) / sqrt_b
        d_next = (q_cur + (x - a_k) * d_cur - sqrt_b_prev * d_prev) / sqrt_b
        q_prev, q_cur = q_cur, q_next
        d_prev, d_cur = d_cur, d_next
        sqrt_b_prev = sqrt_b
        if k + 1 < n_terms:
            sumsq = sumsq + q_cur * q_cur
        big = np.abs(q_cur) > 1e100
        if np.any(big):
            s = np.where(big, 1e-100, 1.0)
            q_prev, q_cur, d_prev, d_cur = q_prev * s, q_cur * s, d_prev * s, d_cur * s
            sumsq = sumsq * s * s
            log_scale = log_scale + np.where(big, 2 * 100 * math.log(10.0), 0.0)
    return np.log(sumsq) + log_scale, q_cur / d_cur


def gauss_laguerre_rule(N: int, weight_exponent: float = 0.0) -> QuadratureRule:
    """N-point generalized Gauss-Laguerre rule via the Golub-Welsch approach.

    Nodes are eigenvalues of the symmetric tridiagonal Jacobi matrix, polished
    by two Newton steps; weights come from the Christoffel function evaluated
    in log space rather than from eigenvector components, which keeps the tiny
    weights at large nodes accurate.
    """
    if N < 1:
        raise DomainError(f"rule order must be >= 1, got {N}")
    beta = float(weight_exponent)
    if beta <= -1:
        raise DomainError(f"weight exponent must exceed -1, got {beta}")
    k = np.arange(N)
    diag = 2.0 * k + 1.0 + beta
    off = np.sqrt(k[1:] * (k[1:] + beta))
    if N == 1:
        nodes = diag.copy()
    else:
        nodes = linalg.eigvalsh_tridiagonal(diag, off)
    for _ in range(2):
        _, ratio = _laguerre_orthonormal(nodes, N, beta)
        nodes = nodes - ratio
    log_sumsq, _ = _laguerre_orthonormal(nodes, N, beta)
    weights = np.exp(special.gammaln(beta + 1.0) - log_sumsq)
    order = np.argsort(nodes)
    return QuadratureRule(nodes[order], weights[order], N, beta)


def gauss_beta_rule(N: int, a: float, b: float):
    """Nodes and normalized weights for the Beta(a+1, b+1) law on (0, 1).

    The weight is t^a (1-t)^b scaled to unit mass, so ``w @ f(t)`` is the
    expectation of f under that distribution.
    """
    if a <= -1 or b <= -1:
        raise DomainError("Beta-rule exponents must exceed -1")
    x, w = special.roots_jacobi(N, b, a)
    t = 0.5 * (1.0 + x)
    return t, w / math.fsum(w)
