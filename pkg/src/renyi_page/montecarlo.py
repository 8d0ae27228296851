"""Haar-random bipartite pure states and Monte-Carlo estimators.

A state on C^m (x) C^n is an m x n coefficient matrix M; normalizing a matrix
of i.i.d. standard complex Gaussians gives the unitarily invariant measure.
The reduced state of A has the eigenvalues of the Gram matrix M M^dagger.

Reproducibility: sample number i always consumes the same Philox block
(key = seed, counter = i * blocks_per_sample), and complex normals are made
from those words by Box-Muller. The value of sample i therefore depends only
on (seed, i), never on chunking or on how many workers share the run, and
the final mean is an exactly rounded math.fsum.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError

CHUNK = 8192
NEG_EIG_TOL = 1e-12
LOG_FLOOR = 1e-300
_U53 = 2.0**-53


@dataclass(frozen=True)
class StateMatrix:
    entries: np.ndarray

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class SpectralSample:
    eigenvalues: np.ndarray  # descending


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    samples: int
    seed: int


def _words_per_sample(m: int, n: int) -> int:
    # two 64-bit words per complex entry, padded to whole Philox blocks of 4
    return -(-2 * m * n // 4) * 4


def sample_haar_states(m: int, n: int, seed: int, start: int, count: int) -> np.ndarray:
    """States ``start .. start+count-1`` of the stream for ``seed``, shape (count, m, n)."""
    if m < 1 or n < 1:
        raise DomainError(f"dimensions must be >= 1, got ({m}, {n})")
    words = _words_per_sample(m, n)
    bitgen = np.random.Philox(key=int(seed) % 2**64, counter=start * (words // 4))
    raw = bitgen.random_raw(count * words).reshape(count, words)[:, : 2 * m * n]
    u = (raw >> np.uint64(11)).astype(np.float64) * _U53
    u1 = 1.0 - u[:, 0::2]  # (0, 1]
    u2 = u[:, 1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    z = radius * np.exp(2j * np.pi * u2)
    z = z.reshape(count, m, n)
    norms = np.sqrt(np.einsum("sij,sij->s", z.real, z.real) + np.einsum("sij,sij->s", z.imag, z.imag))
    return z / norms[:, None, None]


def sample_haar_state(m: int, n: int, rng_stream=0, index: int = 0) -> StateMatrix:
    """One Haar-random state.

    ``rng_stream`` is either an integer seed (the counter-based stream used by
    the estimators, sample ``index``) or a numpy Generator.
    """
    if m < 1 or n < 1:
        raise DomainError(f"dimensions must be >= 1, got ({m}, {n})")
    if isinstance(rng_stream, np.random.Generator):
        z = rng_stream.standard_normal((m, n)) + 1j * rng_stream.standard_normal((m, n))
        return StateMatrix(z / np.linalg.norm(z))
    return StateMatrix(sample_haar_states(m, n, int(rng_stream), index, 1)[0])


def hermitian_eigenvalues(matrix, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues (ascending) of a complex Hermitian matrix by cyclic Jacobi.

    H = A + iB is embedded as the real symmetric [[A, -B], [B, A]], whose
    spectrum is that of H with every eigenvalue doubled.
    """
    h = np.asarray(matrix, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {h.shape}")
    scale = max(np.max(np.abs(h)), 1e-300) if h.size else 1.0
    if h.size and np.max(np.abs(h - h.conj().T)) > 1e-12 * max(scale, 1.0):
        raise DomainError("matrix is not Hermitian")
    m = h.shape[0]
    if m == 0:
        return np.zeros(0)
    a = np.block([[h.real, -h.imag], [h.imag, h.real]])
    a = 0.5 * (a + a.T)
    size = 2 * m
    frob = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tol * frob:
            break
        rotated = False
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                # negligible against both diagonal entries: zero it rather than rotate
                g = 100.0 * abs(apq)
                if abs(a[p, p]) + g == abs(a[p, p]) and abs(a[q, q]) + g == abs(a[q, q]):
                    a[p, q] = a[q, p] = 0.0
                    continue
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                rotated = True
        if not rotated:
            break
    else:
        raise NumericError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(a))[::2]


def _check_spectra(eigs: np.ndarray, seed=None) -> np.ndarray:
    if np.any(eigs < -NEG_EIG_TOL):
        raise NumericError(f"negative eigenvalue {eigs.min():.3e} below roundoff", seed=seed)
    eigs = np.clip(eigs, 0.0, 1.0)
    drift = np.abs(eigs.sum(axis=-1) - 1.0)
    if np.any(drift > 1e-10):
        raise NumericError(f"spectrum sums drift from 1 by {drift.max():.3e}", seed=seed)
    return eigs


def batch_spectra(states: np.ndarray, seed=None) -> np.ndarray:
    """Reduced-state spectra (descending) for a stack of coefficient matrices."""
    gram = states @ np.conj(np.swapaxes(states, -1, -2))
    try:
        eigs = np.linalg.eigvalsh(gram)[..., ::-1]
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}", seed=seed) from exc
    return _check_spectra(eigs, seed)


def reduced_eigenvalues(state: StateMatrix) -> SpectralSample:
    """Spectrum of Tr_B |psi><psi| as the eigenvalues of M M^dagger."""
    mat = state.entries
    gram = mat @ mat.conj().T
    eigs = np.sort(hermitian_eigenvalues(gram))[::-1]
    return SpectralSample(_check_spectra(eigs))


def _per_sample(m, n, samples, seed, statistic, workers):
    bounds = [(s, min(CHUNK, samples - s)) for s in range(0, samples, CHUNK)]

    def run(bound):
        start, count = bound
        spectra = batch_spectra(sample_haar_states(m, n, seed, start, count), seed=seed)
        return statistic(spectra)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    return np.concatenate(parts)


def _estimate(values: np.ndarray, seed: int) -> Estimate:
    count = values.size
    mean = math.fsum(values) / count
    var = math.fsum((values - mean) ** 2) / (count - 1)
    return Estimate(mean, math.sqrt(var / count), count, int(seed))


def _check_samples(samples):
    if samples < 100:
        raise DomainError(f"need at least 100 samples, got {samples}")


def _power_sums(alpha):
    def stat(spectra):
        if alpha == 2:
            return np.sum(spectra * spectra, axis=-1)
        with np.errstate(divide="ignore"):
            return np.sum(np.where(spectra > 0, spectra, 0.0) ** alpha, axis=-1)

    return stat


def mc_moment_sum(m: int, n: int, alpha: float, samples: int, seed: int, workers: int = 1) -> Estimate:
    """Monte-Carlo estimate of Z_alpha = <sum_i p_i^alpha>."""
    _check_samples(samples)
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    return _estimate(_per_sample(m, n, samples, seed, _power_sums(alpha), workers), seed)


def mc_average_renyi(m: int, n: int, alpha: float, samples: int, seed: int, workers: int = 1) -> Estimate:
    """Monte-Carlo estimate of the true average <S_alpha> (not S~_alpha)."""
    _check_samples(samples)
    if not alpha > 0 or alpha == 1:
        raise DomainError(f"alpha must be > 0 and != 1, got {alpha!r}")
    power = _power_sums(alpha)

    def stat(spectra):
        if alpha < 1:
            spectra = np.maximum(spectra, LOG_FLOOR)
        return np.log(power(spectra)) / (1.0 - alpha)

    if m == 1:
        return Estimate(0.0, 0.0, samples, int(seed))
    return _estimate(_per_sample(m, n, samples, seed, stat, workers), seed)


def mc_average_von_neumann(m: int, n: int, samples: int, seed: int, workers: int = 1) -> Estimate:
    """Monte-Carlo estimate of <-sum_i p_i ln p_i>, with 0 ln 0 = 0."""
    _check_samples(samples)

    def stat(spectra):
        with np.errstate(divide="ignore", invalid="ignore"):
            plogp = np.where(spectra > 0, spectra * np.log(spectra), 0.0)
        return -np.sum(plogp, axis=-1)

    if m == 1:
        return Estimate(0.0, 0.0, samples, int(seed))
    return _estimate(_per_sample(m, n, samples, seed, stat, workers), seed)
