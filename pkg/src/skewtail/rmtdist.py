"""Analytic laws of the largest singular value of a skew-symmetric
Gaussian matrix.

A p x p real skew-symmetric matrix with i.i.d. standard-normal upper
triangle has t = floor(p/2) paired singular values.  This module
provides, all in closed form:

* the joint density of the ordered singular values and its
  normalizing constants,
* the exact distribution function of the largest singular value
  (a t x t determinant of lower incomplete-gamma entries),
* the Hankel gram matrix Gamma(p - i - j + 1/2), its closed-form
  inverse, and the geometric weights built from the two,
* the asymptotic upper tail of sigma_1 (weighted chi-square tails) and
  the exact tube-method upper tail of the standardized statistic
  sigma_1 / sqrt(sum sigma_i^2) on its validity range x >= 1/sqrt(2),
* the 2x2 objective whose supremum (= 1) pins the critical angle pi/4
  that delimits that validity range, plus a vectorized random search
  over it,
* the Euler characteristic check implied by the weights.

Everything is evaluated in log domain and is pure and thread-safe; the
per-order gram matrices are memoized (idempotent, read-only arrays).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ExcludedPointError, ValidityError
from .specfun import (
    beta_upper,
    chi2_upper,
    log_gamma,
    log_regularized_gamma_lower,
    probability,
)

#: Exactness threshold of the standardized upper tail: cos(theta_c) with
#: critical angle theta_c = pi/4.
CRITICAL_POINT = 1.0 / math.sqrt(2.0)

# Slack on the validity boundary so thresholds supplied with ~8 correct
# digits (e.g. 0.70710678 from a table) are not rejected.
_VALIDITY_SLACK = 1e-8


@dataclass(frozen=True)
class SpectrumLaw:
    """Integer constants of the singular-value law at matrix order p.

    t is the number of paired singular values, eps distinguishes odd
    order (one extra zero singular value), n is the dimension of the
    space of skew-symmetric matrices, and d the dimension of the index
    manifold of rank-2 frames that the maximum is taken over.
    """

    p: int
    t: int
    eps: int
    n: int
    d: int


def spectrum_law(p: int) -> SpectrumLaw:
    """Derive (p, t, eps, n, d) for matrix order p >= 2."""
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise DomainError(f"matrix order must be an integer >= 2, got {p!r}")
    p = int(p)
    t = p // 2
    return SpectrumLaw(p=p, t=t, eps=p - 2 * t, n=p * (p - 1) // 2, d=2 * (p - 2))


@dataclass(frozen=True)
class HankelGram:
    """Gram matrix g_ij = Gamma(p - i - j + 1/2), its closed-form inverse,
    and the tail weights.

    ``weights[k]`` is the anti-diagonal sum ``sum_{i+j=k+2} ginv[i,j] *
    g[i,j]`` for k = 0 .. 2t-2; the weights sum to t and weight k
    multiplies the chi-square/beta tail with 2p - 3 - 2k degrees of
    freedom in the tail expansions.
    """

    p: int
    t: int
    eps: int
    g: np.ndarray
    ginv: np.ndarray
    weights: np.ndarray


def log_volume_U(p: int) -> float:
    """ln Vol(U(p)) of the quotient manifold O(p)/H(p) framing the paired SVD."""
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise DomainError(f"volume_U requires integer p >= 1, got {p!r}")
    p = int(p)
    t = p // 2
    logv = t * math.log(2.0) + (p * (p - 1) / 4.0) * math.log(math.pi)
    for i in range(1, t + 1):
        logv -= log_gamma(p / 2.0 - i + 1.0) + log_gamma(p / 2.0 - i + 0.5)
    return logv


def volume_U(p: int) -> float:
    """Volume of U(p); 1 for p=1, 2 for p=2, 4*pi for p=3."""
    return math.exp(log_volume_U(p))


@lru_cache(maxsize=None)
def _log_constants(p: int) -> tuple[float, float]:
    """(ln c_p, ln d_p): joint-density and determinant normalizers."""
    law = spectrum_law(p)
    log_cp = log_volume_U(p) - (p * (p - 1) / 4.0) * math.log(2.0 * math.pi)
    log_dp = log_cp - law.t * math.log(2.0)
    return log_cp, log_dp


def normalizing_constants(p: int) -> tuple[float, float]:
    """(c_p, d_p): the density normalizer and its determinant companion d_p = c_p / 2^t."""
    log_cp, log_dp = _log_constants(int(spectrum_law(p).p))
    return math.exp(log_cp), math.exp(log_dp)


def joint_density(sigma, p: int) -> float:
    """Joint density of the ordered singular values at a point.

    Args:
        sigma: nonincreasing vector of t = floor(p/2) nonnegative reals.
        p: matrix order.

    Returns 0 exactly on the boundary of the ordered cone (tied entries,
    or a zero entry when p is odd).
    """
    law = spectrum_law(p)
    s = np.asarray(sigma, dtype=float)
    if s.shape != (law.t,):
        raise DomainError(f"sigma must have length t={law.t} for p={p}, got shape {s.shape}")
    if not np.all(np.isfinite(s)) or np.any(s < 0.0):
        raise DomainError("sigma entries must be finite and nonnegative")
    if np.any(np.diff(s) > 0.0):
        raise DomainError("sigma must be nonincreasing")
    if np.any(np.diff(s) == 0.0) or (law.eps == 1 and np.any(s == 0.0)):
        return 0.0
    log_cp, _ = _log_constants(law.p)
    q = s * s
    logv = log_cp - 0.5 * float(q.sum())
    if law.eps == 1:
        logv += 2.0 * float(np.log(s).sum())
    for i in range(law.t):
        for j in range(i + 1, law.t):
            logv += 2.0 * math.log(q[i] - q[j])
    return math.exp(logv)


def _gram_pair(p: int) -> tuple[np.ndarray, np.ndarray]:
    """(g, ginv) for any p >= 2; inlined scalar case below the tube range."""
    if p >= 4:
        gram = _hankel_gram_cached(p)
        return gram.g, gram.ginv
    g11 = math.exp(log_gamma(p - 2 + 0.5))
    return np.array([[g11]]), np.array([[1.0 / g11]])


def _cdf_complement_det(p: int, t: int, y: float) -> float | None:
    """det(I - C^{-1} K(y)) with K the upper-tail remainder of the CDF's
    integral matrix: an exact complement form of the determinantal CDF.

    Entrywise, (C^{-1} K)_kj = sum_i 2^{k-j} g^{ki} g_ij Q_ij with
    Q_ij the regularized upper gamma tails.  Near saturation every
    Q_ij is small, the matrix is a smooth perturbation of the identity,
    and the determinant carries none of the cancellation the direct
    route suffers there; its trace is the leading tail expansion.
    Returns None where the perturbation is too large to trust.
    """
    g, ginv = _gram_pair(p)
    q = np.array([chi2_upper(2 * p - 3 - 2 * k, y) for k in range(2 * t - 1)])
    m = np.empty((t, t))
    for k in range(1, t + 1):
        for j in range(1, t + 1):
            m[k - 1, j - 1] = 2.0 ** (k - j) * sum(
                ginv[k - 1, i - 1] * g[i - 1, j - 1] * q[i + j - 2]
                for i in range(1, t + 1)
            )
    if float(np.max(np.abs(m))) >= 0.05:
        return None
    return float(np.linalg.det(np.eye(t) - m))


def largest_sv_cdf(p: int, x: float) -> float:
    """P(sigma_1 < x): exact determinantal distribution function.

    Two regimes: near saturation the complement determinant
    det(I - C^{-1} K) is evaluated (smooth, cancellation-free, and it
    keeps the deep upper tail 1 - CDF accurate to ~1e-15 absolute);
    elsewhere the direct t x t determinant is used, with every entry
    formed in log scale and every row equilibrated by its own largest
    entry before the normalizer d_p recombines in log domain.  The raw
    entries span hundreds of orders of magnitude by p ~ 16, which is
    what the scaling and the log-domain normalizer absorb.
    """
    law = spectrum_law(p)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if x < 0.0:
        raise DomainError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    t = law.t
    y = x * x
    complement = _cdf_complement_det(law.p, t, y)
    if complement is not None:
        return probability(complement, tol=1e-9)
    half_y = 0.5 * y
    log2 = math.log(2.0)
    log_entries = np.empty((t, t))
    for i in range(1, t + 1):
        for j in range(1, t + 1):
            nu = 2 * law.p - 2 * i - 2 * j + 1
            log_entries[i - 1, j - 1] = (
                0.5 * nu * log2
                + log_gamma(0.5 * nu)
                + log_regularized_gamma_lower(0.5 * nu, half_y)
            )
    scales = log_entries.max(axis=1)
    if not np.all(np.isfinite(scales)):
        return 0.0
    det = float(np.linalg.det(np.exp(log_entries - scales[:, None])))
    if det <= 0.0:
        return 0.0
    _, log_dp = _log_constants(law.p)
    value = math.exp(log_dp + float(scales.sum()) + math.log(det))
    return min(1.0, value)


def _hankel_ginv_closed_form(p: int) -> np.ndarray:
    """Closed-form inverse of the gram matrix, via log-gamma differences
    with explicit sign tracking for the (-1)^(i+j) factor."""
    law = spectrum_law(p)
    t, eps = law.t, law.eps
    out = np.zeros((t, t))
    for i in range(1, t + 1):
        for j in range(1, t + 1):
            log_pref = -(
                log_gamma(t + 1.0 - i) + log_gamma(t + eps + 0.5 - i)
                + log_gamma(t + 1.0 - j) + log_gamma(t + eps + 0.5 - j)
            )
            acc = 0.0
            for k in range(1, min(i, j) + 1):
                acc += math.exp(
                    log_pref
                    + log_gamma(t + 1.0 - k) + log_gamma(t + eps + 0.5 - k)
                    - log_gamma(i + 1.0 - k) - log_gamma(j + 1.0 - k)
                )
            out[i - 1, j - 1] = acc if (i + j) % 2 == 0 else -acc
    return out


@lru_cache(maxsize=None)
def _hankel_gram_cached(p: int) -> HankelGram:
    law = spectrum_law(p)
    t = law.t
    g = np.empty((t, t))
    for i in range(1, t + 1):
        for j in range(1, t + 1):
            g[i - 1, j - 1] = math.exp(log_gamma(law.p - i - j + 0.5))
    ginv = _hankel_ginv_closed_form(law.p)
    products = ginv * g
    weights = np.array([
        float(np.trace(products[::-1], offset=k - (t - 1))) for k in range(2 * t - 1)
    ])
    for arr in (g, ginv, weights):
        arr.flags.writeable = False
    return HankelGram(p=law.p, t=t, eps=law.eps, g=g, ginv=ginv, weights=weights)


def hankel_gram(p: int) -> HankelGram:
    """Gram matrix, closed-form inverse, and tail weights for order p >= 4."""
    law = spectrum_law(p)
    if law.p < 4:
        raise DomainError(f"hankel_gram requires p >= 4 (tube formula range), got {p}")
    return _hankel_gram_cached(law.p)


def _band_factorization(delta: float, t: int):
    """The triangular pieces of B_{t-1}...B_1 G = E T D.

    Returns (G, B, T, Tinv, D_diag, E_diag) where B is the product of
    the band matrices (unit upper triangular), T holds the binomial
    entries C(t-j, t-i) on and below the diagonal, T^{-1} flips their
    signs checkerboard-style, and D, E are the gamma/factorial
    diagonals.
    """
    idx = range(1, t + 1)
    G = np.array([[math.exp(log_gamma(delta + 2 * t - i - j + 1.0)) for j in idx] for i in idx])

    # product order is B_{t-1} ... B_2 B_1
    B = np.eye(t)
    for k in range(t - 1, 0, -1):
        Bk = np.eye(t)
        for i in range(1, t - k + 1):
            Bk[i - 1, i] = -(delta + t - i)
        B = B @ Bk

    T = np.zeros((t, t))
    for i in idx:
        for j in idx:
            if i >= j:
                T[i - 1, j - 1] = math.comb(t - j, t - i)
    Tinv = np.array([[(-1) ** (i + j) * T[i - 1, j - 1] for j in idx] for i in idx])

    D_diag = np.array([math.exp(log_gamma(delta + t - i + 1.0)) for i in idx])
    E_diag = np.array([float(math.factorial(t - i)) for i in idx])
    return G, B, T, Tinv, D_diag, E_diag


def hankel_inverse_oracle(delta: float, t: int) -> np.ndarray:
    """Invert G = (Gamma(delta + 2t - i - j + 1)) by triangular factorization.

    Builds the band matrices B_k, the binomial lower-triangular T and
    the diagonals D, E with B_{t-1}...B_1 G = E T D, and returns
    G^{-1} = D^{-1} T^{-1} E^{-1} B.  With delta = eps - 1/2 this is an
    independent route to :func:`hankel_gram`'s closed-form inverse.

    The factorization also implies det(G) = prod_i Gamma(delta+t-i+1) *
    (t-i)!, which is verified here against a pivoted-LU determinant of
    the assembled G before returning.
    """
    if not (isinstance(t, (int, np.integer)) and t >= 1):
        raise DomainError(f"t must be an integer >= 1, got {t!r}")
    if not math.isfinite(delta) or delta <= -1.0:
        raise DomainError(f"delta must be > -1, got {delta!r}")
    t = int(t)
    G, B, _, Tinv, D_diag, E_diag = _band_factorization(delta, t)

    log_det_product = sum(
        log_gamma(delta + t - i + 1.0) + log_gamma(t - i + 1.0) for i in range(1, t + 1)
    )
    sign, log_det_lu = np.linalg.slogdet(G)
    if sign <= 0.0 or abs(log_det_lu - log_det_product) > 1e-9 * max(1.0, abs(log_det_product)):
        raise ArithmeticError(
            f"determinant identity failed for delta={delta}, t={t}: "
            f"LU gives {sign}*exp({log_det_lu}), product gives exp({log_det_product})"
        )

    return (Tinv / D_diag[:, None]) @ (B / E_diag[:, None])


def largest_sv_tail_asymptotic(p: int, x: float) -> float:
    """Leading tail expansion of P(sigma_1 > x): weighted chi-square upper tails.

    An asymptotic approximation; it may exceed the exact tail slightly
    at moderate x but agrees to a couple of percent once the exact tail
    is below ~1e-3.
    """
    gram = hankel_gram(p)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"x must be positive, got {x!r}")
    y = x * x
    return float(sum(
        w * chi2_upper(2 * gram.p - 3 - 2 * k, y)
        for k, w in enumerate(gram.weights)
    ))


def standardized_sv_upper(p: int, x: float) -> float:
    """Exact upper tail of sigma_1 / sqrt(sum sigma_i^2) for x in [1/sqrt(2), 1].

    The weighted beta-tail expansion is exact only at or above the
    critical point 1/sqrt(2); below it a :class:`ValidityError` is
    raised rather than returning a silently wrong number.
    """
    gram = hankel_gram(p)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if x > 1.0 + 1e-12:
        raise DomainError(f"standardized statistic cannot exceed 1, got x={x!r}")
    if x < CRITICAL_POINT - _VALIDITY_SLACK:
        raise ValidityError(
            f"x={x!r} is below the critical point 1/sqrt(2)={CRITICAL_POINT:.12f}; "
            "the tube expansion is not exact there"
        )
    n = gram.p * (gram.p - 1) // 2
    y = min(x * x, 1.0)
    raw = sum(
        w * beta_upper(0.5 * (2 * gram.p - 3 - 2 * k), 0.5 * (n - 2 * gram.p + 3 + 2 * k), y)
        for k, w in enumerate(gram.weights)
    )
    return probability(float(raw), tol=1e-10)


def euler_characteristic(p: int) -> int:
    """Euler characteristic of the rank-2 frame manifold: 2 * floor(p/2).

    Recomputed from the gram weights and cross-checked against the
    closed form before rounding.
    """
    gram = hankel_gram(p)
    doubled = 2.0 * float(gram.weights.sum())
    if abs(doubled - 2.0 * gram.t) >= 1e-8:
        raise ArithmeticError(
            f"Euler characteristic check failed for p={p}: 2*sum = {doubled!r}"
        )
    return round(doubled)


def critical_radius_objective(R) -> float:
    """The 2x2 objective whose supremum over non-rotations equals cot^2(theta_c).

    Undefined (raises :class:`ExcludedPointError`) when the denominator
    base 1 - r11*r22 + r12*r21 vanishes, i.e. R approaches SO(2).
    """
    M = np.asarray(R, dtype=float)
    if M.shape != (2, 2) or not np.all(np.isfinite(M)):
        raise DomainError(f"R must be a finite 2x2 matrix, got shape {M.shape}")
    den = 1.0 - M[0, 0] * M[1, 1] + M[0, 1] * M[1, 0]
    if abs(den) < 1e-9:
        raise ExcludedPointError(
            f"objective undefined within 1e-9 of SO(2) (denominator {den!r})"
        )
    num = (M[0, 0] - M[1, 1]) ** 2 + (M[0, 1] + M[1, 0]) ** 2
    return 1.0 - num / (den * den)


def critical_radius_search(count: int, seed: int, exclude_tol: float = 1e-3) -> tuple[float, np.ndarray]:
    """Randomized supremum search over 2x2 matrices with entries in [-1, 1].

    Evaluates the objective at ``count`` uniform matrices, skipping
    denominators smaller than ``exclude_tol``, and returns the largest
    value with its argmax matrix.  The maximum approaching 1 from below
    confirms cot^2(theta_c) = 1, i.e. theta_c = pi/4.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count!r}")
    rng = np.random.default_rng(seed)
    best_val = -np.inf
    best_R = None
    remaining = int(count)
    while remaining > 0:
        m = min(remaining, 250_000)
        remaining -= m
        R = rng.uniform(-1.0, 1.0, size=(m, 2, 2))
        den = 1.0 - R[:, 0, 0] * R[:, 1, 1] + R[:, 0, 1] * R[:, 1, 0]
        keep = np.abs(den) >= exclude_tol
        if not np.any(keep):
            continue
        num = (R[keep, 0, 0] - R[keep, 1, 1]) ** 2 + (R[keep, 0, 1] + R[keep, 1, 0]) ** 2
        vals = 1.0 - num / den[keep] ** 2
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_R = R[keep][i].copy()
    if best_R is None:
        raise ArithmeticError("every sampled matrix fell inside the excluded set")
    return best_val, best_R
