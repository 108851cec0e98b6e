"""Scheffe paired-comparison analysis: subtractivity tests driven by the
largest singular value of the interaction residual.

Pipeline: a win/loss score sheet is variance-stabilized into an
approximately unit-variance skew-symmetric observation matrix; least
squares splits it into main-effect scores alpha_i and an interaction
residual Gamma-hat; the residual's size is then judged three ways
(chi-square norm, largest singular value, standardized largest singular
value), its most deadlocked triple is located, and the rank-2 structure
is embedded in the plane for plotting.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import mc
from .errors import DataError, DomainError
from .mc import SingularSpectrum, SkewMatrix
from .rmtdist import CRITICAL_POINT, largest_sv_cdf, standardized_sv_upper
from .specfun import chi2_upper

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class ScoreSheet:
    """Round-robin win counts: r[i, j] = wins of object i over j.

    No ties: r[i, j] + r[j, i] must equal the number of games per pair.
    """

    m: int
    names: tuple[str, ...]
    n_games: int
    r: np.ndarray

    def __post_init__(self):
        if self.m < 3:
            raise DataError(f"need at least 3 objects, got {self.m}")
        if len(self.names) != self.m:
            raise DataError(f"expected {self.m} names, got {len(self.names)}")
        if self.n_games < 1:
            raise DataError(f"games per pair must be >= 1, got {self.n_games}")
        r = np.asarray(self.r)
        if r.shape != (self.m, self.m):
            raise DataError(f"score matrix must be {self.m}x{self.m}, got {r.shape}")
        if not np.issubdtype(r.dtype, np.integer):
            raise DataError("score matrix entries must be integers")
        if np.any(np.diag(r) != 0):
            raise DataError("diagonal of a score sheet must be zero")
        if np.any(r < 0) or np.any(r > self.n_games):
            i, j = np.unravel_index(
                int(np.argmax((r < 0) | (r > self.n_games))), r.shape
            )
            raise DataError(
                f"score r[{i + 1},{j + 1}]={r[i, j]} outside 0..{self.n_games}"
            )
        totals = r + r.T
        off = ~np.eye(self.m, dtype=bool)
        if np.any(totals[off] != self.n_games):
            bad = off & (totals != self.n_games)
            i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
            raise DataError(
                f"r[{i + 1},{j + 1}] + r[{j + 1},{i + 1}] = {totals[i, j]} != "
                f"{self.n_games}: ties or miscounts are not allowed"
            )
        object.__setattr__(self, "r", r)


@dataclass(frozen=True)
class SkewObservations:
    """Skew-symmetric preference observations y[i, j] = -y[j, i]."""

    m: int
    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.shape != (self.m, self.m):
            raise DataError(f"observations must be {self.m}x{self.m}, got {y.shape}")
        resid = float(np.max(np.abs(y + y.T)))
        if resid > 1e-12:
            raise DataError(f"observations are not skew-symmetric (max residual {resid:.3e})")
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class ScheffeFit:
    """Least-squares split y_ij = (alpha_i - alpha_j) + gamma_ij.

    alpha_hat sums to zero and every row of the skew-symmetric residual
    gamma_hat sums to zero (the model's side conditions); the split
    reconstructs the observations exactly.
    """

    m: int
    alpha_hat: np.ndarray
    gamma_hat: np.ndarray


@dataclass(frozen=True)
class ContrastPair:
    """A pair of contrast vectors (c, d): unit length, zero sum, and
    mutually orthogonal.

    The largest singular value of the interaction residual is the
    maximum of c' gamma_hat d over all such pairs, so any particular
    pair's value is a lower bound for it.
    """

    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        d = np.asarray(self.d, dtype=float)
        if c.shape != d.shape or c.ndim != 1:
            raise DomainError(f"c and d must be vectors of equal length, got {c.shape}, {d.shape}")
        for name, v in (("c", c), ("d", d)):
            if abs(float(v @ v) - 1.0) > 1e-10:
                raise DomainError(f"{name} must have unit length")
            if abs(float(v.sum())) > 1e-10:
                raise DomainError(f"{name} must sum to zero")
        if abs(float(c @ d)) > 1e-10:
            raise DomainError("c and d must be orthogonal")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)


def deadlock_contrast_pair(m: int, i: int, j: int, k: int) -> ContrastPair:
    """The contrast pair whose bilinear form is the three-way deadlock
    (gamma_ij + gamma_jk + gamma_ki)/sqrt(3), for 0-based distinct
    indices."""
    if len({i, j, k}) != 3 or not all(0 <= idx < m for idx in (i, j, k)):
        raise DomainError(f"need three distinct indices below {m}, got ({i}, {j}, {k})")
    c = np.zeros(m)
    d = np.zeros(m)
    c[i], c[j] = 1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)
    d[i] = d[j] = 1.0 / math.sqrt(6.0)
    d[k] = -2.0 / math.sqrt(6.0)
    return ContrastPair(c=c, d=d)


def contrast_value(fit: ScheffeFit, pair: ContrastPair) -> float:
    """The bilinear contrast c' gamma_hat d."""
    if pair.c.shape != (fit.m,):
        raise DomainError(f"contrast length {pair.c.shape[0]} does not match m={fit.m}")
    return float(pair.c @ fit.gamma_hat @ pair.d)


@dataclass(frozen=True)
class TestReport:
    """All subtractivity statistics for one dataset.

    The spectrum is reported in error-standard-deviation units (divided
    by sqrt(sigma2)), so ``sv_stat == spectrum.sigma[0]`` and the sum of
    squared spectrum entries equals ``chi2_stat``.  ``std_p`` is None
    when the standardized statistic falls below the critical point
    1/sqrt(2), outside the exact range of the tube formula.
    """

    names: tuple[str, ...]
    chi2_stat: float
    chi2_df: int
    chi2_p: float
    sv_stat: float
    sv_p: float
    std_stat: float
    std_p: float | None
    spectrum: SingularSpectrum
    deadlock_triple: tuple[int, int, int]
    deadlock_value: float
    embedding: np.ndarray


def variance_stabilize(sheet: ScoreSheet) -> SkewObservations:
    """Map win fractions to approximately N(., 1) scores.

    Applies f(q) = 2 sqrt(n) (asin(sqrt(q)) - pi/4) entrywise, evaluated
    through the half-angle identity asin(sqrt(q)) - pi/4 =
    asin(2q - 1)/2 so an even split lands exactly on zero; since
    f(q) = -f(1-q), the result is made exactly skew-symmetric by
    computing the upper triangle and negating.  Boundary sweeps
    (r = 0 or r = n) stay finite but the normal approximation is poor
    there, so they are accepted with a warning.
    """
    n = sheet.n_games
    off = ~np.eye(sheet.m, dtype=bool)
    if np.any((sheet.r[off] == 0) | (sheet.r[off] == n)):
        warnings.warn(
            "score sheet contains boundary sweeps (0 or all games won); "
            "the variance-stabilized scores are unreliable for those pairs",
            stacklevel=2,
        )
    y = np.zeros((sheet.m, sheet.m))
    scale = math.sqrt(n)
    for i in range(sheet.m):
        for j in range(i + 1, sheet.m):
            y[i, j] = scale * math.asin((2.0 * int(sheet.r[i, j]) - n) / n)
            y[j, i] = -y[i, j]
    return SkewObservations(m=sheet.m, y=y)


def scheffe_fit(obs: SkewObservations) -> ScheffeFit:
    """Least-squares estimators: alpha_i = row mean, gamma = what's left."""
    if obs.m < 3:
        raise DomainError(f"need m >= 3 objects for an interaction space, got {obs.m}")
    alpha = obs.y.sum(axis=1) / obs.m
    gamma = obs.y - (alpha[:, None] - alpha[None, :])
    return ScheffeFit(m=obs.m, alpha_hat=alpha, gamma_hat=gamma)


def interaction_spectrum(fit: ScheffeFit, sigma2: float = 1.0) -> SingularSpectrum:
    """Paired singular values of gamma_hat / sqrt(sigma2), descending."""
    _check_sigma2(sigma2)
    skew = SkewMatrix.from_full(fit.gamma_hat / math.sqrt(sigma2), tol=1e-8)
    return mc.singular_values(skew)


def _check_sigma2(sigma2: float) -> None:
    if not math.isfinite(sigma2) or sigma2 <= 0.0:
        raise DomainError(f"error variance must be positive, got {sigma2!r}")


def chi_square_test(fit: ScheffeFit, sigma2: float = 1.0) -> tuple[float, int, float]:
    """Scheffe's chi-square test of subtractivity.

    Returns (statistic, degrees of freedom, p-value) where the statistic
    is tr(gamma' gamma) / (2 sigma2) on (m-1)(m-2)/2 degrees of freedom.
    """
    _check_sigma2(sigma2)
    stat = float(np.sum(np.triu(fit.gamma_hat, 1) ** 2)) / sigma2
    df = (fit.m - 1) * (fit.m - 2) // 2
    return stat, df, chi2_upper(df, stat)


def largest_sv_test(fit: ScheffeFit, sigma2: float = 1.0) -> tuple[float, float]:
    """Largest-singular-value test: sigma_1(gamma_hat)/sigma against the
    exact law at order m - 1.

    Under subtractivity the nonzero singular values of gamma_hat behave
    exactly like those of an (m-1) x (m-1) standard skew-symmetric
    Gaussian matrix, which supplies the null distribution.
    """
    if fit.m < 3:
        raise DomainError(f"need m >= 3, got {fit.m}")
    _check_sigma2(sigma2)
    stat = float(interaction_spectrum(fit, sigma2).sigma[0])
    return stat, 1.0 - largest_sv_cdf(fit.m - 1, stat)


def lrt_standardized_test(fit: ScheffeFit) -> tuple[float, float | None]:
    """Likelihood-ratio test of a single deadlock plane, variance unknown.

    The statistic sigma_1 / sqrt(sum sigma_i^2) is scale-free; its exact
    upper probability is available for values at or above the critical
    point 1/sqrt(2), and None is returned below it.
    """
    if fit.m < 5:
        raise DomainError(
            f"standardized test needs m >= 5 (order m-1 >= 4), got m={fit.m}"
        )
    sigma = interaction_spectrum(fit).sigma
    energy = float(np.sum(sigma**2))
    if energy <= 0.0:
        raise DomainError(
            "interaction residual is exactly zero: the standardized statistic "
            "is a 0/0 form (the data are perfectly subtractive)"
        )
    stat = float(sigma[0] / math.sqrt(energy))
    if stat < CRITICAL_POINT - 1e-12:
        return stat, None
    return stat, standardized_sv_upper(fit.m - 1, min(stat, 1.0))


def max_deadlock(fit: ScheffeFit) -> tuple[tuple[int, int, int], float]:
    """Largest three-way deadlock contrast over all oriented triples.

    Evaluates (gamma_ij + gamma_jk + gamma_ki)/sqrt(3) for every triple
    in both cyclic orientations and returns the 1-based triple (as
    labeled on the score sheet) whose cycle sum is most positive.
    """
    if fit.m < 3:
        raise DomainError(f"need m >= 3 for a triple, got {fit.m}")
    g = fit.gamma_hat
    best_triple = None
    best_value = -math.inf
    for a, b, c in combinations(range(fit.m), 3):
        cycle = (g[a, b] + g[b, c] + g[c, a]) / _SQRT3
        triple, value = ((a, b, c), cycle) if cycle >= 0.0 else ((c, b, a), -cycle)
        if value > best_value:
            best_value = value
            best_triple = triple
    i, j, k = best_triple
    return (i + 1, j + 1, k + 1), best_value


def residual_embedding(fit: ScheffeFit) -> np.ndarray:
    """Plane embedding (sqrt(sigma1) u_i, sqrt(sigma1) v_i) of the rank-2
    approximation gamma_hat ~ sigma1 (u v' - v u').

    Twice the signed area of triangle (i, j, k), divided by sqrt(3),
    approximates the deadlock contrast of that triple with matching
    sign; the match is exact when gamma_hat has rank 2.
    """
    plane = mc.top_plane(SkewMatrix.from_full(fit.gamma_hat, tol=1e-8))
    root = math.sqrt(plane.sigma1)
    return np.column_stack((root * plane.u, root * plane.v))


def signed_area(points: np.ndarray, i: int, j: int, k: int) -> float:
    """Signed (counterclockwise-positive) area of triangle (i, j, k).

    Indices are 0-based rows of the embedding array.
    """
    if len({i, j, k}) != 3:
        raise DomainError(f"apexes must be distinct, got ({i}, {j}, {k})")
    pts = np.asarray(points, dtype=float)
    (xi, yi), (xj, yj), (xk, yk) = pts[i], pts[j], pts[k]
    return 0.5 * ((xj - xi) * (yk - yi) - (xk - xi) * (yj - yi))


def build_report(
    obs: SkewObservations,
    sigma2: float = 1.0,
    names: tuple[str, ...] | None = None,
) -> TestReport:
    """Run the full analysis on skew observations and assemble a report."""
    if names is None:
        names = tuple(str(i + 1) for i in range(obs.m))
    if len(names) != obs.m:
        raise DomainError(f"expected {obs.m} names, got {len(names)}")
    fit = scheffe_fit(obs)
    chi2_stat, chi2_df, chi2_p = chi_square_test(fit, sigma2)
    sv_stat, sv_p = largest_sv_test(fit, sigma2)
    if obs.m >= 5:
        std_stat, std_p = lrt_standardized_test(fit)
    else:
        # the statistic is well defined for any m >= 3; its exact law is not
        sigma = interaction_spectrum(fit).sigma
        energy = float(np.sum(sigma**2))
        if energy <= 0.0:
            raise DomainError(
                "interaction residual is exactly zero: the standardized "
                "statistic is a 0/0 form (the data are perfectly subtractive)"
            )
        std_stat = float(sigma[0] / math.sqrt(energy))
        std_p = None
    triple, value = max_deadlock(fit)
    return TestReport(
        names=names,
        chi2_stat=chi2_stat,
        chi2_df=chi2_df,
        chi2_p=chi2_p,
        sv_stat=sv_stat,
        sv_p=sv_p,
        std_stat=std_stat,
        std_p=std_p,
        spectrum=interaction_spectrum(fit, sigma2),
        deadlock_triple=triple,
        deadlock_value=value,
        embedding=residual_embedding(fit),
    )


def simulate_null_largest_sv(
    m: int, count: int, seed: int, threads: int | None = None
) -> np.ndarray:
    """Null-hypothesis simulation of sigma_1(gamma_hat).

    Draws pure-noise observations y = eps (i.i.d. standard normal upper
    triangles) through the counter-based stream contract, fits each one,
    and returns the largest singular values of the residuals.  Their
    empirical law should match the exact order-(m-1) distribution.
    """
    if m < 3:
        raise DomainError(f"need m >= 3, got {m}")
    uppers = mc.sample_uppers(m, count, seed, threads=threads)
    y = mc.uppers_to_full(uppers, m)
    alpha = y.sum(axis=2) / m
    gamma = y - (alpha[:, :, None] - alpha[:, None, :])
    mats = np.matmul(np.transpose(gamma, (0, 2, 1)), gamma)
    return mc._paired_spectra(np.linalg.eigvalsh(mats), m)[:, 0]
