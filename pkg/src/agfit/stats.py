"""Sample covariance, Gaussian log-likelihood, deviance and the chi-square test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, special

from .errors import DimensionMismatch, InvalidDf, NotPositiveDefinite


@dataclass(frozen=True)
class SampleStats:
    """Sufficient statistics of a sample: covariance matrix and case count.

    ``mean_adjusted`` records whether the covariance was computed around
    the sample means (losing one case of information) or around zero.
    """

    s: np.ndarray
    n: int
    p: int
    mean_adjusted: bool = False

    @classmethod
    def from_covariance(cls, s, n: int, *, mean_adjusted: bool = False) -> "SampleStats":
        """Wrap an externally supplied covariance matrix.

        The matrix must be symmetric positive definite; the case count is
        taken on trust (a correlation matrix with its sample size, for
        example, is accepted regardless of how small ``n`` is).
        """
        s = np.array(s, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise DimensionMismatch("covariance matrix must be square")
        if n < 1:
            raise ValueError("sample size must be at least 1")
        if not np.allclose(s, s.T, atol=1e-10):
            raise NotPositiveDefinite("covariance matrix is not symmetric")
        try:
            linalg.cholesky(s, lower=True)
        except linalg.LinAlgError:
            raise NotPositiveDefinite("covariance matrix is not positive definite") from None
        return cls(0.5 * (s + s.T), int(n), s.shape[0], mean_adjusted)


def empirical_covariance(y, *, mean_adjusted: bool = False) -> SampleStats:
    """Covariance of a variables-by-cases data matrix, scaled by 1/n.

    With ``mean_adjusted`` the row means are removed first.  A rank
    deficient result (too few cases, or collinear or constant rows)
    raises :class:`NotPositiveDefinite`.
    """
    y = np.asarray(y, dtype=float)
    if y.ndim != 2:
        raise DimensionMismatch("data must be a variables-by-cases matrix")
    p, n = y.shape
    if n < 1:
        raise ValueError("data matrix has no cases")
    if mean_adjusted:
        y = y - y.mean(axis=1, keepdims=True)
    s = (y @ y.T) / n
    return SampleStats.from_covariance(s, n, mean_adjusted=mean_adjusted)


def _chol_logdet(m: np.ndarray, what: str):
    try:
        c = linalg.cho_factor(m, lower=True)
    except linalg.LinAlgError:
        raise NotPositiveDefinite(f"{what} is not positive definite") from None
    logdet = 2.0 * np.sum(np.log(np.diag(c[0])))
    return c, float(logdet)


def log_likelihood(sigma: np.ndarray, stats: SampleStats) -> float:
    """Gaussian log-likelihood of a covariance matrix, up to an additive constant.

    ``-(n/2) * (log det sigma + trace(inv(sigma) @ s))``.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (stats.p, stats.p):
        raise DimensionMismatch("sigma does not match the sample dimension")
    c, logdet = _chol_logdet(sigma, "sigma")
    trace = float(np.trace(linalg.cho_solve(c, stats.s)))
    return -0.5 * stats.n * (logdet + trace)


def deviance(sigma_hat: np.ndarray, stats: SampleStats) -> float:
    """Likelihood ratio of the fitted model against the saturated model.

    ``n * (trace(inv(sigma_hat) @ s) - log det(inv(sigma_hat) @ s) - p)``,
    equal to twice the log-likelihood gap to ``sigma = s``.
    """
    sigma_hat = np.asarray(sigma_hat, dtype=float)
    if sigma_hat.shape != (stats.p, stats.p):
        raise DimensionMismatch("sigma_hat does not match the sample dimension")
    c, logdet_hat = _chol_logdet(sigma_hat, "sigma_hat")
    _, logdet_s = _chol_logdet(stats.s, "sample covariance")
    trace = float(np.trace(linalg.cho_solve(c, stats.s)))
    return stats.n * (trace - (logdet_s - logdet_hat) - stats.p)


def degrees_of_freedom(g) -> int:
    """Free entries of an unrestricted covariance minus model parameters.

    The model spends one parameter per vertex and one per edge of any
    kind, so the test has ``p (p + 1) / 2 - (p + #edges)`` degrees of
    freedom.
    """
    p = g.n
    return p * (p + 1) // 2 - (p + g.edge_count)


def chi_square_pvalue(dev: float, df: int) -> float:
    """Upper tail of the chi-square distribution at the observed deviance."""
    if int(df) != df or df < 1:
        raise InvalidDf(f"degrees of freedom must be a positive integer, got {df}")
    if dev < 0:
        if dev < -1e-8:
            raise ValueError(f"deviance must be nonnegative, got {dev}")
        dev = 0.0
    return float(special.gammaincc(df / 2.0, dev / 2.0))
