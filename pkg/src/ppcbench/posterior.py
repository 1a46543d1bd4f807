"""Uniform predictive summaries: mean / covariance / correlation at a set of
query locations, built either from an explicit Gaussian or from posterior
function samples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroVariance
from .gaussian import symmetrize

# Correlation magnitudes are clamped below 1 before any log-likelihood use so
# batch covariances stay invertible.
CORR_CLAMP = 1.0 - 1e-12

VARIANCE_FLOOR = 1e-12


@dataclass(frozen=True)
class PredictiveSummary:
    """A model's joint Gaussian prediction at n locations.

    `cov` is the noise-free function covariance; `noise_variance` the model's
    homoscedastic observation noise.  `corr` is the function correlation
    matrix (PSD-repaired when estimated from samples).
    """

    locations: np.ndarray
    mean: np.ndarray
    cov: np.ndarray
    marginal_sd: np.ndarray
    corr: np.ndarray
    noise_variance: float

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    def obs_sd(self) -> np.ndarray:
        """Observation-level marginal deviations sqrt(sigma_x^2 + sigma_n^2)."""
        return np.sqrt(self.marginal_sd**2 + self.noise_variance)

    def obs_corr(self) -> np.ndarray:
        """Correlation of the observation-level covariance cov + sigma_n^2 I.

        Off-diagonal magnitudes are clamped below 1; the diagonal is exactly 1.
        """
        sd = self.obs_sd()
        c = (self.marginal_sd[:, None] * self.corr * self.marginal_sd[None, :])
        c = c / np.outer(sd, sd)
        c[np.diag_indices_from(c)] += self.noise_variance / sd**2
        c = np.clip(symmetrize(c), -CORR_CLAMP, CORR_CLAMP)
        np.fill_diagonal(c, 1.0)
        return c


def _correlation_from_cov(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    var = np.diag(cov).copy()
    if np.any(var <= VARIANCE_FLOOR):
        bad = int(np.argmin(var))
        raise ZeroVariance(
            f"marginal variance {var[bad]:.3e} at location {bad} is too small "
            "for correlations"
        )
    sd = np.sqrt(var)
    corr = cov / np.outer(sd, sd)
    corr = symmetrize(corr)
    np.fill_diagonal(corr, 1.0)
    return sd, corr


def summary_from_gaussian(locations: np.ndarray, mean: np.ndarray,
                          cov: np.ndarray, noise_variance: float
                          ) -> PredictiveSummary:
    """Summary from an explicit (noise-free) Gaussian prediction."""
    locations = np.atleast_2d(np.asarray(locations, dtype=float))
    mean = np.asarray(mean, dtype=float)
    cov = symmetrize(cov)
    if not (locations.shape[0] == mean.shape[0] == cov.shape[0]):
        raise DimensionMismatch("locations, mean and covariance disagree")
    sd, corr = _correlation_from_cov(cov)
    return PredictiveSummary(locations=locations, mean=mean, cov=cov,
                             marginal_sd=sd, corr=corr,
                             noise_variance=float(noise_variance))


@dataclass(frozen=True)
class FunctionSampleSet:
    """m posterior function draws evaluated at n locations.

    `aleatoric_variances` is set only by mean-variance ensembles, where each
    member also predicts an observation variance.
    """

    samples: np.ndarray
    locations: np.ndarray
    noise_variance: float
    aleatoric_variances: np.ndarray | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[0] < 2:
            raise DimensionMismatch("need an (m >= 2) x n sample matrix")
        if not np.all(np.isfinite(samples)):
            raise ValueError("sample matrix contains non-finite values")
        object.__setattr__(self, "samples", samples)

    @property
    def m(self) -> int:
        return self.samples.shape[0]

    @property
    def n(self) -> int:
        return self.samples.shape[1]


def summary_from_samples(s: FunctionSampleSet) -> PredictiveSummary:
    """Monte-Carlo summary: 1/m covariance estimator, PSD-repaired correlations.

    The 1/m (not 1/(m-1)) normalization matches the estimator the correlation
    metrics are defined on; correlations are normalization-invariant anyway.
    """
    mu = s.samples.mean(axis=0)
    resid = s.samples - mu
    cov = symmetrize(resid.T @ resid / s.m)
    sd, corr = _correlation_from_cov(cov)
    corr = psd_repair(corr)
    return PredictiveSummary(locations=np.atleast_2d(s.locations), mean=mu,
                             cov=cov, marginal_sd=sd, corr=corr,
                             noise_variance=float(s.noise_variance))


def psd_repair(c: np.ndarray, floor: float = 1e-6) -> np.ndarray:
    """Make an indefinite correlation matrix usable.

    Input that is already PSD (min eigenvalue >= -1e-9 on unit-diagonal scale)
    is returned unchanged, so the repair is idempotent and never perturbs a
    valid matrix.  Otherwise eigenvalues are clipped at `floor` and the matrix
    rescaled back to unit diagonal; the clip level is inflated until the
    rescaled result keeps its smallest eigenvalue at or above `floor`.
    """
    c = symmetrize(c)
    eigvals = np.linalg.eigvalsh(c)
    if eigvals[0] >= -1e-9:
        return c
    level = floor
    for _ in range(60):
        vals, vecs = np.linalg.eigh(c)
        repaired = (vecs * np.maximum(vals, level)) @ vecs.T
        d = np.sqrt(np.diag(repaired))
        repaired = symmetrize(repaired / np.outer(d, d))
        np.fill_diagonal(repaired, 1.0)
        low = np.linalg.eigvalsh(repaired)[0]
        if low >= floor:
            return repaired
        level *= 1.5
    return repaired
