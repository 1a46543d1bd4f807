"""Dense multivariate-Gaussian primitives used by every other module.

Covariances are factored once (`cholesky`) and handed around as a
`CholFactor`, so log-densities, samples and KL divergences all run on the
same triangular solves.  Everything is log-space; there is deliberately no
raw-likelihood code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegenerateInput, DimensionMismatch, NotPositiveDefinite

LOG_2PI = float(np.log(2.0 * np.pi))

# Standard remedy for near-singular kernel matrices; recorded per factor so
# every experiment output is auditable.
DEFAULT_JITTER_SCHEDULE = (0.0, 1e-10, 1e-8, 1e-6, 1e-4)


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return the exactly symmetric part (a + a.T) / 2."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


@dataclass(frozen=True)
class CholFactor:
    """Lower Cholesky factor of a matrix plus the jitter that made it work."""

    lower: np.ndarray
    jitter_used: float

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def log_det(self) -> float:
        """log-determinant of the factored matrix."""
        return 2.0 * float(np.sum(np.log(np.diag(self.lower))))

    def solve_lower(self, b: np.ndarray) -> np.ndarray:
        """Solve L x = b."""
        if self.n == 0:
            return np.zeros_like(b)
        return solve_triangular(self.lower, b, lower=True)

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve (L L^T) x = b."""
        if self.n == 0:
            return np.zeros_like(b)
        z = solve_triangular(self.lower, b, lower=True)
        return solve_triangular(self.lower.T, z, lower=False)

    def covariance(self) -> np.ndarray:
        """Reconstruct the factored matrix L L^T."""
        return self.lower @ self.lower.T


def cholesky(a: np.ndarray, jitter_schedule=DEFAULT_JITTER_SCHEDULE) -> CholFactor:
    """Factor a symmetric matrix, escalating jitter until it succeeds.

    Tries ``a + jitter * I`` for each jitter in the (ascending, 0-first)
    schedule and returns the factor for the smallest jitter that is positive
    definite.  Raises NotPositiveDefinite when the whole schedule fails.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    schedule = [float(j) for j in jitter_schedule]
    if not schedule or schedule[0] != 0.0 or any(
        schedule[i] >= schedule[i + 1] for i in range(len(schedule) - 1)
    ):
        raise ValueError("jitter schedule must be ascending and start at 0")
    n = a.shape[0]
    if n == 0:
        return CholFactor(lower=np.zeros((0, 0)), jitter_used=0.0)
    eye = np.eye(n)
    for jitter in schedule:
        try:
            lower = np.linalg.cholesky(a + jitter * eye)
        except np.linalg.LinAlgError:
            continue
        return CholFactor(lower=lower, jitter_used=jitter)
    raise NotPositiveDefinite(
        f"matrix of size {n} not positive definite at any jitter in {schedule}"
    )


@dataclass(frozen=True)
class MvnDist:
    """Multivariate normal held as mean plus Cholesky factor of covariance."""

    mean: np.ndarray
    chol: CholFactor

    @property
    def n(self) -> int:
        return self.mean.shape[0]


def mvn_from_cov(mean: np.ndarray, cov: np.ndarray,
                 jitter_schedule=DEFAULT_JITTER_SCHEDULE) -> MvnDist:
    """Build an MvnDist by factoring a covariance matrix."""
    mean = np.asarray(mean, dtype=float)
    factor = cholesky(symmetrize(cov), jitter_schedule)
    if factor.n != mean.shape[0]:
        raise DimensionMismatch(
            f"mean has length {mean.shape[0]} but covariance is {factor.n}x{factor.n}"
        )
    return MvnDist(mean=mean, chol=factor)


def mvn_logpdf(y: np.ndarray, dist: MvnDist):
    """Exact Gaussian log-density via triangular solves.

    `y` may be a single n-vector or a batch shaped (..., n); batched input
    returns one log-density per leading index.
    """
    y = np.asarray(y, dtype=float)
    n = dist.n
    if y.shape[-1:] != (n,):
        raise DimensionMismatch(f"y has trailing dim {y.shape[-1:]}, expected {n}")
    resid = (y - dist.mean).reshape(-1, n)
    z = dist.chol.solve_lower(resid.T)
    quad = np.sum(z * z, axis=0)
    out = -0.5 * (n * LOG_2PI + dist.chol.log_det() + quad)
    if y.ndim == 1:
        return float(out[0])
    return out.reshape(y.shape[:-1])


def mvn_sample(dist: MvnDist, rng: np.random.Generator, m: int) -> np.ndarray:
    """Draw m samples as mean + L z with z standard normal; (m, n) array."""
    if m < 1:
        raise ValueError("m must be >= 1")
    z = rng.standard_normal((m, dist.n))
    return dist.mean + z @ dist.chol.lower.T


def mvn_kl(p: MvnDist, q: MvnDist) -> float:
    """Closed-form KL(p || q) between Gaussians sharing a dimension.

    0.5 * (tr(Sq^-1 Sp) + (mq - mp)^T Sq^-1 (mq - mp) - n
           + log|Sq| - log|Sp|)
    with both traces and quadratics done on the triangular factors.
    """
    if p.n != q.n:
        raise DimensionMismatch(f"dimensions differ: {p.n} vs {q.n}")
    n = p.n
    a = q.chol.solve_lower(p.chol.lower)
    trace = float(np.sum(a * a))
    z = q.chol.solve_lower(p.mean - q.mean)
    quad = float(z @ z)
    return 0.5 * (trace + quad - n + q.chol.log_det() - p.chol.log_det())


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation of two equal-length vectors, clipped to [-1, 1].

    Raises DegenerateInput on zero-variance input instead of returning 0:
    silent zeros would corrupt metacorrelation averages downstream.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise DimensionMismatch(f"lengths differ: {a.shape[0]} vs {b.shape[0]}")
    if a.size < 2:
        raise DimensionMismatch("need at least 2 entries")
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise DegenerateInput("constant input has no correlation")
    ac = a - a.mean()
    bc = b - b.mean()
    denom = float(np.sqrt(np.sum(ac * ac) * np.sum(bc * bc)))
    if denom == 0.0:
        raise DegenerateInput("zero variance after centering")
    return float(np.clip(float(ac @ bc) / denom, -1.0, 1.0))
