"""Kernel functions defining GP priors.

Two families: an RBF with automatic relevance determination used for fitted
models, and the limiting kernel of an infinitely wide one-hidden-layer ReLU
network used to generate synthetic data.  The ReLU limit is the degree-1
arc-cosine kernel evaluated on bias-augmented inputs, with per-coordinate
prior variances and the 1/sqrt(fan-in + 1) layer scaling; its closed form is
pinned by a wide-network Monte-Carlo oracle in the tests rather than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionMismatch
from .gaussian import symmetrize


@dataclass(frozen=True)
class RbfArd:
    """k(x, x') = signal_variance * exp(-0.5 * sum_i (x_i - x'_i)^2 / l_i^2)."""

    lengthscales: np.ndarray
    signal_variance: float = 1.0

    def __post_init__(self):
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=float))
        object.__setattr__(self, "lengthscales", ls)
        if np.any(ls <= 0) or self.signal_variance <= 0:
            raise ValueError("lengthscales and signal variance must be positive")

    def to_dict(self) -> dict:
        return {
            "variant": "rbf-ard",
            "lengthscales": [float(v) for v in self.lengthscales],
            "signal_variance": float(self.signal_variance),
        }


@dataclass(frozen=True)
class ReluLimit:
    """Infinite-width one-hidden-layer ReLU network kernel.

    weight_variance is the prior variance of every input/hidden weight,
    bias_variance the prior variance of the bias coordinate appended to
    each layer's activations.
    """

    weight_variance: float = 1.0
    bias_variance: float = 1.0

    def __post_init__(self):
        if self.weight_variance <= 0 or self.bias_variance < 0:
            raise ValueError("weight variance must be > 0, bias variance >= 0")

    def to_dict(self) -> dict:
        return {
            "variant": "relu-limit",
            "weight_variance": float(self.weight_variance),
            "bias_variance": float(self.bias_variance),
        }


KernelSpec = RbfArd | ReluLimit


def kernel_from_dict(d: dict) -> KernelSpec:
    variant = d.get("variant")
    if variant == "rbf-ard":
        return RbfArd(np.asarray(d["lengthscales"], dtype=float),
                      float(d["signal_variance"]))
    if variant == "relu-limit":
        return ReluLimit(float(d["weight_variance"]), float(d["bias_variance"]))
    raise ValueError(f"unknown kernel variant {variant!r}")


def _check_inputs(X: np.ndarray, X2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    X2 = np.atleast_2d(np.asarray(X2, dtype=float))
    if X.shape[1] != X2.shape[1]:
        raise DimensionMismatch(
            f"input dims differ: {X.shape[1]} vs {X2.shape[1]}"
        )
    return X, X2


def _relu_moment(cos_theta: np.ndarray) -> np.ndarray:
    # E[relu(u) relu(v)] for unit-variance jointly Gaussian (u, v):
    # (sin t + (pi - t) cos t) / (2 pi) with t the angle between them.
    c = np.clip(cos_theta, -1.0, 1.0)
    theta = np.arccos(c)
    return (np.sin(theta) + (np.pi - theta) * c) / (2.0 * np.pi)


def gram(spec: KernelSpec, X: np.ndarray, X2: np.ndarray | None = None) -> np.ndarray:
    """Kernel matrix [k(x_i, x2_j)]; exactly symmetric when X2 is omitted."""
    same = X2 is None or X2 is X
    X, X2 = _check_inputs(X, X if X2 is None else X2)
    if isinstance(spec, RbfArd):
        if spec.lengthscales.shape[0] != X.shape[1]:
            raise DimensionMismatch(
                f"{spec.lengthscales.shape[0]} lengthscales for "
                f"{X.shape[1]}-dimensional inputs"
            )
        Xs = X / spec.lengthscales
        X2s = X2 / spec.lengthscales
        sq = cdist(Xs, X2s, metric="sqeuclidean")
        k = spec.signal_variance * np.exp(-0.5 * sq)
    elif isinstance(spec, ReluLimit):
        d = X.shape[1]
        scale = d + 1.0
        inner = (spec.weight_variance * (X @ X2.T) + spec.bias_variance) / scale
        nx = (spec.weight_variance * np.sum(X * X, axis=1)
              + spec.bias_variance) / scale
        nx2 = (spec.weight_variance * np.sum(X2 * X2, axis=1)
               + spec.bias_variance) / scale
        norm = np.sqrt(np.outer(nx, nx2))
        # norm can be 0 only at x = 0 with zero bias variance, where the
        # function value is deterministically 0
        with np.errstate(divide="ignore", invalid="ignore"):
            cos = np.where(norm > 0, inner / np.where(norm > 0, norm, 1.0), 0.0)
        k = spec.weight_variance * norm * _relu_moment(cos)
    else:
        raise TypeError(f"unknown kernel spec {type(spec).__name__}")
    if same:
        k = symmetrize(k)
    return k


def gram_diag(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Diagonal of gram(spec, X, X) without forming the matrix."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if isinstance(spec, RbfArd):
        return np.full(X.shape[0], spec.signal_variance)
    if isinstance(spec, ReluLimit):
        scale = X.shape[1] + 1.0
        nx = (spec.weight_variance * np.sum(X * X, axis=1)
              + spec.bias_variance) / scale
        # angle 0 with itself: E[relu(u)^2] = var(u) / 2
        return spec.weight_variance * nx / 2.0
    raise TypeError(f"unknown kernel spec {type(spec).__name__}")
