"""Multivariate Gaussian calculus with first-class singular covariances.

Conditioning on linear statistics is done through the square root of the
covariance: with S = cov^(1/2) and B = M S, the conditional covariance is
S (I - P) S where P projects onto the row space of B. This equals the
textbook pseudo-inverse form cov - cov M' (M cov M')^+ M cov but stays
symmetric PSD by construction and absorbs linearly dependent constraint
rows through the singular-value cutoff.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InconsistentConstraintError,
    NegativeVarianceError,
    NonpositiveVarianceError,
    ValidationError,
)

SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10
# Eigenvalues of M cov M' below EIG_CUTOFF * largest count as zero; the
# equivalent singular-value cutoff on B = M cov^(1/2) is its square root.
EIG_CUTOFF = 1e-12
VARIANCE_CLAMP = 1e-12
INCONSISTENCY_TOL = 1e-8


class DegenerateEntropy:
    """Entropy of a point mass: a distinguished signal, not a numeric -inf.

    Compares equal to itself and strictly below every real number, so
    entropy chains can order degenerate and finite values explicitly.
    """

    __slots__ = ()

    def __repr__(self):
        return "DegenerateEntropy"

    def __eq__(self, other):
        return isinstance(other, DegenerateEntropy)

    def __hash__(self):
        return hash(DegenerateEntropy)

    def __lt__(self, other):
        if isinstance(other, DegenerateEntropy):
            return False
        if isinstance(other, (int, float)):
            return True
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (DegenerateEntropy, int, float)):
            return True
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (DegenerateEntropy, int, float)):
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, DegenerateEntropy):
            return True
        if isinstance(other, (int, float)):
            return False
        return NotImplemented


DEGENERATE_ENTROPY = DegenerateEntropy()


@dataclass(frozen=True)
class GaussianVector:
    """Mean vector plus symmetric PSD covariance; rank deficiency is legal."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).copy()
        cov = np.asarray(self.covariance, dtype=float).copy()
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise DimensionMismatchError(
                f"mean shape {mean.shape} and covariance shape {cov.shape} "
                "do not describe one Gaussian vector")
        scale = max(1.0, float(np.max(np.abs(cov))) if cov.size else 1.0)
        if cov.size and np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
            raise ValidationError("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if cov.size:
            eigs = np.linalg.eigvalsh(cov)
            if eigs[0] < -PSD_TOL * max(eigs[-1], 1.0):
                raise ValidationError(
                    f"covariance has eigenvalue {eigs[0]:.3e}, not PSD")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class ConstraintSet:
    """Rows of linear functionals to be pinned to given values (usually 0)."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float)).copy()
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n_constraints(self) -> int:
        return self.rows.shape[0]


def independent_gaussian(variances) -> GaussianVector:
    """Mean-zero Gaussian with independent coordinates of the given variances."""
    v = np.asarray(variances, dtype=float)
    if np.any(v <= 0):
        raise NonpositiveVarianceError(
            "independent coordinates need strictly positive variances; "
            "degeneracy only arises through conditioning")
    return GaussianVector(np.zeros(v.size), np.diag(v))


def sum_independent(g1: GaussianVector, g2: GaussianVector) -> GaussianVector:
    """Law of the sum of two independent Gaussian vectors."""
    if g1.dim != g2.dim:
        raise DimensionMismatchError(f"dimensions {g1.dim} and {g2.dim} differ")
    return GaussianVector(g1.mean + g2.mean, g1.covariance + g2.covariance)


def _sqrt_psd(cov: np.ndarray) -> tuple:
    eigs, q = np.linalg.eigh(cov)
    eigs = np.clip(eigs, 0.0, None)
    return (q * np.sqrt(eigs)) @ q.T, float(eigs[-1]) if eigs.size else 0.0


def condition_on_value(g: GaussianVector, m: ConstraintSet,
                       values) -> GaussianVector:
    """Gaussian conditional law given the linear statistics M x = values.

    The conditional covariance does not depend on ``values``; the mean
    shifts by cov M' (M cov M')^+ (values - M mean). Raises
    InconsistentConstraintError when the requested values lie outside the
    support of M x (a probability-zero conditioning event).
    """
    rows = m.rows
    if rows.shape[0] == 0:
        return g
    if rows.shape[1] != g.dim:
        raise DimensionMismatchError(
            f"constraint rows have {rows.shape[1]} columns, Gaussian has "
            f"dimension {g.dim}")
    try:
        values = np.broadcast_to(np.asarray(values, dtype=float),
                                 (rows.shape[0],))
    except ValueError:
        raise DimensionMismatchError(
            f"expected {rows.shape[0]} conditioning values") from None

    sqrt_cov, lam_max = _sqrt_psd(g.covariance)
    b = rows @ sqrt_cov
    u, s, vt = np.linalg.svd(b, full_matrices=False)
    # Constraint directions whose variance is negligible relative to the
    # ambient covariance count as already satisfied; anchoring the cutoff
    # to the ambient scale (not just to max(s)) makes re-conditioning on
    # satisfied constraints a no-op instead of a noise amplifier.
    row_scale = float(np.max(np.linalg.norm(rows, axis=1)))
    cutoff = math.sqrt(EIG_CUTOFF) * max(s[0] if s.size else 0.0,
                                         math.sqrt(lam_max) * row_scale)
    r = int(np.sum(s > cutoff))
    u_r, s_r, vt_r = u[:, :r], s[:r], vt[:r]

    offset = values - rows @ g.mean
    residual = offset - u_r @ (u_r.T @ offset)
    tol = INCONSISTENCY_TOL * max(1.0, float(np.max(np.abs(values))),
                                  float(np.max(np.abs(rows @ g.mean))))
    if np.max(np.abs(residual), initial=0.0) > tol:
        raise InconsistentConstraintError(
            "conditioning values are unreachable: a constraint has zero "
            "variance but a nonzero offset under this Gaussian")

    mean = g.mean
    if r:
        mean = mean + sqrt_cov @ (vt_r.T @ ((u_r.T @ offset) / s_r))
    projected = sqrt_cov - (sqrt_cov @ vt_r.T) @ vt_r
    cov = projected @ sqrt_cov
    return GaussianVector(mean, 0.5 * (cov + cov.T))


def condition_on_zero(g: GaussianVector, m: ConstraintSet) -> GaussianVector:
    """Conditional law of g given that every constraint functional equals 0."""
    return condition_on_value(g, m, np.zeros(m.n_constraints))


def linear_functional_variance(g: GaussianVector, c) -> float:
    """Variance c' cov c of a linear functional; tiny negatives clamp to 0."""
    c = np.asarray(c, dtype=float)
    if c.shape != (g.dim,):
        raise DimensionMismatchError(
            f"functional has shape {c.shape}, Gaussian has dimension {g.dim}")
    var = float(c @ g.covariance @ c)
    if var < 0:
        if var < -VARIANCE_CLAMP * max(1.0, float(np.trace(g.covariance))):
            raise NegativeVarianceError(f"functional variance {var:.3e} < 0")
        var = 0.0
    return var


def entropy_scalar(variance: float, tol: float = 1e-12):
    """Differential entropy (nats) of a scalar Gaussian with this variance.

    Returns 0.5 * ln(2*pi*e*variance) for variance > tol, the
    DEGENERATE_ENTROPY signal at or below tol.
    """
    if variance < 0:
        raise NegativeVarianceError(f"variance {variance:.3e} is negative")
    if variance <= tol:
        return DEGENERATE_ENTROPY
    return 0.5 * math.log(2.0 * math.pi * math.e * variance)


def sample(g: GaussianVector, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` rows from g, reproducibly for a fixed (g, count, seed).

    Draws mean + Q sqrt(L) z through the covariance eigendecomposition, so
    singular covariances sample on their support. The generator is numpy's
    PCG64 (``numpy.random.default_rng``); identical inputs give bit-identical
    output on one build, cross-build bit-identity is not promised.
    """
    if count < 1:
        raise ValidationError("need at least one sample")
    eigs, q = np.linalg.eigh(g.covariance)
    root = q * np.sqrt(np.clip(eigs, 0.0, None))
    z = np.random.default_rng(seed).standard_normal((count, g.dim))
    return g.mean + z @ root.T
