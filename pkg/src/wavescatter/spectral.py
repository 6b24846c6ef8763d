"""Dense matrix form of the step and its stability factorization.

The step is v' = v A + boundary injection with A a (2n+2)^2 pentadiagonal
matrix carrying 4n nonzero entries (two per interface and direction).  A is
similar to U J with U orthogonal and J the projection that zeroes the first
and last coordinates, which pushes the whole spectrum strictly inside the
unit circle; this module builds the pieces so tests can verify that
numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DenseLimitError, StructureError, WeightRangeError
from .medium import MediumSamples, ReflectionWeights

DENSE_LIMIT = 514  # matrix dimension (n = 256); past this use power iteration


@dataclass(frozen=True)
class SpectralBundle:
    """Step matrix A, orthogonal factor U, diagonal scalings D and J, and sigma.

    D carries sigma_j = sqrt(zeta_j / zeta_{n+1}) twice per node, once for
    each direction, with trailing ones; sigma is computed by the telescoping
    product of sqrt((1+r_k)/(1-r_k)) so it exists even without samples.
    """

    A: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.A.shape[0]


def _as_weight_array(weights):
    if isinstance(weights, ReflectionWeights):
        return weights.r
    r = np.asarray(weights)
    if r.dtype != object and len(r) and np.max(np.abs(r)) >= 1.0:
        raise WeightRangeError("reflection weights must lie strictly inside (-1, 1)")
    return r


def build_step_matrix(weights) -> np.ndarray:
    """Dense step matrix; preserves object dtype so symbolic entries pass through."""
    r = _as_weight_array(weights)
    n = len(r)
    size = 2 * n + 2
    A = np.zeros((size, size), dtype=r.dtype if r.dtype == object else np.float64)
    one = 1 if r.dtype == object else 1.0
    for i in range(n):
        A[2 * i, 2 * i + 1] = r[i]
        A[2 * i, 2 * i + 2] = one + r[i]
        A[2 * i + 3, 2 * i + 1] = one - r[i]
        A[2 * i + 3, 2 * i + 2] = -r[i]
    return A


def build_bundle(weights, samples: MediumSamples | None = None) -> SpectralBundle:
    """Assemble A, U, D, J for a weight vector.

    When samples are given, sigma is cross-checkable against
    sqrt(zeta_j / zeta_{n+1}); the telescoping product is used either way.
    """
    r = _as_weight_array(weights)
    if r.dtype == object:
        raise StructureError("build_bundle needs numeric weights; use build_step_matrix for symbolic work")
    r = r.astype(np.float64)
    n = len(r)
    size = 2 * n + 2

    A = build_step_matrix(r)

    U = np.zeros((size, size))
    t = np.sqrt(1.0 - r * r)
    for i in range(n):
        U[2 * i, 2 * i + 1] = r[i]
        U[2 * i, 2 * i + 2] = t[i]
        U[2 * i + 3, 2 * i + 1] = t[i]
        U[2 * i + 3, 2 * i + 2] = -r[i]
    U[1, 0] = 1.0
    U[size - 2, size - 1] = 1.0

    ratios = np.sqrt((1.0 + r) / (1.0 - r))
    sigma = np.cumprod(ratios[::-1])[::-1] if n else np.empty(0)
    D = np.concatenate((np.repeat(sigma, 2), [1.0, 1.0]))

    J = np.ones(size)
    J[0] = J[-1] = 0.0

    for arr in (A, U, D, J, sigma):
        arr.setflags(write=False)
    return SpectralBundle(A=A, U=U, D=D, J=J, sigma=sigma)


def factorization_residual(bundle: SpectralBundle) -> float:
    """Max-abs entry of A - D (U J) D^{-1}; zero in exact arithmetic."""
    UJ = bundle.U * bundle.J[np.newaxis, :]
    similar = (bundle.D[:, np.newaxis] * UJ) / bundle.D[np.newaxis, :]
    return float(np.max(np.abs(bundle.A - similar)))


def unitarity_residual(bundle: SpectralBundle) -> float:
    """Max-abs entry of U U^T - I."""
    size = bundle.size
    return float(np.max(np.abs(bundle.U @ bundle.U.T - np.eye(size))))


def spectral_radius(A: np.ndarray, dense_limit: int = DENSE_LIMIT) -> float:
    """Largest eigenvalue modulus via the dense eigensolver."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise StructureError(f"spectral radius needs a square matrix, got shape {A.shape}")
    if A.shape[0] > dense_limit:
        raise DenseLimitError(
            f"matrix dimension {A.shape[0]} exceeds the dense limit {dense_limit}; "
            "use power iteration for larger systems"
        )
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def matrix_step_reference(v, bundle: SpectralBundle, left_in: float, right_in: float):
    """One step as a dense row-vector product: the O(n^2) oracle for the stencil."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (bundle.size,):
        raise StructureError(f"state length {v.shape} does not match matrix size {bundle.size}")
    out = v @ bundle.A
    out[0] += left_in
    out[-1] += right_in
    return out
