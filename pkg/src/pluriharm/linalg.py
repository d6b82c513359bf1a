"""Small dense complex/real matrix helpers.

Matrices are plain square numpy arrays (complex for ``Dh``, ``Dg`` and
friends, real for the ``2n x 2n`` real Jacobian).  Everything here is a pure
function of its input.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, SingularMatrix

# invert() refuses matrices whose smallest singular value is below this
# fraction of max(1, ||A||)
SINGULAR_RTOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a finite square matrix and return it as an ndarray."""
    arr = np.asarray(a)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DomainError(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.number):
        raise DomainError("matrix entries must be numeric")
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix entries must be finite")
    if not np.iscomplexobj(arr):
        arr = arr.astype(float)
    return arr


def singular_values(a) -> np.ndarray:
    """Singular values of ``a``, sorted nonincreasing."""
    arr = as_matrix(a)
    s = np.linalg.svd(arr, compute_uv=False)
    return np.sort(np.abs(s))[::-1]


def operator_norm(a) -> float:
    """Largest singular value, i.e. max of ``||A theta||`` over unit ``theta``."""
    return float(singular_values(a)[0])


def min_gain(a) -> float:
    """Smallest singular value, i.e. min of ``||A theta||`` over unit ``theta``."""
    return float(singular_values(a)[-1])


def det(a):
    """Determinant via LU with partial pivoting (LAPACK getrf).

    Returns a Python ``complex`` for complex input and ``float`` otherwise.
    """
    arr = as_matrix(a)
    d = np.linalg.det(arr)
    return complex(d) if np.iscomplexobj(arr) else float(d)


def invert(a) -> np.ndarray:
    """Inverse of ``a``; raises :class:`SingularMatrix` if numerically singular."""
    arr = as_matrix(a)
    s = singular_values(arr)
    if s[-1] < SINGULAR_RTOL * max(1.0, s[0]):
        raise SingularMatrix(
            f"smallest singular value {s[-1]:.3e} below tolerance "
            f"{SINGULAR_RTOL * max(1.0, s[0]):.3e}"
        )
    return np.linalg.solve(arr, np.eye(arr.shape[0], dtype=arr.dtype))


def gain_lower_bound(a) -> float:
    """``|det A| / ||A||^(n-1)``, the lower bound on ``||A theta||`` over unit ``theta``."""
    arr = as_matrix(a)
    nrm = operator_norm(arr)
    if nrm == 0.0:
        raise DomainError("bound undefined for the zero matrix")
    # scale first so nrm ** (n - 1) cannot underflow or overflow
    return abs(det(arr / nrm)) * nrm
