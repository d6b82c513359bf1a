"""Pluriharmonic mappings ``f = h + conj(g)`` on the unit ball of C^n.

A holomorphic part is any object with ``n``, ``value(z)``, ``jacobian(z)``,
``hessian(z)`` and ``describe()``.  Two concrete models are provided:
:class:`PolynomialModel` (exact derivatives from multi-index coefficients)
and :class:`ClosedFormModel` (user-supplied evaluators, used for the
extremal families).

Jacobians are indexed ``J[i, j] = d h_i / d z_j`` and hessians
``H[i, j, l] = d^2 h_i / d z_j d z_l``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import BadDirection, DomainError, SingularMatrix, Unsupported

MAX_DEGREE = 16
# queries with ||z|| >= 1 - BALL_MARGIN are rejected
BALL_MARGIN = 1e-9
# relative central-difference step (scaled by max(1, ||z||))
FD_STEP = 1e-6
HESSIAN_FD_STEP = 1e-5


def as_point(z, n: int) -> np.ndarray:
    """Coerce ``z`` to a complex n-vector strictly inside the unit ball."""
    arr = np.asarray(z, dtype=complex).reshape(-1)
    if arr.shape != (n,):
        raise DomainError(f"expected a point in C^{n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point has non-finite coordinates")
    if np.linalg.norm(arr) >= 1.0 - BALL_MARGIN:
        raise DomainError(f"||z|| = {np.linalg.norm(arr):.12g} is not inside the unit ball")
    return arr


def _vector(v, n: int) -> np.ndarray:
    arr = np.asarray(v, dtype=complex).reshape(-1)
    if arr.shape != (n,):
        raise DomainError(f"expected a vector in C^{n}, got shape {arr.shape}")
    return arr


class PolynomialModel:
    """Holomorphic polynomial map ``z -> sum_beta c_beta z^beta``.

    ``coefficients`` maps a multi-index (tuple of n nonnegative ints) to a
    complex n-vector.  Total degree is capped at :data:`MAX_DEGREE`.
    """

    def __init__(self, n: int, coefficients: Mapping[Sequence[int], Sequence[complex]]):
        if int(n) < 1:
            raise DomainError("dimension must be >= 1")
        self.n = int(n)
        merged: dict[tuple[int, ...], np.ndarray] = {}
        for beta, vec in coefficients.items():
            beta = tuple(int(b) for b in beta)
            if len(beta) != self.n or any(b < 0 for b in beta):
                raise DomainError(f"bad multi-index {beta} for n={self.n}")
            if sum(beta) > MAX_DEGREE:
                raise DomainError(f"degree {sum(beta)} exceeds cap {MAX_DEGREE}")
            c = _vector(vec, self.n)
            if not np.all(np.isfinite(c)):
                raise DomainError(f"non-finite coefficient at {beta}")
            merged[beta] = merged.get(beta, 0) + c
        keys = sorted(merged)
        self._exponents = np.array(keys, dtype=int).reshape(len(keys), self.n)
        self._coeffs = np.array([merged[k] for k in keys], dtype=complex).reshape(len(keys), self.n)

    @property
    def coefficients(self) -> dict[tuple[int, ...], np.ndarray]:
        return {tuple(int(b) for b in e): c.copy() for e, c in zip(self._exponents, self._coeffs)}

    @property
    def degree(self) -> int:
        return int(self._exponents.sum(axis=1).max()) if len(self._exponents) else 0

    def _monomials(self, z: np.ndarray, exps: np.ndarray) -> np.ndarray:
        # exps may contain negative entries only where the caller masks the row out
        return np.prod(np.power(z[None, :], np.maximum(exps, 0)), axis=1)

    def value(self, z) -> np.ndarray:
        z = _vector(z, self.n)
        if not len(self._exponents):
            return np.zeros(self.n, dtype=complex)
        return self._monomials(z, self._exponents) @ self._coeffs

    def jacobian(self, z) -> np.ndarray:
        z = _vector(z, self.n)
        jac = np.zeros((self.n, self.n), dtype=complex)
        if not len(self._exponents):
            return jac
        for j in range(self.n):
            e = self._exponents.copy()
            factor = e[:, j].astype(float)
            e[:, j] -= 1
            mono = np.where(factor > 0, factor * self._monomials(z, e), 0.0)
            jac[:, j] = mono @ self._coeffs
        return jac

    def hessian(self, z) -> np.ndarray:
        z = _vector(z, self.n)
        hess = np.zeros((self.n, self.n, self.n), dtype=complex)
        if not len(self._exponents):
            return hess
        for j in range(self.n):
            for l in range(j, self.n):
                e = self._exponents.copy()
                factor = e[:, j].astype(float)
                e[:, j] -= 1
                factor = factor * e[:, l]
                e[:, l] -= 1
                mono = np.where(factor > 0, factor * self._monomials(z, e), 0.0)
                col = mono @ self._coeffs
                hess[:, j, l] = col
                hess[:, l, j] = col
        return hess

    def describe(self) -> dict:
        return {
            "kind": "polynomial",
            "coefficients": {
                ",".join(str(b) for b in beta): [[c.real, c.imag] for c in vec]
                for beta, vec in self.coefficients.items()
            },
        }


def identity_model(n: int) -> PolynomialModel:
    return PolynomialModel(n, {tuple(int(i == j) for i in range(n)): np.eye(n)[j] for j in range(n)})


def zero_model(n: int) -> PolynomialModel:
    return PolynomialModel(n, {})


def linear_model(matrix) -> PolynomialModel:
    """The linear map ``z -> A z``."""
    a = np.atleast_2d(np.asarray(matrix, dtype=complex))
    n = a.shape[0]
    return PolynomialModel(n, {tuple(int(i == j) for i in range(n)): a[:, j] for j in range(n)})


@dataclass(frozen=True, eq=False)
class ClosedFormModel:
    """Holomorphic map given by explicit evaluators.

    ``value_fn`` and ``jacobian_fn`` take a complex n-vector; ``hessian_fn``
    is optional, and without it :meth:`hessian` falls back to central
    differences of the jacobian.
    """

    n: int
    family: str
    params: dict
    value_fn: Callable[[np.ndarray], np.ndarray]
    jacobian_fn: Callable[[np.ndarray], np.ndarray]
    hessian_fn: Callable[[np.ndarray], np.ndarray] | None = None
    part: str | None = None

    def value(self, z) -> np.ndarray:
        return np.asarray(self.value_fn(_vector(z, self.n)), dtype=complex).reshape(self.n)

    def jacobian(self, z) -> np.ndarray:
        return np.asarray(self.jacobian_fn(_vector(z, self.n)), dtype=complex).reshape(self.n, self.n)

    def hessian(self, z) -> np.ndarray:
        z = _vector(z, self.n)
        if self.hessian_fn is not None:
            return np.asarray(self.hessian_fn(z), dtype=complex).reshape(self.n, self.n, self.n)
        return fd_hessian(self, z)

    def describe(self) -> dict:
        out = {"kind": "closed_form", "family": self.family, "params": dict(self.params)}
        if self.part is not None:
            out["part"] = self.part
        return out

    def self_check(self, points, tol: float = 1e-6) -> float:
        """Max jacobian discrepancy against central differences over ``points``.

        Raises :class:`DomainError` if it exceeds ``tol``.
        """
        worst = 0.0
        for z in points:
            z = _vector(z, self.n)
            err = np.max(np.abs(self.jacobian(z) - fd_jacobian(self, z)))
            worst = max(worst, float(err))
        if worst > tol:
            raise DomainError(f"closed-form jacobian disagrees with finite differences by {worst:.3e}")
        return worst


class LeftScaledModel:
    """``z -> M h(z)`` for a fixed matrix ``M``; used to form ``[Dh(0)]^-1 h``."""

    def __init__(self, base, matrix):
        self.base = base
        self.n = base.n
        self.matrix = np.asarray(matrix, dtype=complex).reshape(self.n, self.n)

    def value(self, z):
        return self.matrix @ self.base.value(z)

    def jacobian(self, z):
        return self.matrix @ self.base.jacobian(z)

    def hessian(self, z):
        return np.einsum("ik,kjl->ijl", self.matrix, self.base.hessian(z))

    def describe(self) -> dict:
        return {
            "kind": "left_scaled",
            "matrix": [[[c.real, c.imag] for c in row] for row in self.matrix],
            "base": self.base.describe(),
        }


def fd_jacobian(model, z, step: float | None = None) -> np.ndarray:
    """Central-difference jacobian of a holomorphic model (real-direction steps)."""
    z = np.asarray(z, dtype=complex)
    eps = (FD_STEP if step is None else step) * max(1.0, float(np.linalg.norm(z)))
    jac = np.zeros((model.n, model.n), dtype=complex)
    for j in range(model.n):
        e = np.zeros(model.n, dtype=complex)
        e[j] = eps
        jac[:, j] = (model.value(z + e) - model.value(z - e)) / (2 * eps)
    return jac


def fd_hessian(model, z, step: float | None = None) -> np.ndarray:
    """Central-difference hessian from the model's analytic jacobian."""
    z = np.asarray(z, dtype=complex)
    eps = (HESSIAN_FD_STEP if step is None else step) * max(1.0, float(np.linalg.norm(z)))
    hess = np.zeros((model.n, model.n, model.n), dtype=complex)
    for l in range(model.n):
        e = np.zeros(model.n, dtype=complex)
        e[l] = eps
        hess[:, :, l] = (model.jacobian(z + e) - model.jacobian(z - e)) / (2 * eps)
    return 0.5 * (hess + hess.transpose(0, 2, 1))


def bilinear(hess: np.ndarray, u, v) -> np.ndarray:
    """Evaluate the vector-valued bilinear form ``H(u, v)``."""
    return np.einsum("ijl,j,l->i", hess, np.asarray(u, dtype=complex), np.asarray(v, dtype=complex))


@dataclass(frozen=True, eq=False)
class MapModel:
    """``f = h + conj(g)`` with holomorphic parts ``h`` and ``g`` on the unit ball."""

    h: object
    g: object
    provenance: dict = field(default_factory=lambda: {"source": "user"})

    def __post_init__(self):
        if self.h.n != self.g.n:
            raise DomainError(f"h and g have different dimensions ({self.h.n} vs {self.g.n})")

    @property
    def n(self) -> int:
        return self.h.n

    def describe(self) -> dict:
        return {"n": self.n, "h": self.h.describe(), "g": self.g.describe(), "provenance": dict(self.provenance)}


@dataclass(frozen=True)
class PointDerivatives:
    z: np.ndarray
    f_value: np.ndarray
    Dh: np.ndarray
    Dg: np.ndarray


def identity_map(n: int = 1) -> MapModel:
    return MapModel(identity_model(n), zero_model(n), {"source": "builtin", "family": "identity", "n": n})


def evaluate(f: MapModel, z) -> np.ndarray:
    """``h(z) + conj(g(z))``."""
    z = as_point(z, f.n)
    return f.h.value(z) + np.conj(f.g.value(z))


def derivatives(f: MapModel, z) -> PointDerivatives:
    z = as_point(z, f.n)
    return PointDerivatives(
        z=z,
        f_value=f.h.value(z) + np.conj(f.g.value(z)),
        Dh=f.h.jacobian(z),
        Dg=f.g.jacobian(z),
    )


def directional_derivative(f: MapModel, z, theta) -> np.ndarray:
    """``Dh(z) theta + conj(Dg(z) theta)`` for a complex unit vector ``theta``."""
    z = as_point(z, f.n)
    theta = _vector(theta, f.n)
    if abs(np.linalg.norm(theta) - 1.0) > 1e-12:
        raise BadDirection(f"||theta|| = {np.linalg.norm(theta):.15g}, expected 1")
    return f.h.jacobian(z) @ theta + np.conj(f.g.jacobian(z) @ theta)


def dilatation_matrix(f: MapModel, z) -> np.ndarray:
    """``Dg(z) [Dh(z)]^-1``."""
    z = as_point(z, f.n)
    return f.g.jacobian(z) @ linalg.invert(f.h.jacobian(z))


def dilatation_norm(f: MapModel, z) -> float:
    return linalg.operator_norm(dilatation_matrix(f, z))


def real_jacobian_from(Dh: np.ndarray, Dg: np.ndarray) -> np.ndarray:
    """Real ``2n x 2n`` Jacobian, rows ``(u1, v1, ...)``, columns ``(x1, y1, ...)``."""
    n = Dh.shape[0]
    fx = Dh + np.conj(Dg)
    fy = 1j * (Dh - np.conj(Dg))
    jac = np.empty((2 * n, 2 * n))
    jac[0::2, 0::2] = fx.real
    jac[0::2, 1::2] = fy.real
    jac[1::2, 0::2] = fx.imag
    jac[1::2, 1::2] = fy.imag
    return jac


def real_jacobian(f: MapModel, z) -> np.ndarray:
    z = as_point(z, f.n)
    return real_jacobian_from(f.h.jacobian(z), f.g.jacobian(z))


def complex_block_jacobian(f: MapModel, z) -> np.ndarray:
    """``[[Dh, conj Dg], [Dg, conj Dh]]``, whose determinant is ``det J_f``."""
    z = as_point(z, f.n)
    Dh, Dg = f.h.jacobian(z), f.g.jacobian(z)
    return np.block([[Dh, np.conj(Dg)], [Dg, np.conj(Dh)]])


def lambda_extremes(f: MapModel, z) -> tuple[float, float]:
    """``(Lambda_f, lambda_f)``: extreme singular values of the real Jacobian."""
    s = linalg.singular_values(real_jacobian(f, z))
    return float(s[0]), float(s[-1])


def factored_det(Dh: np.ndarray, Dg: np.ndarray) -> float:
    """``|det Dh|^2 det(I - B conj(B))`` with ``B = Dg [Dh]^-1``."""
    b = Dg @ linalg.invert(Dh)
    inner = linalg.det(np.eye(Dh.shape[0]) - b @ np.conj(b))
    return abs(linalg.det(Dh)) ** 2 * inner.real


def det_jacobian(f: MapModel, z) -> float:
    z = as_point(z, f.n)
    return factored_det(f.h.jacobian(z), f.g.jacobian(z))


def is_sense_preserving(f: MapModel, z, k: float) -> bool:
    """True iff ``Dh(z)`` is invertible and the dilatation norm is at most ``k``."""
    try:
        return dilatation_norm(f, z) <= k + 1e-12
    except SingularMatrix:
        return False


def second_derivative_at_zero(h) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """``D^2 h(0)`` as a symmetric bilinear evaluator ``(theta, eta) -> C^n``."""
    if not hasattr(h, "hessian"):
        raise Unsupported(f"{type(h).__name__} has no second derivative")
    hess = h.hessian(np.zeros(h.n, dtype=complex))
    return lambda theta, eta: bilinear(hess, _vector(theta, h.n), _vector(eta, h.n))
