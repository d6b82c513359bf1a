"""Closed-form bounds for PH(alpha, k), the covering integral, and the k_n root."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import quadrature
from .errors import DomainError

# constant of the univalent-ball radius for quasiregular maps, taken as exact
M_CONSTANT = 4.2
QUAD_ABS_TOL = 1e-12


@dataclass(frozen=True)
class BoundParams:
    """Scalar data consumed by the bound formulas.

    ``norm_dh0_inv = ||[Dh(0)]^-1||``, ``norm_dh0 = ||Dh(0)||`` and
    ``det_dh0 = |det Dh(0)|``; ``c`` is a dilatation cap and ``K`` a
    quasiregularity constant.
    """

    n: int = 1
    alpha: float = 1.0
    k: float = 0.0
    norm_dh0_inv: float = 1.0
    norm_dh0: float = 1.0
    det_dh0: float = 1.0
    c: float = 0.0
    K: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not self.alpha >= 1.0 or not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be a finite real >= 1, got {self.alpha}")
        if not 0.0 <= self.k < 1.0:
            raise DomainError(f"k must lie in [0, 1), got {self.k}")
        if not 0.0 <= self.c < 1.0:
            raise DomainError(f"c must lie in [0, 1), got {self.c}")
        if not self.K >= 1.0 or not math.isfinite(self.K):
            raise DomainError(f"K must be a finite real >= 1, got {self.K}")
        if not (self.norm_dh0_inv > 0 and self.norm_dh0 > 0 and self.det_dh0 >= 0):
            raise DomainError("need norm_dh0_inv > 0, norm_dh0 > 0, det_dh0 >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RootResult:
    n: int
    k_n: float
    residual: float
    iterations: int

    @property
    def table_value(self) -> str:
        """``k_n`` to 6 significant figures, as tabulated."""
        return f"{self.k_n:.6g}"


def _radius(r: float, *, closed: bool = False) -> float:
    r = float(r)
    if not math.isfinite(r) or r < 0.0 or (r > 1.0 if closed else r >= 1.0):
        raise DomainError(f"radius {r} outside {'[0, 1]' if closed else '[0, 1)'}")
    return r


def distortion_upper(r: float, p: BoundParams) -> float:
    r = _radius(r)
    a = p.alpha
    return (1 + p.k) / (1 - p.k) * (1 + r) ** (a - 1) / (1 - r) ** (a + 1)


def distortion_lower(r: float, p: BoundParams) -> float:
    r = _radius(r)
    a = p.alpha
    return (1 - p.k) / p.norm_dh0_inv * (1 - r) ** (a - 1) / (1 + r) ** (a + 1)


def growth_bound(r: float, p: BoundParams) -> float:
    r = _radius(r)
    a = p.alpha
    # expm1 keeps precision for small r
    return (1 + p.k) / (2 * a * (1 - p.k)) * math.expm1(a * (math.log1p(r) - math.log1p(-r)))


def covering_exponents(n: int, alpha: float) -> tuple[float, float]:
    """Exponents ``(p, q)`` of the integrand ``(1-x)^p / (1+x)^q``."""
    return (2 * n - 1) * alpha + (n - 3) / 2, (2 * n - 1) * alpha - (n - 3) / 2


def covering_integral(r: float, n: int, alpha: float) -> float:
    """``int_0^r (1-x)^p / (1+x)^q dx`` by adaptive Gauss-Kronrod."""
    r = _radius(r, closed=True)
    p, q = covering_exponents(n, alpha)
    value, _, _ = quadrature.integrate(
        lambda x: (1 - x) ** p / (1 + x) ** q, 0.0, r, abs_tol=QUAD_ABS_TOL
    )
    return value


def covering_radius(r: float, p: BoundParams) -> float:
    """Guaranteed univalent-ball radius inside ``f(B(r))`` for ``r in (0, 1]``."""
    r = _radius(r, closed=True)
    if r == 0.0:
        raise DomainError("covering radius needs r in (0, 1]")
    prefactor = (1 - p.k) * p.det_dh0 / p.norm_dh0 ** (p.n - 1)
    return prefactor * covering_integral(r, p.n, p.alpha)


def covering_radius_n1_closed_form(r: float, alpha: float, k: float) -> float:
    """``(1-k) [1 - ((1-r)/(1+r))^alpha] / (2 alpha (1+k))``."""
    r = _radius(r, closed=True)
    BoundParams(alpha=alpha, k=k)
    return (1 - k) * (1 - ((1 - r) / (1 + r)) ** alpha) / (2 * alpha * (1 + k))


def n1_covering_params(alpha: float, k: float) -> BoundParams:
    """n = 1 parameters with ``|det Dh(0)|`` at its minimum modulus ``1/(1+k)``."""
    return BoundParams(n=1, alpha=alpha, k=k, det_dh0=1 / (1 + k), norm_dh0=1 / (1 + k), norm_dh0_inv=1 + k)


def jacobian_lower_bound(r: float, p: BoundParams) -> float:
    r = _radius(r)
    if p.det_dh0 <= 0:
        raise DomainError("jacobian bound needs |det Dh(0)| > 0")
    n, a = p.n, p.alpha
    return (1 - p.k ** 2) ** n * p.det_dh0 ** 2 * (1 - r) ** (2 * n * a - n - 1) / (1 + r) ** (2 * n * a + n + 1)


def starlike_r0(alpha: float) -> float:
    if not alpha >= 1.0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be a finite real >= 1, got {alpha}")
    return 4 * alpha / (1 + 4 * alpha ** 2)


def starlike_lower_bound(normz: float, alpha: float) -> float:
    r0 = starlike_r0(alpha)
    if not 0.0 <= normz < r0:
        raise DomainError(f"||z|| = {normz} outside [0, r0) with r0 = {r0}")
    return r0 ** 2 * (1 - r0) * normz / (r0 + normz) ** 2


def kn_equation(k: float, n: int) -> float:
    """``-4n log(1-k) - (4n-1) k/(1-k)``; positive near 0, tends to -inf at 1."""
    return -4 * n * math.log1p(-k) - (4 * n - 1) * k / (1 - k)


def solve_kn(n: int, max_iter: int = 200, width: float = 1e-15) -> RootResult:
    """Bisection for the unique root of :func:`kn_equation` in (0, 1)."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    lo, hi = 1e-15, 1 - 1e-15
    f_lo = kn_equation(lo, n)
    it = 0
    while hi - lo > width and it < max_iter:
        mid = 0.5 * (lo + hi)
        f_mid = kn_equation(mid, n)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        it += 1
    root = 0.5 * (lo + hi)
    return RootResult(n=n, k_n=root, residual=kn_equation(root, n), iterations=it)


def qr_ball_radius(n: int, c: float, K: float) -> float:
    """Univalent-ball radius for ``f`` with ``h`` K-quasiregular and dilatation cap ``c``."""
    BoundParams(n=n, c=c, K=K)
    kn = solve_kn(n).k_n
    inner = kn * math.pi * math.sqrt(1 - c) / (4 * K * math.sqrt(1 + c) * -math.log1p(-kn))
    return kn * math.pi / (8 * M_CONSTANT) * inner ** (4 * n - 1)


def qr_constant_forward(K: float, c: float, n: int = 1) -> float:
    """``K sqrt((1+c)/(1-c))``: quasiregularity constant of f from that of h."""
    BoundParams(n=n, c=c, K=K)
    return K * math.sqrt((1 + c) / (1 - c))


def qr_constant_backward(K1: float, c: float, n: int = 1) -> float:
    """``K1 sqrt(1+c^2) / (1-c)``: constant for h from that of f."""
    BoundParams(n=n, c=c, K=K1)
    return K1 * math.sqrt(1 + c * c) / (1 - c)


def bound_curves(p: BoundParams, radii) -> list[dict]:
    """Rows of ``r, distortion_lower, distortion_upper, growth_bound, jacobian_lower_bound``."""
    rows = []
    for r in np.asarray(radii, dtype=float):
        r = float(r)
        rows.append({
            "r": r,
            "distortion_lower": distortion_lower(r, p),
            "distortion_upper": distortion_upper(r, p),
            "growth_bound": growth_bound(r, p),
            "jacobian_lower_bound": jacobian_lower_bound(r, p),
        })
    return rows
