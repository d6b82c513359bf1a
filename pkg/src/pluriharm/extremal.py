"""Closed-form one-variable extremal maps and their sharpness checks.

All families are built from the Pommerenke-type function

    P(w) = ((1+w)/(1-w))^alpha - 1) / (2 alpha),   P'(w) = (1+w)^(alpha-1) / (1-w)^(alpha+1),

which is normalized (``P(0) = 0, P'(0) = 1``) with ``P''(0)/2 = alpha``.
Powers use the principal branch; ``1 +- w`` has positive real part on the
disk so every power is continuous there.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds, mapping
from .errors import BadSpec
from .mapping import ClosedFormModel, MapModel
from .report import CheckEntry

FAMILIES = ("upper_thm2", "lower_thm2", "covering_thm4", "covering_thm4_literal", "pommerenke")


def pommerenke(w, alpha: float):
    return np.expm1(alpha * (np.log1p(w) - np.log1p(-w))) / (2 * alpha)


def pommerenke_d1(w, alpha: float):
    return np.exp((alpha - 1) * np.log1p(w) - (alpha + 1) * np.log1p(-w))


def pommerenke_d2(w, alpha: float):
    return pommerenke_d1(w, alpha) * ((alpha - 1) / (1 + w) + (alpha + 1) / (1 - w))


# exponent-free variant w/(alpha (1-w)), the covering extremal as literally printed
def _literal(w, alpha):
    return w / (alpha * (1 - w))


def _literal_d1(w, alpha):
    return 1 / (alpha * (1 - w) ** 2)


def _literal_d2(w, alpha):
    return 2 / (alpha * (1 - w) ** 3)


@dataclass(frozen=True)
class ExtremalSpec:
    family: str
    alpha: float = 1.0
    k: float = 0.0
    t: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadSpec(f"unknown extremal family {self.family!r}; choose from {FAMILIES}")
        if not (math.isfinite(self.alpha) and self.alpha >= 1):
            raise BadSpec(f"alpha must be >= 1, got {self.alpha}")
        if not 0 <= self.k < 1:
            raise BadSpec(f"k must lie in [0, 1), got {self.k}")
        if not math.isfinite(self.t):
            raise BadSpec("t must be finite")
        if self.sign not in (1, -1):
            raise BadSpec(f"sign must be +1 or -1, got {self.sign}")

    def to_dict(self) -> dict:
        return asdict(self)


def _scalar_model(family: str, params: dict, part: str, scale: complex, inner: complex, kernel) -> ClosedFormModel:
    """``z -> scale * F(inner * z)`` for the kernel triple ``(F, F', F'')``."""
    f0, f1, f2 = kernel

    def value(z):
        return np.array([scale * f0(inner * z[0])])

    def jac(z):
        return np.array([[scale * inner * f1(inner * z[0])]])

    def hess(z):
        return np.array([[[scale * inner * inner * f2(inner * z[0])]]])

    return ClosedFormModel(1, family, params, value, jac, hess, part=part)


def _components(spec: ExtremalSpec):
    """Return ``(scale, inner, kernel, g_over_h)`` with ``h(z) = scale * F(inner z)`` and ``g = g_over_h * h``."""
    a, k = spec.alpha, spec.k
    pk = (lambda w: pommerenke(w, a), lambda w: pommerenke_d1(w, a), lambda w: pommerenke_d2(w, a))
    if spec.family == "upper_thm2":
        rot = complex(math.cos(spec.t), math.sin(spec.t))
        return rot / (1 - k), rot.conjugate(), pk, -k
    if spec.family == "lower_thm2":
        rot = complex(math.cos(spec.t), math.sin(spec.t))
        return rot / (1 + k), -rot.conjugate(), pk, k
    if spec.family in ("covering_thm4", "covering_thm4_literal"):
        si = spec.sign * 1j
        kernel = pk
        if spec.family == "covering_thm4_literal":
            kernel = (lambda w: _literal(w, a), lambda w: _literal_d1(w, a), lambda w: _literal_d2(w, a))
        return si / (1 + k), si, kernel, k
    # pommerenke: g = 0, k ignored
    return 1.0 + 0j, 1.0 + 0j, pk, 0.0


def build_extremal(spec: ExtremalSpec) -> MapModel:
    """n = 1 extremal map ``f = h + conj(g)`` for ``spec``.

    * ``upper_thm2``: ``h = e^{it} P(z e^{-it}) / (1-k)``, ``f = h - k conj(h)``
    * ``lower_thm2``: ``h* = e^{it} P(-z e^{-it}) / (1+k)``, ``f = h* + k conj(h*)``
    * ``covering_thm4``: ``h = (+-i) P(+-i z) / (1+k)``, ``f = h + k conj(h)``
    * ``covering_thm4_literal``: as above with the exponent alpha dropped
    * ``pommerenke``: ``h = P``, ``g = 0``
    """
    scale, inner, kernel, ratio = _components(spec)
    params = spec.to_dict()
    h = _scalar_model(spec.family, params, "h", scale, inner, kernel)
    if ratio == 0.0:
        g = mapping.zero_model(1)
    else:
        g = _scalar_model(spec.family, params, "g", ratio * scale, inner, kernel)
    return MapModel(h, g, {"source": "builtin", **params})


def _distortion_params(f: MapModel, alpha: float, k: float) -> bounds.BoundParams:
    from .linalg import invert, operator_norm
    Dh0 = f.h.jacobian(np.zeros(1))
    return bounds.BoundParams(n=1, alpha=alpha, k=k, norm_dh0_inv=operator_norm(invert(Dh0)),
                              norm_dh0=operator_norm(Dh0), det_dh0=abs(Dh0[0, 0]))


def sharpness_gap_upper(alpha: float, k: float, r: float, t: float = 0.0) -> float:
    """``|Lambda_f(r e^{it}) - distortion_upper(r)|`` for the upper extremal."""
    f = build_extremal(ExtremalSpec("upper_thm2", alpha, k, t))
    z = np.array([r * complex(math.cos(t), math.sin(t))])
    big, _ = mapping.lambda_extremes(f, z)
    return abs(big - bounds.distortion_upper(r, _distortion_params(f, alpha, k)))


def sharpness_gap_lower(alpha: float, k: float, r: float, t: float = 0.0, measure: str = "lambda") -> float:
    """Gap between the lower distortion bound and the lower extremal at ``r e^{it}``.

    ``measure="lambda"`` compares the minimal directional derivative
    ``lambda_f``, which attains the bound for every ``k``;
    ``measure="Lambda"`` compares ``Lambda_f``, which exceeds it by the factor
    ``(1+k)/(1-k)`` unless ``k = 0``.
    """
    if measure not in ("lambda", "Lambda"):
        raise BadSpec(f"measure must be 'lambda' or 'Lambda', got {measure!r}")
    f = build_extremal(ExtremalSpec("lower_thm2", alpha, k, t))
    z = np.array([r * complex(math.cos(t), math.sin(t))])
    big, small = mapping.lambda_extremes(f, z)
    value = small if measure == "lambda" else big
    return abs(value - bounds.distortion_lower(r, _distortion_params(f, alpha, k)))


def covering_critical_point(sign: int, r: float) -> np.ndarray:
    """Point of ``|z| = r`` where the covering extremal is closest to 0."""
    return np.array([sign * 1j * r])


def covering_sharpness_check(alpha: float, k: float, r: float, sign: int = 1, literal: bool = False) -> CheckEntry:
    """``|f(z*)|`` against the sharp covering radius, tolerance 1e-8 relative."""
    family = "covering_thm4_literal" if literal else "covering_thm4"
    f = build_extremal(ExtremalSpec(family, alpha, k, 0.0, sign))
    z = covering_critical_point(sign, r)
    dist = float(np.linalg.norm(mapping.evaluate(f, z)))
    radius = bounds.covering_radius_n1_closed_form(r, alpha, k)
    return CheckEntry.make(f"covering_sharpness[{family}]", 0, dist, radius, "==", tol=1e-8 * max(1.0, radius),
                           point=z, radius=r)


def covering_boundary_min(f: MapModel, r: float, samples: int = 4096) -> tuple[float, complex]:
    """Smallest ``|f|`` over ``samples`` equally spaced points of ``|z| = r``."""
    best, where = math.inf, 0j
    for s in range(samples):
        z = r * complex(math.cos(2 * math.pi * s / samples), math.sin(2 * math.pi * s / samples))
        d = float(np.linalg.norm(mapping.evaluate(f, [z])))
        if d < best:
            best, where = d, z
    return best, where
