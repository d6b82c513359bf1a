"""Ball automorphisms, Koebe transforms and norm-order estimation.

The norm of the second derivative is measured on the diagonal,
``||D^2 f(0)|| = sup_{||theta|| = 1} ||D^2 f(0)(theta, theta)||``, which
reduces to ``|f''(0)|`` in one variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import linalg, mapping
from .errors import DomainError, NotNormalized, SingularMatrix
from .mapping import LeftScaledModel, MapModel
from .report import CheckEntry, VerificationReport
from .sampling import SampleConfig, sample_points, unit_vectors

NORMALIZATION_TOL = 1e-9
ORDER_SLACK = 5e-3
_INV_GOLDEN = (math.sqrt(5) - 1) / 2


class BallAutomorphism:
    """Involutive automorphism ``phi_a`` of the unit ball with ``phi_a(0) = a``.

    ``phi_a(z) = (a - P z - s Q z) / (1 - <z, a>)`` where ``P`` projects onto
    ``a``, ``Q = I - P`` and ``s = sqrt(1 - |a|^2)``.  For ``a = 0`` this is
    ``z -> -z``; in one variable it is ``(a - z) / (1 - conj(a) z)``.
    """

    def __init__(self, a):
        a = np.asarray(a, dtype=complex).reshape(-1)
        norm2 = float(np.vdot(a, a).real)
        if not np.all(np.isfinite(a)) or norm2 >= 1.0:
            raise DomainError(f"automorphism center must satisfy ||a|| < 1, got {math.sqrt(norm2)}")
        self.a = a
        self.n = a.size
        self.s = math.sqrt(1.0 - norm2)
        proj = np.outer(a, a.conj()) / norm2 if norm2 > 0 else np.zeros((self.n, self.n), dtype=complex)
        self._lin = -proj - self.s * (np.eye(self.n) - proj)

    def _inner(self, z) -> complex:
        return complex(self.a.conj() @ z)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(self.n)
        return (self.a + self._lin @ z) / (1.0 - self._inner(z))

    def derivative(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(self.n)
        return (self._lin + np.outer(self(z), self.a.conj())) / (1.0 - self._inner(z))

    def derivative_at_zero(self) -> np.ndarray:
        return self._lin + np.outer(self.a, self.a.conj())

    def hessian_at_zero(self) -> np.ndarray:
        """``H[i, j, l] = d^2 phi_i / dz_j dz_l`` at 0."""
        ac = self.a.conj()
        # D^2 phi(0)(u, v) = <u,a> L v + <v,a> L u + 2 a <u,a><v,a>
        return (np.einsum("j,il->ijl", ac, self._lin) + np.einsum("l,ij->ijl", ac, self._lin)
                + 2 * np.einsum("i,j,l->ijl", self.a, ac, ac))


def ball_automorphism(a) -> BallAutomorphism:
    return BallAutomorphism(a)


class KoebeTransform:
    """``T(z) = [D phi(0)]^-1 [Dh(phi(0))]^-1 (h(phi(z)) - h(phi(0)))``.

    Behaves as a holomorphic model; ``T(0) = 0`` and ``DT(0) = I`` by
    construction.
    """

    def __init__(self, h, phi: BallAutomorphism):
        if h.n != phi.n:
            raise DomainError("dimension mismatch between map and automorphism")
        self.n = h.n
        self.h = h
        self.phi = phi
        a = phi.a
        self._d0 = phi.derivative_at_zero()
        self._dha = h.jacobian(a)
        self._ha = h.value(a)
        self._m = linalg.invert(self._d0) @ linalg.invert(self._dha)

    def value(self, z):
        return self._m @ (self.h.value(self.phi(z)) - self._ha)

    def jacobian(self, z):
        return self._m @ self.h.jacobian(self.phi(z)) @ self.phi.derivative(z)

    def hessian_at_zero(self) -> np.ndarray:
        hh = self.h.hessian(self.phi.a)
        inner = (np.einsum("ipq,pj,ql->ijl", hh, self._d0, self._d0)
                 + np.einsum("ip,pjl->ijl", self._dha, self.phi.hessian_at_zero()))
        return np.einsum("ip,pjl->ijl", self._m, inner)

    def hessian(self, z):
        z = np.asarray(z, dtype=complex).reshape(self.n)
        if not np.any(z):
            return self.hessian_at_zero()
        return mapping.fd_hessian(self, z)

    def describe(self) -> dict:
        return {"kind": "koebe_transform", "center": [[c.real, c.imag] for c in self.phi.a],
                "base": self.h.describe()}


def koebe_transform(h, phi: BallAutomorphism) -> KoebeTransform:
    return KoebeTransform(h, phi)


def half_diagonal_sup(hess: np.ndarray, starts: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """``(1/2) sup_theta ||H(theta, theta)||`` and a maximizing unit ``theta``.

    Exact in one variable; for n >= 2 the best of ``starts`` is polished by
    L-BFGS on the real coordinates of ``theta``.
    """
    n = hess.shape[0]
    if n == 1:
        return 0.5 * abs(hess[0, 0, 0]), np.ones(1, dtype=complex)

    def norm_at(theta):
        return float(np.linalg.norm(mapping.bilinear(hess, theta, theta)))

    cands = np.eye(n, dtype=complex) if starts is None else np.vstack([np.eye(n, dtype=complex), starts])
    vals = [norm_at(c) for c in cands]
    best = int(np.argmax(vals))
    x0 = np.concatenate([cands[best].real, cands[best].imag])

    def objective(x):
        th = x[:n] + 1j * x[n:]
        return -norm_at(th / np.linalg.norm(th)) ** 2

    res = minimize(objective, x0, method="L-BFGS-B", options={"maxiter": 200, "gtol": 1e-12})
    th = res.x[:n] + 1j * res.x[n:]
    th = th / np.linalg.norm(th)
    if norm_at(th) > vals[best]:
        return 0.5 * norm_at(th), th
    return 0.5 * vals[best], cands[best]


@dataclass(frozen=True)
class OrderBudget:
    """Sample budget of :func:`norm_order_estimate`.

    Only ``directions`` is the monotone budget knob: ray ``d`` is evaluated
    identically for every budget that includes it.
    """

    directions: int = 16
    radial: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    golden_iters: int = 60
    thetas: int = 32
    r_max: float = 1 - 1e-7
    seed: int = 0


@dataclass(frozen=True)
class OrderEstimate:
    value: float
    samples_used: int
    max_attained_at: tuple[list, list] = field(default=([], []))
    budget: OrderBudget | None = None


def _van_der_corput(i: int) -> float:
    out, denom = 0.0, 1.0
    while i:
        denom *= 2
        i, bit = divmod(i, 2)
        out += bit / denom
    return out


def order_rays(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Nested (prefix-stable) sequence of unit directions for automorphism centers."""
    if n == 1:
        return np.array([[np.exp(2j * math.pi * _van_der_corput(i))] for i in range(count)])
    first = np.eye(n, dtype=complex)[:1]
    rest = unit_vectors(np.random.default_rng(seed), max(count - 1, 0), n)
    return np.vstack([first, rest])[:count]


def _check_normalized(h) -> None:
    zero = np.zeros(h.n, dtype=complex)
    off0 = float(np.linalg.norm(h.value(zero)))
    offd = float(np.max(np.abs(h.jacobian(zero) - np.eye(h.n))))
    if off0 > NORMALIZATION_TOL or offd > NORMALIZATION_TOL:
        raise NotNormalized(f"need h(0) = 0 and Dh(0) = I; got |h(0)| = {off0:.3e}, |Dh(0) - I| = {offd:.3e}")


def norm_order_estimate(h, budget: OrderBudget | None = None) -> OrderEstimate:
    """Lower estimate of ``sup (1/2) ||D^2 T(0)||`` over Koebe transforms ``T`` of ``h``.

    Centers ``a`` run over 0 and a radial grid along each ray, followed by a
    golden-section search on the radius around the best grid cell of each
    ray (the last cell extends to ``budget.r_max``).
    """
    budget = budget or OrderBudget()
    _check_normalized(h)
    n = h.n
    theta_starts = unit_vectors(np.random.default_rng([budget.seed, 7]), budget.thetas, n) if n > 1 else None
    used = 0

    def at(a):
        nonlocal used
        used += 1
        try:
            hess = KoebeTransform(h, BallAutomorphism(a)).hessian_at_zero()
        except (SingularMatrix, DomainError):
            return -math.inf, None
        if not np.all(np.isfinite(hess)):
            return -math.inf, None
        return half_diagonal_sup(hess, theta_starts)

    best_val, best_theta = at(np.zeros(n, dtype=complex))
    best_a = np.zeros(n, dtype=complex)
    radial = list(budget.radial)
    for u in order_rays(n, budget.directions, budget.seed):
        grid = [at(r * u) for r in radial]
        i = int(np.argmax([g[0] for g in grid]))
        cands = [(radial[j], grid[j]) for j in range(len(radial))]
        lo = radial[i - 1] if i > 0 else 0.0
        hi = radial[i + 1] if i + 1 < len(radial) else budget.r_max
        cands.append((hi, at(hi * u)))
        x1 = hi - _INV_GOLDEN * (hi - lo)
        x2 = lo + _INV_GOLDEN * (hi - lo)
        v1, v2 = at(x1 * u), at(x2 * u)
        for _ in range(budget.golden_iters):
            if v1[0] >= v2[0]:
                hi, x2, v2 = x2, x1, v1
                x1 = hi - _INV_GOLDEN * (hi - lo)
                v1 = at(x1 * u)
                cands.append((x1, v1))
            else:
                lo, x1, v1 = x1, x2, v2
                x2 = lo + _INV_GOLDEN * (hi - lo)
                v2 = at(x2 * u)
                cands.append((x2, v2))
        for r, (val, theta) in cands:
            if val > best_val:
                best_val, best_theta, best_a = val, theta, r * u
    theta_out = [] if best_theta is None else [[float(c.real), float(c.imag)] for c in best_theta]
    return OrderEstimate(
        value=float(best_val),
        samples_used=used,
        max_attained_at=([[float(c.real), float(c.imag)] for c in best_a], theta_out),
        budget=budget,
    )


def normalized_holomorphic_part(f: MapModel) -> LeftScaledModel:
    """``[Dh(0)]^-1 h``."""
    zero = np.zeros(f.n, dtype=complex)
    return LeftScaledModel(f.h, linalg.invert(f.h.jacobian(zero)))


def _normalization_entries(f: MapModel, report: VerificationReport) -> None:
    zero = np.zeros(f.n, dtype=complex)
    tol = NORMALIZATION_TOL
    report.add(CheckEntry.make("h0_zero", 0, np.linalg.norm(f.h.value(zero)), 0.0, "==", tol=tol, point=zero))
    report.add(CheckEntry.make("g0_zero", 0, np.linalg.norm(f.g.value(zero)), 0.0, "==", tol=tol, point=zero))
    lin = f.h.jacobian(zero) + np.conj(f.g.jacobian(zero))
    report.add(CheckEntry.make("normalization", 0, linalg.operator_norm(lin), 1.0, "==", tol=tol, point=zero))


def check_membership_PH(f: MapModel, alpha: float, k: float, config: SampleConfig | None = None,
                        budget: OrderBudget | None = None) -> VerificationReport:
    """Sampled refutation test for membership of ``f`` in PH(alpha, k).

    The order check uses a lower-bound estimator, so a clean report means
    "not refuted", never "certified member".
    """
    if not alpha >= 1 or not 0 <= k < 1:
        raise DomainError(f"need alpha >= 1 and 0 <= k < 1, got alpha={alpha}, k={k}")
    config = config or SampleConfig()
    report = VerificationReport(name="membership", map=f.describe(),
                                config={**config.to_dict(), "alpha": alpha, "k": k})
    _normalization_entries(f, report)
    points = [(0, 0.0, np.zeros(f.n, dtype=complex))] + [(i + 1, r, z) for i, r, z in sample_points(f.n, config)]
    for idx, r, z in points:
        try:
            dil = mapping.dilatation_norm(f, z)
        except SingularMatrix:
            report.add(CheckEntry.make("locally_biholomorphic", idx, linalg.min_gain(f.h.jacobian(z)), 0.0, ">0",
                                       point=z, radius=r))
            continue
        report.add(CheckEntry.make("dilatation", idx, dil, k, "<=", tol=NORMALIZATION_TOL, point=z, radius=r))
    try:
        est = norm_order_estimate(normalized_holomorphic_part(f), budget)
        report.add(CheckEntry.make("norm_order", 0, est.value, alpha + ORDER_SLACK, "<="))
    except SingularMatrix:
        report.add(CheckEntry.make("locally_biholomorphic", 0, 0.0, 0.0, ">0", point=np.zeros(f.n)))
    report.finalize()
    report.verdict = "not refuted" if report.passed else "refuted"
    return report


def coefficient_bounds_check(f: MapModel, k: float) -> VerificationReport:
    """Coefficient bounds at the origin for a PH(alpha, k) map.

    ``||Dg(0)|| <= k/(1-k)``, ``||Dh(0)|| <= 1/(1-k)`` and
    ``||Dh(0)|| >= 1/(1+k)``.  A failing ``normalization`` entry flags the
    precondition, in which case the remaining entries are not meaningful.
    """
    if not 0 <= k < 1:
        raise DomainError(f"k must lie in [0, 1), got {k}")
    zero = np.zeros(f.n, dtype=complex)
    report = VerificationReport(name="coefficient_bounds", map=f.describe(), config={"k": k})
    _normalization_entries(f, report)
    ndh = linalg.operator_norm(f.h.jacobian(zero))
    ndg = linalg.operator_norm(f.g.jacobian(zero))
    report.add(CheckEntry.make("coef_dg0_upper", 0, ndg, k / (1 - k), "<=", point=zero))
    report.add(CheckEntry.make("coef_dh0_upper", 0, ndh, 1 / (1 - k), "<=", point=zero))
    report.add(CheckEntry.make("coef_dh0_lower", 0, ndh, 1 / (1 + k), ">=", point=zero))
    report.finalize()
    report.verdict = "pass" if report.passed else "fail"
    return report
