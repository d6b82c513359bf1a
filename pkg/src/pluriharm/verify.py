"""Seeded certification of the distortion, growth, Jacobian and quasiregularity inequalities.

Every routine samples points from a :class:`SampleConfig` and returns a
:class:`VerificationReport` whose entries are sorted by ``(check, index)``.
"""

from __future__ import annotations

import math

import numpy as np

from . import bounds, linalg, mapping
from .errors import (DegenerateJacobian, DilatationCapViolated, DomainError, MembershipRefuted,
                     PreconditionFailed, SingularMatrix)
from .lif import OrderBudget, check_membership_PH
from .mapping import MapModel
from .report import CheckEntry, VerificationReport, merge
from .sampling import SampleConfig, sample_directions, sample_points

FD_TOL = 1e-6
SCHWARZ_PRE_TOL = 1e-12


def params_from_map(f: MapModel, alpha: float, k: float) -> bounds.BoundParams:
    """Bound parameters with the ``Dh(0)`` data read off the map."""
    dh0 = f.h.jacobian(np.zeros(f.n, dtype=complex))
    return bounds.BoundParams(
        n=f.n, alpha=alpha, k=k,
        norm_dh0_inv=linalg.operator_norm(linalg.invert(dh0)),
        norm_dh0=linalg.operator_norm(dh0),
        det_dh0=abs(linalg.det(dh0)),
    )


def _require_member(f, alpha, k, config, membership, budget):
    if membership is None:
        membership = check_membership_PH(f, alpha, k, config, budget)
    if not membership.passed:
        bad = ", ".join(sorted({e.check for e in membership.failures}))
        raise MembershipRefuted(f"map refuted as a member of PH({alpha}, {k}): {bad}", membership)
    return membership


def _new(name, f, config, **extra):
    return VerificationReport(name=name, map=f.describe(), config={**config.to_dict(), **extra})


def _points(f, config, with_origin=True):
    pts = sample_points(f.n, config)
    if with_origin:
        return [(0, 0.0, np.zeros(f.n, dtype=complex))] + [(i + 1, r, z) for i, r, z in pts]
    return pts


def verify_distortion(f: MapModel, alpha: float, k: float, config: SampleConfig | None = None,
                      membership: VerificationReport | None = None,
                      budget: OrderBudget | None = None) -> VerificationReport:
    """Lower and upper distortion bounds on ``Lambda_f``, plus ``lambda_f <= ||d_theta f|| <= Lambda_f``."""
    config = config or SampleConfig()
    _require_member(f, alpha, k, config, membership, budget)
    p = params_from_map(f, alpha, k)
    rep = _new("distortion", f, config, alpha=alpha, k=k)
    dirs = sample_directions(f.n, config)
    for idx, r, z in _points(f, config):
        big, small = mapping.lambda_extremes(f, z)
        rep.add(CheckEntry.make("distortion_lower", idx, big, bounds.distortion_lower(r, p), ">=", point=z, radius=r))
        rep.add(CheckEntry.make("distortion_upper", idx, big, bounds.distortion_upper(r, p), "<=", point=z, radius=r))
        for j, theta in enumerate(dirs):
            d = float(np.linalg.norm(mapping.directional_derivative(f, z, theta)))
            sub = idx * len(dirs) + j
            rep.add(CheckEntry.make("directional_max", sub, d, big, "<=", point=z, radius=r))
            rep.add(CheckEntry.make("directional_min", sub, d, small, ">=", point=z, radius=r))
    return rep.finalize()


def verify_growth(f: MapModel, alpha: float, k: float, config: SampleConfig | None = None,
                  membership: VerificationReport | None = None,
                  budget: OrderBudget | None = None) -> VerificationReport:
    config = config or SampleConfig()
    _require_member(f, alpha, k, config, membership, budget)
    p = params_from_map(f, alpha, k)
    rep = _new("growth", f, config, alpha=alpha, k=k)
    for idx, r, z in _points(f, config):
        val = float(np.linalg.norm(mapping.evaluate(f, z)))
        rep.add(CheckEntry.make("growth", idx, val, bounds.growth_bound(r, p), "<=", point=z, radius=r))
    return rep.finalize()


def verify_jacobian_bound(f: MapModel, alpha: float, k: float, config: SampleConfig | None = None,
                          membership: VerificationReport | None = None,
                          budget: OrderBudget | None = None) -> VerificationReport:
    config = config or SampleConfig()
    _require_member(f, alpha, k, config, membership, budget)
    p = params_from_map(f, alpha, k)
    rep = _new("jacobian_bound", f, config, alpha=alpha, k=k)
    for idx, r, z in _points(f, config):
        dj = abs(mapping.det_jacobian(f, z))
        rep.add(CheckEntry.make("jacobian_lower", idx, dj, bounds.jacobian_lower_bound(r, p), ">=",
                                point=z, radius=r))
    return rep.finalize()


def verify_det_factorization(f: MapModel, config: SampleConfig | None = None) -> VerificationReport:
    """Factored ``det J_f`` against the direct determinant of the real Jacobian."""
    config = config or SampleConfig()
    rep = _new("det_factorization", f, config)
    for idx, r, z in _points(f, config):
        direct = linalg.det(mapping.real_jacobian(f, z))
        try:
            factored = mapping.det_jacobian(f, z)
        except SingularMatrix as exc:
            rep.skipped.append({"check": "det_factorization", "index": idx, "reason": f"SingularMatrix: {exc}"})
            continue
        rep.add(CheckEntry.make("det_factorization", idx, factored, direct, "==", point=z, radius=r))
    return rep.finalize()


def verify_schwarz_dilatation(f: MapModel, config: SampleConfig | None = None) -> VerificationReport:
    """``||Dg(z) [Dh(z)]^-1|| <= ||z||`` for maps with ``Dg(0) = 0``."""
    config = config or SampleConfig()
    dg0 = f.g.jacobian(np.zeros(f.n, dtype=complex))
    if np.max(np.abs(dg0)) > SCHWARZ_PRE_TOL:
        raise PreconditionFailed(f"Schwarz bound needs Dg(0) = 0, got max |Dg(0)| = {np.max(np.abs(dg0)):.3e}")
    rep = _new("schwarz_dilatation", f, config)
    for idx, r, z in _points(f, config):
        dil = mapping.dilatation_norm(f, z)
        if dil >= 1.0:
            raise PreconditionFailed(f"dilatation {dil:.6g} >= 1 at sample {idx}")
        rep.add(CheckEntry.make("schwarz_dilatation", idx, dil, float(np.linalg.norm(z)), "<=",
                                point=z, radius=r))
    return rep.finalize()


def verify_starlike_hbound(f: MapModel, r: float, config: SampleConfig | None = None) -> VerificationReport:
    """``||h(z)|| <= ||f(z)|| / (1 - r)`` on the closed ball of radius ``r``.

    The map is assumed fully starlike by the caller; the report is labeled
    as conditional on that declaration.
    """
    if not 0 < r < 1:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    config = config or SampleConfig()
    rep = _new("starlike_hbound", f, config, r=r)
    rep.conditional = "fully starlike (declared by caller)"
    pts = [(i, rad, z) for i, rad, z in sample_points(f.n, config, scale=r)]
    # sphere of radius r itself
    offset = len(pts)
    pts += [(offset + i, r, r * z / np.linalg.norm(z)) for i, _, z in sample_points(f.n, config)[:config.points_per_radius]]
    for idx, rad, z in pts:
        hv = float(np.linalg.norm(f.h.value(mapping.as_point(z, f.n))))
        fv = float(np.linalg.norm(mapping.evaluate(f, z)))
        rep.add(CheckEntry.make("starlike_h_bound", idx, hv, fv / (1 - r), "<=", point=z, radius=rad))
    return rep.finalize()


def verify_starlike_lower(f: MapModel, alpha: float, config: SampleConfig | None = None) -> VerificationReport:
    """``||f(z)|| >= r0^2 (1-r0) ||z|| / (r0 + ||z||)^2`` and ``f(z) != 0`` inside ``B(r0)``.

    Conditional on the caller's declaration that ``f`` is fully starlike
    with ``h`` of order at most ``alpha``.
    """
    config = config or SampleConfig()
    r0 = bounds.starlike_r0(alpha)
    rep = _new("starlike_lower", f, config, alpha=alpha, r0=r0)
    rep.conditional = "fully starlike with h in M_alpha (declared by caller)"
    rep.add(CheckEntry.make("starlike_lower", 0, float(np.linalg.norm(mapping.evaluate(f, np.zeros(f.n)))),
                            0.0, ">=", point=np.zeros(f.n), radius=0.0))
    for idx, rad, z in sample_points(f.n, config, scale=r0):
        val = float(np.linalg.norm(mapping.evaluate(f, z)))
        rep.add(CheckEntry.make("starlike_lower", idx + 1, val, bounds.starlike_lower_bound(rad, alpha), ">=",
                                point=z, radius=rad))
        rep.add(CheckEntry.make("starlike_nonvanishing", idx + 1, val, 0.0, ">0", point=z, radius=rad))
    return rep.finalize()


def _qr_ratio(f, z):
    big, _ = mapping.lambda_extremes(f, z)
    dj = mapping.det_jacobian(f, z)
    if not dj > 0:
        raise DegenerateJacobian(f"det J_f = {dj:.6g} <= 0 at z = {z}")
    return big, dj


def estimate_qr_constant(f: MapModel, config: SampleConfig | None = None) -> float:
    """Sample supremum of ``Lambda_f^{2n} / det J_f`` (a lower estimate of the true constant)."""
    config = config or SampleConfig()
    best = 1.0
    for _, _, z in _points(f, config):
        big, dj = _qr_ratio(f, z)
        best = max(best, big ** (2 * f.n) / dj)
    return best


def verify_thm6_equivalence(f: MapModel, c: float, config: SampleConfig | None = None) -> VerificationReport:
    """Both pointwise inequalities behind "f quasiregular iff h quasiregular".

    forward:  ``Lambda_f <= K_h sqrt((1+c)/(1-c)) |det J_f|^{1/2n}``
    backward: ``||Dh|| <= K_1 sqrt(1+c^2)/(1-c) |det Dh|^{1/n}``

    with ``K_h`` and ``K_1`` the sample suprema of ``||Dh|| / |det Dh|^{1/n}``
    and ``Lambda_f / |det J_f|^{1/2n}``.  Both constants are lower estimates
    of the true suprema over the ball.
    """
    if not 0 <= c < 1:
        raise DomainError(f"c must lie in [0, 1), got {c}")
    config = config or SampleConfig()
    n = f.n
    rows = []
    for idx, r, z in _points(f, config):
        dil = mapping.dilatation_norm(f, z)
        if dil > c + 1e-12:
            raise DilatationCapViolated(f"dilatation {dil:.6g} exceeds cap {c} at sample {idx}")
        dh = f.h.jacobian(mapping.as_point(z, n))
        big, dj = _qr_ratio(f, z)
        rows.append((idx, r, z, linalg.operator_norm(dh), abs(linalg.det(dh)), big, dj))
    k_h = max(1.0, max(nd / ddh ** (1 / n) for _, _, _, nd, ddh, _, _ in rows))
    k_1 = max(1.0, max(big / dj ** (1 / (2 * n)) for _, _, _, _, _, big, dj in rows))
    fwd = bounds.qr_constant_forward(k_h, c, n)
    bwd = bounds.qr_constant_backward(k_1, c, n)
    rep = _new("thm6_equivalence", f, config, c=c, K_h=k_h, K_1=k_1, K_forward=fwd, K_backward=bwd)
    for idx, r, z, nd, ddh, big, dj in rows:
        rep.add(CheckEntry.make("qr_forward", idx, big, fwd * dj ** (1 / (2 * n)), "<=", point=z, radius=r))
        rep.add(CheckEntry.make("qr_backward", idx, nd, bwd * ddh ** (1 / n), "<=", point=z, radius=r))
        rep.add(CheckEntry.make("qr_constant_bound", idx, big ** (2 * n) / dj, fwd ** (2 * n), "<=",
                                point=z, radius=r))
    return rep.finalize()


SUITES = ("membership", "distortion", "growth", "jacobian", "det", "schwarz")


def run_suite(f: MapModel, alpha: float, k: float, config: SampleConfig | None = None,
              suites=SUITES, budget: OrderBudget | None = None) -> VerificationReport:
    """Run the selected checks and merge them into one report.

    Membership is always evaluated first; if it is refuted the merged report
    contains only the membership entries and ``verdict`` is ``"refuted"``.
    ``schwarz`` is skipped (noted in ``skipped``) unless ``Dg(0) = 0``.
    """
    config = config or SampleConfig()
    membership = check_membership_PH(f, alpha, k, config, budget)
    parts = [membership] if "membership" in suites else []
    extra = {"alpha": alpha, "k": k, "suites": list(suites)}
    if not membership.passed:
        out = merge("suite", [membership], map=f.describe(), config={**config.to_dict(), **extra})
        out.verdict = "refuted"
        return out
    if "distortion" in suites:
        parts.append(verify_distortion(f, alpha, k, config, membership))
    if "growth" in suites:
        parts.append(verify_growth(f, alpha, k, config, membership))
    if "jacobian" in suites:
        parts.append(verify_jacobian_bound(f, alpha, k, config, membership))
    if "det" in suites:
        parts.append(verify_det_factorization(f, config))
    skipped = []
    if "schwarz" in suites:
        try:
            parts.append(verify_schwarz_dilatation(f, config))
        except PreconditionFailed as exc:
            skipped.append({"check": "schwarz_dilatation", "index": -1, "reason": str(exc)})
    out = merge("suite", parts, map=f.describe(), config={**config.to_dict(), **extra})
    out.skipped.extend(skipped)
    out.finalize()
    out.verdict = "pass" if out.passed else "violation"
    return out
