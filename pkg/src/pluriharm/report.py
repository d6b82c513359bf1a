"""Verification report records and their JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

INEQ_RTOL = 1e-9
RELATIONS = ("<=", ">=", "==", ">0")


def default_tol(rhs: float) -> float:
    """Tolerance for a check against ``rhs``: 1e-9 * max(1, |rhs|)."""
    return INEQ_RTOL * max(1.0, abs(rhs))


def margin_of(relation: str, lhs: float, rhs: float) -> float:
    """Signed margin, oriented so that a check passes iff ``margin >= -tol``."""
    if relation == "<=":
        return rhs - lhs
    if relation == ">=":
        return lhs - rhs
    if relation == "==":
        return -abs(lhs - rhs)
    if relation == ">0":
        return lhs
    raise ValueError(f"unknown relation {relation!r}")


def entry_passes(relation: str, lhs: float, rhs: float, tol: float) -> bool:
    m = margin_of(relation, lhs, rhs)
    if relation == ">0":
        return m > 0
    return m >= -tol


def _point_repr(point) -> list | None:
    if point is None:
        return None
    return [[float(c.real), float(c.imag)] for c in np.asarray(point, dtype=complex).reshape(-1)]


@dataclass(frozen=True)
class CheckEntry:
    check: str
    index: int
    lhs: float
    rhs: float
    relation: str
    tol: float
    margin: float
    passed: bool
    point: list | None = None
    radius: float | None = None

    @classmethod
    def make(cls, check: str, index: int, lhs: float, rhs: float, relation: str,
             tol: float | None = None, point=None, radius: float | None = None) -> "CheckEntry":
        lhs, rhs = float(lhs), float(rhs)
        tol = default_tol(rhs) if tol is None else float(tol)
        return cls(check=check, index=int(index), lhs=lhs, rhs=rhs, relation=relation, tol=tol,
                   margin=margin_of(relation, lhs, rhs), passed=entry_passes(relation, lhs, rhs, tol),
                   point=_point_repr(point), radius=None if radius is None else float(radius))

    def recomputed_pass(self) -> bool:
        return entry_passes(self.relation, self.lhs, self.rhs, self.tol)


@dataclass
class VerificationReport:
    """Ordered check entries for one map plus a summary.

    ``skipped`` lists samples where a check could not be evaluated (for
    example a singular ``Dh``); they are reported, not counted as failures.
    ``conditional`` names a caller-declared hypothesis the results rest on.
    """

    name: str
    map: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    entries: list[CheckEntry] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    conditional: str | None = None
    verdict: str | None = None

    def add(self, entry: CheckEntry) -> None:
        self.entries.append(entry)

    def extend(self, other: "VerificationReport") -> None:
        self.entries.extend(other.entries)
        self.skipped.extend(other.skipped)

    def finalize(self) -> "VerificationReport":
        self.entries.sort(key=lambda e: (e.check, e.index))
        self.skipped.sort(key=lambda s: (s["check"], s["index"]))
        return self

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def summary(self) -> dict:
        worst = min((e.margin for e in self.entries), default=math.inf)
        return {
            "total": len(self.entries),
            "passed": sum(e.passed for e in self.entries),
            "worst_margin": worst if math.isfinite(worst) else None,
            "skipped": len(self.skipped),
        }

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "map": self.map,
            "config": self.config,
            "conditional": self.conditional,
            "verdict": self.verdict,
            "entries": [asdict(e) for e in self.entries],
            "skipped": list(self.skipped),
            "summary": self.summary(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        return cls(
            name=data["name"],
            map=data.get("map", {}),
            config=data.get("config", {}),
            entries=[CheckEntry(**e) for e in data.get("entries", [])],
            skipped=list(data.get("skipped", [])),
            conditional=data.get("conditional"),
            verdict=data.get("verdict"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "index", "radius", "point", "lhs", "rhs", "relation", "tol", "margin", "passed"])
        for e in self.entries:
            writer.writerow([
                e.check, e.index, fmt17(e.radius), json.dumps(e.point), fmt17(e.lhs), fmt17(e.rhs),
                e.relation, fmt17(e.tol), fmt17(e.margin), int(e.passed),
            ])
        return buf.getvalue()


def fmt17(x) -> str:
    """17 significant digits: lossless for doubles."""
    if x is None:
        return ""
    return format(float(x), "#.17g")


def merge(name: str, reports, **kwargs) -> VerificationReport:
    out = VerificationReport(name=name, **kwargs)
    for rep in reports:
        out.extend(rep)
    return out.finalize()
