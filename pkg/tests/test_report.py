import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pluriharm import report
from pluriharm.errors import DomainError
from pluriharm.report import CheckEntry, VerificationReport
from pluriharm.sampling import SampleConfig, sample_directions, sample_points

finite = st.floats(-1e6, 1e6, allow_nan=False)
relations = st.sampled_from(["<=", ">=", "==", ">0"])


@given(relations, finite, finite, st.floats(0, 1e-3))
def test_pass_flag_recomputable(rel, lhs, rhs, tol):
    e = CheckEntry.make("c", 0, lhs, rhs, rel, tol=tol)
    assert e.passed == e.recomputed_pass()
    assert e.passed == report.entry_passes(rel, lhs, rhs, tol)


def test_margin_orientation():
    assert CheckEntry.make("c", 0, 1.0, 2.0, "<=").margin == 1.0
    assert not CheckEntry.make("c", 0, 3.0, 2.0, "<=").passed
    assert CheckEntry.make("c", 0, 2.0 + 1e-12, 2.0, "<=").passed
    assert CheckEntry.make("c", 0, 1.0, 1.0, "==").passed
    assert not CheckEntry.make("c", 0, 0.0, 0.0, ">0").passed
    assert report.default_tol(5e3) == pytest.approx(5e-6)
    with pytest.raises(ValueError):
        report.margin_of("<", 1, 2)


entries = st.builds(
    lambda check, idx, lhs, rhs, rel, z: CheckEntry.make(check, idx, lhs, rhs, rel, point=z, radius=abs(z) % 1),
    st.sampled_from(["a", "b", "growth"]), st.integers(0, 1000), finite, finite, relations,
    st.complex_numbers(max_magnitude=0.9, allow_nan=False),
)


@given(st.lists(entries, max_size=20))
def test_json_round_trip(items):
    rep = VerificationReport(name="x", map={"n": 1}, config={"seed": 0})
    for e in items:
        rep.add(e)
    rep.skipped.append({"check": "det", "index": 2, "reason": "singular"})
    rep.finalize()
    back = VerificationReport.from_json(rep.to_json())
    assert back == rep
    assert back.to_json() == rep.to_json()


@given(st.lists(entries, min_size=1, max_size=10))
def test_csv_is_lossless(items):
    rep = VerificationReport(name="x", map={}, config={})
    for e in items:
        rep.add(e)
    rep.finalize()
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert len(rows) == len(items)
    for row, e in zip(rows, rep.entries):
        assert float(row["lhs"]) == e.lhs and float(row["rhs"]) == e.rhs
        assert float(row["margin"]) == e.margin
        assert bool(int(row["passed"])) == e.passed


def test_fmt17():
    assert report.fmt17(0.1) == "0.10000000000000001"
    assert float(report.fmt17(math.pi)) == math.pi
    assert report.fmt17(None) == ""
    assert report.fmt17(1.0) == "1.0000000000000000"


def test_summary_and_failures():
    rep = VerificationReport(name="x", map={}, config={})
    rep.add(CheckEntry.make("b", 1, 1.0, 0.0, "<="))
    rep.add(CheckEntry.make("a", 0, 0.0, 1.0, "<="))
    rep.finalize()
    assert [e.check for e in rep.entries] == ["a", "b"]
    s = rep.summary()
    assert s["total"] == 2 and s["passed"] == 1 and s["worst_margin"] == -1.0
    assert [e.check for e in rep.failures] == ["b"]
    assert not rep.passed


def test_sample_config_validation():
    with pytest.raises(DomainError):
        SampleConfig(radii=(0.0,))
    with pytest.raises(DomainError):
        SampleConfig(points_per_radius=0)
    with pytest.raises(DomainError):
        SampleConfig(radii=(1.0,))


def test_sampling_deterministic_and_on_spheres():
    cfg = SampleConfig(seed=4)
    a, b = sample_points(3, cfg), sample_points(3, cfg)
    assert len(a) == 8 * 32
    for (i, r, z), (j, s, w) in zip(a, b):
        assert i == j and r == s
        np.testing.assert_array_equal(z, w)
        assert np.linalg.norm(z) == pytest.approx(r)
    d = sample_directions(2, cfg)
    assert d.shape == (4, 2)
    np.testing.assert_allclose(np.linalg.norm(d, axis=1), 1.0)
