"""Smoke tests for the python bindings."""

import math

import pytest

import twospin as ts


def triangle(beta=2.0, gamma=2.0, lam=1.0):
    return ts.SpinSystem(
        ts.SpinParams(beta, gamma),
        [(0, lam), (1, lam), (2, lam)],
        [(0, 1), (1, 2), (0, 2)],
    )


def test_exact_partition_triangle():
    assert math.exp(ts.exact_partition(triangle())) == pytest.approx(28.0, rel=1e-12)


def test_thresholds():
    rep = ts.compute_thresholds(ts.SpinParams(1.0, 2.0))
    assert rep.delta_c == pytest.approx(5.82843, abs=1e-5)
    assert rep.lambda_c == pytest.approx(10.6606, abs=1e-4)
    assert rep.lambda_c_int == pytest.approx(11.3137, abs=1e-4)


def test_saw_matches_oracle():
    sys = triangle(1.5, 2.0)
    assert ts.saw_ratio(sys, 0) == pytest.approx(ts.exact_ratio(sys, 0), rel=1e-12)


def test_approx_partition_brackets_oracle():
    res = ts.approx_partition(triangle(), eps=1e-3, mode="auto")
    assert res.mode == "bounded"
    assert abs(res.log_z - math.log(28.0)) <= math.log1p(1e-3)


def test_fixed_points_composed():
    fps = ts.fixed_points_composed(ts.SpinParams(1.0, 2.0), 10.98, 5.0, 7.0)
    assert len(fps.points) == 3


def test_regime_error_is_raised():
    hot = ts.SpinSystem(
        ts.SpinParams(1.0, 2.0),
        [(0, 20.0), (1, 20.0)],
        [(0, 1)],
    )
    with pytest.raises(ValueError):
        ts.approx_partition(hot, eps=1e-2, mode="universal")


def test_json_round_trip():
    doc = triangle().to_json()
    again = ts.SpinSystem.from_json(doc)
    assert ts.exact_partition(again) == pytest.approx(ts.exact_partition(triangle()))


def test_emitted_graphs_validate_against_the_shipped_schema():
    jsonschema = pytest.importorskip("jsonschema")
    import json
    import pathlib

    schema_path = pathlib.Path(__file__).resolve().parents[2] / "docs" / "graph.schema.json"
    schema = json.loads(schema_path.read_text())
    doc = json.loads(triangle().to_json())
    jsonschema.validate(doc, schema)

    pinned = triangle().with_pin(2, 1)
    jsonschema.validate(json.loads(pinned.to_json()), schema)


def test_uniqueness_verdicts():
    p = ts.SpinParams(1.0, 2.0)
    assert ts.uniqueness_at_degree(p, 10.0, 7) == "unique"
    assert ts.uniqueness_at_degree(p, 11.3, 7) == "non-unique"


def test_five_seven_demo():
    rep = ts.five_seven_demo(10.98, report_levels=5)
    assert len(rep.fixed_points.points) == 3
    assert rep.limit_truncated > rep.limit_appended


def test_phi3_certificate():
    cert = ts.make_phi3_certificate(ts.SpinParams(0.6, 2.0), 1002762.0)
    assert cert.argmax_degree == 22
    assert cert.alpha3 == pytest.approx(0.999983, abs=3e-6)
    assert cert.concavity_margin < -5.68


def test_mixing_decay():
    run = ts.mixing_decay(ts.SpinParams(1.0, 2.0), 10.0, ell_hi=6, trials=6, seed=3)
    assert run.slope < 0
    assert len(run.max_discrepancy) == 6
