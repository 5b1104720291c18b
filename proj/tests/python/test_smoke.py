import math
import os

import pytest

import qdiff

PROBLEMS = os.environ.get("QDIFF_PROBLEMS", os.path.join(os.path.dirname(__file__), "..", "..", "problems"))


def problem(name):
    return qdiff.load_problem(os.path.join(PROBLEMS, name))


def test_validate_round_trip():
    p = qdiff.validate(problem("ex1.json"))
    assert p["tau"] == 3 and p["sigma"] == 1
    assert qdiff.validate(p) == p


def test_validation_error_is_value_error():
    bad = problem("ex1.json")
    del bad["r"]
    with pytest.raises(ValueError):
        qdiff.validate(bad)


def test_double_tail_anchor():
    e = qdiff.double_tail(problem("ex1.json"), 1.0, 3)
    assert e["lo"] <= 3 / 8 <= e["hi"]


def test_solve_and_residual():
    p = problem("ex2.json")
    out = qdiff.solve(p)
    assert out["residual"]["sup"] < 1e-8
    r = qdiff.residual(p, 1, [0.0] * 20)
    assert r["sup"] > 0


def test_solve_lp():
    out = qdiff.solve_lp(problem("ex2.json"), p=1.0)
    assert out["norm"] <= 1.0


def test_check_and_approx():
    reports = qdiff.check(problem("ex1.json"), ["Hsb"])
    assert reports[0]["verdict"] == "holds"
    rep = qdiff.approximate(problem("ex1.json"))
    assert rep["k0"] == 11


def test_forward_recurrence():
    p = problem("ex2.json")
    x = qdiff.forward_recurrence(p, 1, [0.1, -0.1, 0.05, 0.0, 0.02, 0.01], 10)
    assert len(x["values"]) == 16 and all(math.isfinite(v) for v in x["values"])


def test_library_errors_map_to_runtime_error():
    with pytest.raises(RuntimeError):
        qdiff.solve(problem("ex1.json"))
