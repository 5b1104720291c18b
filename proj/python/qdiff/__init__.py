"""Python front end for the qdiff solvers.

Problems are plain dicts in the same shape as the JSON problem files; every
call returns decoded JSON (dicts and lists).
"""

import json as _json

from . import _qdiff
from ._qdiff import Error, ValidationError

__all__ = [
    "Error",
    "ValidationError",
    "load_problem",
    "validate",
    "double_tail",
    "check",
    "solve",
    "solve_lp",
    "approximate",
    "residual",
    "forward_recurrence",
]


def _text(problem):
    return problem if isinstance(problem, str) else _json.dumps(problem)


def load_problem(path):
    with open(path, encoding="utf-8") as fh:
        return _json.load(fh)


def validate(problem):
    """Parse and validate; returns the normalized problem dict."""
    return _json.loads(_qdiff.validate(_text(problem)))


def double_tail(problem, Q, n):
    return _json.loads(_qdiff.double_tail(_text(problem), Q, n))


def check(problem, ids=(), C=0.9, rho=0.625):
    return _json.loads(_qdiff.check(_text(problem), list(ids), C, rho))


def solve(problem, M=1.0, w=1.0, flavor="tail", window=256, tol_fp=1e-12, tol_res=1e-8):
    return _json.loads(_qdiff.solve(_text(problem), M, w, flavor, window, tol_fp, tol_res))


def solve_lp(problem, p=1.0, window=256):
    return _json.loads(_qdiff.solve_lp(_text(problem), p, window))


def approximate(problem, C=0.9, rho=0.625, k_min=0, k_max=0):
    return _json.loads(_qdiff.approximate(_text(problem), C, rho, k_min, k_max))


def residual(problem, start, values, w=1.0):
    return _json.loads(_qdiff.residual(_text(problem), start, list(values), w))


def forward_recurrence(problem, start, values, steps, w=1.0):
    return _json.loads(_qdiff.forward_recurrence(_text(problem), start, list(values), steps, w))
