import asyncio

import numpy as np
import pytest
import ujson

from data import data
from focklib.errors import InputError
from focklib.numerics import Tolerances
from focklib.kernel import PsdResult
from focklib.problem import (
    ProblemError, dump_problem, load_problem, parse_problem, resolve_settings
)
from focklib.report import dumps, flatten, loads, to_jsonable


def test_parse_problem_round_trip():
    text = dump_problem([[0.5, 1j], [0, 0.25]], [1, -1j], {"degree": 3})
    problem = parse_problem(text)
    assert problem.dim == 2
    assert problem.A == [[0.5, 1j], [0, 0.25]]
    assert problem.b == [1, -1j]
    assert problem.options == {"degree": 3}
    phi = problem.to_map()
    assert phi.A.dtype == complex and phi.dim == 2


@pytest.mark.parametrize("raw, where", [
    ({"dim": 1, "A": [[[1]]], "b": [[0, 0]]}, "A[0][0]"),
    ({"dim": 2, "A": [[[1, 0], [1]], [[0, 0], [1, 0]]], "b": [[0, 0], [0, 0]]}, "A[0][1]"),
    ({"dim": 1, "A": [[[1, 0]]], "b": [["x", 0]]}, "b[0]"),
    ({"dim": 1, "A": [[[1, 0]]], "b": [[0, 0]], "extra": 1}, "extra"),
    ({"dim": 0, "A": [], "b": []}, "dim"),
    ({"dim": 2, "A": [[[1, 0], [0, 0]]], "b": [[0, 0], [0, 0]]}, "A"),
    ({"A": [[[1, 0]]], "b": [[0, 0]]}, "dim"),
    ({"dim": 1, "A": [[[1, 0]]], "b": [[0, 0]], "options": {"speed": 1}}, "options.speed"),
    ({"dim": 1, "A": [[[1, 0]]], "b": [[0, 0]], "options": {"degree": 2.5}}, "options.degree"),
])
def test_parse_problem_reports_the_position(raw, where):
    with pytest.raises(ProblemError) as e:
        parse_problem(ujson.dumps(raw))
    assert e.value.where == where
    assert str(e.value).startswith(f"{where}: ")


def test_parse_problem_rejects_non_finite_and_bad_json():
    with pytest.raises(ProblemError):
        parse_problem('{"dim": 1, "A": [[[1e999, 0]]], "b": [[0, 0]]}')
    with pytest.raises(ProblemError):
        parse_problem("{not json")
    with pytest.raises(ProblemError):
        parse_problem("[1, 2]")


def test_load_problem(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(dump_problem([[0.5]], [0.5]), encoding="utf-8")
    problem = asyncio.run(load_problem(str(path)))
    assert problem.b == [0.5]
    with pytest.raises(ProblemError):
        asyncio.run(load_problem(str(tmp_path / "missing.json")))


def test_resolve_settings_precedence():
    settings = resolve_settings(data, dim=2)
    assert settings.degree == 10 and settings.samples == 20 and settings.seed == 0
    assert resolve_settings(data, dim=7).degree == data["fallback_degree"]
    settings = resolve_settings(data, {"degree": 3, "psd_tol": 1e-8}, {"degree": None}, 2)
    assert settings.degree == 3
    assert settings.tolerances.psd_tol == 1e-8
    settings = resolve_settings(data, {"degree": 3}, {"degree": 5, "seed": 4}, 2)
    assert settings.degree == 5 and settings.seed == 4


@pytest.mark.parametrize("flags", [
    {"samples": 33}, {"samples": 0}, {"seed": -1}, {"radius": 0.0}, {"degree": 0},
    {"psd_tol": -1.0},
])
def test_resolve_settings_rejects_bad_values(flags):
    with pytest.raises(InputError):
        resolve_settings(data, None, flags, 1)


def test_to_jsonable():
    value = {
        "complex": 1 + 2j,
        "array": np.array([1j, 2]),
        "inf": float("inf"),
        "flag": np.bool_(True),
        "tuple": PsdResult(True, -0.5),
        "tolerances": Tolerances(),
        3: np.int64(4)
    }
    assert to_jsonable(value) == {
        "complex": [1.0, 2.0],
        "array": [[0.0, 1.0], [2.0, 0.0]],
        "inf": None,
        "flag": True,
        "tuple": {"psd": True, "min_eig": -0.5},
        "tolerances": to_jsonable(Tolerances().to_dict()),
        "3": 4
    }
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_dumps_is_stable():
    report = {"b": [1 + 1j, 0.1], "a": {"y": None, "x": 1 / 3}}
    text = dumps(report)
    assert dumps(loads(text)) == text
    assert text.index('"a"') < text.index('"b"')


def test_flatten():
    rows = flatten({"b": [{"m": 1}, {"m": 2}], "a": {"c": [1, 2]}})
    assert rows == [("a.c", "[1,2]"), ("b[0].m", "1"), ("b[1].m", "2")]
