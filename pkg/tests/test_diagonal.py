from functools import partial
from os.path import join

from numpy.testing import assert_allclose
import numpy as np
import pytest
import math

from data import ROOT
from focklib.affine import composition_norm
from focklib.diagonal import (
    DiagonalModel, cms_vacuous, compensated_cumsum, counterexample_gap, diag_norm,
    gap_table, series_criterion, series_terms, tail_estimate, truncate
)
from focklib.errors import InconclusiveError, InputError, UnboundedError
from fockutil.presets import build_model, describe, load_presets, parse_assignments


PRESETS = join(ROOT, "data", "presets.json")


def _harmonic(m):
    return 1 / m


def _constant(value, m):
    return value


def _listed(values, m):
    return values[m - 1] if m <= len(values) else 0


def band_model(horizon=1000):
    return build_model("paper-counterexample", [], load_presets(PRESETS), horizon)


def test_compensated_cumsum():
    assert_allclose(compensated_cumsum([1e16, 1.0, -1e16]), [1e16, 1e16, 1.0])
    sums = compensated_cumsum([1.0, math.inf, 2.0])
    assert sums[0] == 1 and math.isinf(sums[1]) and math.isinf(sums[2])


def test_converging_series():
    model = DiagonalModel(partial(_constant, 0.5), _harmonic, 50)
    result = series_criterion(model)
    expected = math.fsum(1 / (3 * m * m) for m in range(1, 51))
    assert result.partial_sums[-1] == pytest.approx(expected, rel=1e-14)
    assert result.partial_sums[-1] == pytest.approx(0.5419, abs=5e-4)
    assert result.verdict == "converging"
    assert np.all(np.diff(result.partial_sums) > 0)


def test_converging_series_tail_bound():
    model = DiagonalModel(partial(_constant, 0.5), _harmonic, 1000)
    result = series_criterion(model)
    assert result.verdict == "converging"
    assert result.evidence == "power tail"
    limit = math.pi ** 2 / 18
    assert result.partial_sums[-1] == pytest.approx(limit, abs=5e-4)
    assert result.tail_bound == pytest.approx(limit - result.partial_sums[-1], rel=0.1)


def test_band_counterexample_diverges():
    model = band_model(50)
    for row in gap_table(model, 50):
        assert row.gap == pytest.approx(2 * row.m, rel=1e-9)
        assert row.gap > row.m
        assert row.bound == pytest.approx(row.gap, rel=1e-9)
    result = series_criterion(model)
    assert result.partial_sums[-1] > 2500
    assert result.verdict == "diverging"
    assert cms_vacuous(model)
    assert cms_vacuous(band_model(1000))
    with pytest.raises(UnboundedError):
        diag_norm(model)


def test_band_gap_values():
    row = counterexample_gap(band_model(), 10)
    assert row.gap == pytest.approx(20, rel=1e-10)
    assert row.t == pytest.approx(math.sqrt(1 - 0.0005) * 0.1 / 0.0005, rel=1e-12)
    assert row.full_gap > row.gap
    assert series_criterion(band_model()).verdict == "diverging"


def test_unit_modulus_drop_rule():
    dropped = DiagonalModel(partial(_listed, [1.0, 0.5]), partial(_listed, [0, 1]), 10)
    terms = series_terms(dropped)
    assert terms[0] == 0 and terms[1] == pytest.approx(1 / 3)
    assert not cms_vacuous(dropped)
    assert diag_norm(dropped).norm == pytest.approx(math.exp(2 / 3))

    kept = DiagonalModel(partial(_listed, [1.0, 0.5]), partial(_listed, [1, 0]), 10)
    result = series_criterion(kept)
    assert result.verdict == "diverging" and "alpha_1" in result.evidence
    with pytest.raises(InputError):
        counterexample_gap(kept, 1)


def test_alpha_outside_the_disc():
    model = DiagonalModel(partial(_constant, 1.5), _harmonic, 10)
    with pytest.raises(InputError):
        series_terms(model)


def test_diag_norm_examples():
    model = DiagonalModel(partial(_constant, 0.5), partial(_listed, [1.0]), 10)
    result = diag_norm(model)
    assert result.norm == pytest.approx(math.exp(2 / 3))
    assert result.tail_bound == 0
    zero = DiagonalModel(partial(_constant, 0.5), partial(_constant, 0), 100)
    assert diag_norm(zero).norm == 1


def test_diag_norm_matches_truncated_matrix():
    alphas = [0.5, -0.3j, 0.9, 0.1, 0.7, 0.2 + 0.2j, 0.0, 0.95]
    bs = [1.0, 0.5j, -0.25, 0.3, 0.1, 0.2, 1.0, 0.05]
    model = DiagonalModel(partial(_listed, alphas), partial(_listed, bs), 32)
    expected = composition_norm(truncate(model, 8)).norm
    assert diag_norm(model).norm == pytest.approx(expected, rel=1e-10)


def test_harmonic_terms_are_inconclusive():
    # α² = 1/2なので項は|b_m|² = 1/mになる。
    model = DiagonalModel(partial(_constant, math.sqrt(0.5)), lambda m: m ** -0.5, 1000)
    assert series_criterion(model).verdict == "inconclusive"
    with pytest.raises(InconclusiveError):
        diag_norm(model)


def test_tail_estimate_kinds():
    geometric = 0.5 ** np.arange(1, 41)
    kind, bound = tail_estimate(geometric)
    assert kind == "geometric"
    assert bound == pytest.approx(0.5 ** 40, rel=1e-6)
    assert tail_estimate(np.zeros(10)) == ("zero", 0.0)
    # アンダーフローで0になった項は有限個の項とみなす。
    underflow = 0.25 ** np.arange(1, 1001, dtype=float)
    assert tail_estimate(underflow) == ("zero", 0.0)


def test_geometric_preset_converges():
    presets = load_presets(PRESETS)
    model = build_model("geometric", [], presets)
    result = series_criterion(model)
    assert result.verdict == "converging"
    expected = math.fsum(0.25 * 0.25 ** m / 0.75 for m in range(1, 200))
    assert result.partial_sums[-1] == pytest.approx(expected, rel=1e-12)


def test_presets():
    presets = load_presets(PRESETS)
    assert set(presets) == {"paper-counterexample", "geometric", "constant"}
    model = build_model("constant", ["a=0.25"], presets, 20)
    assert model.alpha(3) == 0.25 and model.bcoef(4) == 0.25
    assert describe("constant", ["a=0.25"], presets)["parameters"] == {"a": 0.25}
    inline = build_model("inline", ["alpha=0.5,0.5j", "b=1,2"], presets, 5)
    assert_allclose(inline.alphas(), [0.5, 0.5j, 0, 0, 0])
    assert_allclose(inline.bs(), [1, 2, 0, 0, 0])
    assert parse_assignments(["r = 0.5"]) == {"r": "0.5"}


@pytest.mark.parametrize("name, assignments", [
    ("nothing", []),
    ("constant", ["r=0.5"]),
    ("constant", ["a=half"]),
    ("constant", ["a"]),
    ("inline", ["alpha=1,x"]),
    ("inline", ["gamma=1"]),
])
def test_preset_errors(name, assignments):
    with pytest.raises(InputError):
        build_model(name, assignments, load_presets(PRESETS))


def test_diag_norm_beyond_float_range():
    model = DiagonalModel(lambda m: 0.0, lambda m: 40.0 if m == 1 else 0.0, 10)
    result = diag_norm(model)
    assert result.norm == math.inf
    assert result.log_norm == pytest.approx(800)
