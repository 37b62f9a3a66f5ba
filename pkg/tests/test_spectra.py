import numpy as np
import pytest

from fhlab.spectra import canonical_check, eig_count_near, limiting_set_check, parse_functional
from fhlab.symbols import LaurentPoly, SymbolSpec, TauSpec

SMOOTH = TauSpec.exp_laurent({1: 0.4, -1: -0.25})


def test_parse_functional():
    z = np.array([1 + 2j])
    assert parse_functional("pow3").func(z)[0] == (1 + 2j) ** 3
    assert parse_functional("pow3").power == 3
    assert parse_functional("abs2").func(z)[0] == 5
    assert parse_functional("re").func(z)[0] == 1
    assert parse_functional("im").func(z)[0] == 2
    assert parse_functional("dist2:1,1").func(z)[0] == pytest.approx(1)
    for bad in ("pow5", "abs", "dist2:1"):
        with pytest.raises(ValueError):
            parse_functional(bad)


def test_mean_is_exact_and_mass_is_one():
    spec = SymbolSpec(0.3 + 0.1j, SMOOTH)
    m = canonical_check(spec, 60, ["pow1", "pow2", "abs2", "re"])
    assert m.mass == 1
    assert m["pow1"].deviation < 1e-9
    assert m["pow1"].trace_residual < 1e-8
    assert m["pow2"].trace_residual < 1e-8


def test_shift_symbol_is_not_canonically_distributed():
    # sigma = z: strictly lower triangular
    m = canonical_check(LaurentPoly.from_mapping({1: 1.0}), 40, ["abs2", "pow2"])
    assert m["abs2"].empirical == 0
    assert m["abs2"].deviation == pytest.approx(1.0, abs=1e-12)
    # analytic moments cannot see the failure
    assert m["pow2"].deviation < 1e-12


def test_nilpotent_counterexample():
    spec = SymbolSpec(1)
    assert canonical_check(spec, 50, ["abs2"])["abs2"].deviation == pytest.approx(1, abs=1e-12)
    rep = limiting_set_check(spec, [50])[0]
    assert rep.max_eig_to_range == pytest.approx(1, abs=1e-5)
    assert eig_count_near(spec, 50, 0, 0.5) == 51


def test_pure_jump_trends():
    spec = SymbolSpec(0.3)
    ns = [32, 64, 128]
    dev = [canonical_check(spec, n, ["abs2"])["abs2"].deviation for n in ns]
    assert dev[0] > dev[1] > dev[2]
    reps = limiting_set_check(spec, ns)
    assert reps[0].max_eig_to_range > reps[-1].max_eig_to_range
    assert reps[0].max_range_to_eig > reps[1].max_range_to_eig > reps[2].max_range_to_eig
    assert all(r.max_eig_to_range >= 0 for r in reps)


def test_chord_flag_only_shrinks_distances():
    spec = SymbolSpec(0.3 + 0.1j, SMOOTH)
    a = limiting_set_check(spec, [64])[0]
    b = limiting_set_check(spec, [64], chord=True)[0]
    assert b.max_eig_to_range <= a.max_eig_to_range + 1e-12


def test_eig_count_near():
    spec = SymbolSpec(0.3)
    ratios = [eig_count_near(spec, n, 1.0, 0.2) / n for n in (64, 128)]
    assert all(0.05 < r < 0.5 for r in ratios)
    assert eig_count_near(spec, 64, 10.0, 0.5) == 0
    with pytest.raises(ValueError):
        eig_count_near(spec, 64, 0, 0)
