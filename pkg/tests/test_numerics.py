import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fhlab.numerics import (LogComplex, QuadratureError, adaptive_quad, fft, ifft, linear_fit,
                            log_accumulate, wrap_phase)

finite = st.floats(-1e3, 1e3, allow_nan=False)
nonzero_complex = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False)


def test_logcomplex_roundtrip():
    z = -3.0 + 4.0j
    lc = LogComplex.from_complex(z)
    assert lc.log_abs == pytest.approx(math.log(5.0))
    assert lc.value() == pytest.approx(z)
    assert complex(lc) == pytest.approx(z)


def test_zero_is_absorbing():
    z = LogComplex.zero()
    assert z.is_zero
    assert (z * LogComplex.from_complex(2.0)).is_zero
    assert z.value() == 0
    with pytest.raises(ZeroDivisionError):
        LogComplex.one() / z


def test_negation_adds_pi():
    lc = -LogComplex.from_complex(2.0)
    assert lc.value() == pytest.approx(-2.0)


def test_no_overflow_in_log_form():
    big = LogComplex(5000.0, 0.3)
    q = (big * big) / big
    assert q.log_abs == pytest.approx(5000.0)
    assert big.ratio_minus_one(big) == 0


@given(nonzero_complex, nonzero_complex)
def test_product_and_quotient_match_complex(a, b):
    la, lb = LogComplex.from_complex(a), LogComplex.from_complex(b)
    np.testing.assert_allclose((la * lb).value(), a * b, rtol=1e-12)
    np.testing.assert_allclose((la / lb).value(), a / b, rtol=1e-12)


@given(st.lists(nonzero_complex, min_size=1, max_size=30))
def test_log_accumulate_matches_product(vals):
    acc = log_accumulate(vals)
    ref = np.prod(np.asarray(vals))
    assert acc.log_abs == pytest.approx(float(np.sum(np.log(np.abs(vals)))), abs=1e-9)
    assert acc.phase_gap(LogComplex.from_complex(ref)) < 1e-9


def test_log_accumulate_keeps_phase_unwrapped():
    acc = log_accumulate([1j] * 8)
    assert acc.arg == pytest.approx(4 * math.pi)
    assert acc.phase_gap(LogComplex.one()) < 1e-12


def test_ratio_minus_one_and_gaps():
    a = LogComplex.from_complex(1.0 + 1e-9)
    b = LogComplex.one()
    assert a.ratio_minus_one(b) == pytest.approx(1e-9, rel=1e-6)
    assert LogComplex(0.0, 2 * math.pi).phase_gap(LogComplex(0.0, 0.0)) < 1e-15
    assert LogComplex(200.0).log_abs_gap(LogComplex(202.0)) == pytest.approx(2 / 202)


@given(finite)
def test_wrap_phase_range(x):
    w = float(wrap_phase(x))
    assert -math.pi <= w < math.pi
    assert abs(math.remainder(x - w, 2 * math.pi)) < 1e-9


def test_fft_requires_power_of_two():
    with pytest.raises(ValueError):
        fft(np.ones(12))
    x = np.random.default_rng(1).standard_normal(16)
    np.testing.assert_allclose(ifft(fft(x)), x, atol=1e-15)


def test_quad_smooth_and_oscillatory():
    assert adaptive_quad(np.exp, 0, 1) == pytest.approx(math.e - 1, abs=1e-13)
    val = adaptive_quad(lambda t: np.exp(1j * t), 0, 2 * math.pi)
    assert abs(val) < 1e-12


@pytest.mark.parametrize("e", [-0.5, -0.9, -0.3, 0.4])
def test_quad_endpoint_power(e):
    val = adaptive_quad(lambda x: x**e, 0, 1, 1e-12, left_exponent=e)
    assert val == pytest.approx(1 / (e + 1), rel=1e-10)
    val = adaptive_quad(lambda x: (-x) ** e, -1, 0, 1e-12, right_exponent=e)
    assert val == pytest.approx(1 / (e + 1), rel=1e-10)


def test_quad_breakpoints_and_reversal():
    f = lambda x: np.abs(x - 0.3)
    assert adaptive_quad(f, 0, 1, points=[0.3]) == pytest.approx(0.045 + 0.245, abs=1e-13)
    assert adaptive_quad(f, 1, 0, points=[0.3]) == pytest.approx(-0.29, abs=1e-13)


def test_quad_vector_valued():
    ks = np.arange(4)
    val = adaptive_quad(lambda x: np.cos(np.outer(x, ks)), 0, math.pi / 2)
    np.testing.assert_allclose(val, [math.pi / 2, 1.0, 0.0, -1 / 3], atol=1e-12)


def test_quad_error_carries_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_quad(lambda x: np.sin(1 / x), 1e-9, 1, 1e-14, limit=5)
    assert np.isfinite(info.value.estimate)


@given(st.floats(-5, 5), st.floats(-5, 5))
@settings(max_examples=50)
def test_linear_fit_recovers_line(m, c):
    x = np.linspace(0, 3, 7)
    fit = linear_fit(x, m * x + c)
    assert fit.slope == pytest.approx(m, abs=1e-10)
    assert fit.intercept == pytest.approx(c, abs=1e-10)
    assert fit.max_residual < 1e-10


def test_linear_fit_rejects_degenerate():
    with pytest.raises(ValueError):
        linear_fit([1, 1, 1], [1, 2, 3])
