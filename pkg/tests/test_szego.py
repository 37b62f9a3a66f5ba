import math

import numpy as np
import pytest
import mpmath

from fhlab.symbols import SymbolSpec, TauSpec, tau_fourier
from fhlab.szego import (boundary_factor, c_constants, check_u_asymptotics, geometric_mean,
                         kernel_function, kernel_hat_closed, kernel_hat_numeric, log_tau_fourier,
                         power_sine_coeffs, szego_constant, u_coefficients, u_fourier, v_coefficients,
                         v_fourier, vu_entry, wiener_hopf)

SZEGO = TauSpec.laurent({0: 1.15, 1: -0.5, -1: -0.3})
SMOOTH = TauSpec.exp_laurent({1: 0.4, -1: -0.25})


def pure_u(beta, n):
    # exact u_hat(n) for tau = 1
    b = mpmath.mpc(beta)
    return complex(mpmath.gamma(1 - 2 * b) * mpmath.sinpi(b) / mpmath.pi * mpmath.gammaprod([n + b], [n + 1 - b]))


def test_log_tau_fourier_laurent():
    p = log_tau_fourier(SZEGO)
    ks = np.arange(1, 8)
    np.testing.assert_allclose(p.at(ks), -(0.5**ks) / ks, atol=1e-15)
    np.testing.assert_allclose(p.at(-ks), -(0.3**ks) / ks, atol=1e-15)
    assert abs(p.at(0)) < 1e-15


def test_log_tau_fourier_rejects_winding():
    with pytest.raises(ValueError):
        log_tau_fourier(TauSpec.laurent({1: 1.0, 0: 0.2}))


def test_geometric_mean_and_szego_constant():
    assert geometric_mean(SZEGO).value() == pytest.approx(1.0, abs=1e-14)
    assert szego_constant(SZEGO).value() == pytest.approx(1 / 0.85, abs=1e-13)
    assert geometric_mean(TauSpec.exp_laurent({0: 0.2 + 0.1j})).log() == pytest.approx(0.2 + 0.1j)
    # E = exp(sum k a_k a_-k) = exp(0.4 * -0.25)
    assert szego_constant(SMOOTH).log() == pytest.approx(-0.1, abs=1e-15)


@pytest.mark.parametrize("tau", [SZEGO, SMOOTH, TauSpec.laurent({0: 2.0, 2: 0.3j, -1: 0.4})])
def test_wiener_hopf_factorises(tau):
    f = wiener_hopf(tau)
    assert f.residual < 1e-13
    assert f.tau_plus.k_min == 0 and f.tau_minus.k_max == 0
    z = np.exp(1j * np.linspace(0.1, 6, 7))
    np.testing.assert_allclose(f.tau_plus.evaluate(z) * f.tau_minus.evaluate(z), tau(z), rtol=1e-13)
    # zero mode split evenly
    assert f.tau_plus.at(0) == pytest.approx(f.tau_minus.at(0))


def test_szego_factor_values():
    f = wiener_hopf(SZEGO)
    np.testing.assert_allclose(f.tau_plus.coeffs[:2], [1, -0.5], atol=1e-15)
    assert f.plus_at_one == pytest.approx(0.5)
    assert f.minus_at_one == pytest.approx(0.7)


def test_boundary_factor():
    assert boundary_factor(SymbolSpec(0.3)).value() == pytest.approx(1.0)
    assert boundary_factor(SymbolSpec(0.0, SMOOTH)).value() == pytest.approx(1.0)
    assert boundary_factor(SymbolSpec(1.3, SMOOTH)).log() == pytest.approx(1.3 * 0.65)


def test_power_sine_coeffs_against_quadrature():
    from fhlab.numerics import adaptive_quad
    alpha = -0.3 + 0.1j
    c = power_sine_coeffs(alpha, 6)
    for k in (0, 1, 6):
        f = lambda t: np.exp(alpha * np.log(4 * np.sin(t / 2) ** 2)) * np.cos(k * t)
        ref = adaptive_quad(f, 0, math.pi, 1e-13, left_exponent=2 * alpha.real) / math.pi
        assert c[k] == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("beta", [0.2, -0.3, 0.1 + 0.2j])
@pytest.mark.parametrize("n", [1, 17, 200])
def test_u_fourier_pure_jump_exact(beta, n):
    ref = pure_u(beta, n)
    assert u_fourier(SymbolSpec(beta), n) == pytest.approx(ref, rel=1e-9)
    assert u_coefficients(SymbolSpec(beta), [n])[0] == pytest.approx(ref, rel=1e-12)


def test_quadrature_and_convolution_agree():
    spec = SymbolSpec(0.2 + 0.1j, SMOOTH)
    for n in (3, 40):
        assert u_fourier(spec, n) == pytest.approx(u_coefficients(spec, [n])[0], rel=1e-9)
        assert v_fourier(spec, -n) == pytest.approx(v_coefficients(spec, [-n])[0], rel=1e-9)


def test_c_constant_signs():
    spec = SymbolSpec(0.2, TauSpec.exp_laurent({1: 0.4}))
    cc = c_constants(0.2, wiener_hopf(spec.tau))
    n = 400
    u = u_coefficients(spec, [n])[0] * n ** (1 - 0.4)
    v = v_coefficients(spec, [-n])[0] * n ** (1 + 0.4)
    assert u.real > 0 and cc.c0.real > 0
    # the coefficients of v go negative: c0' carries a minus sign
    assert v.real < 0 and cc.c0_prime.real < 0
    assert v / cc.c0_prime == pytest.approx(1, abs=0.01)
    prod = cc.c0 * cc.c0_prime
    assert prod == pytest.approx(-0.2 * math.tan(0.2 * math.pi) / math.pi, rel=1e-12)


def test_c_constants_pole():
    with pytest.raises(ValueError):
        c_constants(0.5, wiener_hopf(TauSpec.one()))


@pytest.mark.parametrize("tau", [TauSpec.one(), TauSpec.exp_laurent({1: 0.4})])
def test_u_asymptotics_trend(tau):
    rep = check_u_asymptotics(SymbolSpec(0.2, tau), [25, 50, 100, 200])
    assert rep.decreasing
    assert rep.deviations[-1] < 0.05
    rep = check_u_asymptotics(SymbolSpec(0.2, tau), [25, 50, 100, 200], which="v", method="conv")
    assert rep.decreasing


def test_u_lemma_strip_guard():
    with pytest.raises(ValueError):
        u_fourier(SymbolSpec(0.6), 3)


def test_vu_entry_leading_order():
    spec = SymbolSpec(0.2)
    cc = c_constants(0.2, wiener_hopf(spec.tau))
    vals = [vu_entry(spec, 0, 0, n, 40 * n).value * n for n in (20, 80)]
    errs = [abs(v / (cc.c0 * cc.c0_prime) - 1) for v in vals]
    assert errs[1] < errs[0] < 0.1
    with pytest.raises(ValueError):
        vu_entry(spec, 1, 0, 10, 10)


def test_kernel_closed_form_values():
    assert kernel_hat_closed(0.0, 1.0) == 0
    assert kernel_hat_closed(0.2, 0.0) == pytest.approx(-math.sin(0.2 * math.pi) ** 2 / math.cos(0.2 * math.pi) ** 2)
    xi = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(kernel_hat_closed(0.2, xi), kernel_hat_closed(0.2, -xi))


@pytest.mark.parametrize("beta", [0.2, 0.3j, -0.1 + 0.1j])
def test_kernel_numeric_matches_closed(beta):
    xi = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(kernel_hat_numeric(beta, xi), kernel_hat_closed(beta, xi), atol=1e-8)


def test_kernel_function_decay():
    k = kernel_function(0.2, [-60.0, 0.0, 60.0])
    assert abs(k[0]) < 1e-8 and abs(k[2]) < 1e-8 and abs(k[1]) > 1e-3
