"""Gamma and Barnes G for the jump constant ``G(1+beta) G(1-beta)``.

Barnes G is evaluated from its Weierstrass product

    G(1+z) = (2 pi)^(z/2) exp(-(z^2 (gamma+1) + z)/2)
             * prod_{k>=1} (1 + z/k)^k exp(z^2/(2k) - z)

after moving ``z`` into the strip ``1 <= Re z < 2`` with
``G(z+1) = Gamma(z) G(z)``. The product is summed in log form over
``k <= N`` and the remainder is closed with Euler-Maclaurin.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from .numerics import LogComplex

__all__ = ["EULER_GAMMA", "log_gamma", "barnes_g_log", "barnes_g", "fh_constant"]

EULER_GAMMA = 0.57721566490153286060651209008240243

_LOG_2PI = math.log(2.0 * math.pi)
_DEFAULT_TERMS = 10_000
# series f(k) = sum_{j>=3} (-1)^(j+1) z^j / (j k^(j-1)) is used once |z|/k drops below this
_SERIES_SWITCH = 0.05
_SERIES_ORDER = 24


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    Raises ValueError at the poles z = 0, -1, -2, ...
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise ValueError(f"Gamma has a pole at z = {z.real:g}")
    return complex(special.loggamma(z))


def _weierstrass_terms(z: complex, k: np.ndarray) -> np.ndarray:
    """log[(1+z/k)^k exp(z^2/(2k) - z)] for integer k >= 1."""
    out = np.empty(k.shape, dtype=complex)
    small = np.abs(z) / k < _SERIES_SWITCH
    kd = k[~small].astype(float)
    out[~small] = kd * np.log1p(z / kd) + z * z / (2.0 * kd) - z
    ks = k[small].astype(float)
    acc = np.zeros(ks.shape, dtype=complex)
    for j in range(_SERIES_ORDER, 2, -1):
        acc += (-1) ** (j + 1) * z**j / (j * ks ** (j - 1))
    out[small] = acc
    return out


def _tail(z: complex, n: int) -> complex:
    """Euler-Maclaurin estimate of sum_{k>n} f(k) for the Weierstrass terms."""
    # f(x) = sum_j a_j x^(1-j), a_j = (-1)^(j+1) z^j / j, j >= 3
    x = float(n)
    integral = f_n = d1 = d3 = 0j
    for j in range(3, _SERIES_ORDER + 1):
        a = (-1) ** (j + 1) * z**j / j
        integral += a * x ** (2 - j) / (j - 2)
        f_n += a * x ** (1 - j)
        d1 += a * (1 - j) * x ** (-j)
        d3 += a * (1 - j) * (-j) * (-j - 1) * x ** (-j - 2)
    # sum_{k>n} f(k) = int_n^inf f - f(n)/2 - B2/2! f'(n) - B4/4! f'''(n)
    return integral - f_n / 2.0 - d1 / 12.0 + d3 / 720.0


def _log_g_strip(w: complex, terms: int) -> complex:
    """log G(w) for 1 <= Re w < 2 from the truncated product plus tail."""
    z = w - 1.0
    k = np.arange(1, terms + 1)
    head = z / 2.0 * _LOG_2PI - (z * z * (EULER_GAMMA + 1.0) + z) / 2.0
    return head + complex(np.sum(_weierstrass_terms(z, k))) + _tail(z, terms)


def barnes_g_log(z, terms: int = _DEFAULT_TERMS) -> LogComplex:
    """log G(z) as a LogComplex.

    ``G`` is entire; at z = 0, -1, -2, ... the result is the exact zero
    (``log_abs = -inf``). The phase is the sum of the principal logs used in
    the argument reduction, so it may differ from the principal value by a
    multiple of 2*pi.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        return LogComplex.zero()
    shift = math.floor(z.real) - 1
    w = z - shift
    acc = _log_g_strip(w, terms)
    if shift > 0:
        for j in range(shift):
            acc += log_gamma(w + j)
    elif shift < 0:
        for j in range(1, -shift + 1):
            acc -= log_gamma(w - j)
    return LogComplex.from_log(acc)


def barnes_g(z, terms: int = _DEFAULT_TERMS) -> complex:
    return barnes_g_log(z, terms).value()


def fh_constant(beta) -> LogComplex:
    """log[G(1+beta) G(1-beta)]; exactly zero for nonzero integer beta.

    The two factors enter symmetrically, so beta and -beta give bitwise
    identical results.
    """
    beta = complex(beta)
    if beta.imag == 0.0 and beta.real == math.floor(beta.real) and beta.real != 0.0:
        return LogComplex.zero()
    a = barnes_g_log(1.0 + beta)
    b = barnes_g_log(1.0 - beta)
    return LogComplex(a.log_abs + b.log_abs, a.arg + b.arg)
