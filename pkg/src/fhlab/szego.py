"""Szego constants, Wiener-Hopf factors and the u/v machinery.

For ``sigma = (-z)^beta tau`` write ``tau = tau_- tau_+`` with
``tau_+ = exp(P(0)/2 + sum_{k>0} P(k) z^k)`` and ``tau_-`` built the same way
from ``k < 0``, where ``P = log tau``. Then

    u(e^{i t}) = (2 - 2 cos t)^(-beta) tau_-(e^{i t}) / tau_+(e^{i t}),
    v = 1/u,

and the coefficients of u and v decay like ``n^(-1 +/- 2 beta)``. Everything
here assumes ``|Re beta| < 1/2`` wherever u or v is involved.

Sign note: the leading coefficient of ``v_hat(-n)`` is
``-Gamma(1+2 beta) sin(pi beta)/pi * tau_+(1)/tau_-(1)``. The minus sign is
what the exact coefficients of ``(2 - 2 cos t)^beta`` give, and it is the
sign under which the kernel symbol below takes its closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import LogComplex, adaptive_quad, fft
from .specfun import log_gamma
from .symbols import FourierSeries, LaurentPoly, SymbolSpec, TauSpec, tau_fourier, verify_class

__all__ = [
    "Factorization",
    "CConstants",
    "ULemmaReport",
    "VUEntry",
    "log_tau_fourier",
    "geometric_mean",
    "szego_constant",
    "wiener_hopf",
    "boundary_factor",
    "power_sine_coeffs",
    "u_fourier",
    "v_fourier",
    "u_coefficients",
    "v_coefficients",
    "c_constants",
    "check_u_asymptotics",
    "vu_entry",
    "kernel_hat_closed",
    "kernel_function",
    "kernel_hat_numeric",
]

_MAX_GRID = 1 << 20


def _log_samples(tau: TauSpec, m: int) -> np.ndarray | None:
    """log tau on an m-point circle grid with a continuously tracked argument.

    Returns None when adjacent samples turn by more than pi/4 (grid too coarse).
    """
    vals = tau(np.exp(2j * np.pi * np.arange(m) / m))
    steps = np.angle(np.roll(vals, -1) / vals)
    if np.max(np.abs(steps)) > np.pi / 4:
        return None
    total = steps.sum()
    if abs(total) > np.pi:
        raise ValueError("tau winds around the origin; log tau is not single valued")
    arg = np.angle(vals[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    return np.log(np.abs(vals)) + 1j * arg


@lru_cache(maxsize=128)
def _laurent_log_table(tau: TauSpec) -> tuple[int, tuple[complex, ...]]:
    rep = verify_class(tau)
    if not rep.passed:
        raise ValueError(f"tau is not admissible: {rep}")
    m = 256
    prev = None
    while True:
        samples = _log_samples(tau, m)
        if samples is not None:
            c = np.fft.fftshift(fft(samples) / m)
            cmax = np.max(np.abs(c))
            tail = max(np.max(np.abs(c[: m // 4])), np.max(np.abs(c[3 * m // 4:])))
            if prev is not None and tail <= 1e-15 * cmax:
                if np.max(np.abs(c[m // 4: 3 * m // 4] - prev)) <= 1e-14 * cmax:
                    break
            prev = c
        else:
            prev = None
        if m >= _MAX_GRID:
            raise RuntimeError("log tau branch tracking or coefficient decay did not resolve")
        m *= 2
    c[np.abs(c) < 1e-17 * cmax] = 0.0
    nz = np.nonzero(c)[0]
    lo_i, hi_i = int(nz[0]), int(nz[-1])
    return lo_i - m // 2, tuple(c[lo_i: hi_i + 1].tolist())


def log_tau_fourier(tau: TauSpec, k_lo: int | None = None, k_hi: int | None = None) -> FourierSeries:
    """Fourier coefficients of log tau.

    Exact for the exp_laurent family; FFT of the branch-tracked logarithm for
    a Laurent polynomial tau.
    """
    if tau.form == "exp_laurent":
        poly = tau.poly
        lo, hi = poly.k_min, poly.k_max
        full = np.array([poly.coefficient(k) for k in range(lo, hi + 1)], dtype=complex)
    else:
        lo, vals = _laurent_log_table(tau)
        full = np.array(vals, dtype=complex)
        hi = lo + len(full) - 1
    series = FourierSeries(lo, full)
    if k_lo is None and k_hi is None:
        return series
    return series.restrict(lo if k_lo is None else k_lo, hi if k_hi is None else k_hi)


def geometric_mean(tau: TauSpec) -> LogComplex:
    """G[tau] = exp(log_tau_hat(0))."""
    return LogComplex.from_log(log_tau_fourier(tau).at(0))


def _szego_sum(tau: TauSpec) -> tuple[complex, float]:
    p = log_tau_fourier(tau)
    kmax = max(p.k_max, -p.k_min, 0)
    if kmax == 0:
        return 0j, 0.0
    k = np.arange(1, kmax + 1)
    terms = k * p.at(k) * p.at(-k)
    mags = np.abs(terms)
    # stop once a geometric tail estimate drops below 1e-14
    total = 0j
    for idx in range(len(terms)):
        total += terms[idx]
        if tau.form == "exp_laurent":
            continue
        if idx >= 4 and mags[idx] > 0:
            r = (mags[idx] / mags[idx - 4]) ** 0.25 if mags[idx - 4] > 0 else 0.0
            if r < 1 and mags[idx] * r / (1 - r) < 1e-14:
                return total, float(mags[idx] * r / (1 - r))
        elif mags[idx:].max(initial=0.0) == 0.0:
            return total, 0.0
    return total, 0.0 if tau.form == "exp_laurent" else float(mags[-1])


def szego_constant(tau: TauSpec) -> LogComplex:
    """E[tau] = exp(sum_{k>=1} k logtau_hat(k) logtau_hat(-k))."""
    return LogComplex.from_log(_szego_sum(tau)[0])


def _exp_power_series(g0: complex, g: np.ndarray, max_terms: int = 4096) -> np.ndarray:
    """Coefficients of exp(g0 + sum_{j>=1} g[j-1] z^j) via f' = g' f."""
    f = [complex(np.exp(g0))]
    jg = np.arange(1, len(g) + 1) * g
    fmax = abs(f[0])
    k = 1
    while k <= max_terms:
        upto = min(k, len(jg))
        fk = np.dot(jg[:upto], np.asarray(f[k - upto:k][::-1])) / k
        f.append(complex(fk))
        fmax = max(fmax, abs(fk))
        if k > len(g) + 4 and max(abs(x) for x in f[-6:]) < 1e-18 * fmax:
            break
        k += 1
    arr = np.asarray(f)
    nz = np.nonzero(np.abs(arr) >= 1e-18 * fmax)[0]
    return arr[: nz[-1] + 1]


@dataclass(frozen=True)
class Factorization:
    """tau = tau_minus * tau_plus with the zero mode split evenly."""

    tau_plus: FourierSeries
    tau_minus: FourierSeries
    log_g_mean: complex
    residual: float

    @property
    def plus_at_one(self) -> complex:
        return complex(self.tau_plus.coeffs.sum())

    @property
    def minus_at_one(self) -> complex:
        return complex(self.tau_minus.coeffs.sum())


@lru_cache(maxsize=128)
def wiener_hopf(tau: TauSpec) -> Factorization:
    p = log_tau_fourier(tau)
    g0 = p.at(0) / 2.0
    kp = max(p.k_max, 0)
    km = max(-p.k_min, 0)
    plus = _exp_power_series(g0, np.asarray(p.at(np.arange(1, kp + 1)), dtype=complex))
    minus = _exp_power_series(g0, np.asarray(p.at(-np.arange(1, km + 1)), dtype=complex))
    tau_plus = FourierSeries(0, plus)
    tau_minus = FourierSeries(-(len(minus) - 1), minus[::-1].copy())
    prod = np.convolve(tau_minus.coeffs, tau_plus.coeffs)
    prod_series = FourierSeries(tau_minus.k_min, prod)
    t = tau_fourier(tau)
    lo = min(prod_series.k_min, t.k_min)
    hi = max(prod_series.k_max, t.k_max)
    ks = np.arange(lo, hi + 1)
    residual = float(np.max(np.abs(prod_series.at(ks) - t.at(ks))))
    return Factorization(tau_plus, tau_minus, complex(p.at(0)), residual)


def boundary_factor(spec: SymbolSpec) -> LogComplex:
    """tau_+(1)^beta tau_-(1)^(-beta), computed from the log coefficients.

    This is the jump's coupling to the smooth factor; it equals 1 when the
    positive and negative log coefficients of tau sum to minus each other
    (for instance tau = 1).
    """
    p = log_tau_fourier(spec.tau)
    ks = p.indices
    plus = p.coeffs[ks > 0].sum()
    minus = p.coeffs[ks < 0].sum()
    return LogComplex.from_log(spec.beta * (plus - minus))


def _ratio_tau(tau: TauSpec, sign: int) -> TauSpec:
    """(tau_-/tau_+)^sign as an exp_laurent spec: exp(sign*(P_- - P_+))."""
    p = log_tau_fourier(tau)
    coeffs = {}
    for k, c in zip(p.indices.tolist(), p.coeffs.tolist()):
        if k > 0:
            coeffs[k] = -sign * c
        elif k < 0:
            coeffs[k] = sign * c
    return TauSpec.exp_laurent(coeffs)


def _require_strip(beta: complex) -> None:
    if abs(beta.real) >= 0.5:
        raise ValueError(f"need |Re beta| < 1/2, got beta = {beta}")


def _fourier_singular(spec: SymbolSpec, n: int, power: complex, sign: int, tol: float) -> complex:
    # (1/2pi) int_0^pi w(t) [h(e^{it}) e^{-int} + h(e^{-it}) e^{int}] dt, w = (4 sin^2(t/2))^power
    h = _ratio_tau(spec.tau, sign)

    def integrand(t):
        w = np.exp(power * np.log(4.0 * np.sin(0.5 * t) ** 2))
        e = np.exp(1j * t)
        return w * (h(e) * np.exp(-1j * n * t) + h(np.conj(e)) * np.exp(1j * n * t))

    val = adaptive_quad(integrand, 0.0, math.pi, tol * 2 * math.pi,
                        left_exponent=2.0 * power.real)
    return complex(val) / (2 * math.pi)


def u_fourier(spec: SymbolSpec, n: int, tol: float = 1e-12) -> complex:
    """u_hat(n) by adaptive quadrature with the algebraic endpoint declared."""
    _require_strip(spec.beta)
    return _fourier_singular(spec, int(n), -spec.beta, 1, tol)


def v_fourier(spec: SymbolSpec, m: int, tol: float = 1e-12) -> complex:
    """v_hat(m), v = 1/u; the asymptotic statements concern m = -n."""
    _require_strip(spec.beta)
    return _fourier_singular(spec, int(m), spec.beta, -1, tol)


def power_sine_coeffs(alpha, m_max: int) -> np.ndarray:
    """Fourier coefficients of (2 - 2 cos t)^alpha for m = 0..m_max (even in m).

    c(0) = Gamma(1+2 alpha)/Gamma(1+alpha)^2, c(m+1)/c(m) = (m - alpha)/(m + 1 + alpha).
    """
    alpha = complex(alpha)
    c0 = np.exp(log_gamma(1 + 2 * alpha) - 2 * log_gamma(1 + alpha))
    m = np.arange(m_max)
    ratios = (m - alpha) / (m + 1 + alpha)
    return c0 * np.concatenate([[1.0 + 0j], np.cumprod(ratios)])


def _conv_coefficients(spec: SymbolSpec, ks, power: complex, sign: int) -> np.ndarray:
    ks = np.asarray(ks, dtype=int)
    h = tau_fourier(_ratio_tau(spec.tau, sign))
    js = h.indices
    diffs = ks[:, None] - js[None, :]
    table = power_sine_coeffs(power, int(np.max(np.abs(diffs))))
    return (table[np.abs(diffs)] * h.coeffs[None, :]).sum(axis=1)


def u_coefficients(spec: SymbolSpec, ks) -> np.ndarray:
    """u_hat at many indices: exact singular-factor coefficients convolved with tau_-/tau_+."""
    _require_strip(spec.beta)
    return _conv_coefficients(spec, ks, -spec.beta, 1)


def v_coefficients(spec: SymbolSpec, ks) -> np.ndarray:
    _require_strip(spec.beta)
    return _conv_coefficients(spec, ks, spec.beta, -1)


@dataclass(frozen=True)
class CConstants:
    c0: complex
    c0_prime: complex


def c_constants(beta, fact: Factorization) -> CConstants:
    """Leading coefficients of u_hat(n) ~ c0 n^(-1+2b) and v_hat(-n) ~ c0' n^(-1-2b)."""
    beta = complex(beta)
    for z in (1 - 2 * beta, 1 + 2 * beta):
        if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
            raise ValueError(f"Gamma pole at {z.real:g}: beta = {beta} is not admissible")
    s = np.sin(np.pi * beta) / np.pi
    ratio = fact.minus_at_one / fact.plus_at_one
    c0 = np.exp(log_gamma(1 - 2 * beta)) * s * ratio
    c0p = -np.exp(log_gamma(1 + 2 * beta)) * s / ratio
    return CConstants(complex(c0), complex(c0p))


@dataclass(frozen=True)
class ULemmaReport:
    which: str
    n: tuple[int, ...]
    coefficients: tuple[complex, ...]
    ratios: tuple[complex, ...]

    @property
    def deviations(self) -> np.ndarray:
        return np.abs(np.asarray(self.ratios) - 1.0)

    @property
    def decreasing(self) -> bool:
        d = self.deviations
        return bool(np.all(np.diff(d) < 0))


def check_u_asymptotics(spec: SymbolSpec, n_list, which: str = "u", method: str = "quad") -> ULemmaReport:
    """Tabulate u_hat(n) n^(1-2b)/c0 (or v_hat(-n) n^(1+2b)/c0') over n_list."""
    beta = spec.beta
    _require_strip(beta)
    if beta == 0:
        raise ValueError("beta = 0: u is smooth and has no algebraic tail")
    cc = c_constants(beta, wiener_hopf(spec.tau))
    ns = [int(n) for n in n_list]
    if which == "u":
        if method == "quad":
            coef = [u_fourier(spec, n) for n in ns]
        else:
            coef = list(u_coefficients(spec, ns))
        ratios = [c * n ** (1 - 2 * beta) / cc.c0 for c, n in zip(coef, ns)]
    elif which == "v":
        if method == "quad":
            coef = [v_fourier(spec, -n) for n in ns]
        else:
            coef = list(v_coefficients(spec, [-n for n in ns]))
        ratios = [c * n ** (1 + 2 * beta) / cc.c0_prime for c, n in zip(coef, ns)]
    else:
        raise ValueError("which must be 'u' or 'v'")
    return ULemmaReport(which, tuple(ns), tuple(complex(c) for c in coef),
                        tuple(complex(r) for r in ratios))


@dataclass(frozen=True)
class VUEntry:
    value: complex
    tail_estimate: float
    terms: int


def vu_entry(spec: SymbolSpec, i: int, j: int, n: int, k_max: int) -> VUEntry:
    """(VU)_{i,j} = sum_{k=1}^{k_max} u_hat(k+n-j) v_hat(i-n-k), for i, j <= 0.

    The tail estimate assumes the summand decays like k^-2 beyond k_max,
    as the leading coefficient asymptotics imply.
    """
    if i > 0 or j > 0:
        raise ValueError("VU is indexed by non-positive integers")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    _require_strip(spec.beta)
    k = np.arange(1, k_max + 1)
    u = u_coefficients(spec, k + n - j)
    v = v_coefficients(spec, i - n - k)
    summand = u * v
    last = abs(summand[-1])
    tail = last * (n + k_max + min(-i, -j))
    return VUEntry(complex(summand.sum()), float(tail), int(k_max))


def kernel_hat_closed(beta, xi):
    """-sin^2(pi b) / (cosh^2(pi xi) - sin^2(pi b))."""
    beta = complex(beta)
    xi = np.asarray(xi, dtype=float)
    s2 = np.sin(np.pi * beta) ** 2
    out = -s2 / (np.cosh(np.pi * xi) ** 2 - s2)
    return out if out.ndim else complex(out)


def _c0c0_prime(beta: complex) -> complex:
    # tau-independent product of the two leading constants
    return complex(-np.exp(log_gamma(1 - 2 * beta) + log_gamma(1 + 2 * beta))
                   * np.sin(np.pi * beta) ** 2 / np.pi**2)


def kernel_function(beta, x, tol: float = 1e-13) -> np.ndarray:
    """k(x) = c0 c0' e^{(1/2+b)x} int_0^inf (z+1)^(-1+2b) (z+e^x)^(-1-2b) dz.

    Evaluated for a whole grid of x at once with ``z = e^s`` and the
    integrand assembled in log form, so large |x| neither overflows nor
    loses the e^{(1/2+b)x} prefactor.
    """
    beta = complex(beta)
    _require_strip(beta)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pref = _c0c0_prime(beta)
    lo = min(float(x.min()), 0.0) - 45.0
    hi = max(float(x.max()), 0.0) + 45.0

    def integrand(s):
        s = s[:, None]
        logv = ((0.5 + beta) * x[None, :] + s
                + (-1 + 2 * beta) * np.logaddexp(s, 0.0)
                - (1 + 2 * beta) * np.logaddexp(s, x[None, :]))
        return np.exp(logv)

    breaks = sorted(set(np.linspace(lo, hi, 64).tolist()))
    val = adaptive_quad(integrand, lo, hi, tol, points=breaks)
    return pref * np.asarray(val)


def kernel_hat_numeric(beta, xi_grid, step: float = 0.1, x_max: float | None = None) -> np.ndarray:
    """Fourier transform ``int k(x) e^{-i xi x} dx`` of `kernel_function`.

    k decays like exp(-(1/2 - |Re b|)|x|) (times at most a power of |x|), so
    the window |x| <= x_max is chosen where that envelope is ~1e-12. k is
    analytic in the strip |Im x| < pi, so the trapezoid rule on the window
    converges geometrically in 1/step.
    """
    beta = complex(beta)
    _require_strip(beta)
    xi = np.atleast_1d(np.asarray(xi_grid, dtype=float))
    if x_max is None:
        x_max = min(400.0, 30.0 / (0.5 - abs(beta.real)))
    x = np.arange(-x_max, x_max + step / 2, step)
    k = kernel_function(beta, x)
    phases = np.exp(-1j * np.outer(xi, x))
    return step * (phases @ k)
