"""Determinant asymptotics for sigma = (-z)^beta tau and the checks built on them.

Prediction (leading order, beta not a nonzero integer):

    D_n ~ G[tau]^(n+1) n^(-beta^2) G(1+beta) G(1-beta) E[tau].

With ``boundary_factor=True`` the constant also carries
``tau_+(1)^beta tau_-(1)^(-beta)``, the coupling between the jump and the
smooth factor. That factor is 1 when tau = 1 or beta = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numerics import LineFit, LogComplex, LogDet, linear_fit, wrap_phase
from .specfun import fh_constant
from .symbols import SymbolSpec
from .szego import boundary_factor as _boundary_factor
from .szego import geometric_mean, szego_constant
from .toeplitz import build, inverse_corner, logdet_levinson, logdet_lu

__all__ = [
    "AsymptoticPrediction",
    "SweepRow",
    "FitResult",
    "JacobiReport",
    "CornerScaling",
    "prediction",
    "predict_logdet",
    "pure_jump_exact_logdet",
    "pure_jump_increment",
    "ratio_sweep",
    "fit_exponent",
    "jacobi_check",
    "corner_scaling_check",
]


@dataclass(frozen=True)
class AsymptoticPrediction:
    log_g_mean: complex
    beta_sq: complex
    log_constant: LogComplex

    @property
    def zero_constant(self) -> bool:
        return self.log_constant.is_zero

    def at(self, n: int) -> LogDet:
        if self.zero_constant:
            return LogComplex.zero()
        w = (n + 1) * self.log_g_mean - self.beta_sq * math.log(n)
        return LogComplex.from_log(w) * self.log_constant


def prediction(spec: SymbolSpec, boundary_factor: bool = False) -> AsymptoticPrediction:
    beta = spec.beta
    const = fh_constant(beta) * szego_constant(spec.tau)
    if boundary_factor and not const.is_zero:
        const = const * _boundary_factor(spec)
    return AsymptoticPrediction(geometric_mean(spec.tau).log(), beta * beta, const)


def predict_logdet(spec: SymbolSpec, n: int, boundary_factor: bool = False) -> LogDet:
    """log of the leading-order prediction for D_n; exact zero for nonzero integer beta."""
    if n < 2:
        raise ValueError("the prediction needs n >= 2")
    return prediction(spec, boundary_factor).at(n)


def _check_noninteger(beta: complex) -> None:
    if beta != 0 and beta.imag == 0.0 and beta.real == math.floor(beta.real):
        raise ValueError(f"beta = {beta.real:g} is an integer; the pure-jump matrix is singular")


def pure_jump_exact_logdet(beta, n: int) -> LogDet:
    """Closed-form log D_n for sigma = (-z)^beta (tau = 1).

    Entries sin(pi b)/(pi (b - i + j)) form a Cauchy matrix with x_i = b - i,
    y_j = j. Grouping the Cauchy factors by d = j - i gives

        D_n = (sin(pi b)/(pi b))^(n+1) prod_{d=1}^n (1 - b^2/d^2)^-(n+1-d),

    which is summed with log1p so nothing large has to cancel.
    """
    beta = complex(beta)
    if n < 0:
        raise ValueError("n must be non-negative")
    if beta == 0:
        return LogComplex.one()
    _check_noninteger(beta)
    lead = np.log(np.sin(np.pi * beta) / (np.pi * beta))
    d = np.arange(1, n + 1, dtype=float)
    tail = np.sum((n + 1 - d) * np.log1p(-beta * beta / (d * d)))
    return LogComplex.from_log((n + 1) * lead - tail)


def pure_jump_increment(beta, n: int) -> complex:
    """D_n / D_{n-1} straight from the Cauchy factors.

    (sin(pi b)/pi) prod_{d=1}^n (-d^2) / prod_{d=-n}^n (b + d).
    """
    beta = complex(beta)
    _check_noninteger(beta)
    if n < 1:
        raise ValueError("n must be at least 1")
    d = np.arange(1, n + 1, dtype=float)
    num = np.sum(np.log(d * d)) + 1j * np.pi * n
    den = np.sum(np.log(beta + np.arange(-n, n + 1)))
    return complex(np.sin(np.pi * beta) / np.pi * np.exp(num - den))


@dataclass(frozen=True)
class SweepRow:
    n: int
    logdet: LogDet
    prediction: LogDet
    ratio_minus_one: complex | None
    source: str


def _determinants(spec: SymbolSpec, ns: Sequence[int]) -> list[tuple[LogDet, str]]:
    if spec.pure_jump and (spec.beta == 0 or not spec.integer_beta):
        return [(pure_jump_exact_logdet(spec.beta, n), "oracle") for n in ns]
    lev = logdet_levinson(spec, max(ns))
    out = []
    for n in ns:
        if lev.breakdown is None or n < lev.breakdown:
            out.append((lev[n], "levinson"))
        else:
            out.append((logdet_lu(build(spec, n)), "lu"))
    return out


def ratio_sweep(spec: SymbolSpec, n_list: Sequence[int], boundary_factor: bool = False) -> list[SweepRow]:
    """D_n against the prediction for each n (ascending)."""
    ns = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(ns, ns[1:])) or (ns and ns[0] < 2):
        raise ValueError("n_list must be ascending with n >= 2")
    pred = prediction(spec, boundary_factor)
    rows = []
    for n, (ld, src) in zip(ns, _determinants(spec, ns)):
        p = pred.at(n)
        r = None if p.is_zero or ld.is_zero else ld.ratio_minus_one(p)
        rows.append(SweepRow(n, ld, p, r, src))
    return rows


@dataclass(frozen=True)
class FitResult:
    estimate: complex
    real_fit: LineFit
    imag_fit: LineFit
    unwrap_ambiguous: bool

    @property
    def beta_sq(self) -> complex:
        return -self.estimate


def _unwrap(phases: np.ndarray) -> tuple[np.ndarray, bool]:
    steps = wrap_phase(np.diff(phases))
    ambiguous = bool(np.any(np.abs(steps) > np.pi / 2))
    return np.concatenate([[phases[0]], phases[0] + np.cumsum(steps)]), ambiguous


def _log_slope(ns, logs: Sequence[LogDet], shift: complex) -> tuple[LineFit, LineFit, bool]:
    x = np.log(np.asarray(ns, dtype=float))
    re = np.array([l.log_abs for l in logs]) - np.asarray(ns) * shift.real
    ph = np.array([l.arg for l in logs]) - np.asarray(ns) * shift.imag
    ph, amb = _unwrap(ph)
    return linear_fit(x, re), linear_fit(x, ph), amb


def fit_exponent(spec: SymbolSpec, n_list: Sequence[int]) -> FitResult:
    """Estimate -beta^2 as the log-log slope of D_n / G[tau]^(n+1)."""
    ns = [int(n) for n in n_list]
    if len(ns) < 4 or ns[-1] < 4 * ns[0]:
        raise ValueError("need at least 4 sizes spanning two octaves")
    logs = [ld for ld, _ in _determinants(spec, ns)]
    lg = geometric_mean(spec.tau).log()
    ns1 = [n + 1 for n in ns]
    re, im, amb = _log_slope(ns, [LogComplex(l.log_abs - n1 * lg.real, l.arg - n1 * lg.imag)
                                  for l, n1 in zip(logs, ns1)], 0j)
    return FitResult(complex(re.slope, im.slope), re, im, amb)


@dataclass(frozen=True)
class JacobiReport:
    n: int
    p: int
    lhs: LogDet
    rhs: LogDet
    residual: float
    sign_flipped_residual: float


def jacobi_check(spec: SymbolSpec, n: int, p: int) -> JacobiReport:
    """D_{n-p}[(-z)^(-p) sigma] against det X * D_n[sigma].

    X is the p x p corner of T_n^{-1} (rows n-p+1..n, columns 0..p-1). The
    identity holds with no extra sign: Jacobi's complementary-minor theorem
    contributes (-1)^(pn) and rewriting z^(-p) as (-z)^(-p) contributes
    (-1)^(p(n-p+1)), whose product is +1. ``sign_flipped_residual`` is the
    discrepancy after multiplying the right side by (-1)^p.
    """
    if not 1 <= p <= min(n, 4):
        raise ValueError("need 1 <= p <= min(n, 4)")
    if spec.integer_beta:
        raise ValueError("beta must not be an integer")
    lhs = logdet_lu(build(spec.shifted(-p), n - p))
    mat = build(spec, n)
    dn = logdet_lu(mat)
    x = inverse_corner(mat, n, p)
    rhs = x.logdet() * dn
    flipped = rhs * LogComplex(0.0, math.pi * p)
    return JacobiReport(n, p, lhs, rhs, abs(lhs.ratio_minus_one(rhs)), abs(lhs.ratio_minus_one(flipped)))


@dataclass(frozen=True)
class CornerScaling:
    p: int
    n: tuple[int, ...]
    det_x: tuple[LogDet, ...]
    slope: complex
    expected: complex
    constants: tuple[complex, ...]

    @property
    def relative_error(self) -> tuple[float, float]:
        """Slope error per component, relative to |expected| when that component is 0."""
        d = self.slope - self.expected
        re_scale = abs(self.expected.real) or abs(self.expected)
        im_scale = abs(self.expected.imag) or abs(self.expected)
        return abs(d.real) / re_scale, abs(d.imag) / im_scale


def corner_scaling_check(spec: SymbolSpec, n_list: Sequence[int], p: int) -> CornerScaling:
    """Fit det X ~ (-1)^p G[tau]^(-p) n^(-p^2 + 2 beta p) c over n_list."""
    beta = spec.beta
    if abs(beta.real) >= 0.5:
        raise ValueError("corner scaling is stated for |Re beta| < 1/2")
    if not 1 <= p <= 3:
        raise ValueError("p must be 1, 2 or 3")
    ns = [int(n) for n in n_list]
    dets = [inverse_corner(spec, n, p).logdet() for n in ns]
    lg = geometric_mean(spec.tau).log()
    # strip (-1)^p G^(-p): what is left should scale like n^(expected)
    scaled = [d * LogComplex(p * lg.real, p * lg.imag - math.pi * p) for d in dets]
    x = np.log(np.asarray(ns, dtype=float))
    re = linear_fit(x, [s.log_abs for s in scaled])
    ph, _ = _unwrap(np.array([s.arg for s in scaled]))
    im = linear_fit(x, ph)
    expected = complex(-p * p + 2 * beta * p)
    consts = tuple(complex(np.exp(s.log() - expected * math.log(n))) for s, n in zip(scaled, ns))
    return CornerScaling(p, tuple(ns), tuple(dets), complex(re.slope, im.slope), expected, consts)
