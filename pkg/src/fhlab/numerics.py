"""Shared double-precision primitives.

Everything downstream funnels through four tools kept here: power-of-two
FFTs, an adaptive Gauss-Kronrod integrator that understands algebraic
endpoint singularities, an ordinary least-squares line, and `LogComplex`,
the log-modulus/phase representation used for every determinant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "LogComplex",
    "LogDet",
    "log_accumulate",
    "fft",
    "ifft",
    "adaptive_quad",
    "QuadratureError",
    "linear_fit",
    "LineFit",
    "wrap_phase",
]


def wrap_phase(x):
    """Reduce an angle (or array of angles) to [-pi, pi)."""
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as ``exp(log_abs + 1j*arg)``.

    ``arg`` is never reduced modulo 2*pi by the arithmetic below, so products
    of many factors keep a continuous phase. ``log_abs == -inf`` encodes an
    exact zero; its ``arg`` carries no meaning.
    """

    log_abs: float
    arg: float = 0.0

    @classmethod
    def from_complex(cls, z) -> "LogComplex":
        z = complex(z)
        if z == 0:
            return cls.zero()
        return cls(math.log(abs(z)), math.atan2(z.imag, z.real))

    @classmethod
    def from_log(cls, w) -> "LogComplex":
        w = complex(w)
        return cls(w.real, w.imag)

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(-math.inf, 0.0)

    @classmethod
    def one(cls) -> "LogComplex":
        return cls(0.0, 0.0)

    @property
    def is_zero(self) -> bool:
        return self.log_abs == -math.inf

    def log(self) -> complex:
        return complex(self.log_abs, self.arg)

    def value(self) -> complex:
        if self.is_zero:
            return 0j
        return complex(np.exp(self.log()))

    def __complex__(self) -> complex:
        return self.value()

    def __mul__(self, other) -> "LogComplex":
        other = _as_logcomplex(other)
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_abs + other.log_abs, self.arg + other.arg)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogComplex":
        other = _as_logcomplex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by an exact zero LogComplex")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_abs - other.log_abs, self.arg - other.arg)

    def __pow__(self, exponent) -> "LogComplex":
        if self.is_zero:
            if complex(exponent).real > 0:
                return LogComplex.zero()
            raise ZeroDivisionError("non-positive power of an exact zero")
        return LogComplex.from_log(complex(exponent) * self.log())

    def __neg__(self) -> "LogComplex":
        if self.is_zero:
            return self
        return LogComplex(self.log_abs, self.arg + math.pi)

    def ratio_minus_one(self, other: "LogComplex") -> complex:
        """``self/other - 1`` evaluated without forming either number."""
        q = self / other
        return complex(np.expm1(q.log_abs + 1j * wrap_phase(q.arg)))

    def phase_gap(self, other: "LogComplex") -> float:
        """Absolute phase difference modulo 2*pi, in [0, pi]."""
        return abs(float(wrap_phase(self.arg - other.arg)))

    def log_abs_gap(self, other: "LogComplex") -> float:
        """Relative log-modulus discrepancy ``|a - b| / max(1, |a|, |b|)``."""
        scale = max(1.0, abs(self.log_abs), abs(other.log_abs))
        return abs(self.log_abs - other.log_abs) / scale


LogDet = LogComplex


def _as_logcomplex(x) -> LogComplex:
    if isinstance(x, LogComplex):
        return x
    return LogComplex.from_complex(x)


def log_accumulate(values) -> LogComplex:
    """Product of `values` in log form; phases are summed, not wrapped."""
    z = np.asarray(values, dtype=complex).ravel()
    if np.any(z == 0):
        return LogComplex.zero()
    return LogComplex(float(np.sum(np.log(np.abs(z)))), float(np.sum(np.angle(z))))


def _check_pow2(n: int) -> None:
    if n < 1 or n & (n - 1):
        raise ValueError(f"FFT length must be a power of two, got {n}")


def fft(x, axis: int = 0) -> np.ndarray:
    """Forward DFT, ``X_j = sum_m x_m exp(-2*pi*i*j*m/N)``; N must be 2**k."""
    x = np.asarray(x, dtype=complex)
    _check_pow2(x.shape[axis])
    return np.fft.fft(x, axis=axis)


def ifft(x, axis: int = 0) -> np.ndarray:
    """Inverse of `fft` (carries the 1/N)."""
    x = np.asarray(x, dtype=complex)
    _check_pow2(x.shape[axis])
    return np.fft.ifft(x, axis=axis)


class QuadratureError(RuntimeError):
    """Adaptive quadrature gave up; the best estimate is attached."""

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error:.3g})")
        self.estimate = estimate
        self.error = error


# Gauss-Kronrod 10/21 rule (QUADPACK qk21).
_GK_X = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_GK_X = np.concatenate([_GK_X, -_GK_X[-2::-1]])
_GK_W21 = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_GK_W21 = np.concatenate([_GK_W21, _GK_W21[-2::-1]])
_G_W10 = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
_GK_W10 = np.zeros(21)
_GK_W10[1:10:2] = _G_W10
_GK_W10[11:20:2] = _G_W10[::-1]


def _gk21(f, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GK_X[None, :]
    vals = np.asarray(f(nodes.ravel()))
    vals = vals.reshape(nodes.shape + vals.shape[1:])
    scale = half.reshape((-1,) + (1,) * (vals.ndim - 2))
    k21 = np.tensordot(vals, _GK_W21, axes=([1], [0])) if vals.ndim > 2 else vals @ _GK_W21
    g10 = np.tensordot(vals, _GK_W10, axes=([1], [0])) if vals.ndim > 2 else vals @ _GK_W10
    k21 = k21 * scale
    err = np.abs(k21 - g10 * scale)
    if err.ndim > 1:
        err = err.reshape(err.shape[0], -1).max(axis=1)
    return k21, err


def _pick_power(exponent: float) -> int:
    # x = a + t**p turns |x - a|**e dx into t**(p(e+1)-1) dt; want that power >= 1.
    if exponent <= -1:
        raise ValueError(f"endpoint exponent must exceed -1, got {exponent}")
    if exponent >= 1:
        return 1
    return max(1, math.ceil(2.0 / (exponent + 1.0)))


def _gk_adaptive(f, a, b, tol, rtol, limit, breaks):
    edges = np.unique(np.concatenate([[a, b], [p for p in breaks if a < p < b]]))
    lo, hi = edges[:-1].astype(float), edges[1:].astype(float)
    done_val = 0.0
    done_err = 0.0
    vals, errs = _gk21(f, lo, hi)
    n_intervals = len(lo)
    while True:
        total = done_val + vals.sum(axis=0)
        err = done_err + errs.sum()
        target = max(tol, rtol * float(np.max(np.abs(total))))
        if err <= target:
            return total, err
        if n_intervals >= limit:
            raise QuadratureError("maximum number of subintervals reached", total, err)
        # keep intervals whose error is already negligible, bisect the rest
        share = target / (2.0 * len(errs))
        keep = errs <= share
        done_val = done_val + vals[keep].sum(axis=0)
        done_err += errs[keep].sum()
        lo, hi = lo[~keep], hi[~keep]
        if np.any(hi - lo <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(lo))):
            raise QuadratureError("subinterval collapsed (integrand not resolvable)", total, err)
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        n_intervals += int((~keep).sum())
        vals, errs = _gk21(f, lo, hi)


def adaptive_quad(
    f: Callable,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    left_exponent: float | None = None,
    right_exponent: float | None = None,
    points: Sequence[float] = (),
    rtol: float = 0.0,
    limit: int = 20000,
    return_error: bool = False,
):
    """Adaptive 21-point Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    ``f`` is called with a 1-d array of abscissae and must return an array
    whose first axis matches (extra trailing axes give a vector-valued
    integral, controlled in the max norm). Complex values are fine.

    Parameters
    ----------
    left_exponent, right_exponent : float, optional
        Declared algebraic behaviour ``|x - endpoint|**e`` (``e > -1``) at an
        endpoint. The interval is then halved and each half is integrated
        in ``t`` with ``x = endpoint +/- h t**p``, ``p`` chosen from ``e``.
        The integrand must resolve ``x - endpoint`` without cancellation
        for this to help, so singular endpoints are best placed at 0.
    points : sequence of float
        Interior breakpoints (kinks, jumps).
    tol, rtol : float
        Absolute and relative targets for the estimated error.

    Raises
    ------
    QuadratureError
        When ``limit`` subintervals are exceeded; carries the best estimate.
    """
    a, b = float(a), float(b)
    if a == b:
        z = np.asarray(f(np.array([a])))[0] * 0.0
        return (z, 0.0) if return_error else z
    if b < a:
        res = adaptive_quad(f, b, a, tol, left_exponent=right_exponent,
                            right_exponent=left_exponent, points=points,
                            rtol=rtol, limit=limit, return_error=True)
        return (-res[0], res[1]) if return_error else -res[0]

    pieces = []
    if left_exponent is None and right_exponent is None:
        pieces.append((f, a, b, list(points)))
    else:
        m = 0.5 * (a + b)
        inner = sorted(p for p in points if a < p < b)
        for side, exponent in (("left", left_exponent), ("right", right_exponent)):
            lo_x, hi_x = (a, m) if side == "left" else (m, b)
            brk = [p for p in inner if lo_x < p < hi_x]
            if exponent is None:
                pieces.append((f, lo_x, hi_x, brk))
                continue
            p = _pick_power(exponent)
            h = hi_x - lo_x
            if side == "left":
                def g(t, p=p, h=h, x0=lo_x):
                    # keep x off the endpoint when h t^p is below its spacing
                    x = np.maximum(x0 + h * t**p, np.nextafter(x0, np.inf))
                    val = np.asarray(f(x))
                    jac = p * h * t ** (p - 1)
                    return val * jac.reshape((-1,) + (1,) * (val.ndim - 1))
                tb = [((x - lo_x) / h) ** (1.0 / p) for x in brk]
            else:
                def g(t, p=p, h=h, x1=hi_x):
                    x = np.minimum(x1 - h * t**p, np.nextafter(x1, -np.inf))
                    val = np.asarray(f(x))
                    jac = p * h * t ** (p - 1)
                    return val * jac.reshape((-1,) + (1,) * (val.ndim - 1))
                tb = [((hi_x - x) / h) ** (1.0 / p) for x in brk]
            pieces.append((g, 0.0, 1.0, tb))

    total, err = 0.0, 0.0
    n = len(pieces)
    for g, lo_x, hi_x, brk in pieces:
        val, e = _gk_adaptive(g, lo_x, hi_x, tol / n, rtol, limit, brk)
        total = total + val
        err += e
    if np.ndim(total) == 0:
        total = complex(total) if np.iscomplexobj(total) else float(total)
    return (total, err) if return_error else total


class LineFit(NamedTuple):
    slope: float
    intercept: float
    max_residual: float


def linear_fit(xs, ys) -> LineFit:
    """Ordinary least-squares line ``y = slope*x + intercept``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d sequences of equal length")
    if x.size < 2 or np.ptp(x) == 0:
        raise ValueError("need at least two distinct abscissae")
    xm = x.mean()
    slope = float(np.dot(x - xm, y - y.mean()) / np.dot(x - xm, x - xm))
    intercept = float(y.mean() - slope * xm)
    resid = float(np.max(np.abs(y - (slope * x + intercept))))
    return LineFit(slope, intercept, resid)
