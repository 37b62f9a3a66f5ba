"""Symbols ``sigma(z) = (-z)^beta tau(z)`` with a single jump at z = 1.

The branch is the principal one: for ``z = exp(i theta)`` with
``0 < theta < 2 pi`` we have ``(-z)^beta = exp(i beta (theta - pi))``, so the
jump sits at theta = 0 (equivalently 2 pi) and the symbol equals tau at
theta = pi.

The smooth factor ``tau`` comes in two closed-form families:

* ``exp_laurent``: ``tau = exp(P)`` for a Laurent polynomial ``P``; always
  nonvanishing with winding number zero, and ``log tau = P`` exactly.
* ``laurent``: ``tau`` itself is a Laurent polynomial; it must be checked
  with `verify_class`.

Fourier coefficients use the normalised measure,
``f_hat(k) = (1/2 pi) int_0^{2 pi} f(e^{i theta}) e^{-i k theta} d theta``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .numerics import fft

__all__ = [
    "LaurentPoly",
    "TauSpec",
    "SymbolSpec",
    "FourierSeries",
    "Winding",
    "WindingUndefined",
    "ClassReport",
    "jump_fourier",
    "tau_fourier",
    "sigma_fourier",
    "eval_symbol",
    "winding_number",
    "range_curve",
    "sample_range",
    "verify_class",
    "symbol_from_json",
    "symbol_to_json",
    "load_symbol",
]

SIGMA_TRUNCATION = 1e-16


@dataclass(frozen=True)
class LaurentPoly:
    """Finite Laurent polynomial ``sum_k c_k z^k`` (hashable)."""

    terms: tuple[tuple[int, complex], ...] = ()

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, complex] | Iterable[tuple[int, complex]]) -> "LaurentPoly":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, complex] = {}
        for k, c in items:
            acc[int(k)] = acc.get(int(k), 0j) + complex(c)
        return cls(tuple(sorted((k, c) for k, c in acc.items() if c != 0)))

    @property
    def k_min(self) -> int:
        return self.terms[0][0] if self.terms else 0

    @property
    def k_max(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def coefficient(self, k: int) -> complex:
        for kk, c in self.terms:
            if kk == k:
                return c
        return 0j

    def as_dict(self) -> dict[int, complex]:
        return dict(self.terms)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for k, c in self.terms:
            out += c * z**k
        return out

    def conj(self) -> "LaurentPoly":
        """Coefficient-wise conjugate, i.e. ``conj(p(conj z))``."""
        return LaurentPoly(tuple((k, c.conjugate()) for k, c in self.terms))

    def reflect(self) -> "LaurentPoly":
        """``p(1/z)``."""
        return LaurentPoly.from_mapping({-k: c for k, c in self.terms})


@dataclass(frozen=True)
class TauSpec:
    form: str
    poly: LaurentPoly = field(default_factory=LaurentPoly)

    def __post_init__(self):
        if self.form not in ("exp_laurent", "laurent"):
            raise ValueError(f"unknown tau form {self.form!r}")

    @classmethod
    def exp_laurent(cls, coeffs) -> "TauSpec":
        return cls("exp_laurent", LaurentPoly.from_mapping(coeffs))

    @classmethod
    def laurent(cls, coeffs) -> "TauSpec":
        return cls("laurent", LaurentPoly.from_mapping(coeffs))

    @classmethod
    def one(cls) -> "TauSpec":
        return cls("exp_laurent", LaurentPoly())

    @property
    def is_one(self) -> bool:
        if self.form == "exp_laurent":
            return not self.poly.terms
        return self.poly.terms == ((0, 1 + 0j),)

    def __call__(self, z):
        if self.form == "exp_laurent":
            return np.exp(self.poly(z))
        return self.poly(z)

    def conj(self) -> "TauSpec":
        return TauSpec(self.form, self.poly.conj())

    def reflect(self) -> "TauSpec":
        return TauSpec(self.form, self.poly.reflect())


@dataclass(frozen=True)
class SymbolSpec:
    """``sigma(z) = (-z)^beta tau(z)``; the jump is fixed at theta = 0."""

    beta: complex
    tau: TauSpec = field(default_factory=TauSpec.one)

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))

    theta1 = math.pi

    @property
    def integer_beta(self) -> bool:
        b = self.beta
        return b.imag == 0.0 and b.real == math.floor(b.real)

    @property
    def pure_jump(self) -> bool:
        return self.tau.is_one

    def shifted(self, dp: int) -> "SymbolSpec":
        """``(-z)^dp sigma``, i.e. the same tau with beta + dp."""
        return SymbolSpec(self.beta + dp, self.tau)


@dataclass(frozen=True)
class FourierSeries:
    """Coefficient table ``c[k - offset]`` for ``k`` in ``[offset, offset+len-1]``."""

    offset: int
    coeffs: np.ndarray
    error_bound: float = 0.0

    @property
    def k_min(self) -> int:
        return self.offset

    @property
    def k_max(self) -> int:
        return self.offset + len(self.coeffs) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def at(self, k):
        """Coefficient(s) at ``k``; zero outside the stored range."""
        k = np.asarray(k)
        idx = k - self.offset
        ok = (idx >= 0) & (idx < len(self.coeffs))
        out = np.zeros(k.shape, dtype=complex)
        out[ok] = self.coeffs[idx[ok]]
        return out if out.ndim else complex(out)

    def restrict(self, k_lo: int, k_hi: int) -> "FourierSeries":
        return FourierSeries(k_lo, np.asarray(self.at(np.arange(k_lo, k_hi + 1))), self.error_bound)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for k, c in zip(self.indices, self.coeffs):
            if c != 0:
                out += c * z ** int(k)
        return out


def jump_fourier(beta, k):
    """Fourier coefficient(s) of ``(-z)^beta``: ``sin(pi beta) / (pi (beta - k))``."""
    beta = complex(beta)
    if beta.imag == 0.0 and beta.real == math.floor(beta.real):
        raise ValueError("integer beta: (-z)^beta is the monomial (-1)^beta z^beta")
    k = np.asarray(k)
    return np.sin(np.pi * beta) / (np.pi * (beta - k))


def _circle(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


@lru_cache(maxsize=256)
def _exp_laurent_table(poly: LaurentPoly) -> tuple[int, tuple[complex, ...]]:
    """Fourier coefficients of exp(P) by FFT, doubling the grid until stable."""
    if not poly.terms:
        return 0, (1 + 0j,)
    span = max(abs(poly.k_min), abs(poly.k_max))
    m = 64
    while m < 8 * span:
        m *= 2
    prev = None
    while True:
        c = np.fft.fftshift(fft(np.exp(poly(_circle(m)))) / m)  # k = -m/2 .. m/2-1
        cmax = np.max(np.abs(c))
        centre = c[m // 4: 3 * m // 4]
        tail = max(np.max(np.abs(c[: m // 4])), np.max(np.abs(c[3 * m // 4:])))
        if prev is not None and tail <= 1e-15 * cmax:
            if np.max(np.abs(centre - prev)) <= 1e-14 * cmax:
                break
        if m >= 1 << 20:
            raise RuntimeError("exp_laurent coefficients did not settle")
        prev = c
        m *= 2
    c[np.abs(c) < 1e-16 * cmax] = 0.0  # FFT roundoff floor
    nz = np.nonzero(c)[0]
    lo_i, hi_i = int(nz[0]), int(nz[-1])
    return lo_i - m // 2, tuple(c[lo_i: hi_i + 1].tolist())


def tau_fourier(tau: TauSpec, k_lo: int | None = None, k_hi: int | None = None) -> FourierSeries:
    """tau_hat over ``[k_lo, k_hi]`` (the whole numerical support by default)."""
    if tau.form == "laurent":
        lo, hi = tau.poly.k_min, tau.poly.k_max
        full = np.array([tau.poly.coefficient(k) for k in range(lo, hi + 1)], dtype=complex)
    else:
        lo, vals = _exp_laurent_table(tau.poly)
        full = np.array(vals, dtype=complex)
        hi = lo + len(full) - 1
    series = FourierSeries(lo, full)
    if k_lo is None and k_hi is None:
        return series
    return series.restrict(lo if k_lo is None else k_lo, hi if k_hi is None else k_hi)


def _significant_tau(tau: TauSpec) -> tuple[np.ndarray, np.ndarray, float]:
    t = tau_fourier(tau)
    mags = np.abs(t.coeffs)
    keep = mags >= SIGMA_TRUNCATION * mags.max()
    return t.indices[keep], t.coeffs[keep], float(mags[~keep].sum())


def sigma_fourier(spec: SymbolSpec, k_lo: int, k_hi: int) -> FourierSeries:
    """sigma_hat(k) for ``k_lo <= k <= k_hi`` by convolving jump and tau coefficients.

    Terms with ``|tau_hat(m)| < 1e-16 max|tau_hat|`` are dropped; the bound on
    what they could contribute is stored in ``error_bound``.
    """
    ks = np.arange(k_lo, k_hi + 1)
    ms, ts, dropped = _significant_tau(spec.tau)
    if spec.integer_beta:
        p = int(spec.beta.real)
        t = tau_fourier(spec.tau)
        return FourierSeries(k_lo, (-1) ** p * np.asarray(t.at(ks - p)), 0.0)
    beta = spec.beta
    out = np.zeros(ks.shape, dtype=complex)
    for m, t in zip(ms, ts):
        out += t * jump_fourier(beta, ks - m)
    jmax = abs(np.sin(np.pi * beta)) / (np.pi * min(abs(beta - round(beta.real)), 1.0))
    return FourierSeries(k_lo, out, dropped * jmax)


def eval_symbol(spec: SymbolSpec, theta, side: str | None = None):
    """sigma(e^{i theta}) for theta in (0, 2 pi).

    At theta = 0 or 2 pi the symbol is discontinuous; pass ``side="right"``
    (limit theta -> 0+) or ``side="left"`` (theta -> 2 pi-) to get the
    one-sided values.
    """
    if side is not None:
        if side == "right":
            jump = np.exp(-1j * np.pi * spec.beta)
        elif side == "left":
            jump = np.exp(1j * np.pi * spec.beta)
        else:
            raise ValueError("side must be 'left' or 'right'")
        return complex(jump * spec.tau(1.0 + 0j))
    th = np.asarray(theta, dtype=float)
    if np.any((th <= 0.0) | (th >= 2 * np.pi)):
        raise ValueError("theta must lie strictly inside (0, 2 pi); use side= for the jump limits")
    out = np.exp(1j * spec.beta * (th - np.pi)) * spec.tau(np.exp(1j * th))
    return out if out.ndim else complex(out)


class WindingUndefined(ValueError):
    """The curve passes (numerically) through the origin."""


class Winding(int):
    """Integer winding number carrying the rounding ``residual``."""

    residual: float

    def __new__(cls, number: int, residual: float = 0.0):
        obj = super().__new__(cls, number)
        obj.residual = residual
        return obj

    @property
    def number(self) -> int:
        return int(self)


def winding_number(curve, closed: bool = False, tol: float = 1e-8) -> Winding:
    """Winding number of a polygonal curve about 0.

    With ``closed=True`` the first and last samples must coincide (within
    1e-9); otherwise the closing segment back to the first sample is added.
    The returned ``residual`` is the distance of the raw argument count from
    the nearest integer.
    """
    z = np.asarray(curve, dtype=complex).ravel()
    if closed:
        if abs(z[0] - z[-1]) > 1e-9:
            raise ValueError("curve declared closed but first and last points differ")
    else:
        z = np.append(z, z[0])
    if np.min(np.abs(z)) <= tol:
        raise WindingUndefined("curve passes within tolerance of the origin")
    steps = np.angle(z[1:] / z[:-1])
    total = steps.sum() / (2 * np.pi)
    n = int(round(total))
    return Winding(n, float(abs(total - n)))


def sample_range(spec: SymbolSpec, resolution: int) -> np.ndarray:
    """sigma on an open uniform grid, bracketed by the two jump limits."""
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    theta = 2 * np.pi * (np.arange(resolution) + 0.5) / resolution
    arc = eval_symbol(spec, theta)
    return np.concatenate([[eval_symbol(spec, 0.0, side="right")], arc,
                           [eval_symbol(spec, 0.0, side="left")]])


def range_curve(spec: SymbolSpec, resolution: int, chord_samples: int = 0) -> np.ndarray:
    """The closed curve R_sigma: the sampled range plus the chord across the jump.

    The chord runs from the theta -> 2 pi- limit back to the theta -> 0+
    limit; ``chord_samples`` interior points are inserted on it. The returned
    array repeats its first point at the end.
    """
    arc = sample_range(spec, resolution)
    start, end = arc[0], arc[-1]
    s = np.linspace(0.0, 1.0, chord_samples + 2)[1:]
    chord = end + (start - end) * s
    return np.concatenate([arc, chord])


@dataclass(frozen=True)
class ClassReport:
    continuous: bool
    nonvanishing: bool
    min_abs_tau: float
    winding: int | None
    winding_zero: bool
    smooth: bool

    @property
    def passed(self) -> bool:
        return self.continuous and self.nonvanishing and self.winding_zero and self.smooth


def verify_class(spec: SymbolSpec | TauSpec, samples: int = 4096) -> ClassReport:
    """Check the smooth factor: nonvanishing, winding number zero.

    Continuity and smoothness hold by construction for both tau families.
    """
    tau = spec.tau if isinstance(spec, SymbolSpec) else spec
    vals = tau(_circle(samples))
    mn = float(np.min(np.abs(vals)))
    nonvanishing = mn > 1e-8
    w = None
    if nonvanishing:
        w = winding_number(vals).number
    return ClassReport(True, nonvanishing, mn, w, w == 0, True)


def _complex_of(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex value must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return complex(x)
    raise ValueError(f"cannot read complex value from {x!r}")


def symbol_from_json(obj: Mapping) -> SymbolSpec:
    """Parse ``{"beta": [re, im], "tau": {"form": ..., "coeffs": [[k, re, im], ...]}}``."""
    if "beta" not in obj:
        raise ValueError("symbol config needs a 'beta' entry")
    beta = _complex_of(obj["beta"])
    tau_obj = obj.get("tau")
    if tau_obj is None:
        return SymbolSpec(beta)
    form = tau_obj.get("form")
    if form not in ("exp_laurent", "laurent"):
        raise ValueError(f"tau form must be 'exp_laurent' or 'laurent', got {form!r}")
    coeffs = {}
    for row in tau_obj.get("coeffs", []):
        if len(row) != 3:
            raise ValueError(f"tau coefficient rows are [k, re, im], got {row!r}")
        k, re, im = row
        if int(k) != k:
            raise ValueError(f"coefficient index must be an integer, got {k!r}")
        coeffs[int(k)] = coeffs.get(int(k), 0j) + complex(float(re), float(im))
    return SymbolSpec(beta, TauSpec(form, LaurentPoly.from_mapping(coeffs)))


def symbol_to_json(spec: SymbolSpec) -> dict:
    return {
        "beta": [spec.beta.real, spec.beta.imag],
        "tau": {
            "form": spec.tau.form,
            "coeffs": [[k, c.real, c.imag] for k, c in spec.tau.poly.terms],
        },
    }


def load_symbol(source: str) -> SymbolSpec:
    """Read a symbol from a JSON file path or an inline JSON string."""
    text = source.strip()
    if not text.startswith("{"):
        text = Path(source).read_text()
    return symbol_from_json(json.loads(text))
