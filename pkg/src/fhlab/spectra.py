"""Eigenvalue distribution of T_n[sigma] against the range of sigma.

A symbol here is either a SymbolSpec or a raw LaurentPoly (for examples
such as sigma = z that sit outside the jump family).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np

from .numerics import adaptive_quad
from .symbols import LaurentPoly, SymbolSpec, eval_symbol, sample_range
from .toeplitz import MAX_EIG_SIZE, build, build_laurent, eigenvalues, trace_power

__all__ = [
    "Functional",
    "FunctionalValue",
    "EmpiricalMeasure",
    "LimitingSetReport",
    "parse_functional",
    "spectrum",
    "canonical_check",
    "limiting_set_check",
    "eig_count_near",
]

Symbol = Union[SymbolSpec, LaurentPoly]

REFINE_TOL = 1e-3
MAX_RESOLUTION = 1 << 16


@dataclass(frozen=True)
class Functional:
    """A test function F from the fixed family; ``power`` is set for F = lambda^m."""

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    power: int | None = None


def parse_functional(name: str) -> Functional:
    """``pow1``..``pow4``, ``abs2``, ``re``, ``im`` or ``dist2:<re>,<im>``."""
    key = name.strip()
    if key.startswith("pow") and key[3:].isdigit():
        m = int(key[3:])
        if not 1 <= m <= 4:
            raise ValueError("power functionals are pow1..pow4")
        return Functional(key, lambda z, m=m: z**m, m)
    if key == "abs2":
        return Functional(key, lambda z: np.real(z) ** 2 + np.imag(z) ** 2)
    if key == "re":
        return Functional(key, lambda z: np.real(z))
    if key == "im":
        return Functional(key, lambda z: np.imag(z))
    if key.startswith("dist2:"):
        try:
            re, im = (float(t) for t in key[6:].split(","))
        except ValueError:
            raise ValueError(f"expected dist2:<re>,<im>, got {name!r}") from None
        c = complex(re, im)
        return Functional(key, lambda z, c=c: np.real(z - c) ** 2 + np.imag(z - c) ** 2)
    raise ValueError(f"unknown functional {name!r}")


def _matrix(sym: Symbol, n: int):
    return build_laurent(sym, n) if isinstance(sym, LaurentPoly) else build(sym, n)


def _on_circle(sym: Symbol, theta: np.ndarray) -> np.ndarray:
    if isinstance(sym, LaurentPoly):
        return sym(np.exp(1j * theta))
    return eval_symbol(sym, theta)


def _arc(sym: Symbol, resolution: int) -> np.ndarray:
    if isinstance(sym, LaurentPoly):
        theta = 2 * np.pi * np.arange(resolution + 1) / resolution
        return sym(np.exp(1j * theta))
    return sample_range(sym, resolution)


@lru_cache(maxsize=32)
def _cached_spectrum(sym: Symbol, n: int):
    return eigenvalues(_matrix(sym, n))


def spectrum(sym: Symbol, n: int):
    """SpectrumReport for T_n[sym], cached per (symbol, n)."""
    if n + 1 > MAX_EIG_SIZE:
        raise ValueError(f"eigensolver is capped at size {MAX_EIG_SIZE}")
    return _cached_spectrum(sym, int(n))


@dataclass(frozen=True)
class FunctionalValue:
    name: str
    empirical: complex
    symbol_side: complex
    deviation: float
    trace_residual: float | None = None


@dataclass(frozen=True)
class EmpiricalMeasure:
    n: int
    eigenvalues: np.ndarray
    values: tuple[FunctionalValue, ...]

    @property
    def mass(self) -> float:
        return len(self.eigenvalues) / (self.n + 1)

    def __getitem__(self, name: str) -> FunctionalValue:
        for v in self.values:
            if v.name == name:
                return v
        raise KeyError(name)


def _symbol_side(sym: Symbol, f: Functional) -> complex:
    val = adaptive_quad(lambda t: f.func(_on_circle(sym, t)), 0.0, 2 * np.pi, 1e-11)
    return complex(val) / (2 * np.pi)


def canonical_check(sym: Symbol, n: int, functionals: Sequence[str | Functional]) -> EmpiricalMeasure:
    """Compare (1/(n+1)) sum F(lambda) with (1/2pi) int F(sigma(e^{it})) dt."""
    lam = spectrum(sym, n).eigenvalues
    out = []
    for f in functionals:
        f = parse_functional(f) if isinstance(f, str) else f
        emp = complex(np.mean(f.func(lam)))
        side = _symbol_side(sym, f)
        tr = None
        if f.power is not None:
            exact = trace_power(_matrix(sym, n), n, f.power)
            tr = abs(emp - exact) / max(1.0, abs(exact))
        out.append(FunctionalValue(f.name, emp, side, abs(emp - side), tr))
    return EmpiricalMeasure(int(n), lam, tuple(out))


def _point_to_polyline(points: np.ndarray, curve: np.ndarray) -> np.ndarray:
    a = curve[:-1][None, :]
    d = (curve[1:] - curve[:-1])[None, :]
    p = points[:, None]
    dd = np.abs(d) ** 2
    t = np.where(dd > 0, np.real((p - a) * np.conj(d)) / np.where(dd > 0, dd, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.min(np.abs(p - (a + t * d)), axis=1)


@dataclass(frozen=True)
class LimitingSetReport:
    n: int
    max_eig_to_range: float
    max_range_to_eig: float
    resolution: int


def _distances(lam: np.ndarray, sym: Symbol, resolution: int, chord: bool) -> tuple[float, float]:
    arc = _arc(sym, resolution)
    target = np.append(arc, arc[0]) if chord else arc
    e2r = float(np.max(_point_to_polyline(lam, target)))
    r2e = float(np.max(np.min(np.abs(arc[:, None] - lam[None, :]), axis=1)))
    return e2r, r2e


def limiting_set_check(sym: Symbol, n_list: Sequence[int], resolution: int = 1024,
                       chord: bool = False) -> list[LimitingSetReport]:
    """Hausdorff-type distances between the spectrum and the range of sigma.

    The range is sampled at ``resolution`` points and refined by doubling
    until both distances move by less than 1e-3. ``chord=True`` adds the
    segment across the jump to the target set of the eigenvalue distances.
    """
    reports = []
    for n in n_list:
        lam = spectrum(sym, int(n)).eigenvalues
        res = resolution
        cur = _distances(lam, sym, res, chord)
        while res < MAX_RESOLUTION:
            nxt = _distances(lam, sym, 2 * res, chord)
            res *= 2
            done = max(abs(a - b) for a, b in zip(cur, nxt)) < REFINE_TOL
            cur = nxt
            if done:
                break
        reports.append(LimitingSetReport(int(n), cur[0], cur[1], res))
    return reports


def eig_count_near(sym: Symbol, n: int, center: complex, epsilon: float) -> int:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lam = spectrum(sym, n).eigenvalues
    return int(np.count_nonzero(np.abs(lam - complex(center)) <= epsilon))
