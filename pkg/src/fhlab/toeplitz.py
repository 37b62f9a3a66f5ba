"""Finite Toeplitz matrices T_n = (sigma_hat(i - j)), 0 <= i, j <= n.

Determinants are returned as LogComplex. Two routes: dense LU (the
reference) and a Levinson-type recursion through the leading minors
(the sweep workhorse, O(n^2) for all sizes at once).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .eig import EigenNonConvergence, eigvals
from .numerics import LogComplex, LogDet, fft, ifft, log_accumulate
from .symbols import LaurentPoly, SymbolSpec, sigma_fourier

__all__ = [
    "ToeplitzMatrix",
    "CornerBlock",
    "SpectrumReport",
    "LevinsonResult",
    "SingularMatrix",
    "build",
    "build_laurent",
    "logdet_lu",
    "logdet_levinson",
    "inverse_corner",
    "trace_power",
    "eigenvalues",
    "MAX_EIG_SIZE",
    "EigenNonConvergence",
]

PIVOT_UNDERFLOW = 1e-300
BREAKDOWN_RATIO = 1e-12
MAX_EIG_SIZE = 1024


class SingularMatrix(ArithmeticError):
    """T_n has no LU factorisation with nonzero pivots."""


@dataclass(frozen=True)
class ToeplitzMatrix:
    """(n+1) x (n+1) Toeplitz matrix held by its generators.

    ``col[k] = sigma_hat(k)`` and ``row[k] = sigma_hat(-k)`` for k = 0..n.
    """

    n: int
    col: np.ndarray
    row: np.ndarray

    def __post_init__(self):
        if self.col.shape != (self.n + 1,) or self.row.shape != (self.n + 1,):
            raise ValueError("generators must have length n + 1")
        if self.col[0] != self.row[0]:
            raise ValueError("first column and row disagree on the diagonal")

    @property
    def size(self) -> int:
        return self.n + 1

    def entry(self, i: int, j: int) -> complex:
        d = i - j
        return complex(self.col[d] if d >= 0 else self.row[-d])

    def dense(self) -> np.ndarray:
        return sla.toeplitz(self.col, self.row)

    def transpose(self) -> "ToeplitzMatrix":
        return ToeplitzMatrix(self.n, self.row, self.col)

    def leading(self, k: int) -> "ToeplitzMatrix":
        return ToeplitzMatrix(k, self.col[: k + 1], self.row[: k + 1])

    @cached_property
    def _embedding(self) -> tuple[int, np.ndarray]:
        m = 1
        while m < 2 * self.size:
            m *= 2
        c = np.zeros(m, dtype=complex)
        c[: self.size] = self.col
        c[m - self.n:] = self.row[1:][::-1]
        return m, fft(c)

    def matvec(self, x) -> np.ndarray:
        """T x by circulant embedding; ``x`` may carry extra trailing columns."""
        x = np.asarray(x, dtype=complex)
        m, spec = self._embedding
        pad = np.zeros((m,) + x.shape[1:], dtype=complex)
        pad[: self.size] = x
        shape = (-1,) + (1,) * (x.ndim - 1)
        return ifft(spec.reshape(shape) * fft(pad, axis=0), axis=0)[: self.size]


def build(spec: SymbolSpec, n: int) -> ToeplitzMatrix:
    if n < 0:
        raise ValueError("n must be non-negative")
    s = sigma_fourier(spec, -n, n)
    k = np.arange(n + 1)
    return ToeplitzMatrix(n, np.asarray(s.at(k), dtype=complex), np.asarray(s.at(-k), dtype=complex))


def build_laurent(poly: LaurentPoly, n: int) -> ToeplitzMatrix:
    """T_n of a raw Laurent polynomial symbol (outside the jump family)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    col = np.array([poly.coefficient(k) for k in range(n + 1)], dtype=complex)
    row = np.array([poly.coefficient(-k) for k in range(n + 1)], dtype=complex)
    return ToeplitzMatrix(n, col, row)


def _lu(a: np.ndarray):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        return sla.lu_factor(a, check_finite=False)


def _logdet_from_lu(lu: np.ndarray, piv: np.ndarray) -> LogDet:
    d = np.diag(lu)
    if np.any(np.abs(d) < PIVOT_UNDERFLOW):
        return LogComplex.zero()
    swaps = int(np.count_nonzero(piv != np.arange(len(piv))))
    acc = log_accumulate(d)
    return LogComplex(acc.log_abs, acc.arg + np.pi * swaps)


def logdet_lu(m: ToeplitzMatrix | np.ndarray) -> LogDet:
    """log det by partial-pivoting LU; an exact zero when a pivot underflows."""
    a = m.dense() if isinstance(m, ToeplitzMatrix) else np.asarray(m, dtype=complex)
    lu, piv = _lu(a)
    return _logdet_from_lu(lu, piv)


@dataclass(frozen=True)
class LevinsonResult:
    """log D_k for k = 0..len-1 and the index where the recursion stopped (or None)."""

    logdets: tuple[LogDet, ...]
    ratios: np.ndarray
    breakdown: int | None

    def __len__(self) -> int:
        return len(self.logdets)

    def __getitem__(self, k: int) -> LogDet:
        return self.logdets[k]


def logdet_levinson(spec: SymbolSpec | ToeplitzMatrix, n: int | None = None) -> LevinsonResult:
    """Determinants of all leading sections T_0..T_n via forward/backward vectors.

    With ``a`` solving ``T_k a = e_k e_0`` (``a_0 = 1``) and ``b`` solving
    ``T_k b = e_k e_last`` (``b_k = 1``), ``e_k = D_k/D_{k-1}`` and

        e_{k+1} = e_k - alpha gamma / e_k,
        alpha = sum_j t(k+1-j) a_j,  gamma = sum_j t(-1-j) b_j.

    Stops when ``|e_k|`` drops below 1e-12 times the running scale (largest
    ratio so far, seeded with the largest generator); sizes from that index
    on are not returned.
    """
    m = spec if isinstance(spec, ToeplitzMatrix) else build(spec, n)
    if n is None:
        n = m.n
    col, row = m.col, m.row
    eps = complex(col[0])
    ratios = [eps]
    scale = max(abs(eps), float(np.max(np.abs(col))), float(np.max(np.abs(row))))
    if abs(eps) < BREAKDOWN_RATIO * scale or scale == 0.0:
        return LevinsonResult((), np.empty(0, dtype=complex), 0)
    a = np.ones(1, dtype=complex)
    b = np.ones(1, dtype=complex)
    breakdown = None
    for k in range(n):
        # t(k+1-j) for j = 0..k is col[k+1..1]; t(-1-j) is row[1..k+1]
        alpha = np.dot(col[k + 1:0:-1], a)
        gamma = np.dot(row[1:k + 2], b)
        new = eps - alpha * gamma / eps
        if abs(new) < BREAKDOWN_RATIO * scale or not np.isfinite(new):
            breakdown = k + 1
            break
        a_ext = np.append(a, 0.0)
        b_ext = np.concatenate([[0.0], b])
        a, b = a_ext - (alpha / eps) * b_ext, b_ext - (gamma / eps) * a_ext
        eps = new
        ratios.append(eps)
        scale = max(scale, abs(eps))
    r = np.asarray(ratios)
    logs = np.cumsum(np.log(np.abs(r)))
    args = np.cumsum(np.angle(r))
    return LevinsonResult(tuple(LogComplex(float(x), float(y)) for x, y in zip(logs, args)), r, breakdown)


@dataclass(frozen=True)
class CornerBlock:
    """x[i, j] = (T_n^{-1})[n - p + i + 1, j] for 0 <= i, j < p."""

    p: int
    entries: np.ndarray

    def logdet(self) -> LogDet:
        lu, piv = _lu(self.entries)
        return _logdet_from_lu(lu, piv)


def inverse_corner(spec: SymbolSpec | ToeplitzMatrix, n: int, p: int) -> CornerBlock:
    if not 1 <= p <= n:
        raise ValueError("need 1 <= p <= n")
    m = spec if isinstance(spec, ToeplitzMatrix) else build(spec, n)
    lu, piv = _lu(m.dense())
    if np.any(np.abs(np.diag(lu)) < PIVOT_UNDERFLOW):
        raise SingularMatrix(f"T_{n} is singular")
    rhs = np.zeros((n + 1, p), dtype=complex)
    rhs[np.arange(p), np.arange(p)] = 1.0
    sol = sla.lu_solve((lu, piv), rhs, check_finite=False)
    return CornerBlock(p, sol[n - p + 1:, :].copy())


def trace_power(spec: SymbolSpec | ToeplitzMatrix, n: int, m: int) -> complex:
    """tr(T_n^m)/(n+1) by applying T m times to the identity (FFT matvec)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    mat = spec if isinstance(spec, ToeplitzMatrix) else build(spec, n)
    x = np.eye(mat.size, dtype=complex)
    for _ in range(m):
        x = mat.matvec(x)
    return complex(np.trace(x) / mat.size)


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    trace_residual: float
    det_residual: float | None
    iterations: int


def eigenvalues(m: ToeplitzMatrix) -> SpectrumReport:
    """Eigenvalues with trace and determinant cross-checks.

    ``det_residual`` compares log|prod lambda| with the LU log-determinant
    (relative) and is None when some eigenvalue is below 1e-12 in modulus.
    """
    if m.size > MAX_EIG_SIZE:
        raise ValueError(f"eigensolver is capped at size {MAX_EIG_SIZE}")
    a = m.dense()
    res = eigvals(a)
    lam = res.eigenvalues
    tr = complex(np.trace(a))
    trace_res = abs(lam.sum() - tr) / (1 + abs(tr))
    det_res = None
    if np.min(np.abs(lam)) > 1e-12:
        ld = logdet_lu(a)
        if not ld.is_zero:
            prod = log_accumulate(lam)
            det_res = abs(prod.log_abs - ld.log_abs) / max(1.0, abs(ld.log_abs))
    return SpectrumReport(lam, float(trace_res), det_res, res.iterations)

