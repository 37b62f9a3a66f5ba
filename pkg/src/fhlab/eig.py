"""Eigenvalues of a general complex matrix: balance, Hessenberg, shifted QR.

Eigenvalues only. Rotations are applied to the active (undeflated) window,
which is all that the window's eigenvalues depend on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["EigenNonConvergence", "EigResult", "balance", "hessenberg", "hessenberg_eigvals", "eigvals"]

_EPS = np.finfo(float).eps
_RADIX = 2.0


class EigenNonConvergence(RuntimeError):
    """QR iteration stalled; ``partial`` holds the eigenvalues found so far."""

    def __init__(self, message: str, partial: np.ndarray):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class EigResult:
    eigenvalues: np.ndarray
    isolated: int
    iterations: int


def _isolate(a: np.ndarray) -> tuple[list[complex], np.ndarray]:
    """Peel off rows/columns whose off-diagonal part (within the active set) vanishes.

    Such a row or column means the matrix is permutation-similar to a block
    triangular matrix with that diagonal entry as a 1x1 block.
    """
    active = np.arange(a.shape[0])
    found: list[complex] = []
    changed = True
    while changed and active.size:
        changed = False
        sub = a[np.ix_(active, active)]
        off = np.abs(sub) != 0
        np.fill_diagonal(off, False)
        rows = np.nonzero(~off.any(axis=1))[0]
        cols = np.nonzero(~off.any(axis=0))[0]
        pick = rows if rows.size else cols
        if pick.size:
            i = int(pick[0])
            found.append(complex(sub[i, i]))
            active = np.delete(active, i)
            changed = True
    return found, a[np.ix_(active, active)]


def _scale(a: np.ndarray) -> np.ndarray:
    """Diagonal similarity by powers of two equalising row and column norms."""
    a = a.copy()
    n = a.shape[0]
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(a[:, i])) - abs(a[i, i])
            r = np.sum(np.abs(a[i, :])) - abs(a[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g, f, s = r / _RADIX, 1.0, c + r
            while c < g:
                f *= _RADIX
                c *= _RADIX * _RADIX
            g = r * _RADIX
            while c >= g:
                f /= _RADIX
                c /= _RADIX * _RADIX
            if (c + r) / f < 0.95 * s:
                converged = False
                a[i, :] /= f
                a[:, i] *= f
    return a


def balance(a) -> tuple[list[complex], np.ndarray]:
    """Return (isolated eigenvalues, scaled remaining block)."""
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("need a square matrix")
    found, rest = _isolate(a)
    if rest.size:
        rest = _scale(rest)
    return found, rest


def hessenberg(a) -> np.ndarray:
    """Householder reduction to upper Hessenberg form (unitary similarity)."""
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _givens(x: complex, y: complex) -> tuple[float, complex]:
    """(c, s) with [[c, s], [-conj(s), c]] @ [x, y] = [r, 0]."""
    ax = abs(x)
    if y == 0:
        return 1.0, 0j
    if ax == 0.0:
        return 0.0, 1 + 0j
    norm = np.hypot(ax, abs(y))
    return ax / norm, (x / ax) * np.conj(y) / norm


def _wilkinson(a, b, c, d) -> complex:
    # eigenvalues of [[a, b], [c, d]] are (a+d)/2 +/- disc; take the one nearer d
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    mid = 0.5 * (a + d)
    e1, e2 = mid + disc, mid - disc
    return e1 if abs(e1 - d) <= abs(e2 - d) else e2


def hessenberg_eigvals(h, max_factor: int = 30) -> tuple[np.ndarray, int]:
    """Implicit single-shift QR on an upper Hessenberg matrix.

    Returns (eigenvalues, total sweeps). Raises EigenNonConvergence when one
    eigenvalue takes more than ``max_factor * size`` sweeps.
    """
    h = np.array(h, dtype=complex)
    n = h.shape[0]
    eig = np.empty(n, dtype=complex)
    hi = n - 1
    its = 0
    total = 0
    cap = max_factor * max(n, 1)
    hnorm = np.max(np.abs(h)) if n else 0.0
    while hi >= 0:
        l = hi
        while l > 0:
            tst = abs(h[l, l]) + abs(h[l - 1, l - 1])
            if tst == 0.0:
                tst = hnorm
            if abs(h[l, l - 1]) <= _EPS * tst:
                h[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue
        if its >= cap:
            raise EigenNonConvergence(
                f"QR did not converge for eigenvalue {hi} after {its} sweeps",
                eig[hi + 1:].copy())
        its += 1
        total += 1
        if its % 10 == 0:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1].real) + 0.75j * abs(h[hi, hi - 1].imag)
        else:
            mu = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        x = h[l, l] - mu
        y = h[l + 1, l]
        for k in range(l, hi):
            if k > l:
                x = h[k, k - 1]
                y = h[k + 1, k - 1]
            c, s = _givens(x, y)
            c0 = max(l, k - 1)
            rk = h[k, c0:hi + 1].copy()
            rk1 = h[k + 1, c0:hi + 1]
            h[k, c0:hi + 1] = c * rk + s * rk1
            h[k + 1, c0:hi + 1] = -np.conj(s) * rk + c * rk1
            r1 = min(k + 2, hi)
            ck = h[l:r1 + 1, k].copy()
            ck1 = h[l:r1 + 1, k + 1]
            h[l:r1 + 1, k] = c * ck + np.conj(s) * ck1
            h[l:r1 + 1, k + 1] = -s * ck + c * ck1
            if k > l:
                h[k + 1, k - 1] = 0.0
    return eig, total


def eigvals(a, max_factor: int = 30) -> EigResult:
    """All eigenvalues of a square complex matrix."""
    found, rest = balance(a)
    it = 0
    if rest.shape[0]:
        try:
            vals, it = hessenberg_eigvals(hessenberg(rest), max_factor)
        except EigenNonConvergence as exc:
            raise EigenNonConvergence(str(exc), np.concatenate([np.asarray(found, dtype=complex), exc.partial])) from None
    else:
        vals = np.empty(0, dtype=complex)
    return EigResult(np.concatenate([np.asarray(found, dtype=complex), vals]), len(found), it)
