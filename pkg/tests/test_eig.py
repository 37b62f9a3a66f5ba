import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from fhlab.eig import EigenNonConvergence, balance, eigvals, hessenberg, hessenberg_eigvals


def max_matching_gap(a, b):
    d = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(d)
    return d[r, c].max()


@given(st.integers(1, 40), st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_matches_lapack_on_random(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    lam = eigvals(a).eigenvalues
    assert max_matching_gap(lam, np.linalg.eigvals(a)) < 1e-9 * max(1, np.abs(a).max() * n)


def test_hessenberg_is_similarity():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    h = hessenberg(a)
    assert np.all(np.tril(h, -2) == 0)
    assert np.trace(h) == pytest.approx(np.trace(a))
    assert np.linalg.norm(h) == pytest.approx(np.linalg.norm(a))


def test_isolation_gives_exact_zeros_for_shift():
    a = np.diag(-np.ones(20), -1)
    res = eigvals(a)
    assert res.isolated == 21
    assert np.all(res.eigenvalues == 0)


def test_triangular_is_read_off():
    a = np.triu(np.arange(1, 26).reshape(5, 5)).astype(complex)
    np.testing.assert_array_equal(np.sort(eigvals(a).eigenvalues.real), [1, 7, 13, 19, 25])


def test_balancing_preserves_spectrum():
    a = np.array([[1, 1e6, 0], [1e-6, 2, 1e8], [0, 1e-8, 3]], dtype=complex)
    found, rest = balance(a)
    assert np.abs(rest).max() < 1e5
    lam = eigvals(a).eigenvalues
    assert max_matching_gap(lam, np.linalg.eigvals(a)) < 1e-9


def test_two_by_two_and_empty():
    lam = eigvals(np.array([[0, 1], [-1, 0]], dtype=complex)).eigenvalues
    np.testing.assert_allclose(np.sort_complex(lam), [-1j, 1j], atol=1e-15)
    assert eigvals(np.zeros((0, 0))).eigenvalues.size == 0


def test_non_convergence_reports_partial():
    h = hessenberg(np.random.default_rng(0).standard_normal((8, 8)))
    with pytest.raises(EigenNonConvergence) as info:
        hessenberg_eigvals(h, max_factor=0)
    assert info.value.partial.size < 8


def test_rejects_non_square():
    with pytest.raises(ValueError):
        balance(np.ones((2, 3)))
