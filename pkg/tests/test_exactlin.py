from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given, settings
from hypothesis import strategies as st

from toricklt.exactlin import (LpProblem, check_farkas, determinant, farkas_certificate,
                               hermite_normal_form, kernel_saturated, linprog_exact,
                               lp_feasible_strict, matmul, matvec, scaling_index,
                               smith_invariants, solve_integer, solve_rational)

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def is_hnf(H):
    last = -1
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            return all(not any(r) for r in H[i:])
        j = nz[0]
        if j <= last or row[j] <= 0:
            return False
        if any(not 0 <= H[k][j] < row[j] for k in range(i)):
            return False
        last = j
    return True


def test_hnf_small_example():
    H, U = hermite_normal_form([[2, 4], [1, 3]])
    assert H == ((1, 1), (0, 2))
    assert matmul(U, [[2, 4], [1, 3]]) == H


def test_hnf_of_primitive_row_is_itself():
    H, _ = hermite_normal_form([[2, -1, -1, 1]])
    assert H == ((2, -1, -1, 1),)


def test_kernel_of_example_weights():
    K = kernel_saturated([[2, -1, -1, 1]])
    assert K == ((1, 0, 0, -2), (0, 1, 0, 1), (0, 0, 1, 1))


def test_smith_invariants_against_sympy():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    snf = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    want = tuple(sorted(abs(int(snf[i, i])) for i in range(3)))
    assert smith_invariants(M) == want == (2, 6, 12)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_hnf_properties(M):
    H, U = hermite_normal_form(M)
    assert is_hnf(H)
    assert [list(r) for r in matmul(U, M)] == [list(r) for r in H]
    assert abs(determinant(U)) == 1


@settings(max_examples=30, deadline=None)
@given(matrices(3, 4))
def test_smith_matches_sympy(M):
    A = sympy.Matrix(M)
    if A.rank() == 0:
        return
    snf = smith_normal_form(A, domain=sympy.ZZ)
    want = sorted(abs(int(snf[i, i])) for i in range(min(A.shape)) if snf[i, i] != 0)
    assert [d for d in smith_invariants(M) if d] == want


@settings(max_examples=40, deadline=None)
@given(matrices(3, 5))
def test_kernel_is_saturated(M):
    K = kernel_saturated(M)
    n = len(M[0])
    for k in K:
        assert all(x == 0 for x in matvec(M, k))
    assert len(K) == n - sympy.Matrix(M).rank()
    if K:
        assert all(d == 1 for d in smith_invariants(K))


def test_solve_rational_certificate():
    rays = [(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1)]
    sol = solve_rational(rays, [-1, -1, -1, -1])
    assert not sol.feasible
    lam = sol.certificate
    assert all(sum(l * r[j] for l, r in zip(lam, rays)) == 0 for j in range(3))
    assert sum(lam) * -1 != 0


def test_solve_integer_and_scaling_index():
    assert solve_integer([[2, 0], [0, 2]], [1, 0]) is None
    assert solve_integer([[2, 1], [0, 1]], [3, 1]) == (1, 1)
    k, x = scaling_index([[0, 0, 1], [0, 1, 2], [1, 0, 1]], [-1, -1, -1])
    assert (k, x) == (1, (0, 1, -1))
    k, x = scaling_index([[2]], [1])
    assert (k, x) == (2, (Fraction(1, 2),))


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
def test_solve_integer_consistent(A, x):
    x = x[:len(A[0])]
    b = matvec(A, x)
    y = solve_integer(A, b)
    assert y is not None
    assert matvec(A, y) == b


def test_linprog_simple():
    # max x + y subject to x <= 2, y <= 3
    res = linprog_exact(2, (1, 1), weak=[((-1, 0), -2), ((0, -1), -3)])
    assert res.status == "optimal" and res.value == 5
    res = linprog_exact(1, (1,), weak=[((1,), 0)])
    assert res.status == "unbounded"
    res = linprog_exact(1, (1,), weak=[((1,), 1), ((-1,), 0)])
    assert res.status == "infeasible"


def test_strict_feasibility_and_farkas():
    P = LpProblem(1, weak=(((1,), 0),), strict=(((-1,), 0),))  # x >= 0 and x < 0
    assert lp_feasible_strict(P) is None
    cert = farkas_certificate(P)
    assert cert is not None and check_farkas(P, cert)
    Q = LpProblem(2, strict=(((1, 0), 0), ((0, 1), 0)), weak=(((-1, -1), -1),))
    x = lp_feasible_strict(Q)
    assert x is not None and Q.satisfied_by(x)
    assert farkas_certificate(Q) is None


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.lists(small, min_size=2, max_size=2), small),
                min_size=1, max_size=5))
def test_lp_dichotomy(rows):
    P = LpProblem(2, strict=tuple((tuple(a), c) for a, c in rows))
    x = lp_feasible_strict(P)
    cert = farkas_certificate(P)
    assert (x is None) != (cert is None)
    if cert is not None:
        assert check_farkas(P, cert)


def test_floats_rejected():
    with pytest.raises(TypeError):
        solve_rational([[1.5]], [1])
