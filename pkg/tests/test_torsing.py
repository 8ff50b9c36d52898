import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricklt.errors import NonPrimitiveVector, NotPointed, OutsideCone, OutsideSupport
from toricklt.exactlin import determinant, dot, matvec, solve_rational
from toricklt.polycone import Cone, hilbert_basis
from toricklt.torsing import (ToricAffine, canonical_class, klt_type_certificate,
                              log_discrepancy, q_gorenstein_witness, resolve, star_subdivide)

EXAMPLE = [(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1)]
half = Fraction(1, 2)


def toric(n, entry=2, extra=1):
    vec = st.lists(st.integers(-entry, entry), min_size=n, max_size=n).filter(any)
    return st.lists(vec, min_size=n, max_size=n + extra).map(
        lambda g: Cone.from_rays(g, n)).filter(
        lambda C: C.is_pointed and C.is_full_dimensional).map(ToricAffine)


unimodular = st.sampled_from([
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((0, 1, 0), (1, 0, 0), (0, 0, -1)),
    ((1, 2, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (-1, 1, 3), (0, 0, 1)),
    ((2, 1, 1), (1, 1, 0), (1, 0, 1)),
]).filter(lambda U: abs(determinant(U)) == 1)


@pytest.fixture
def example():
    return ToricAffine.from_rays(EXAMPLE)


def test_canonical_class():
    assert canonical_class(ToricAffine(Cone.orthant(2))) == (-1, -1)
    assert canonical_class(ToricAffine.from_rays(EXAMPLE)) == (-1,) * 4


def test_orthant_is_gorenstein():
    v = q_gorenstein_witness(ToricAffine(Cone.orthant(3)))
    assert v.witness.m == (-1, -1, -1) and v.witness.cartier_index == 1


def test_example_not_q_gorenstein(example):
    v = q_gorenstein_witness(example)
    assert not v.feasible
    assert v.certificate == (2, -1, -1, 1)


def test_example_half_d1(example):
    b = {example.ray_index((0, 0, 1)): half}
    w = q_gorenstein_witness(example, b).witness
    assert w.m == (-half, 0, -half) and w.cartier_index == 2
    assert log_discrepancy(example, b, w, (1, 1, 2)) == Fraction(3, 2)


def test_example_klt_on_d1(example):
    i = example.ray_index((0, 0, 1))
    cert = klt_type_certificate(example, [i])
    assert cert.boundary == (half, 0, 0, 0)
    assert cert.ray_log_discrepancies == (half, 1, 1, 1)
    assert klt_type_certificate(example, [example.ray_index((0, 1, 2))]) is None


def test_smooth_klt_certificate_is_empty_boundary():
    cert = klt_type_certificate(ToricAffine(Cone.orthant(3)), [])
    assert cert.boundary == (0, 0, 0) and cert.witness.m == (-1, -1, -1)


def test_a1_log_discrepancy():
    X = ToricAffine.from_rays([(1, 0), (1, 2)])
    w = q_gorenstein_witness(X).witness
    assert w.m == (-1, 0)
    assert log_discrepancy(X, None, w, (1, 1)) == 1
    assert log_discrepancy(ToricAffine(Cone.orthant(3)), None,
                           q_gorenstein_witness(ToricAffine(Cone.orthant(3))).witness,
                           (1, 1, 1)) == 3


def test_log_discrepancy_errors(example):
    b = {example.ray_index((0, 0, 1)): half}
    w = q_gorenstein_witness(example, b).witness
    with pytest.raises(OutsideCone):
        log_discrepancy(example, b, w, (-1, 0, 0))
    with pytest.raises(NonPrimitiveVector):
        log_discrepancy(example, b, w, (2, 2, 4))


def test_not_pointed_rejected():
    with pytest.raises(NotPointed):
        ToricAffine(Cone.from_rays([(1, 0), (-1, 0), (0, 1)]))


def test_star_subdivisions():
    fan = star_subdivide([Cone.orthant(2)], (1, 1))
    assert len(fan) == 2 and all(C.is_smooth for C in fan)
    fan = star_subdivide([Cone.from_rays(EXAMPLE)], (1, 1, 2))
    assert len(fan) == 4
    assert all(abs(determinant(C.rays)) == 1 for C in fan)
    with pytest.raises(OutsideSupport):
        star_subdivide([Cone.orthant(2)], (-1, 0))


def test_resolve_examples(example):
    r = resolve(ToricAffine(Cone.orthant(2)))
    assert r.exceptional == () and r.fan == (Cone.orthant(2),)
    assert resolve(ToricAffine.from_rays([(1, 0), (1, 2)])).exceptional == ((1, 1),)
    assert resolve(example, [(1, 1, 2)]).exceptional == ((1, 1, 2),)
    r = resolve(example)
    assert all(C.is_smooth for C in r.fan)
    assert resolve(example) == r


def _covers(sigma, fan):
    for C in fan:
        assert all(sigma.contains(v) for v in C.rays)
    for v in itertools.product(range(-3, 4), repeat=sigma.rank):
        if sigma.contains(v):
            assert any(C.contains(v) for C in fan)
    for C1, C2 in itertools.combinations(fan, 2):
        # interiors are disjoint: some facet of C1 separates C2
        assert any(all(dot(a, r) <= 0 for r in C2.rays) for a in C1.ineqs)


@settings(max_examples=15, deadline=None)
@given(toric(3, 2, 1))
def test_resolution_is_a_smooth_subdivision(X):
    r = resolve(X)
    assert all(C.is_smooth for C in r.fan)
    _covers(X.sigma, r.fan)


@settings(max_examples=20, deadline=None)
@given(toric(3, 2, 1))
def test_klt_always_feasible_and_positive(X):
    cert = klt_type_certificate(X)
    assert cert is not None
    m = cert.witness.m
    assert all(-1 <= dot(m, v) < 0 for v in X.rays)
    assert all(a == 1 - b for a, b in zip(cert.ray_log_discrepancies, cert.boundary))
    for h in hilbert_basis(X.sigma):
        assert -dot(m, h) > 0


@settings(max_examples=20, deadline=None)
@given(toric(3, 2, 1))
def test_log_discrepancy_linear_and_matches_pullback(X):
    cert = klt_type_certificate(X)
    m = cert.witness.m
    hb = hilbert_basis(X.sigma)
    A = lambda v: -dot(m, v)  # noqa: E731
    for h1, h2 in itertools.combinations(hb, 2):
        assert A([a + b for a, b in zip(h1, h2)]) == A(h1) + A(h2)
    # pullback oracle: write e through the rays of a simplicial subcone
    r = resolve(X)
    for e in r.exceptional:
        for C in [X.sigma] if X.sigma.is_simplicial else []:
            lam = solve_rational([list(c) for c in zip(*C.rays)], e).point
            want = sum(l * (1 - cert.boundary[X.rays.index(v)]) for l, v in zip(lam, C.rays))
            assert log_discrepancy(X, cert.boundary, cert.witness, e) == want


@settings(max_examples=20, deadline=None)
@given(toric(3, 2, 1), unimodular)
def test_verdicts_are_unimodular_invariant(X, U):
    Y = ToricAffine.from_rays([matvec(U, v) for v in X.rays])
    v1, v2 = q_gorenstein_witness(X), q_gorenstein_witness(Y)
    assert v1.feasible == v2.feasible
    if v1.feasible:
        assert v1.witness.cartier_index == v2.witness.cartier_index
    c1 = klt_type_certificate(X)
    c2 = klt_type_certificate(Y)
    assert sum(c1.boundary) == sum(c2.boundary)
    b = {tuple(matvec(U, v)): c for v, c in zip(X.rays, c1.boundary)}
    bY = tuple(b[v] for v in Y.rays)
    wY = q_gorenstein_witness(Y, bY).witness
    for h in hilbert_basis(X.sigma):
        assert log_discrepancy(Y, bY, wY, matvec(U, h)) == \
            log_discrepancy(X, c1.boundary, c1.witness, h)
