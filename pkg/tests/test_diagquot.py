import itertools
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricklt.diagquot import (LatticeRefinement, WeightAction, finite_quotient,
                               invariant_lattice, invariant_monoid, quotient_presentation,
                               riemann_hurwitz_check, verify_binomial_relations)
from toricklt.errors import NotAProperRefinement, PointQuotient, UnknownGenerator
from toricklt.exactlin import dot, in_row_lattice
from toricklt.polycone import Cone, unimodular_equivalence
from toricklt.torsing import ToricAffine, ToricPair, klt_type_certificate, q_gorenstein_witness

EXAMPLE = WeightAction(4, ((2, -1, -1, 1),))
MU2 = WeightAction(2, (), ((2, (1, 1)),))


def actions(max_n=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        k = draw(st.integers(0, 2))
        W = tuple(tuple(draw(st.integers(-3, 3)) for _ in range(n)) for _ in range(k))
        fin = ()
        if draw(st.booleans()):
            d = draw(st.integers(2, 4))
            fin = ((d, tuple(draw(st.integers(0, d - 1)) for _ in range(n))),)
        return WeightAction(n, W, fin)
    return build()


def is_invariant(A, e):
    return (all(dot(w, e) == 0 for w in A.torus_weights)
            and all(dot(u, e) % d == 0 for d, u in A.finite_factors))


def test_simple_invariants():
    assert invariant_monoid(WeightAction(2, ((1, -1),))) == [(1, 1)]
    assert invariant_monoid(MU2) == [(2, 0), (1, 1), (0, 2)]
    assert invariant_monoid(WeightAction(2, ((1, 1),))) == []


def test_example_invariants():
    assert invariant_monoid(EXAMPLE) == [(1, 2, 0, 0), (1, 1, 1, 0), (1, 0, 2, 0),
                                         (0, 1, 0, 1), (0, 0, 1, 1)]


def test_mu2_brute_force():
    got = set(invariant_monoid(MU2))
    inv = [e for e in itertools.product(range(3), repeat=2) if any(e) and is_invariant(MU2, e)]
    irreducible = {e for e in inv if not any(
        f != e and all(a >= b for a, b in zip(e, f)) and is_invariant(MU2, [a - b for a, b in zip(e, f)])
        and any(a - b for a, b in zip(e, f)) for f in inv)}
    assert got == irreducible


def test_presentations():
    P = quotient_presentation(WeightAction(2, ((1, -1),)))
    assert P.quotient.rays == ((1,),)
    P = quotient_presentation(MU2)
    assert unimodular_equivalence(P.quotient.sigma, Cone.from_rays([(1, 0), (1, 2)])) is not None
    P = quotient_presentation(EXAMPLE)
    assert len(P.quotient.rays) == 4 and P.quotient.rank == 3
    ref = Cone.from_rays([(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1)])
    U = unimodular_equivalence(P.quotient.sigma, ref, bound=3)
    assert U is not None
    with pytest.raises(PointQuotient):
        quotient_presentation(WeightAction(2, ((1, 1),)))


def test_example_d1_identification():
    P = quotient_presentation(EXAMPLE)
    i, k = P.coordinate_divisor_map[0]
    v = P.quotient.rays[i]
    positive = {j for j, c in enumerate(P.generator_coords) if dot(c, v) > 0}
    assert positive == {j for j, g in enumerate(P.invariant_generators) if g[0] > 0}
    assert k == 1
    cert = klt_type_certificate(P.quotient, [i])
    assert cert.boundary[i] == Fraction(1, 2)


def test_relations():
    P = quotient_presentation(EXAMPLE)
    rel = [("f1*f3", "f2^2"), ("f1*f5", "f2*f4"), ("f2*f5", "f3*f4"), ("f1*f4", "f2*f5")]
    assert verify_binomial_relations(P, rel) == [True, True, True, False]
    assert verify_binomial_relations(P, [(["f1", "f3"], ["f2", "f2"])]) == [True]
    with pytest.raises(UnknownGenerator):
        verify_binomial_relations(P, [("f9", "f1")])


@settings(max_examples=30, deadline=None)
@given(actions())
def test_monoid_is_saturated_and_minimal(A):
    gens = invariant_monoid(A)
    L = invariant_lattice(A)
    for g in gens:
        assert is_invariant(A, g) and in_row_lattice(L, g)
    box = 3

    @lru_cache(maxsize=None)
    def generated(e):
        if not any(e):
            return True
        return any(all(a >= b for a, b in zip(e, g)) and
                   generated(tuple(a - b for a, b in zip(e, g))) for g in gens)

    for e in itertools.product(range(box + 1), repeat=A.n):
        if is_invariant(A, e):
            assert generated(e)
    for g in gens:  # no generator is a sum of two others
        assert not any(all(a >= b for a, b in zip(g, h)) and h != g and
                       generated(tuple(a - b for a, b in zip(g, h))) for h in gens)


@settings(max_examples=30, deadline=None)
@given(actions())
def test_quotients_are_klt_and_divisor_map_consistent(A):
    try:
        P = quotient_presentation(A)
    except PointQuotient:
        return
    assert klt_type_certificate(P.quotient) is not None
    for i, entry in enumerate(P.coordinate_divisor_map):
        if entry is None:
            continue
        r, k = entry
        v = P.quotient.rays[r]
        for g, c in zip(P.invariant_generators, P.generator_coords):
            assert g[i] == k * dot(c, v)


def a2_refinement():
    X = ToricAffine(Cone.orthant(2))
    up = ToricPair(X, (0, 0), q_gorenstein_witness(X).witness)
    R = LatticeRefinement(X.sigma, ((Fraction(1, 2), Fraction(1, 2)),))
    return X, up, R


def test_a2_mod_pm1():
    X, up, R = a2_refinement()
    assert R.index == 2
    down, klt = finite_quotient(R, up)
    assert klt and down.boundary == (0, 0)
    assert unimodular_equivalence(down.toric.sigma, Cone.from_rays([(1, 0), (1, 2)])) is not None
    w = tuple(int(x) for x in R.to_sup((Fraction(1, 2), Fraction(1, 2))))
    c = riemann_hurwitz_check(R, up, [w])[0]
    assert (c.a_up, c.r, c.a_down) == (2, 2, 1)
    e1 = tuple(int(x) for x in R.to_sup((1, 0)))
    c = riemann_hurwitz_check(R, up, [e1])[0]
    assert c.r == 1 and c.a_up == c.a_down


def test_unramified_ray_keeps_coefficient():
    X, _, R = a2_refinement()
    b = (Fraction(1, 3), Fraction(1, 2))
    up = ToricPair(X, b, q_gorenstein_witness(X, b).witness)
    down, _ = finite_quotient(R, up)
    assert sorted(down.boundary) == sorted(b)


def test_non_klt_boundary_is_refused():
    X, _, R = a2_refinement()
    b = (1, 0)
    up = ToricPair(X, b, q_gorenstein_witness(X, b).witness)
    down, klt = finite_quotient(R, up)
    assert 1 in down.boundary and not klt


def test_ramified_boundary():
    X = ToricAffine(Cone.orthant(2))
    R = LatticeRefinement(X.sigma, ((Fraction(1, 2), 0),))
    up = ToricPair(X, (0, 0), q_gorenstein_witness(X).witness)
    down, klt = finite_quotient(R, up)
    # x -> x^2 ramifies along {x = 0}: coefficient 1/2 downstairs
    assert sorted(down.boundary) == [0, Fraction(1, 2)] and klt


def test_index_one_refinement_rejected():
    with pytest.raises(NotAProperRefinement):
        LatticeRefinement(Cone.orthant(2), ((1, 0),))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.lists(st.integers(0, 7), min_size=2, max_size=2),
       st.lists(st.integers(1, 4), min_size=2, max_size=2))
def test_riemann_hurwitz_property(d, g, coeffs):
    X = ToricAffine.from_rays([(1, 0), (1, 3)])
    extra = tuple(Fraction(x % d, d) for x in g)
    if all(x == 0 for x in extra):
        return
    R = LatticeRefinement(X.sigma, (extra,))
    cert = klt_type_certificate(X)
    up = ToricPair(X, cert.boundary, cert.witness)
    down, klt = finite_quotient(R, up)
    assert klt
    w = [a * c for a, c in zip(down.toric.rays[0], (coeffs[0],) * 2)]
    w = [a + coeffs[1] * b for a, b in zip(w, down.toric.rays[1])]
    from toricklt.exactlin import primitive
    checks = riemann_hurwitz_check(R, up, [primitive(w)] + list(down.toric.rays))
    assert all(c.ok for c in checks)
