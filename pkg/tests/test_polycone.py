import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricklt.errors import EmptySlice, HilbertBasisRequiresPointed, HilbertBasisWorkLimit
from toricklt.exactlin import dot, matvec
from toricklt.polycone import (Cone, Polyhedron, hilbert_basis, minkowski_sum, support_min,
                               unimodular_equivalence)

EXAMPLE = [(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1)]


def cones(n, entry=3, extra=1):
    vec = st.lists(st.integers(-entry, entry), min_size=n, max_size=n).filter(any)
    return st.lists(vec, min_size=n, max_size=n + extra).map(
        lambda g: Cone.from_rays(g, n)).filter(lambda C: C.is_pointed and C.is_full_dimensional)


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def facets_by_cross_products(rays):
    """Independent facet oracle for full-dimensional cones in rank 3."""
    out = set()
    for a, b in itertools.combinations(rays, 2):
        c = cross(a, b)
        if not any(c):
            continue
        for s in (1, -1):
            v = tuple(s * x for x in c)
            if all(dot(v, r) >= 0 for r in rays):
                g = math.gcd(*v)
                out.add(tuple(x // g for x in v))
    return sorted(out)


def brute_hilbert(C):
    box = sum(max(abs(x) for x in r) for r in C.rays)
    pts = [p for p in itertools.product(range(-box, box + 1), repeat=C.rank)
           if any(p) and C.contains(p)]
    pset = set(pts)
    return sorted(x for x in pts if not any(
        tuple(a - b for a, b in zip(x, y)) in pset for y in pts if y != x))


def test_dual_of_a1_cone():
    C = Cone.from_rays([(1, 0), (1, 2)])
    assert C.dual().rays == ((0, 1), (2, -1))
    assert C.dual().dual() == C


def test_example_cone_facets():
    C = Cone.from_rays(EXAMPLE)
    assert C.ineqs == ((-1, 0, 1), (0, 1, 0), (1, -2, 1), (1, 0, 0))
    assert list(C.ineqs) == facets_by_cross_products(EXAMPLE)


def test_orthant_is_self_dual():
    assert Cone.orthant(3).dual() == Cone.orthant(3)


def test_hilbert_basis_examples():
    assert hilbert_basis(Cone.from_rays([(1, 0), (1, 2)])) == ((1, 0), (1, 1), (1, 2))
    hb = hilbert_basis(Cone.from_rays([(1, 0, 0), (1, 2, 0), (0, 0, 1), (0, 1, 1)]))
    assert len(hb) == 5 and (1, 1, 0) in hb
    C = Cone.from_rays(EXAMPLE)
    assert hilbert_basis(C) == C.rays
    assert hilbert_basis(C.dual()) == ((-1, 0, 1), (0, -1, 1), (0, 1, 0), (1, -2, 1), (1, 0, 0))


def test_hilbert_basis_errors():
    with pytest.raises(HilbertBasisRequiresPointed):
        hilbert_basis(Cone.from_rays([(1, 0), (-1, 0), (0, 1)]))
    with pytest.raises(HilbertBasisWorkLimit):
        hilbert_basis(Cone.from_rays([(1, 0), (1, 1000)]), work_bound=100)


def test_non_pointed_cone():
    C = Cone.from_rays([(1, 0), (-1, 0), (0, 1)])
    assert C.lineality == ((1, 0),) and C.rays == ((0, 1),)
    assert C.dual().rays == ((0, 1),) and C.dual().is_pointed


def test_lower_dimensional_hilbert_basis():
    C = Cone.from_rays([(1, 0, 0), (1, 2, 0)])
    assert hilbert_basis(C) == ((1, 0, 0), (1, 1, 0), (1, 2, 0))


def test_polyhedra():
    seg = Polyhedron.from_generators([(0,), (1,)], [], 1)
    two = minkowski_sum(seg, seg)
    assert two.vertices == ((0,), (2,))
    assert support_min(seg, (-2,)) == -2
    ray = Cone.from_rays([(1,)])
    a = Polyhedron.from_generators([(0,)], ray)
    b = Polyhedron.from_generators([(1,)], ray)
    assert minkowski_sum(a, b).vertices == ((1,),)
    assert support_min(a, (-1,)) == -math.inf
    with pytest.raises(EmptySlice):
        support_min(Polyhedron.empty(1), (1,))
    P = Polyhedron.from_inequalities(2, weak=[((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)])
    assert P.vertices == ((0, 0), (0, 1), (1, 0))
    assert P.contains((Fraction(1, 3), Fraction(1, 3)))
    assert not P.contains((1, 1))


def test_unimodular_equivalence():
    U = unimodular_equivalence(Cone.from_rays([(1, 0), (0, 1)]),
                               Cone.from_rays([(0, 1), (1, 0)]))
    assert U is not None
    assert unimodular_equivalence(Cone.orthant(2), Cone.from_rays([(1, 0), (1, 2)])) is None


@settings(max_examples=30, deadline=None)
@given(cones(3, 2))
def test_dual_involution_and_facet_oracle(C):
    assert C.dual().dual() == C
    assert list(C.ineqs) == facets_by_cross_products(C.rays)


@settings(max_examples=25, deadline=None)
@given(cones(2, 3))
def test_hilbert_basis_rank2_matches_brute_force(C):
    assert list(hilbert_basis(C)) == brute_hilbert(C)


@settings(max_examples=15, deadline=None)
@given(cones(3, 2, extra=0))
def test_hilbert_basis_rank3_matches_brute_force(C):
    assert list(hilbert_basis(C)) == brute_hilbert(C)


@settings(max_examples=25, deadline=None)
@given(cones(3, 2), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_membership_matches_dual(C, v):
    inside = C.contains(v)
    assert inside == all(dot(m, v) >= 0 for m in C.dual().rays)


@settings(max_examples=20, deadline=None)
@given(cones(3, 2))
def test_unimodular_images_are_equivalent(C):
    U = ((1, 1, 0), (0, 1, 0), (0, 0, -1))
    D = Cone.from_rays([matvec(U, r) for r in C.rays])
    W = unimodular_equivalence(C, D)
    assert W is not None
    assert {tuple(matvec(W, r)) for r in C.rays} == set(D.rays)
