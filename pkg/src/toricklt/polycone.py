"""Rational polyhedral cones and polyhedra with exact data.

A :class:`Cone` always carries both descriptions in canonical form, so equality
of cones is equality of dataclass fields and dualising is a field swap:

* ``rays``      primitive generators of the pointed part, orthogonal to
                ``lineality`` and sorted lexicographically;
* ``lineality`` HNF basis of the saturated lineality lattice;
* ``ineqs``     primitive facet normals, orthogonal to ``equations``;
* ``equations`` HNF basis of the saturated lattice orthogonal to the span.

Conversion between the two descriptions uses the double description method.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (EmptySlice, HilbertBasisRequiresPointed, HilbertBasisWorkLimit,
                     RankMismatch)
from .exactlin import (_row_lattice_coords, determinant, dot, frac, hnf_rows, identity,
                       inverse, kernel_saturated, lcm_denominators, primitive, rank,
                       smith_invariants, solve_rational, vecmat)

DEFAULT_HILBERT_WORK = 250_000


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------

def _combine(c1, v1, c2, v2):
    return [c1 * a + c2 * b for a, b in zip(v1, v2)]


def _prim(v):
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return [x // g for x in v] if g > 1 else list(v)


def double_description(ineqs: Sequence[Sequence[int]], n: int):
    """Generators of ``{x in Q^n : <a, x> >= 0 for all a in ineqs}``.

    Returns ``(lineality, rays)`` as lists of integer vectors.  The rays are
    the extreme rays modulo the lineality space (not yet canonicalised).
    """
    lin = [list(e) for e in identity(n)]
    rays: list[tuple[list[int], frozenset]] = []
    for idx, a in enumerate(ineqs):
        a = [int(x) for x in a]
        vals = [dot(a, l) for l in lin]
        k = next((i for i, v in enumerate(vals) if v), None)
        if k is not None:
            l = lin.pop(k)
            al = vals.pop(k)
            if al < 0:
                l, al = [-x for x in l], -al
            lin = [_prim(_combine(al, l2, -v2, l)) for l2, v2 in zip(lin, vals)]
            new = []
            for r, Z in rays:
                ar = dot(a, r)
                new.append((_prim(_combine(al, r, -ar, l)) if ar else r, Z | {idx}))
            new.append((_prim(l), frozenset(range(idx))))
            rays = new
            continue
        pos, neg, new = [], [], []
        for r, Z in rays:
            v = dot(a, r)
            if v > 0:
                pos.append((r, Z, v))
                new.append((r, Z))
            elif v < 0:
                neg.append((r, Z, v))
            else:
                new.append((r, Z | {idx}))
        need = n - len(lin) - 2
        for p, Zp, vp in pos:
            for q, Zq, vq in neg:
                Z = Zp & Zq
                if len(Z) < need:
                    continue
                if any(Z <= Zr for r, Zr in rays if r is not p and r is not q):
                    continue
                new.append((_prim(_combine(vp, q, -vq, p)), Z | {idx}))
        rays = new
    return lin, [r for r, _ in rays]


def saturate(rows: Sequence[Sequence[int]], n: int) -> tuple:
    """HNF basis of ``span(rows) ∩ Z^n``."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return ()
    perp = kernel_saturated(rows, n)
    if not perp:
        return identity(n)
    return kernel_saturated(perp, n)


def _project_out(v, basis):
    """Orthogonal projection of ``v`` onto the complement of ``span(basis)``."""
    if not basis:
        return list(v)
    gram = [[dot(b1, b2) for b2 in basis] for b1 in basis]
    coef = solve_rational(gram, [dot(b, v) for b in basis]).point
    out = [Fraction(x) for x in v]
    for c, b in zip(coef, basis):
        if c:
            out = [o - c * x for o, x in zip(out, b)]
    return out


def _canonical_gens(n, lin, rays):
    lin = saturate(lin, n)
    out = set()
    for r in rays:
        p = primitive(_project_out(r, lin))
        if any(p):
            out.add(tuple(p))
    return lin, tuple(sorted(out))


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    rank: int
    rays: tuple
    lineality: tuple
    ineqs: tuple
    equations: tuple

    # -- construction ------------------------------------------------------
    @classmethod
    def from_rays(cls, rays: Iterable[Sequence], rank: Optional[int] = None,
                  lineality: Iterable[Sequence] = ()) -> "Cone":
        rays = [primitive(r) for r in rays]
        lineality = [primitive(l) for l in lineality]
        if rank is None:
            if not rays and not lineality:
                raise ValueError("rank is required for a cone without generators")
            rank = len((rays or lineality)[0])
        gens = rays + lineality + [[-x for x in l] for l in lineality]
        if any(len(g) != rank for g in gens):
            raise RankMismatch("generator length differs from the ambient rank")
        eq, facets = double_description(gens, rank)
        equations, ineqs = _canonical_gens(rank, eq, facets)
        cons = list(ineqs) + list(equations) + [[-x for x in e] for e in equations]
        lin, vr = double_description(cons, rank)
        lineality, rays = _canonical_gens(rank, lin, vr)
        return cls(rank, rays, lineality, ineqs, equations)

    @classmethod
    def from_inequalities(cls, ineqs: Iterable[Sequence], rank: int,
                          equations: Iterable[Sequence] = ()) -> "Cone":
        ineqs = [primitive(a) for a in ineqs]
        equations = [primitive(e) for e in equations]
        cons = ineqs + equations + [[-x for x in e] for e in equations]
        if any(len(c) != rank for c in cons):
            raise RankMismatch("inequality length differs from the ambient rank")
        lin, vr = double_description(cons, rank)
        lineality, rays = _canonical_gens(rank, lin, vr)
        gens = list(rays) + list(lineality) + [[-x for x in l] for l in lineality]
        eq, facets = double_description(gens, rank)
        equations, ineqs = _canonical_gens(rank, eq, facets)
        return cls(rank, rays, lineality, ineqs, equations)

    @classmethod
    def zero(cls, rank: int) -> "Cone":
        return cls(rank, (), (), (), identity(rank))

    @classmethod
    def orthant(cls, rank: int) -> "Cone":
        return cls.from_rays(identity(rank))

    # -- queries -------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.rank - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, v: Sequence) -> bool:
        return (all(dot(a, v) >= 0 for a in self.ineqs)
                and all(dot(e, v) == 0 for e in self.equations))

    __contains__ = contains

    def contains_relint(self, v: Sequence) -> bool:
        return (all(dot(a, v) > 0 for a in self.ineqs)
                and all(dot(e, v) == 0 for e in self.equations))

    def dual(self) -> "Cone":
        return dual_cone(self)

    def facet_rays(self) -> list[tuple]:
        """For every facet normal, the rays lying on that facet."""
        return [tuple(r for r in self.rays if dot(a, r) == 0) for a in self.ineqs]

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    def multiplicity(self) -> int:
        """Index of the ray lattice in ``span ∩ Z^n`` for a simplicial cone."""
        if not self.is_simplicial:
            raise ValueError("multiplicity is defined for simplicial cones")
        if not self.rays:
            return 1
        return math.prod(smith_invariants(self.rays))

    @property
    def is_smooth(self) -> bool:
        return self.is_simplicial and self.multiplicity() == 1

    def interior_vector(self) -> tuple:
        """An integer vector in the relative interior (sum of the rays)."""
        return tuple(sum(col) for col in zip(*self.rays)) if self.rays else (0,) * self.rank

    def face(self, normal: Sequence) -> "Cone":
        """The face cut out by a supporting functional ``normal``."""
        return Cone.from_rays([r for r in self.rays if dot(normal, r) == 0], self.rank,
                              self.lineality)

    def __repr__(self) -> str:
        return f"Cone(rank={self.rank}, rays={[list(r) for r in self.rays]})"


def dual_cone(C: Cone) -> Cone:
    """``{m : <m, v> >= 0 for all v in C}`` in canonical form."""
    return Cone(C.rank, C.ineqs, C.equations, C.rays, C.lineality)


# ---------------------------------------------------------------------------
# Hilbert bases
# ---------------------------------------------------------------------------

def _triangulate(C: Cone) -> list[tuple]:
    """Pulling triangulation of a pointed cone using only its own rays."""
    if len(C.rays) == C.dim:
        return [C.rays]
    r0 = C.rays[0]
    out = []
    for a, F in zip(C.ineqs, C.facet_rays()):
        if dot(a, r0) == 0:
            continue
        for simplex in _triangulate(Cone.from_rays(F, C.rank)):
            out.append((r0,) + simplex)
    return out


def _parallelepiped_points(R: Sequence[Sequence[int]]) -> list[tuple]:
    """Nonzero lattice points of the half-open parallelepiped of ``R``'s rows."""
    H = hnf_rows(R)
    Rinv = inverse(R)
    k = len(R)
    out = []
    for x in itertools.product(*(range(H[i][i]) for i in range(k))):
        lam = vecmat(x, Rinv)
        lam = [l - math.floor(l) for l in lam]
        if any(lam):
            p = vecmat(lam, R)
            out.append(tuple(int(v) for v in p))
    return out


def hilbert_basis(C: Cone, work_bound: int = DEFAULT_HILBERT_WORK) -> tuple:
    """Minimal generating set of the monoid ``C ∩ Z^rank``.

    Candidates come from the fundamental parallelepipeds of a triangulation;
    the irreducible ones are kept.  Raises :class:`HilbertBasisWorkLimit`
    rather than returning a partial answer.
    """
    if not C.is_pointed:
        raise HilbertBasisRequiresPointed("Hilbert basis needs a pointed cone")
    if not C.rays:
        return ()
    n = C.rank
    K = saturate(C.rays, n)
    coords = [_row_lattice_coords(K, r) for r in C.rays]
    k = len(K)
    Ck = Cone.from_rays(coords, k)
    simplices = _triangulate(Ck)
    work = sum(abs(determinant(s)) for s in simplices)
    if work > work_bound:
        raise HilbertBasisWorkLimit(f"{work} candidate points exceed the bound {work_bound}")
    cand = set(Ck.rays)
    for s in simplices:
        cand.update(_parallelepiped_points(s))
    grading = [sum(col) for col in zip(*Ck.ineqs)]
    basis: list[tuple] = []
    for x in sorted(cand, key=lambda v: (dot(grading, v), v)):
        if not any(Ck.contains([a - b for a, b in zip(x, y)]) for y in basis):
            basis.append(x)
    return tuple(sorted(tuple(vecmat(y, K)) for y in basis))


# ---------------------------------------------------------------------------
# polyhedra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Polyhedron:
    """A pointed rational polyhedron ``conv(vertices) + tail``, or empty.

    The empty polyhedron has no vertices and ``tail`` set to None.
    """

    rank: int
    vertices: tuple
    tail: Optional[Cone]

    @classmethod
    def empty(cls, rank: int) -> "Polyhedron":
        return cls(rank, (), None)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @classmethod
    def from_generators(cls, points: Iterable[Sequence], tail: Cone | Iterable[Sequence],
                        rank: Optional[int] = None) -> "Polyhedron":
        points = [tuple(map(frac, p)) for p in points]
        if isinstance(tail, Cone):
            if not tail.is_pointed:
                raise ValueError("polyhedra with lineality are not supported")
            tail_rays = list(tail.rays)
            rank = tail.rank
        else:
            tail_rays = [tuple(r) for r in tail]
        if rank is None:
            rank = len(points[0]) if points else len(tail_rays[0])
        if not points:
            return cls.empty(rank)
        gens = []
        for p in points:
            if len(p) != rank:
                raise RankMismatch("point length differs from the ambient rank")
            L = lcm_denominators(p)
            gens.append([int(x * L) for x in p] + [L])
        gens += [list(r) + [0] for r in tail_rays]
        return cls._from_homogenized(Cone.from_rays(gens, rank + 1), rank)

    @classmethod
    def from_inequalities(cls, rank: int, weak: Iterable = (), equalities: Iterable = ()
                          ) -> "Polyhedron":
        """``{x : <a, x> >= c}`` for ``(a, c)`` in ``weak``, plus equalities."""
        ineqs = [list(_int_row(a, c)) for a, c in weak]
        ineqs.append([0] * rank + [1])
        eqs = [list(_int_row(a, c)) for a, c in equalities]
        return cls._from_homogenized(Cone.from_inequalities(ineqs, rank + 1, eqs), rank)

    @classmethod
    def _from_homogenized(cls, H: Cone, rank: int) -> "Polyhedron":
        if not H.is_pointed:
            raise ValueError("polyhedra with lineality are not supported")
        verts = sorted(tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in H.rays if r[-1] > 0)
        if not verts:
            return cls.empty(rank)
        tail = Cone.from_rays([r[:-1] for r in H.rays if r[-1] == 0], rank)
        return cls(rank, tuple(verts), tail)

    def contains(self, x: Sequence) -> bool:
        if self.is_empty:
            return False
        L = lcm_denominators(x)
        return Polyhedron._hom_cone(self).contains([frac(v) * L for v in x] + [L])

    @staticmethod
    def _hom_cone(P: "Polyhedron") -> Cone:
        gens = []
        for p in P.vertices:
            L = lcm_denominators(p)
            gens.append([int(x * L) for x in p] + [L])
        gens += [list(r) + [0] for r in P.tail.rays]
        return Cone.from_rays(gens, P.rank + 1)

    def __repr__(self) -> str:
        if self.is_empty:
            return f"Polyhedron.empty({self.rank})"
        vs = [[str(x) for x in v] for v in self.vertices]
        return f"Polyhedron(vertices={vs}, tail={[list(r) for r in self.tail.rays]})"


def _int_row(a, c):
    row = [frac(x) for x in a] + [-frac(c)]
    L = lcm_denominators(row)
    return [int(x * L) for x in row]


def vertex_multiplicity(v: Sequence) -> int:
    """Least positive integer ``k`` with ``k * v`` integral."""
    return lcm_denominators(v)


def minkowski_sum(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    if P.rank != Q.rank:
        raise RankMismatch("Minkowski sum of polyhedra in different ranks")
    if P.is_empty or Q.is_empty:
        return Polyhedron.empty(P.rank)
    pts = [tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices]
    return Polyhedron.from_generators(pts, list(P.tail.rays) + list(Q.tail.rays), P.rank)


def support_min(P: Polyhedron, m: Sequence):
    """``min <m, x>`` over ``P``; ``-math.inf`` when unbounded below."""
    if P.is_empty:
        raise EmptySlice("support function of the empty polyhedron")
    if any(dot(m, r) < 0 for r in P.tail.rays):
        return -math.inf
    return min(frac(dot(m, v)) for v in P.vertices)


# ---------------------------------------------------------------------------
# lattice equivalence
# ---------------------------------------------------------------------------

def unimodular_equivalence(C1: Cone, C2: Cone, bound: Optional[int] = None):
    """A ``U`` in ``GL(n, Z)`` with ``U @ C1 = C2`` (acting on columns), or None.

    Both cones must be full-dimensional and pointed.  Any such ``U`` permutes
    rays, so it is enough to try images of one basis of rays; ``bound`` limits
    the absolute value of the entries of ``U``.
    """
    if C1.rank != C2.rank or len(C1.rays) != len(C2.rays):
        return None
    n = C1.rank
    basis: list[tuple] = []
    for r in C1.rays:
        if rank(basis + [r]) > len(basis):
            basis.append(r)
    if len(basis) < n:
        return None
    targets = set(C2.rays)
    Binv = inverse(basis)  # rows of basis are the chosen rays
    for images in itertools.permutations(C2.rays, n):
        # U b_i = images_i  ->  U = images^T (basis^T)^{-1}
        Ut = [vecmat(col, images) for col in Binv]  # Ut = Binv @ images
        U = tuple(tuple(Ut[j][i] for j in range(n)) for i in range(n))
        if any(frac(x).denominator != 1 for row in U for x in row):
            continue
        U = tuple(tuple(int(x) for x in row) for row in U)
        if bound is not None and any(abs(x) > bound for row in U for x in row):
            continue
        if abs(determinant(U)) != 1:
            continue
        if {tuple(dot(row, r) for row in U) for r in C1.rays} == targets:
            return U
    return None
