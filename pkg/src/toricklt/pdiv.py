"""Complexity-one polyhedral divisors over P^1.

A ``PDivisorC1`` is a tail cone ``sigma`` in ``N'_Q`` together with polyhedral
slices at finitely many marked points of P^1.  Points are labelled by
``Fraction`` values or ``math.inf``; an unmarked point carries the tail itself
and an Empty slice removes the point from the locus.

Divisor keys used throughout:

* ``("v", Z, vertex)`` a vertical prime divisor over the point ``Z``;
* ``("h", i)`` the horizontal divisor of the ``i``-th tail ray.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import (AffineLocus, ComplexityNotOne, NonKltBoundary, NotProper, NotSaturated,
                     OutsideWeightCone, QuotientNotAPoint, RankMismatch)
from .exactlin import (dot, frac, hnf_rows, kernel_saturated, scaling_index, solve_integer,
                       solve_rational)
from .polycone import Cone, Polyhedron, hilbert_basis, saturate, support_min, vertex_multiplicity
from .torsing import ToricAffine

INF = math.inf


def point_key(z):
    return (z == INF, 0 if z == INF else z)


def parse_point(z):
    if z == INF or (isinstance(z, str) and z.strip().lower() in ("inf", "∞")):
        return INF
    return frac(z)


def _keysort(keys):
    def k(key):
        if key[0] == "h":
            return (1, key[1])
        return (0, point_key(key[1]), key[2])
    return sorted(keys, key=k)


@dataclass(frozen=True)
class PDivisorC1:
    rank: int
    tail: Cone
    slices: tuple  # sorted (point, Polyhedron)

    def __post_init__(self):
        if not self.tail.is_pointed:
            raise ValueError("the tail cone must be pointed")
        seen = {}
        for z, P in self.slices:
            z = parse_point(z)
            if P.rank != self.rank:
                raise RankMismatch("slice rank differs from the tail rank")
            if not P.is_empty and P.tail != self.tail:
                raise ValueError(f"slice at {z} has a different tail cone")
            if z in seen:
                raise ValueError(f"point {z} is marked twice")
            seen[z] = P
        object.__setattr__(self, "slices",
                           tuple(sorted(seen.items(), key=lambda t: point_key(t[0]))))

    @classmethod
    def build(cls, tail: Cone, slices: Mapping) -> "PDivisorC1":
        """``slices`` maps points to a Polyhedron, to vertex lists, or to None (Empty)."""
        out = []
        for z, P in slices.items():
            if P is None:
                P = Polyhedron.empty(tail.rank)
            elif not isinstance(P, Polyhedron):
                P = Polyhedron.from_generators(P, tail)
            out.append((parse_point(z), P))
        return cls(tail.rank, tail, tuple(out))

    def slice_at(self, z) -> Polyhedron:
        z = parse_point(z)
        for p, P in self.slices:
            if p == z:
                return P
        return Polyhedron.from_generators([(0,) * self.rank], self.tail)

    @property
    def marked_points(self) -> tuple:
        return tuple(z for z, _ in self.slices)

    @property
    def locus_is_affine(self) -> bool:
        return any(P.is_empty for _, P in self.slices)

    def in_locus(self, z) -> bool:
        return not self.slice_at(z).is_empty

    def vertices_at(self, z) -> tuple:
        return self.slice_at(z).vertices


# ---------------------------------------------------------------------------
# downgrading toric data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Downgrade:
    """A downgrade together with the data needed to translate back.

    ``q`` is the quotient map ``N -> Z``, ``s`` a splitting with ``q(s) = 1``,
    ``basis`` the HNF basis of ``N'`` and ``labels[i]`` the divisor key of the
    ``i``-th ray of the original cone.
    """

    pdiv: PDivisorC1
    q: tuple
    s: tuple
    basis: tuple
    labels: tuple

    def coords(self, x: Sequence) -> tuple:
        return _coords(self.basis, x)


def _coords(basis, x):
    sol = solve_rational([list(col) for col in zip(*basis)], x)
    if not sol.feasible:
        raise ValueError(f"{x} is not in the span of the sublattice")
    return sol.point


def _splitting(sigma: Cone, q: Sequence[int]) -> tuple:
    """Lattice ``s`` with ``q(s) = 1``: prefer points of ``sigma``, then small
    ``|s|_1``, then lexicographic order."""
    n = len(q)
    b = max(abs(x) for x in q)
    best = None
    if (2 * b + 1) ** n <= 200_000:
        for s in itertools.product(range(-b, b + 1), repeat=n):
            if dot(q, s) != 1:
                continue
            key = (not sigma.contains(s), sum(map(abs, s)), s)
            if best is None or key < best:
                best = key
    if best is not None:
        return best[2]
    return tuple(solve_integer([list(q)], [1]))


def downgrade_with_map(X: ToricAffine, sublattice: Sequence[Sequence[int]]) -> Downgrade:
    """Re-encode ``X`` as a complexity-one T-variety for the subtorus ``N'``."""
    n = X.rank
    rows = [list(map(int, r)) for r in sublattice]
    if any(len(r) != n for r in rows):
        raise RankMismatch("sublattice generators must match the cone rank")
    qs = kernel_saturated(rows, n) if rows else tuple(
        tuple(int(i == j) for j in range(n)) for i in range(n))
    if len(qs) != 1:
        raise ComplexityNotOne(f"the sublattice has corank {len(qs)}, not 1")
    basis = hnf_rows(rows)
    if basis != saturate(rows, n):
        raise NotSaturated("N/N' has torsion; saturate the sublattice first")
    q = qs[0]
    s = _splitting(X.sigma, q)
    sig = X.sigma
    tail_poly = Polyhedron.from_inequalities(
        n, [(a, 0) for a in sig.ineqs], [(q, 0)] + [(e, 0) for e in sig.equations])
    r = n - 1
    tail = Cone.from_rays([_coords(basis, t) for t in tail_poly.tail.rays], r) \
        if tail_poly.tail.rays else Cone.zero(r)
    slices = {}
    for z, c in ((Fraction(0), 1), (INF, -1)):
        F = Polyhedron.from_inequalities(
            n, [(a, 0) for a in sig.ineqs], [(q, c)] + [(e, 0) for e in sig.equations])
        if F.is_empty:
            slices[z] = Polyhedron.empty(r)
        else:
            verts = [_coords(basis, [x - c * y for x, y in zip(v, s)]) for v in F.vertices]
            slices[z] = Polyhedron.from_generators(verts, tail)
    D = PDivisorC1.build(tail, slices)
    labels = []
    for v in X.rays:
        c = dot(q, v)
        if c == 0:
            labels.append(("h", tail.rays.index(tuple(int(x) for x in _coords(basis, v)))))
        else:
            z, k = (Fraction(0), c) if c > 0 else (INF, -c)
            sign = 1 if c > 0 else -1
            w = [Fraction(x, k) - sign * y for x, y in zip(v, s)]
            labels.append(("v", z, _coords(basis, w)))
    return Downgrade(D, tuple(q), tuple(s), basis, tuple(labels))


def downgrade(X: ToricAffine, sublattice: Sequence[Sequence[int]]) -> PDivisorC1:
    """Slices at 0 and ∞ are the fibres of ``sigma`` over ``q = 1`` and ``q = -1``."""
    return downgrade_with_map(X, sublattice).pdiv


# ---------------------------------------------------------------------------
# evaluation and properness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Evaluation:
    coefficients: tuple  # (point, value) over marked points of the locus
    degree: Fraction


def _check_weight(D: PDivisorC1, m: Sequence) -> tuple:
    m = tuple(frac(x) for x in m)
    if len(m) != D.rank:
        raise RankMismatch("weight length differs from the lattice rank")
    if not D.tail.dual().contains(m):
        raise OutsideWeightCone(f"{m} is not in the dual of the tail cone")
    return m


def evaluate(D: PDivisorC1, m: Sequence) -> Evaluation:
    m = _check_weight(D, m)
    coeffs = tuple((z, frac(support_min(P, m))) for z, P in D.slices if not P.is_empty)
    return Evaluation(coeffs, sum((c for _, c in coeffs), Fraction(0)))


def _relint_sample(C: Cone) -> tuple:
    """Sum of the Hilbert basis of a pointed cone; ray sum otherwise."""
    if C.is_pointed and C.rays:
        try:
            gens = hilbert_basis(C)
        except ValueError:
            gens = C.rays
        return tuple(sum(col) for col in zip(*gens))
    return C.interior_vector()


def is_proper(D: PDivisorC1) -> tuple[bool, str]:
    """Properness with a short reason string."""
    if D.locus_is_affine:
        return True, "affine locus"
    dual = D.tail.dual()
    gens = list(dual.rays) + list(dual.lineality) + [tuple(-x for x in l) for l in dual.lineality]
    for g in gens:
        if evaluate(D, g).degree < 0:
            return False, f"negative degree at {g}"
    u = _relint_sample(dual)
    if evaluate(D, u).degree <= 0:
        return False, f"degree not positive at interior weight {u}"
    return True, "nonnegative on the weight cone, positive in its interior"


# ---------------------------------------------------------------------------
# invariant divisors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerRayData:
    vertical: tuple    # (point, vertex, mu)
    horizontal: tuple  # tail ray indices


def ver_ray_sets(D: PDivisorC1) -> VerRayData:
    ok, why = is_proper(D)
    if not ok:
        raise NotProper(why)
    vertical = tuple((z, v, vertex_multiplicity(v))
                     for z, P in D.slices for v in P.vertices)
    if D.locus_is_affine:
        return VerRayData(vertical, tuple(range(len(D.tail.rays))))
    dual = D.tail.dual()
    horizontal = []
    for i, rho in enumerate(D.tail.rays):
        u = _relint_sample(dual.face(rho))
        if evaluate(D, u).degree > 0:
            horizontal.append(i)
    return VerRayData(vertical, tuple(horizontal))


@dataclass(frozen=True)
class TDivisor:
    """Coefficients of an invariant Q-divisor, keyed as described above."""

    coeffs: tuple  # sorted (key, value)

    @classmethod
    def from_dict(cls, d: Mapping) -> "TDivisor":
        return cls(tuple((k, frac(d[k])) for k in _keysort(d)))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def get(self, key, default=Fraction(0)):
        return self.as_dict().get(key, default)


def _canonical_points(D: PDivisorC1, canonical_points) -> dict:
    K = {}
    for z in canonical_points:
        z = parse_point(z)
        K[z] = K.get(z, 0) - 1
    return K


def _extra_points(D, *maps):
    pts = set(D.marked_points)
    for mp in maps:
        pts.update(mp)
    return sorted((z for z in pts if D.in_locus(z)), key=point_key)


def canonical_rep(D: PDivisorC1, canonical_points=(0, INF)) -> TDivisor:
    """Canonical divisor relative to ``K_{P^1} = -[z0] - [z1]``."""
    data = ver_ray_sets(D)
    K = _canonical_points(D, canonical_points)
    out = {}
    for z in _extra_points(D, K):
        for v in D.vertices_at(z):
            mu = vertex_multiplicity(v)
            out[("v", z, v)] = mu * K.get(z, 0) + mu - 1
    for i in data.horizontal:
        out[("h", i)] = -1
    return TDivisor.from_dict(out)


@dataclass(frozen=True)
class TCartierWitness:
    """``f`` is recorded by its orders at the relevant points.

    Over the full P^1 the orders sum to zero.  Over an affine locus the
    missing order sits at a removed point and the sum is unconstrained.
    """

    m: tuple
    f_divisor: tuple  # sorted (point, order)
    cartier_index: int = 1

    def order(self, z) -> Fraction:
        return dict(self.f_divisor).get(parse_point(z), Fraction(0))


def principal_divisor(D: PDivisorC1, w: TCartierWitness) -> TDivisor:
    """Coefficients of ``div(f chi^m)`` on the invariant prime divisors."""
    f = dict(w.f_divisor)
    if not D.locus_is_affine and sum(f.values(), Fraction(0)) != 0:
        raise ValueError("f must have degree zero")
    data = ver_ray_sets(D)
    out = {}
    for z in _extra_points(D, f):
        for v in D.vertices_at(z):
            mu = vertex_multiplicity(v)
            out[("v", z, v)] = mu * (f.get(z, 0) + dot(w.m, v))
    for i in data.horizontal:
        out[("h", i)] = dot(w.m, D.tail.rays[i])
    return TDivisor.from_dict(out)


@dataclass(frozen=True)
class TGorensteinVerdict:
    witness: Optional[TCartierWitness]
    certificate: Optional[tuple] = None

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def _boundary_dict(B) -> dict:
    if B is None:
        return {}
    if isinstance(B, TDivisor):
        return B.as_dict()
    return {k: frac(v) for k, v in B.items()}


def q_gorenstein_tvar(D: PDivisorC1, B=None, canonical_points=(0, INF)) -> TGorensteinVerdict:
    """Solve ``K_X + B = div(f chi^m)`` for ``m`` and the orders of ``f``.

    The Cartier index is the least ``k`` for which ``k (K_X + B)`` has an
    integral solution.
    """
    data = ver_ray_sets(D)
    b = _boundary_dict(B)
    K = _canonical_points(D, canonical_points)
    pts = _extra_points(D, K, {k[1] for k in b if k[0] == "v"})
    r, npts = D.rank, len(pts)
    A, c = [], []
    for i in data.horizontal:
        A.append(list(D.tail.rays[i]) + [0] * npts)
        c.append(b.get(("h", i), 0) - 1)
    for j, z in enumerate(pts):
        for v in D.vertices_at(z):
            mu = vertex_multiplicity(v)
            A.append([mu * x for x in v] + [mu * int(k == j) for k in range(npts)])
            c.append(mu * K.get(z, 0) + mu - 1 + b.get(("v", z, v), 0))
    if not D.locus_is_affine:
        A.append([0] * r + [1] * npts)
        c.append(0)
    A = [[int(x) for x in row] for row in A]
    found = scaling_index(A, c)
    if found is None:
        return TGorensteinVerdict(None, solve_rational(A, c).certificate)
    k, x = found
    f = tuple((z, x[r + j]) for j, z in enumerate(pts) if x[r + j] != 0)
    return TGorensteinVerdict(TCartierWitness(tuple(x[:r]), f, k))


# ---------------------------------------------------------------------------
# the point-quotient klt pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientKltCertificate:
    m_check: bool
    B_Y: tuple           # sorted (point, coefficient)
    degree: Fraction
    degree_check: bool
    coefficient_check: bool
    chosen_vertices: tuple
    notes: tuple = field(default=(), compare=False)

    @property
    def passed(self) -> bool:
        return self.m_check and self.degree_check and self.coefficient_check


def quotient_klt_certificate(D: PDivisorC1, B, w: TCartierWitness, canonical_points=(0, INF),
                             validate: bool = True) -> QuotientKltCertificate:
    """Boundary ``B_Y`` on P^1 induced by a klt pair on ``X(D)``.

    For each point the vertex minimising ``<-m, v>`` is used, ties going to
    the lexicographically least vertex (recorded in ``notes``).  With
    ``validate`` the pair is first checked to be a klt datum: boundary
    coefficients in ``[0, 1)`` and ``K_X + B = div(f chi^m)`` exactly.
    """
    if D.locus_is_affine:
        raise QuotientNotAPoint("the locus is affine, so the quotient is not a point")
    b = _boundary_dict(B)
    K = _canonical_points(D, canonical_points)
    if validate:
        if any(not 0 <= x < 1 for x in b.values()):
            raise NonKltBoundary("boundary coefficients must lie in [0, 1)")
        lhs = principal_divisor(D, w).as_dict()
        rhs = canonical_rep(D, canonical_points).as_dict()
        for key in set(lhs) | set(rhs) | set(b):
            if lhs.get(key, 0) != rhs.get(key, 0) + b.get(key, 0):
                raise NonKltBoundary(f"witness does not match K + B at {key}")
    neg = tuple(-x for x in w.m)
    m_check = all(dot(neg, r) > 0 for r in D.tail.rays)
    f = dict(w.f_divisor)
    notes, BY, chosen = [], [], []
    for z in _extra_points(D, K, f):
        verts = D.vertices_at(z)
        best = min(dot(neg, v) for v in verts)
        ties = sorted(v for v in verts if dot(neg, v) == best)
        if len(ties) > 1:
            notes.append(f"vertex tie at {_fmt_point(z)}; used {[str(x) for x in ties[0]]}")
        v = ties[0]
        mu = vertex_multiplicity(v)
        E = mu * (f.get(z, 0) + dot(w.m, v)) - (mu * K.get(z, 0) + mu - 1)
        BY.append((z, Fraction(mu - 1, mu) + frac(E) / mu))
        chosen.append((z, v))
    degree = sum((c for _, c in BY), Fraction(0))
    return QuotientKltCertificate(m_check, tuple(BY), degree, degree < 2,
                                  all(c < 1 for _, c in BY), tuple(chosen), tuple(notes))


def _fmt_point(z) -> str:
    return "inf" if z == INF else str(z)


def graded_dimension(D: PDivisorC1, m: Sequence[int]) -> int:
    """``dim H^0(P^1, O(floor D(m)))``."""
    if D.locus_is_affine:
        raise AffineLocus("graded pieces over an affine curve are infinite dimensional")
    ev = evaluate(D, m)
    deg = sum(math.floor(c) for _, c in ev.coefficients)
    return max(0, deg + 1)


def toric_boundary_to_tdivisor(dg: Downgrade, boundary: Sequence) -> TDivisor:
    """Transport per-ray toric boundary coefficients to divisor keys."""
    return TDivisor.from_dict({lab: frac(b) for lab, b in zip(dg.labels, boundary) if b})

