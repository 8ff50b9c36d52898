"""Quotients of affine space by diagonalizable groups.

A diagonalizable group (torus times finite abelian group) acts on ``A^n`` by
characters; the invariant ring is the semigroup ring of

    S = {e in Z^n_{>=0} : W e = 0, u_j . e = 0 mod d_j}

and the quotient is the affine toric variety of ``S``.  Finite abelian
quotients of toric pairs are handled as lattice refinements ``N ⊆ N'``.

Example:
    >>> A = WeightAction(4, ((2, -1, -1, 1),))
    >>> len(invariant_monoid(A))
    5
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotAProperRefinement, PointQuotient, RankMismatch, UnknownGenerator
from .exactlin import (_row_lattice_coords, determinant, dot, frac, hnf_rows, inverse,
                       is_primitive, kernel_saturated, lcm_denominators, primitive,
                       transpose, vecmat)
from .polycone import Cone, hilbert_basis, saturate
from .torsing import ToricAffine, ToricPair, q_gorenstein_witness


@dataclass(frozen=True)
class WeightAction:
    """Diagonal action of ``G_m^k x prod mu_{d_j}`` on ``A^n``.

    Args:
        n: ambient dimension.
        torus_weights: one weight row per one-dimensional torus factor.
        finite_factors: pairs ``(d, weights)`` for cyclic factors of order d.
    """

    n: int
    torus_weights: tuple = ()
    finite_factors: tuple = ()

    def __post_init__(self):
        tw = tuple(tuple(int(x) for x in row) for row in self.torus_weights)
        ff = []
        for d, w in self.finite_factors:
            d = int(d)
            if d < 2:
                raise ValueError("finite factor orders must be at least 2")
            ff.append((d, tuple(int(x) % d for x in w)))
        if any(len(r) != self.n for r in tw) or any(len(w) != self.n for _, w in ff):
            raise RankMismatch("weight vectors must have length n")
        object.__setattr__(self, "torus_weights", tw)
        object.__setattr__(self, "finite_factors", tuple(ff))


def invariant_lattice(A: WeightAction) -> tuple:
    """HNF basis (rows) of the lattice of invariant characters in ``Z^n``."""
    n, f = A.n, len(A.finite_factors)
    rows = [list(w) + [0] * f for w in A.torus_weights]
    for j, (d, u) in enumerate(A.finite_factors):
        rows.append(list(u) + [d if k == j else 0 for k in range(f)])
    if not rows:
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    K = kernel_saturated(rows, n + f)
    return hnf_rows([row[:n] for row in K]) if K else ()


def _monoid_in_coords(A: WeightAction):
    L = invariant_lattice(A)
    if not L:
        return L, ()
    C = Cone.from_inequalities(transpose(L), len(L))
    return L, hilbert_basis(C)


def invariant_monoid(A: WeightAction) -> list[tuple]:
    """Minimal generators of the invariant monoid, in descending lex order.

    An empty list means only constants are invariant.
    """
    L, hb = _monoid_in_coords(A)
    return sorted((tuple(vecmat(y, L)) for y in hb), reverse=True)


@dataclass(frozen=True)
class QuotientPresentation:
    invariant_generators: tuple
    character_basis: tuple      # basis of M' (exponent vectors), HNF
    generator_coords: tuple     # generators in that basis
    quotient: ToricAffine
    coordinate_divisor_map: tuple  # per coordinate: (ray index, multiplicity) or None

    def generator_name(self, i: int) -> str:
        return f"f{i + 1}"


def quotient_presentation(A: WeightAction) -> QuotientPresentation:
    """Present ``A^n // G`` as an affine toric variety.

    The character lattice is ``M' = L ∩ span(S)`` with ``L`` the invariant
    lattice; its basis comes from a Hermite normal form so the output is
    deterministic but basis dependent.
    """
    L, hb = _monoid_in_coords(A)
    if not hb:
        raise PointQuotient("the invariant ring is trivial; the quotient is a point")
    K = saturate(hb, len(L))
    basis = tuple(tuple(vecmat(row, L)) for row in K)
    gens = sorted((tuple(vecmat(y, L)) for y in hb), reverse=True)
    H = hnf_rows(basis)
    coords = tuple(_row_lattice_coords(H, g) for g in gens)
    r = len(H)
    sigma_dual = Cone.from_rays(coords, r)
    X = ToricAffine(sigma_dual.dual())
    dmap = []
    for i in range(A.n):
        col = tuple(row[i] for row in H)
        if not any(col):
            dmap.append(None)
            continue
        p = primitive(col)
        k = math.gcd(*col)
        dmap.append((X.rays.index(p), k) if p in X.rays else None)
    return QuotientPresentation(tuple(gens), H, coords, X, tuple(dmap))


_TOKEN = re.compile(r"^f(\d+)(?:\^(\d+))?$")


def _monomial(P: QuotientPresentation, mono) -> tuple:
    """Exponent vector of a product of generators given by names."""
    names = mono.split("*") if isinstance(mono, str) else list(mono)
    total = [0] * len(P.invariant_generators[0])
    for name in names:
        m = _TOKEN.match(name.strip())
        if not m or not 1 <= int(m.group(1)) <= len(P.invariant_generators):
            raise UnknownGenerator(f"unknown generator {name!r}")
        g = P.invariant_generators[int(m.group(1)) - 1]
        e = int(m.group(2) or 1)
        total = [t + e * x for t, x in zip(total, g)]
    return tuple(total)


def verify_binomial_relations(P: QuotientPresentation, relations) -> list[bool]:
    """Check each ``(lhs, rhs)`` pair of monomials like ``"f1*f3"``, ``"f2^2"``."""
    return [_monomial(P, a) == _monomial(P, b) for a, b in relations]


# ---------------------------------------------------------------------------
# finite abelian quotients of toric pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeRefinement:
    """``N = Z^n`` inside ``N' = Z^n + sum Z g`` for rational vectors ``g``.

    ``sigma`` is given in the coordinates of ``N``.
    """

    sigma: Cone
    extra: tuple

    def __post_init__(self):
        object.__setattr__(self, "extra", tuple(tuple(frac(x) for x in g) for g in self.extra))
        if any(len(g) != self.sigma.rank for g in self.extra):
            raise RankMismatch("refinement vectors must match the cone rank")
        if self.index == 1:
            raise NotAProperRefinement("the refinement has index 1")

    @property
    def rank(self) -> int:
        return self.sigma.rank

    @property
    def _scaled(self):
        D = lcm_denominators([x for g in self.extra for x in g]) if self.extra else 1
        gens = [[D * int(i == j) for j in range(self.rank)] for i in range(self.rank)]
        gens += [[int(D * x) for x in g] for g in self.extra]
        return D, hnf_rows(gens)

    @property
    def sup_basis(self) -> tuple:
        """Basis of ``N'`` (rows, ambient rational coordinates)."""
        D, H = self._scaled
        return tuple(tuple(Fraction(x, D) for x in row) for row in H)

    @property
    def index(self) -> int:
        D, H = self._scaled
        return D ** self.rank // abs(determinant(H))

    def to_sup(self, v: Sequence) -> tuple:
        """Ambient coordinates to ``N'`` coordinates."""
        return tuple(vecmat(v, inverse(self.sup_basis)))

    def to_ambient(self, c: Sequence) -> tuple:
        return tuple(vecmat(c, self.sup_basis))

    def ramification(self, w: Sequence[int]) -> int:
        """Least ``k > 0`` with ``k w`` in ``N`` for ``w`` in ``N'`` coordinates."""
        amb = self.to_ambient(w)
        return lcm_denominators(amb)

    def downstairs_toric(self) -> ToricAffine:
        return ToricAffine.from_rays([self.to_sup(v) for v in self.sigma.rays], self.rank)


def finite_quotient(R: LatticeRefinement, upstairs: ToricPair) -> tuple[ToricPair, bool]:
    """Push a toric pair down along ``N ⊆ N'``.

    A ray with ramification ``r`` gets ``b' = 1 + (b - 1) / r``, which is the
    boundary for which the upstairs witness ``m`` still works.  The
    downstairs witness is recomputed from ``b'`` over ``N'`` and the second
    return value tells whether the downstairs pair is klt.
    """
    if upstairs.toric.sigma != R.sigma:
        raise ValueError("pair and refinement use different cones")
    Xd = R.downstairs_toric()
    b_up = dict(zip(R.sigma.rays, upstairs.boundary))
    bd = []
    for u in Xd.rays:
        v = primitive(R.to_ambient(u))
        r = R.ramification(u)
        bd.append(1 + (frac(b_up[tuple(v)]) - 1) / r)
    bd = tuple(bd)
    verdict = q_gorenstein_witness(Xd, bd)
    pair = ToricPair(Xd, bd, verdict.witness)
    if upstairs.witness is not None and verdict.witness is not None:
        image = tuple(vecmat(upstairs.witness.m, transpose(R.sup_basis)))
        if image != verdict.witness.m:
            raise AssertionError("downstairs witness differs from the upstairs one")
    return pair, pair.is_klt and upstairs.is_klt


@dataclass(frozen=True)
class RamificationCheck:
    w: tuple
    r: int
    a_down: Fraction
    a_up: Fraction

    @property
    def ok(self) -> bool:
        return self.a_down * self.r == self.a_up


def riemann_hurwitz_check(R: LatticeRefinement, upstairs: ToricPair,
                          samples: Sequence[Sequence[int]]) -> list[RamificationCheck]:
    """Compare ``A_down(w) * r_w`` with ``A_up(r_w w)`` for samples in ``N'``.

    Samples are primitive vectors of the cone written in ``N'`` coordinates.
    """
    down, _ = finite_quotient(R, upstairs)
    if upstairs.witness is None or down.witness is None:
        raise ValueError("both pairs need Q-Cartier witnesses")
    out = []
    for w in samples:
        w = tuple(int(x) for x in w)
        if not is_primitive(w) or not down.toric.sigma.contains(w):
            raise ValueError(f"sample {w} is not a primitive vector of the cone")
        r = R.ramification(w)
        up_vec = [r * x for x in R.to_ambient(w)]
        out.append(RamificationCheck(w, r, -frac(dot(down.witness.m, w)),
                                     -frac(dot(upstairs.witness.m, up_vec))))
    return out

