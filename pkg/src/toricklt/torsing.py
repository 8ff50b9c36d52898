"""Affine toric singularities: canonical class, boundaries, discrepancies.

Conventions: ``X`` is given by a pointed cone ``sigma`` in ``N_Q``.  Rays are
indexed by their position in ``sigma.rays`` (canonical lexicographic order).
For a boundary ``B = sum b_i D_i`` a Q-Cartier witness is a rational ``m`` in
``M_Q`` with ``<m, v_i> = b_i - 1`` for every ray, so that
``K_X + B = div(chi^m)``, and the log discrepancy of the divisor of a
primitive ``v`` in ``sigma`` is ``-<m, v>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import NonPrimitiveVector, NotPointed, OutsideCone, OutsideSupport
from .exactlin import (LpProblem, dot, frac, is_primitive, lcm_denominators, linprog_exact,
                       lp_feasible_strict, scaling_index, solve_rational)
from .polycone import Cone, hilbert_basis


@dataclass(frozen=True)
class ToricAffine:
    sigma: Cone

    def __post_init__(self):
        if not self.sigma.is_pointed:
            raise NotPointed("split off torus factors before building a toric variety")

    @classmethod
    def from_rays(cls, rays: Iterable[Sequence[int]], rank: Optional[int] = None) -> "ToricAffine":
        return cls(Cone.from_rays(rays, rank))

    @property
    def rank(self) -> int:
        return self.sigma.rank

    @property
    def rays(self) -> tuple:
        return self.sigma.rays

    def ray_index(self, v: Sequence[int]) -> int:
        return self.rays.index(tuple(v))


Boundary = Mapping[int, Fraction]


def boundary_vector(X: ToricAffine, B: Optional[Boundary | Sequence]) -> tuple:
    """Coefficient per ray; rays missing from a mapping get coefficient 0."""
    n = len(X.rays)
    if B is None:
        return (Fraction(0),) * n
    if isinstance(B, Mapping):
        out = [Fraction(0)] * n
        for i, b in B.items():
            out[i] = frac(b)
        return tuple(out)
    if len(B) != n:
        raise ValueError("boundary vector length differs from the number of rays")
    return tuple(map(frac, B))


@dataclass(frozen=True)
class CartierWitness:
    m: tuple
    cartier_index: int


@dataclass(frozen=True)
class QGorensteinVerdict:
    """Either a witness, or a row combination of the ray equations proving
    that no ``m`` exists (``lam @ rays == 0`` while ``lam @ (b - 1) != 0``)."""

    witness: Optional[CartierWitness]
    certificate: Optional[tuple] = None

    @property
    def feasible(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class KltCertificate:
    boundary: tuple
    witness: CartierWitness
    ray_log_discrepancies: tuple
    notes: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class ToricPair:
    toric: ToricAffine
    boundary: tuple
    witness: Optional[CartierWitness] = None

    @property
    def is_klt(self) -> bool:
        if self.witness is None or any(not 0 <= b < 1 for b in self.boundary):
            return False
        return all(dot(self.witness.m, v) < 0 for v in self.toric.rays)


def canonical_class(X: ToricAffine) -> tuple:
    """``K_X = -sum D_rho``, as one coefficient per ray."""
    return tuple(-1 for _ in X.rays)


def q_gorenstein_witness(X: ToricAffine, B: Optional[Boundary | Sequence] = None
                         ) -> QGorensteinVerdict:
    """Decide whether ``K_X + B`` is Q-Cartier.

    The returned ``m`` has denominators dividing the Cartier index, i.e. the
    least ``k`` such that ``k (K_X + B)`` is Cartier.
    """
    b = boundary_vector(X, B)
    rhs = [x - 1 for x in b]
    found = scaling_index(X.rays, rhs)
    if found is None:
        return QGorensteinVerdict(None, solve_rational(X.rays, rhs).certificate)
    k, m = found
    return QGorensteinVerdict(CartierWitness(m, k))


def klt_lp_problem(X: ToricAffine, support: Optional[Iterable[int]] = None) -> LpProblem:
    """Linear system in ``m`` whose solutions are klt witnesses.

    On ``support`` rays ``-1 <= <m, v> < 0``; elsewhere ``<m, v> = -1``.
    """
    idx = range(len(X.rays)) if support is None else sorted(set(support))
    eqs, weak, strict = [], [], []
    for i, v in enumerate(X.rays):
        if i in idx:
            weak.append((v, -1))
            strict.append((tuple(-x for x in v), 0))
        else:
            eqs.append((v, -1))
    return LpProblem(X.rank, tuple(eqs), tuple(weak), tuple(strict))


def klt_type_certificate(X: ToricAffine, support: Optional[Iterable[int]] = None
                         ) -> Optional[KltCertificate]:
    """Find a boundary ``B`` with ``(X, B)`` klt, supported on ``support``.

    Among all klt boundaries the total coefficient ``sum b_rho`` is minimised
    when that minimum is attained; otherwise a strictly feasible boundary is
    returned with a note.  Returns None when no boundary on ``support`` works.
    """
    P = klt_lp_problem(X, support)
    m = lp_feasible_strict(P)
    if m is None:
        return None
    notes = []
    total = tuple(sum(col) for col in zip(*X.rays))
    closure = LpProblem(P.nvars, P.equalities,
                        P.weak + tuple((a, c) for a, c in P.strict))
    res = linprog_exact(P.nvars, total, closure.equalities, closure.weak, maximize=False)
    if res.status == "optimal":
        best = lp_feasible_strict(LpProblem(P.nvars, P.equalities + ((total, res.value),),
                                            P.weak, P.strict))
        if best is not None:
            m = best
        else:
            notes.append("minimal total boundary is not attained; returned a strictly "
                         "feasible boundary instead")
    boundary = tuple(1 + dot(m, v) for v in X.rays)
    verdict = q_gorenstein_witness(X, boundary)
    w = verdict.witness
    if w is None:
        raise AssertionError("klt witness failed the Q-Cartier check")
    cert = KltCertificate(boundary, w, tuple(-dot(w.m, v) for v in X.rays), tuple(notes))
    _check_certificate(X, cert)
    return cert


def _check_certificate(X: ToricAffine, cert: KltCertificate) -> None:
    for v, b, a in zip(X.rays, cert.boundary, cert.ray_log_discrepancies):
        if not (0 <= b < 1 and a == 1 - b and -1 <= dot(cert.witness.m, v) < 0):
            raise AssertionError("klt certificate failed verification")


def log_discrepancy(X: ToricAffine, B: Optional[Boundary | Sequence], w: CartierWitness,
                    v: Sequence[int]) -> Fraction:
    """Log discrepancy of ``(X, B)`` at the toric divisor of primitive ``v``."""
    v = tuple(int(x) for x in v)
    if not X.sigma.contains(v) or not any(v):
        raise OutsideCone(f"{v} is not a nonzero vector of the cone")
    if not is_primitive(v):
        raise NonPrimitiveVector(f"{v} is not primitive")
    b = boundary_vector(X, B)
    if any(dot(w.m, r) != bi - 1 for r, bi in zip(X.rays, b)):
        raise ValueError("witness does not match the boundary")
    return -frac(dot(w.m, v))


# ---------------------------------------------------------------------------
# fans, star subdivisions, resolutions
# ---------------------------------------------------------------------------

def star_subdivide(fan: Sequence[Cone], v: Sequence[int]) -> list[Cone]:
    """Star subdivision of ``fan`` (a list of maximal cones) at ``v``.

    A cone containing ``v`` is replaced by the joins of ``v`` with its facets
    not containing ``v``.  At an existing ray of a simplicial cone this is
    the identity; at a ray of a non-simplicial cone it triangulates.
    """
    v = tuple(int(x) for x in v)
    if not any(C.contains(v) for C in fan):
        raise OutsideSupport(f"{v} is outside the support of the fan")
    out = set()
    for C in fan:
        if not C.contains(v):
            out.add(C)
            continue
        for a, F in zip(C.ineqs, C.facet_rays()):
            if dot(a, v) > 0:
                out.add(Cone.from_rays(list(F) + [v], C.rank))
    return sorted(out, key=lambda C: C.rays)


@dataclass(frozen=True)
class Resolution:
    fan: tuple
    exceptional: tuple


def _next_center(C: Cone) -> tuple:
    hb = [h for h in hilbert_basis(C) if h not in C.rays]
    if hb:
        return min(hb, key=lambda h: (sum(h), h))
    return C.rays[0]


def resolve(X: ToricAffine, first: Iterable[Sequence[int]] = ()) -> Resolution:
    """Toric resolution by iterated star subdivisions.

    After subdividing at the vectors in ``first``, repeatedly take the
    lexicographically least non-smooth cone and subdivide at its Hilbert basis
    element (other than its rays) of least coordinate sum, ties broken
    lexicographically.  Non-simplicial cones whose Hilbert basis consists of
    rays only are triangulated at their least ray.
    """
    fan = [X.sigma]
    exceptional = []
    for v in first:
        v = tuple(v)
        fan = star_subdivide(fan, v)
        if v not in X.rays and v not in exceptional:
            exceptional.append(v)
    while True:
        bad = [C for C in fan if not C.is_smooth]
        if not bad:
            break
        C = min(bad, key=lambda C: C.rays)
        v = _next_center(C)
        fan = star_subdivide(fan, v)
        if v not in X.rays and v not in exceptional:
            exceptional.append(v)
    return Resolution(tuple(fan), tuple(exceptional))
