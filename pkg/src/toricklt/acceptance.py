"""Acceptance corpus: the worked example cone plus seeded property suites.

Each ``criterion_*`` function returns ``(name, passed, detail)``.  Random
corpora are drawn from ``random.Random(seed)`` so runs are reproducible.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Callable

from . import cli, diagquot, pdiv, torsing
from .errors import AffineLocus, OutsideWeightCone, PointQuotient
from .exactlin import (dot, determinant, hermite_normal_form, identity, inverse,
                       kernel_saturated, matmul, matvec, primitive, solve_rational, vecmat)
from .polycone import Cone, hilbert_basis, unimodular_equivalence

EXAMPLE_WEIGHTS = (2, -1, -1, 1)
EXAMPLE_INVARIANTS = [(1, 2, 0, 0), (1, 1, 1, 0), (1, 0, 2, 0), (0, 1, 0, 1), (0, 0, 1, 1)]
EXAMPLE_RAYS = ((0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1))


# ---------------------------------------------------------------------------
# random corpora
# ---------------------------------------------------------------------------

def random_pointed_cone(rng: random.Random, n: int, max_entry: int = 3,
                        extra_rays: int = 1) -> Cone:
    """Full-dimensional pointed cone with ``n`` to ``n + extra_rays`` generators."""
    while True:
        k = rng.randint(n, n + extra_rays)
        gens = []
        while len(gens) < k:
            v = [rng.randint(-max_entry, max_entry) for _ in range(n)]
            if any(v):
                gens.append(v)
        C = Cone.from_rays(gens, n)
        if C.is_pointed and C.is_full_dimensional:
            return C


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> tuple:
    U = [list(r) for r in identity(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        kind = rng.random()
        if n > 1 and kind < 0.6:
            c = rng.choice([-2, -1, 1, 2])
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        elif n > 1 and kind < 0.8:
            U[i], U[j] = U[j], U[i]
        else:
            U[i] = [-a for a in U[i]]
    return tuple(tuple(r) for r in U)


def random_klt_pair(rng: random.Random, X: torsing.ToricAffine) -> torsing.ToricPair:
    """Random boundary from an interior weight ``u`` of the dual cone."""
    dual = X.sigma.dual()
    u = [0] * X.rank
    for r in dual.rays:
        c = rng.randint(1, 3)
        u = [a + c * b for a, b in zip(u, r)]
    top = max(dot(u, v) for v in X.rays)
    scale = Fraction(rng.randint(1, 3), 3)
    m = [Fraction(-x, top) * scale for x in u]
    b = tuple(1 + dot(m, v) for v in X.rays)
    w = torsing.q_gorenstein_witness(X, b).witness
    return torsing.ToricPair(X, b, w)


def random_action(rng: random.Random) -> diagquot.WeightAction:
    n = rng.randint(1, 6)
    k = rng.randint(0, 2)
    W = tuple(tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(k))
    fin = ()
    if rng.random() < 0.5:
        d = rng.randint(2, 4)
        fin = ((d, tuple(rng.randint(0, d - 1) for _ in range(n))),)
    return diagquot.WeightAction(n, W, fin)


# ---------------------------------------------------------------------------
# the worked example
# ---------------------------------------------------------------------------

def example_presentation():
    return diagquot.quotient_presentation(diagquot.WeightAction(4, (EXAMPLE_WEIGHTS,)))


def example_d1_index(P) -> int:
    """Ray of the quotient cone carrying the image of ``{x1 = 0}``."""
    entry = P.coordinate_divisor_map[0]
    i, _ = entry
    gens_pos = {j for j, g in enumerate(P.invariant_generators) if g[0] > 0}
    v = P.quotient.rays[i]
    pos = {j for j, c in enumerate(P.generator_coords) if dot(c, v) > 0}
    if pos != gens_pos:
        raise AssertionError("D1 valuation is not positive exactly on x1-divisible invariants")
    return i


def criterion_1(seed=0):
    A = diagquot.WeightAction(4, (EXAMPLE_WEIGHTS,))
    got = diagquot.invariant_monoid(A)
    want = sorted(EXAMPLE_INVARIANTS, reverse=True)
    return "1 example invariants", got == want, f"{len(got)} generators: {got}"


def criterion_2(seed=0):
    P = example_presentation()
    U = unimodular_equivalence(P.quotient.sigma, Cone.from_rays(EXAMPLE_RAYS), bound=3)
    ok = len(P.quotient.rays) == 4 and U is not None
    return "2 example cone", ok, f"rays={P.quotient.rays}, U={U}"


def criterion_3(seed=0):
    out = []
    for X in (example_presentation().quotient, torsing.ToricAffine.from_rays(EXAMPLE_RAYS)):
        v = torsing.q_gorenstein_witness(X)
        lam = v.certificate
        ok = (not v.feasible and lam is not None
              and all(x == 0 for x in vecmat(lam, X.rays))
              and dot(lam, [-1] * len(X.rays)) != 0)
        out.append(ok)
    return "3 example not Q-Gorenstein", all(out), f"certificate {lam}"


def criterion_4(seed=0):
    P = example_presentation()
    i = example_d1_index(P)
    cert = torsing.klt_type_certificate(P.quotient, [i])
    want = tuple(Fraction(1, 2) if j == i else 0 for j in range(4))
    # uniqueness: the three off-support equations already determine m
    others = [v for j, v in enumerate(P.quotient.rays) if j != i]
    unique = len(solve_rational(others, [-1, -1, -1]).kernel) == 0
    ok = cert is not None and cert.boundary == want and unique
    return "4 example boundary 1/2 D1", ok, f"boundary={cert.boundary if cert else None}"


def brute_force_witnesses(rays, b, max_den=4, box=2):
    """All ``m`` with entries ``p/d`` (``d <= max_den``, ``|m_i| <= box``) solving
    ``<m, v> = b_v - 1``."""
    vals = sorted({Fraction(p, d) for d in range(1, max_den + 1)
                   for p in range(-box * d, box * d + 1)})
    n = len(rays[0])
    sols = []
    for m in itertools.product(vals, repeat=n):
        if all(dot(m, v) == bi - 1 for v, bi in zip(rays, b)):
            sols.append(m)
    return sols


def pullback_log_discrepancy(rays, b, m, e):
    """Log discrepancy of the exceptional ray ``e`` after star subdivision.

    On the subdivided fan ``K_Y = -sum D`` and ``pi^*(K_X + B) = div(chi^m)``,
    so the coefficient of ``K_Y - pi^*(K_X + B)`` along a ray ``r`` is
    ``-1 - <m, r>``.  Strict transforms must come out as ``-b``.
    """
    fan = torsing.star_subdivide([Cone.from_rays(rays)], e)
    fan_rays = sorted({r for C in fan for r in C.rays})
    if sorted(list(rays) + [tuple(e)]) != fan_rays:
        raise AssertionError("unexpected rays after subdivision")
    coeff = {r: -1 - dot(m, r) for r in fan_rays}
    if any(coeff[r] != -bi for r, bi in zip(rays, b)):
        raise AssertionError("strict transform coefficient mismatch")
    return 1 + coeff[tuple(e)]


def criterion_5(seed=0):
    X = torsing.ToricAffine.from_rays(EXAMPLE_RAYS)
    d1 = X.ray_index((0, 0, 1))
    b = tuple(Fraction(1, 2) if i == d1 else 0 for i in range(4))
    v = torsing.q_gorenstein_witness(X, b)
    a = torsing.log_discrepancy(X, b, v.witness, (1, 1, 2))
    # brute force over every placement of the coefficient 1/2
    feasible = {}
    for i in range(4):
        bi = tuple(Fraction(1, 2) if j == i else 0 for j in range(4))
        feasible[i] = brute_force_witnesses(X.rays, bi)
    sols = feasible[d1]
    placements = [i for i, s in feasible.items() if s]
    oracle_index = math.lcm(*(x.denominator for x in sols[0])) if len(sols) == 1 else None
    oracle_a = pullback_log_discrepancy(X.rays, b, sols[0], (1, 1, 2)) if sols else None
    # (1,1,2) = (0,0,1) + (1,1,1): linear combination of ray discrepancies
    combo = (1 - b[d1]) + (1 - b[X.ray_index((1, 1, 1))])
    job = cli.parse_input("toric-discrepancy", {"rays": [list(r) for r in EXAMPLE_RAYS],
                                                "boundary": ["1/2", 0, 0, 0],
                                                "vectors": [[1, 1, 2]]})
    doc = cli.run(job)
    has_note = (any("Cartier index is 2" in n for n in doc.notes)
                and any("exact value is 3/2" in n for n in doc.notes))
    ok = (placements == [d1] and v.witness.cartier_index == 2 == oracle_index
          and a == Fraction(3, 2) == oracle_a == combo and has_note)
    return ("5 example index 2 and discrepancy 3/2", ok,
            f"index={v.witness.cartier_index} oracle={oracle_index} A={a} pullback={oracle_a} "
            f"feasible placements={placements} notes={len(doc.notes)}")


def criterion_6(seed=0):
    fan = torsing.star_subdivide([Cone.from_rays(EXAMPLE_RAYS)], (1, 1, 2))
    dets = [abs(determinant(C.rays)) if len(C.rays) == 3 else None for C in fan]
    ok = len(fan) == 4 and all(d == 1 for d in dets)
    return "6 example resolution", ok, f"{len(fan)} cones, |det|={dets}"


# ---------------------------------------------------------------------------
# property suites
# ---------------------------------------------------------------------------

def criterion_7(seed=0, count=200):
    rng = random.Random(seed)
    failures, points = [], 0
    for t in range(count):
        A = random_action(rng)
        try:
            P = diagquot.quotient_presentation(A)
        except PointQuotient:
            points += 1
            continue
        except Exception as e:  # noqa: BLE001 - any error is a failure here
            failures.append((t, repr(e)))
            continue
        cert = torsing.klt_type_certificate(P.quotient)
        if cert is None:
            failures.append((t, "no klt boundary"))
            continue
        X = P.quotient
        if (any(-dot(cert.witness.m, v) <= 0 for v in X.rays)
                or -dot(cert.witness.m, X.sigma.interior_vector()) <= 0):
            failures.append((t, "non-positive discrepancy"))
    return ("7 diagonalizable quotients are of klt type", not failures,
            f"{count} actions, {points} point quotients, failures={failures[:3]}")


def _sample_vectors(rng, C, k):
    """``k`` distinct primitive lattice vectors of ``C`` from random ray combinations."""
    out = set()
    hi = 3
    while len(out) < k:
        for _ in range(4 * k):
            v = [0] * C.rank
            for r in C.rays:
                c = rng.randint(0, hi)
                v = [a + c * x for a, x in zip(v, r)]
            if any(v):
                out.add(tuple(primitive(v)))
            if len(out) == k:
                break
        hi *= 2
    return sorted(out)


def criterion_8(seed=0, count=50, samples=20):
    rng = random.Random(seed + 8)
    bad = []
    checked = 0
    for t in range(count):
        n = rng.choice((2, 2, 3))
        X = torsing.ToricAffine(random_pointed_cone(rng, n, 2))
        up = random_klt_pair(rng, X)
        while True:
            d = rng.randint(2, 8)
            g = [rng.randint(0, d - 1) for _ in range(n)]
            if math.gcd(d, *g) == 1:
                break
        R = diagquot.LatticeRefinement(X.sigma, (tuple(Fraction(x, d) for x in g),))
        down, klt = diagquot.finite_quotient(R, up)
        if not klt or R.index > 8:
            bad.append((t, "downstairs not klt" if not klt else "index"))
            continue
        ws = set(_sample_vectors(rng, down.toric.sigma, samples))
        for c in diagquot.riemann_hurwitz_check(R, up, sorted(ws)):
            checked += 1
            if not c.ok:
                bad.append((t, c))
    # the classical A^2 / +-1 instance
    X = torsing.ToricAffine(Cone.orthant(2))
    up = torsing.ToricPair(X, (0, 0), torsing.q_gorenstein_witness(X).witness)
    R = diagquot.LatticeRefinement(X.sigma, ((Fraction(1, 2), Fraction(1, 2)),))
    w = tuple(int(x) for x in R.to_sup((Fraction(1, 2), Fraction(1, 2))))
    c = diagquot.riemann_hurwitz_check(R, up, [w])[0]
    classic = (c.a_up, c.r, c.a_down) == (2, 2, 1)
    return ("8 Riemann-Hurwitz", not bad and classic,
            f"{checked} checks, A2/+-1 gives {(c.a_up, c.r, c.a_down)}, failures={bad[:3]}")


def fiber_count(C: Cone, dg: pdiv.Downgrade, m, window: int = 40):
    """Lattice points of the dual cone restricting to ``m`` on ``N'``.

    Enumerates ``u`` with ``u|N' = m`` and ``<u, s> = c`` for ``|c| <= window``;
    returns None if the window edge is reached (unbounded fibre).
    """
    T = [list(b) for b in dg.basis] + [list(dg.s)]
    Tinv = inverse(T)
    base = matvec(Tinv, list(m) + [0])
    step = [row[-1] for row in Tinv]
    # pairings with the rays of the cone are affine in c
    lines = [(dot(base, v), dot(step, v)) for v in C.rays]
    count = 0
    for c in range(-window, window + 1):
        if all(a + c * b >= 0 for a, b in lines):
            if abs(c) == window:
                return None
            count += 1
    return count


def random_downgrade_instance(rng):
    n = rng.choice((2, 3))
    X = torsing.ToricAffine(random_pointed_cone(rng, n, 2))
    while True:
        q = [rng.randint(-2, 2) for _ in range(n)]
        if any(q) and math.gcd(*q) == 1:
            break
    return X, [list(r) for r in kernel_saturated([q], n)]


def criterion_9(seed=0, count=50, bound=6):
    rng = random.Random(seed + 9)
    mism = []
    counted = 0
    for t in range(count):
        X, sub = random_downgrade_instance(rng)
        dg = pdiv.downgrade_with_map(X, sub)
        D = dg.pdiv
        for m in itertools.product(range(-bound, bound + 1), repeat=D.rank):
            oracle = fiber_count(X.sigma, dg, m)
            try:
                got = pdiv.graded_dimension(D, m)
            except OutsideWeightCone:
                got = 0
            except AffineLocus:
                got = None
            counted += 1
            if got != oracle and not (got is None and (oracle is None or oracle == 0)):
                mism.append((t, m, got, oracle))
        v1 = torsing.q_gorenstein_witness(X)
        v2 = pdiv.q_gorenstein_tvar(D)
        i1 = v1.witness.cartier_index if v1.feasible else None
        i2 = v2.witness.cartier_index if v2.feasible else None
        if i1 != i2:
            mism.append((t, "cartier", i1, i2))
        horiz = {lab[1] for lab in dg.labels if lab[0] == "h"}
        if horiz != set(pdiv.ver_ray_sets(D).horizontal):
            mism.append((t, "horizontal set"))
    return ("9 downgrade round trip", not mism,
            f"{count} cones, {counted} weights, mismatches={mism[:3]}")


def negative_control():
    tail = Cone.from_rays([(1,)])
    D = pdiv.PDivisorC1.build(tail, {0: [(Fraction(1, 3),)], "inf": [(0,)]})
    w = pdiv.TCartierWitness((Fraction(-1),), ((Fraction(0), Fraction(1)), (pdiv.INF, Fraction(-1))))
    return pdiv.quotient_klt_certificate(D, None, w, validate=False)


def criterion_10(seed=0, count=50):
    rng = random.Random(seed + 9)
    fails, passed = [], 0
    for t in range(count):
        X, sub = random_downgrade_instance(rng)
        dg = pdiv.downgrade_with_map(X, sub)
        if dg.pdiv.locus_is_affine:
            continue
        pair = random_klt_pair(rng, X)
        B = pdiv.toric_boundary_to_tdivisor(dg, pair.boundary)
        v = pdiv.q_gorenstein_tvar(dg.pdiv, B)
        if not v.feasible or v.witness.cartier_index != pair.witness.cartier_index:
            fails.append((t, "witness"))
            continue
        cert = pdiv.quotient_klt_certificate(dg.pdiv, B, v.witness)
        if cert.passed and all(c < 1 for _, c in cert.B_Y) and cert.degree < 2:
            passed += 1
        else:
            fails.append((t, cert))
    neg = negative_control()
    neg_ok = not neg.passed and not neg.coefficient_check
    return ("10 point-quotient klt pipeline", not fails and neg_ok and passed > 0,
            f"{passed} pairs passed, negative control B_Y={[str(c) for _, c in neg.B_Y]}, "
            f"failures={fails[:3]}")


def _brute_hilbert(C: Cone) -> list:
    box = sum(max(abs(x) for x in r) for r in C.rays)
    pts = [p for p in itertools.product(range(-box, box + 1), repeat=C.rank)
           if any(p) and C.contains(p)]
    pset = set(pts)
    irr = []
    for x in pts:
        if not any(tuple(a - b for a, b in zip(x, y)) in pset for y in pts if y != x
                   and C.contains([a - b for a, b in zip(x, y)])):
            irr.append(x)
    return sorted(irr)


def _is_hnf(H) -> bool:
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


def criterion_11(seed=0, count=15, transforms=10):
    rng = random.Random(seed + 11)
    problems = []
    # dual involution and Hilbert bases
    for t in range(count):
        n = rng.choice((2, 3))
        C = random_pointed_cone(rng, n, 2 if n == 3 else 3, extra_rays=0 if n == 3 else 1)
        if C.dual().dual() != C:
            problems.append((t, "dual involution"))
        for r in C.dual().rays:
            if any(dot(r, v) < 0 for v in C.rays):
                problems.append((t, "dual ray pairing"))
        if list(hilbert_basis(C)) != _brute_hilbert(C):
            problems.append((t, "hilbert basis"))
    # HNF canonicity
    for t in range(count):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        M = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        H, U = hermite_normal_form(M)
        V = random_unimodular(rng, rows)
        H2, _ = hermite_normal_form(matmul(V, M))
        if (not _is_hnf(H) or [list(r) for r in matmul(U, M)] != [list(r) for r in H]
                or abs(determinant(U)) != 1 or H2 != H):
            problems.append((t, "hnf"))
    # unimodular invariance of verdicts
    cones = [Cone.from_rays(EXAMPLE_RAYS)] + [random_pointed_cone(rng, 3, 2) for _ in range(3)]
    for C in cones:
        X = torsing.ToricAffine(C)
        base_qg = torsing.q_gorenstein_witness(X)
        base_klt = torsing.klt_type_certificate(X)
        hb = hilbert_basis(C)
        for _ in range(transforms):
            U = random_unimodular(rng, 3)
            img = lambda v: tuple(matvec(U, v))  # noqa: E731
            Y = torsing.ToricAffine.from_rays([img(r) for r in C.rays])
            qg = torsing.q_gorenstein_witness(Y)
            klt = torsing.klt_type_certificate(Y)
            same = (qg.feasible == base_qg.feasible
                    and (not qg.feasible or qg.witness.cartier_index ==
                         base_qg.witness.cartier_index)
                    and (klt is None) == (base_klt is None))
            if same and klt is not None:
                same = sum(klt.boundary) == sum(base_klt.boundary)
                b = {img(v): c for v, c in zip(X.rays, base_klt.boundary)}
                bY = tuple(b[v] for v in Y.rays)
                wY = torsing.q_gorenstein_witness(Y, bY).witness
                same = same and wY.cartier_index == base_klt.witness.cartier_index
                same = same and all(
                    torsing.log_discrepancy(Y, bY, wY, img(h)) ==
                    torsing.log_discrepancy(X, base_klt.boundary, base_klt.witness, h)
                    for h in hb)
            if not same:
                problems.append(("invariance", C.rays, U))
    return ("11 kernel invariants", not problems, f"problems={problems[:3]}")


CRITERIA: list[Callable] = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
                            criterion_11]


def run_criterion(fn, seed=0):
    try:
        return fn(seed)
    except Exception as e:  # noqa: BLE001 - reported as a failed criterion
        return fn.__name__, False, f"error: {e!r}"


def run_all(seed: int = 0) -> list[tuple]:
    return [run_criterion(fn, seed) for fn in CRITERIA]

