"""Exact integer and rational linear algebra.

Everything here works on plain Python ``int`` and ``fractions.Fraction``
values; matrices are sequences of rows and are returned as tuples of tuples.
Nothing in this module ever rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vector = tuple
Matrix = tuple


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------

def frac(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point input is not accepted")
    return Fraction(x)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def transpose(M: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in A)


def vecmat(v: Sequence, A: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    if not A:
        return ()
    n = len(A[0])
    return tuple(sum(v[i] * A[i][j] for i in range(len(A))) for j in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def lcm_denominators(v: Iterable) -> int:
    out = 1
    for x in v:
        out = math.lcm(out, frac(x).denominator)
    return out


def primitive(v: Sequence) -> Vector:
    """Primitive integer vector on the ray through the rational vector ``v``.

    The zero vector is returned unchanged.
    """
    L = lcm_denominators(v)
    w = [int(frac(x) * L) for x in v]
    g = 0
    for x in w:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return g == 1


def determinant(M: Sequence[Sequence]):
    """Exact determinant by fraction-valued Gaussian elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [[frac(x) for x in row] for row in M]
    det = Fraction(1)
    for j in range(n):
        p = next((i for i in range(j, n) if A[i][j] != 0), None)
        if p is None:
            return 0
        if p != j:
            A[j], A[p] = A[p], A[j]
            det = -det
        det *= A[j][j]
        for i in range(j + 1, n):
            if A[i][j]:
                f = A[i][j] / A[j][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[j])]
    return int(det) if det.denominator == 1 else det


def inverse(M: Sequence[Sequence]) -> Matrix:
    """Exact inverse of a square rational matrix."""
    n = len(M)
    sol = solve_rational(M, [0] * n)
    if sol.kernel:
        raise ZeroDivisionError("matrix is singular")
    cols = [solve_rational(M, [int(i == j) for i in range(n)]).point for j in range(n)]
    return transpose(cols)


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(_rref([list(map(frac, r)) for r in M])[1])


def _rref(A: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (A, pivot columns)."""
    m = len(A)
    n = len(A[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for j in range(n):
        p = next((i for i in range(r, m) if A[i][j] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][j]
        A[r] = [x / pv for x in A[r]]
        for i in range(m):
            if i != r and A[i][j] != 0:
                f = A[i][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(j)
        r += 1
        if r == m:
            break
    return A, pivots


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ M``, ``U`` unimodular, ``H`` upper
    echelon with positive pivots, every entry above a pivot reduced into
    ``[0, pivot)``, and zero rows collected at the bottom.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def sub(i, k, q):  # row_i -= q * row_k
        if q:
            A[i] = [a - q * b for a, b in zip(A[i], A[k])]
            U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(A[i][j]), i))
            if p != r:
                A[r], A[p] = A[p], A[r]
                U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][j]:
                    sub(i, r, A[i][j] // A[r][j])
                    if A[i][j]:
                        clean = False
            if clean:
                break
        if A[r][j] == 0:
            continue
        if A[r][j] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            sub(i, r, A[i][j] // A[r][j])
        r += 1
    return mat(A), mat(U)


def hnf_rows(M: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of the Hermite normal form: a canonical lattice basis."""
    if not M:
        return ()
    H, _ = hermite_normal_form(M)
    return tuple(row for row in H if any(row))


def smith_invariants(M: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero invariant factors ``d1 | d2 | ...`` of an integer matrix."""
    A = [list(map(int, r)) for r in M if any(r)]
    if not A:
        return ()
    # alternate row and column Hermite reductions until diagonal
    while True:
        A = [list(r) for r in hnf_rows(A)]
        At = [list(r) for r in hnf_rows(transpose(A))]
        diag = all(At[i][j] == 0 for i in range(len(At))
                   for j in range(len(At[i])) if i != j)
        A = At
        if diag:
            break
    d = [abs(A[i][i]) for i in range(min(len(A), len(A[0])))]
    d = [x for x in d if x]
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = math.gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
    return tuple(sorted(d))


def kernel_saturated(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    """Lattice basis (rows, in HNF) of ``{e in Z^n : M e = 0}``.

    The result is saturated: ``Z^n`` modulo its span is torsion free. A trivial
    kernel gives an empty tuple.
    """
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M or not any(any(r) for r in M):
        return identity(n)
    Mt = transpose(M)
    H, U = hermite_normal_form(Mt)
    kern = [U[i] for i in range(len(H)) if not any(H[i])]
    if not kern:
        return ()
    return hnf_rows(kern)


def in_row_lattice(B: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    return _row_lattice_coords(hnf_rows(B), x) is not None


def _row_lattice_coords(H: Sequence[Sequence[int]], x: Sequence):
    """Coordinates ``y`` with ``y @ H == x`` for HNF rows ``H``, or None."""
    res = [frac(v) for v in x]
    ys = []
    for row in H:
        j = next(k for k, v in enumerate(row) if v)
        q = res[j] / row[j]
        if q.denominator != 1:
            return None
        q = int(q)
        ys.append(q)
        if q:
            res = [a - q * b for a, b in zip(res, row)]
    if any(res):
        return None
    return tuple(ys)


def solve_integer(A: Sequence[Sequence[int]], b: Sequence) -> Optional[Vector]:
    """Integer solution ``x`` of ``A x = b`` or None if none exists."""
    m = len(A)
    n = len(A[0]) if m else 0
    if any(frac(v).denominator != 1 for v in b):
        return None
    if n == 0:
        return () if not any(b) else None
    At = transpose(A)
    H, U = hermite_normal_form(At)
    nz = [i for i in range(len(H)) if any(H[i])]
    y = _row_lattice_coords([H[i] for i in nz], b)
    if y is None:
        return None
    x = [0] * n
    for coef, i in zip(y, nz):
        if coef:
            x = [a + coef * u for a, u in zip(x, U[i])]
    return tuple(x)


# ---------------------------------------------------------------------------
# rational linear systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSolution:
    """Outcome of :func:`solve_rational`.

    Exactly one of ``point`` and ``certificate`` is set.  ``certificate`` is a
    row combination ``lam`` with ``lam @ A == 0`` and ``lam @ b != 0``.
    """

    point: Optional[Vector]
    kernel: Matrix = ()
    certificate: Optional[Vector] = None

    @property
    def feasible(self) -> bool:
        return self.point is not None


def solve_rational(A: Sequence[Sequence], b: Sequence) -> LinearSolution:
    """Solve ``A x = b`` over the rationals.

    Returns a particular solution together with a basis of the kernel of ``A``
    (primitive integer rows), or an inconsistency certificate.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return LinearSolution(tuple(Fraction(0) for _ in range(n)), identity(n))
    aug = [[frac(x) for x in A[i]] + [frac(b[i])] + [Fraction(int(i == k)) for k in range(m)]
           for i in range(m)]
    # eliminate on the coefficient columns only
    r = 0
    pivots = []
    for j in range(n):
        p = next((i for i in range(r, m) if aug[i][j] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][j]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][j] != 0:
                f = aug[i][j]
                aug[i] = [a - f * c for a, c in zip(aug[i], aug[r])]
        pivots.append(j)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            lam = aug[i][n + 1:]
            L = lcm_denominators(lam)
            return LinearSolution(None, (), tuple(int(x * L) for x in lam))
    x = [Fraction(0)] * n
    for i, j in enumerate(pivots):
        x[j] = aug[i][n]
    free = [j for j in range(n) if j not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, j in enumerate(pivots):
            v[j] = -aug[i][f]
        kernel.append(primitive(v))
    return LinearSolution(tuple(x), tuple(kernel))


def scaling_index(A: Sequence[Sequence[int]], c: Sequence) -> Optional[tuple[int, Vector]]:
    """Least ``k >= 1`` such that ``A x = k c`` has an integer solution.

    Returns ``(k, x / k)`` or None when ``A x = c`` has no rational solution.
    """
    sol = solve_rational(A, c)
    if not sol.feasible:
        return None
    L = lcm_denominators(sol.point)
    for k in sorted(d for d in range(1, L + 1) if L % d == 0):
        x = solve_integer(A, [frac(v) * k for v in c])
        if x is not None:
            return k, tuple(Fraction(v, k) for v in x)
    raise AssertionError("unreachable: k = lcm of denominators always works")


# ---------------------------------------------------------------------------
# exact linear programming
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LpProblem:
    """Feasibility system over free rational variables.

    ``equalities`` hold pairs ``(a, c)`` meaning ``<a, x> = c``; ``weak`` means
    ``<a, x> >= c`` and ``strict`` means ``<a, x> > c``.
    """

    nvars: int
    equalities: tuple = ()
    weak: tuple = ()
    strict: tuple = ()

    def __post_init__(self):
        for group in (self.equalities, self.weak, self.strict):
            for a, _ in group:
                if len(a) != self.nvars:
                    raise ValueError("constraint length does not match nvars")

    def satisfied_by(self, x: Sequence) -> bool:
        return (all(dot(a, x) == c for a, c in self.equalities)
                and all(dot(a, x) >= c for a, c in self.weak)
                and all(dot(a, x) > c for a, c in self.strict))


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[Vector] = None
    value: Optional[Fraction] = None


def _pivot(rows, rhs, obj, r, c):
    pv = rows[r][c]
    if pv != 1:
        rows[r] = [v / pv for v in rows[r]]
        rhs[r] /= pv
    R = rows[r]
    nz = [k for k, v in enumerate(R) if v]
    for i in range(len(rows)):
        if i != r:
            f = rows[i][c]
            if f:
                row = rows[i]
                for k in nz:
                    row[k] -= f * R[k]
                rhs[i] -= f * rhs[r]
    f = obj[0][c]
    if f:
        for k in nz:
            obj[0][k] -= f * R[k]
        obj[1] -= f * rhs[r]


def _run_simplex(rows, rhs, basis, obj, allowed):
    """Bland's-rule primal simplex maximising; ``obj = [reduced costs, -value]``."""
    while True:
        enter = next((j for j in allowed if obj[0][j] > 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = rhs[i] / row[enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        r = best[1]
        _pivot(rows, rhs, obj, r, enter)
        basis[r] = enter


def linprog_exact(nvars: int, objective: Sequence, equalities=(), weak=(),
                  maximize: bool = True, upper=()) -> LpResult:
    """Optimise a linear objective over free variables, exactly.

    Constraints use the :class:`LpProblem` conventions; ``upper`` adds
    ``<a, x> <= c`` rows for convenience.  Two-phase tableau simplex with
    Bland's anti-cycling rule.
    """
    cons = [(list(map(frac, a)), frac(c), "eq") for a, c in equalities]
    cons += [(list(map(frac, a)), frac(c), "ge") for a, c in weak]
    cons += [([-frac(v) for v in a], -frac(c), "ge") for a, c in upper]
    sign = 1 if maximize else -1
    obj_x = [sign * frac(v) for v in objective]
    n_ge = sum(1 for *_, k in cons if k == "ge")
    nstd = 2 * nvars + n_ge
    rows, rhs = [], []
    s = 0
    for a, c, kind in cons:
        row = a + [-v for v in a] + [Fraction(0)] * n_ge
        if kind == "ge":
            row[2 * nvars + s] = Fraction(-1)
            s += 1
        if c < 0:
            row = [-v for v in row]
            c = -c
        rows.append(row)
        rhs.append(c)
    m = len(rows)
    # phase 1 with one artificial per row
    for i in range(m):
        rows[i] = rows[i] + [Fraction(int(i == k)) for k in range(m)]
    basis = [nstd + i for i in range(m)]
    total = nstd + m
    red = [Fraction(0)] * total
    val = Fraction(0)
    for i in range(m):
        for k in range(nstd):
            red[k] += rows[i][k]
        val += rhs[i]
    obj = [red, val]  # second slot holds minus the objective value
    _run_simplex(rows, rhs, basis, obj, range(nstd))
    if obj[1] != 0:
        return LpResult("infeasible")
    # drive artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(rows):
        if basis[i] >= nstd:
            j = next((k for k in range(nstd) if rows[i][k] != 0), None)
            if j is None:
                del rows[i], rhs[i], basis[i]
                continue
            _pivot(rows, rhs, [[Fraction(0)] * total, Fraction(0)], i, j)
            basis[i] = j
        i += 1
    rows = [row[:nstd] for row in rows]
    cost = obj_x + [-v for v in obj_x] + [Fraction(0)] * n_ge
    red = list(cost)
    val = Fraction(0)
    for i, bcol in enumerate(basis):
        cb = cost[bcol]
        if cb:
            for k in range(nstd):
                red[k] -= cb * rows[i][k]
            val += cb * rhs[i]
    obj = [red, -val]
    status = _run_simplex(rows, rhs, basis, obj, range(nstd))
    if status == "unbounded":
        return LpResult("unbounded")
    z = [Fraction(0)] * nstd
    for i, bcol in enumerate(basis):
        z[bcol] = rhs[i]
    x = tuple(z[k] - z[nvars + k] for k in range(nvars))
    value = dot(objective, x)
    return LpResult("optimal", x, frac(value))


def lp_feasible_strict(P: LpProblem) -> Optional[Vector]:
    """Exact point satisfying every constraint of ``P``, or None.

    Strict rows ``<a, x> > c`` become ``<a, x> - t >= c`` for an extra slack
    ``t <= 1`` which is maximised; the system is feasible iff the optimum
    is positive.
    """
    n = P.nvars
    eqs = [(tuple(a) + (0,), c) for a, c in P.equalities]
    weak = [(tuple(a) + (0,), c) for a, c in P.weak]
    weak += [(tuple(a) + (-1,), c) for a, c in P.strict]
    upper = [((0,) * n + (1,), 1)]
    res = linprog_exact(n + 1, (0,) * n + (1,), eqs, weak, upper=upper)
    if res.status != "optimal" or res.value <= 0:
        return None
    x = res.x[:n]
    if not P.satisfied_by(x):
        raise AssertionError("simplex returned a point violating the system")
    return x


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers proving an :class:`LpProblem` infeasible.

    With ``u`` free, ``v, w >= 0`` and ``A^T u + B^T v + D^T w = 0``, any
    feasible ``x`` would give ``0 >= u.b + v.c + w.d``, strictly when ``w`` is
    nonzero.  So ``u.b + v.c + w.d > 0``, or ``>= 0`` with ``w != 0``, is a
    contradiction.
    """

    equalities: Vector
    weak: Vector
    strict: Vector = field(default=())


def farkas_certificate(P: LpProblem) -> Optional[FarkasCertificate]:
    """Infeasibility certificate for ``P`` (None if ``P`` is feasible)."""
    ne, nw, ns = len(P.equalities), len(P.weak), len(P.strict)
    nv = ne + nw + ns
    cols = [a for a, _ in P.equalities] + [a for a, _ in P.weak] + [a for a, _ in P.strict]
    rhs = [c for _, c in P.equalities] + [c for _, c in P.weak] + [c for _, c in P.strict]
    eqs = []
    for j in range(P.nvars):
        eqs.append((tuple(frac(cols[i][j]) for i in range(nv)), 0))
    sign_rows = [(tuple(int(k == i) for k in range(nv)), 0) for i in range(ne, nv)]
    rhs_row = tuple(map(frac, rhs))
    attempts = []
    if ns:
        w_sum = tuple(int(i >= ne + nw) for i in range(nv))
        attempts.append((eqs + [(w_sum, 1)], sign_rows + [(rhs_row, 0)]))
    attempts.append((eqs + [(rhs_row, 1)], sign_rows))
    for e, w in attempts:
        res = linprog_exact(nv, (0,) * nv, e, w)
        if res.status == "optimal":
            y = res.x
            L = lcm_denominators(y)
            y = [v * L for v in y]
            cert = FarkasCertificate(tuple(map(int, y[:ne])),
                                     tuple(map(int, y[ne:ne + nw])),
                                     tuple(map(int, y[ne + nw:])))
            if not check_farkas(P, cert):
                raise AssertionError("constructed certificate does not verify")
            return cert
    return None


def check_farkas(P: LpProblem, cert: FarkasCertificate) -> bool:
    """Verify a :class:`FarkasCertificate` against ``P`` exactly."""
    u, v, w = cert.equalities, cert.weak, cert.strict
    if (len(u), len(v), len(w)) != (len(P.equalities), len(P.weak), len(P.strict)):
        return False
    if any(x < 0 for x in v) or any(x < 0 for x in w):
        return False
    combo = [Fraction(0)] * P.nvars
    total = Fraction(0)
    for mult, group in ((u, P.equalities), (v, P.weak), (w, P.strict)):
        for y, (a, c) in zip(mult, group):
            if y:
                combo = [s + y * frac(t) for s, t in zip(combo, a)]
                total += y * frac(c)
    if any(combo):
        return False
    return total > 0 or (total >= 0 and any(w))
