"""
Finite abelian quotients and ramification
=========================================

Refining N = Z^2 by (1/2, 1/2) realises A^2 / {+1, -1}.  The pullback of the
log discrepancy picks up the ramification index.
"""

from fractions import Fraction

from toricklt.diagquot import LatticeRefinement, finite_quotient, riemann_hurwitz_check
from toricklt.polycone import Cone
from toricklt.torsing import ToricAffine, ToricPair, q_gorenstein_witness

X = ToricAffine(Cone.orthant(2))
up = ToricPair(X, (0, 0), q_gorenstein_witness(X).witness)
R = LatticeRefinement(X.sigma, ((Fraction(1, 2), Fraction(1, 2)),))
print("index", R.index)

down, klt = finite_quotient(R, up)
print("downstairs rays", down.toric.rays, "klt:", klt)

# the exceptional ray of the A1 resolution sits at (1/2, 1/2) upstairs
w = tuple(int(x) for x in R.to_sup((Fraction(1, 2), Fraction(1, 2))))
c = riemann_hurwitz_check(R, up, [w])[0]
print(f"A_up={c.a_up}  r={c.r}  A_down={c.a_down}  consistent={c.ok}")

# now a cyclic cover branched along one axis
R2 = LatticeRefinement(X.sigma, ((Fraction(1, 3), 0),))
down2, _ = finite_quotient(R2, up)
print("boundary after x -> x^3:", dict(zip(down2.toric.rays, down2.boundary)))
