"""
From a toric cone to a point quotient
=====================================

Restrict the torus of the A1 singularity to the diagonal subtorus, read the
result as a polyhedral divisor over P^1, and certify that the pair on the
quotient is klt.
"""

from toricklt import pdiv
from toricklt.torsing import ToricAffine

X = ToricAffine.from_rays([(1, 0), (1, 2)])
D = pdiv.downgrade(X, [(1, 1)])
for z, P in D.slices:
    print("slice at", z, "vertices", P.vertices)

print(pdiv.is_proper(D))
for m in range(4):
    print("m =", m, "dim =", pdiv.graded_dimension(D, (m,)))

verdict = pdiv.q_gorenstein_tvar(D)
w = verdict.witness
print("witness m", w.m, "div f", dict(w.f_divisor))

# the canonical divisor and div(f chi^m) agree coefficientwise
print(pdiv.principal_divisor(D, w) == pdiv.canonical_rep(D))

cert = pdiv.quotient_klt_certificate(D, None, w)
print("B_Y", dict(cert.B_Y), "degree", cert.degree, "passed", cert.passed)
