"""
A torus quotient, step by step
==============================

G_m acts on C^4 with weights (2, -1, -1, 1).  We compute the invariant
monomials, the toric quotient, and a klt boundary on it.
"""

from toricklt.diagquot import WeightAction, quotient_presentation, verify_binomial_relations
from toricklt.torsing import klt_type_certificate, log_discrepancy, q_gorenstein_witness

action = WeightAction(4, ((2, -1, -1, 1),))
P = quotient_presentation(action)

# the invariant ring is generated by five monomials
for i, g in enumerate(P.invariant_generators):
    print(P.generator_name(i), g)

# three quadratic binomial relations hold among them, a fourth does not
print(verify_binomial_relations(P, [("f1*f3", "f2^2"), ("f1*f5", "f2*f4"),
                                    ("f2*f5", "f3*f4"), ("f1*f4", "f2*f5")]))

X = P.quotient
print("quotient cone rays:", X.rays)

# K_X alone is not Q-Cartier: the solver returns a dependency among the rays
print("Q-Gorenstein?", q_gorenstein_witness(X).feasible)

# put the boundary on the image of {x1 = 0}
d1, mult = P.coordinate_divisor_map[0]
cert = klt_type_certificate(X, [d1])
print("boundary:", cert.boundary, "Cartier index:", cert.witness.cartier_index)

# log discrepancy of the divisor we would blow up
for v in [(-1, 1, 1), (0, 1, 1)]:
    if X.sigma.contains(v):
        print(v, log_discrepancy(X, cert.boundary, cert.witness, v))
