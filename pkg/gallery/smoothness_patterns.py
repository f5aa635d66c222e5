"""Singular Schubert varieties of the full flag variety of a 4-dimensional space.

A cell is singular exactly when its permutation contains 3412 or 4231.  The
pattern test is compared with a direct tangent-space computation.
"""

from indflag import FinChain, FinPerm, OrderSpec, maximal_flag_smooth
from indflag.smoothness import Singular, natural_two_order
from indflag.truncation_oracle import enumerate_group, smooth_by_tangent_spaces

E = OrderSpec((FinChain(4),))
points = E.elements()
two = natural_two_order(E)
group = enumerate_group(points, "A")

for t in group.elements:
    sigma = FinPerm.from_mapping({points[i]: points[t[i]] for i in range(4)}, E)
    verdict = maximal_flag_smooth(two, sigma)
    agrees = isinstance(verdict, Singular) != smooth_by_tangent_spaces(group, t)
    if isinstance(verdict, Singular):
        word = "".join(str(x + 1) for x in t)
        hit = [points.index(e) + 1 for e in verdict.elements]
        print(f"{word}: singular, pattern {verdict.pattern} at positions {hit}, "
              f"tangent spaces agree: {agrees}")
