"""Schubert cells of Gr(2) on a basis ordered like the naturals.

The carrier is two marked points followed by a copy of omega.  Every cell is
the set of subspaces whose relative position to the standard flag is a given
2-element subset, and its dimension counts the gaps below that subset.
"""

import itertools

from indflag import (Address, Const, FinChain, OmegaUp, OrderSpec,
                     SurjectionSpec, TargetOrder, bruhat_leq, cell_dimension,
                     cell_from_subset, gr2_smooth)

LOW, HIGH = Address(0, 0), Address(0, 1)
carrier = OrderSpec((FinChain(2), OmegaUp()))
target = TargetOrder(OrderSpec((FinChain(2),), "A"))
spec = SurjectionSpec(carrier, target, (Const(LOW), Const(HIGH)))

# the first few basis vectors: e1, e2 in the marked block, then the omega tail
basis = [Address(0, 0), Address(0, 1)] + [Address(1, k) for k in range(4)]
names = {e: f"e{i + 1}" for i, e in enumerate(basis)}

print("dimension and smoothness of the first cells")
cells = {}
for pair in itertools.combinations(basis, 2):
    cell = cell_from_subset(spec, pair)
    cells[pair] = cell
    verdict = gr2_smooth(pair, carrier)
    label = "{" + ", ".join(names[e] for e in pair) + "}"
    print(f"  {label:10} dim {cell_dimension(cell).to_json()['finite']:2}  "
          f"{type(verdict).__name__.lower()}")

print("\ncells below {e2, e5}:")
top = cells[(basis[1], basis[4])]
below = [p for p, c in cells.items() if bruhat_leq(c, top)]
print("  " + "  ".join("{" + ",".join(names[e] for e in p) + "}" for p in below))
