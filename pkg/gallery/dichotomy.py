"""Which ind-varieties of generalized flags have finite-dimensional cells.

For each labeling we ask whether some cell is finite dimensional (a Borel
fixed point exists) and whether every cell is.  The three possible answers
are all realized below.
"""

from indflag import (Address, Const, FinChain, OmegaUp, OrderSpec, Periodic, SurjectionSpec,
                     TargetOrder, ZLine, all_cells_finite, borel_fixed_point)

LOW, HIGH = Address(0, 0), Address(0, 1)
A = TargetOrder(OrderSpec((FinChain(2),), "A"))

examples = {
    "Gr(2) on omega": SurjectionSpec(OrderSpec((FinChain(2), OmegaUp())), A,
                                     (Const(LOW), Const(HIGH))),
    "evens and odds of Z": SurjectionSpec(OrderSpec((ZLine(),)), A,
                                          (Periodic((LOW, HIGH)),)),
    "omega then Z": SurjectionSpec(OrderSpec((OmegaUp(), ZLine())), A,
                                   (Const(LOW), Const(HIGH))),
    "two Z, reversed": SurjectionSpec(OrderSpec((ZLine(), ZLine())), A,
                                  (Const(HIGH), Const(LOW))),
}

for name, spec in examples.items():
    fixed = borel_fixed_point(spec)
    if fixed is None:
        answer = "no finite-dimensional cell"
    elif all_cells_finite(spec):
        answer = "every cell finite dimensional"
    else:
        answer = "finite and infinite cells both occur"
    print(f"{name:22} {answer}")
