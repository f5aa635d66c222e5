"""Schubert cells of ind-varieties of generalized flags, computed exactly.

The modules are layered: ``carrier`` (ordered index sets and involutions),
``permutations`` (finitary permutations and their lengths), ``cells``
(labelings, dimensions and the closure order), ``criteria`` (finiteness),
``smoothness`` (pattern and grassmannian tests), ``truncation_oracle``
(brute force on finite windows) and ``cli`` (scenario files).
"""

from .carrier import (INFINITE, Address, ExtendedCount, FinChain, Finite, InvolutionSpec,
                      OmegaDown, OmegaUp, OrderSpec, Pairing, ZLine, embeds_in_Z,
                      enumerate_truncation)
from .cells import (CellDescriptor, Const, ExplicitList, MonotoneInto, Periodic,
                    SurjectionSpec, TargetOrder, bruhat_leq, cell_dimension,
                    cell_from_labels, cell_from_subset, inversion_number, m_B_P,
                    omega_bruhat_leq, omega_inversion_number)
from .criteria import all_cells_finite, borel_fixed_point, exists_finite_dimensional_cell
from .errors import IndFlagError
from .permutations import FinPerm, OmegaPerm, length, omega_transposition, transposition
from .smoothness import gr2_smooth, maximal_flag_smooth, truncation_scan

__version__ = "0.1.0"

__all__ = [
    "INFINITE", "Address", "ExtendedCount", "FinChain", "Finite", "InvolutionSpec",
    "OmegaDown", "OmegaUp", "OrderSpec", "Pairing", "ZLine", "embeds_in_Z",
    "enumerate_truncation", "CellDescriptor", "Const", "ExplicitList", "MonotoneInto",
    "Periodic", "SurjectionSpec", "TargetOrder", "bruhat_leq", "cell_dimension",
    "cell_from_labels", "cell_from_subset", "inversion_number", "m_B_P", "omega_bruhat_leq",
    "omega_inversion_number", "all_cells_finite", "borel_fixed_point",
    "exists_finite_dimensional_cell", "IndFlagError", "FinPerm", "OmegaPerm", "length",
    "omega_transposition", "transposition", "gr2_smooth", "maximal_flag_smooth",
    "truncation_scan",
]
