import itertools

import pytest
from hypothesis import given, settings, strategies as st

from indflag.carrier import (INFINITE, Address, FinChain, Finite, InvolutionSpec, OmegaDown,
                             OmegaUp, OrderSpec, Pairing, ZLine, enumerate_truncation)
from indflag.cells import (CellDescriptor, Const, ExplicitList, MonotoneInto, Periodic, Run,
                           SurjectionSpec, TargetOrder, bruhat_leq, canonical_representative,
                           cell_from_labels, cell_from_subset, changed_points, grassmannian_leq,
                           inversion_number, label_fiber, m_B_P, omega_bruhat_leq,
                           omega_inversion_number, pair_inversion_count, sigma_eval,
                           surjection_from_json, surjection_to_json, validate)
from indflag.errors import OrbitMismatch, SizeMismatch
from indflag.permutations import (FinPerm, compose, identity, inverse, is_in_W_P, length,
                                  omega_transposition, transposition)
from indflag.truncation_oracle import (enumerate_group, labeling_dimension, mirror_indices,
                                       move_closure)

from conftest import (A2, A3, HI, LO, MID, gr_evens_Z, gr_k_omega, gr_omega_type_b,
                      grassmannian_finite, isotropic_type_c, random_omega_perm, random_perm,
                      surjection)


def window_dimension(cell, radius):
    """Oracle: cell dimension of the restriction to a truncation window."""
    spec = cell.base
    inv = spec.involution if spec.is_omega else None
    pts = spec.carrier.sorted(set(enumerate_truncation(spec.carrier, inv, radius))
                              | set(cell.w.support))
    labels = [spec.A.position(sigma_eval(cell, p)) for p in pts]
    mirror = mirror_indices(spec.carrier, inv, pts) if inv is not None else None
    return labeling_dimension(labels, mirror)


# ---------------------------------------------------------------------------
# validate


def test_validate_grassmannian():
    assert validate(gr_k_omega(3))


def test_validate_missing_label():
    spec = surjection([FinChain(3)], [ExplicitList((LO, LO, HI))], target=A3)
    check = validate(spec)
    assert not check
    assert any("never attained" in r for r in check.reasons)


def test_validate_equivariance_violation():
    spec = isotropic_type_c()
    bad = SurjectionSpec(spec.carrier, spec.target,
                         (Const(LO), ExplicitList((LO, LO)), Const(MID)), spec.involution)
    assert not validate(bad)


def test_validate_rule_shapes():
    assert not validate(surjection([ZLine()], [ExplicitList((LO, MID))]))
    assert not validate(surjection([FinChain(2)], [Periodic((LO, MID))]))
    assert not validate(surjection([FinChain(3)], [ExplicitList((LO, MID))]))


# ---------------------------------------------------------------------------
# sigma_eval


def test_sigma_eval_identity_and_transposition():
    spec = gr_k_omega(2)
    E = spec.carrier
    cell = CellDescriptor(spec, identity(E))
    for e in enumerate_truncation(E, None, 3):
        assert sigma_eval(cell, e) == spec.label(e)
    a, b = Address(0, 1), Address(1, 3)
    cell = CellDescriptor(spec, transposition(a, b, E))
    assert sigma_eval(cell, a) == spec.label(b)
    assert sigma_eval(cell, b) == spec.label(a)


def test_sigma_eval_against_window(rng):
    spec = surjection([ZLine()], [Periodic((LO, MID, MID))])
    E = spec.carrier
    pts = enumerate_truncation(E, None, 4)
    for _ in range(30):
        w = random_perm(rng, pts, 5, E)
        cell = CellDescriptor(spec, w)
        winv = inverse(w)
        for p in pts:
            assert sigma_eval(cell, p) == spec.label(winv.apply(p))


# ---------------------------------------------------------------------------
# pair_inversion_count


def test_pair_count_ordered_constant_blocks():
    x, y = Run(OmegaUp(), Const(LO)), Run(OmegaUp(), Const(MID))
    assert pair_inversion_count(A2, x, y) == Finite(0)


def test_pair_count_periodic_integer_line():
    assert pair_inversion_count(A2, Run(ZLine(), Periodic((LO, MID))), relation="same") == INFINITE


def test_pair_count_omega_before_finite_block():
    x = Run(OmegaUp(), Const(MID))
    y = Run(FinChain(3), ExplicitList((LO, LO, LO)))
    assert pair_inversion_count(A2, x, y) == INFINITE


def test_pair_count_finite_blocks_brute_force(rng):
    for _ in range(50):
        xs = tuple(rng.choice([LO, MID, HI]) for _ in range(rng.randint(1, 5)))
        ys = tuple(rng.choice([LO, MID, HI]) for _ in range(rng.randint(1, 5)))
        x = Run(FinChain(len(xs)), ExplicitList(xs))
        y = Run(FinChain(len(ys)), ExplicitList(ys))
        brute = sum(1 for a in xs for b in ys if b < a)
        assert pair_inversion_count(A3, x, y) == Finite(brute)
        same = sum(1 for i, j in itertools.combinations(range(len(xs)), 2) if xs[j] < xs[i])
        assert pair_inversion_count(A3, x, relation="same") == Finite(same)


# ---------------------------------------------------------------------------
# inversion_number


def test_projective_space_dimension_counts_predecessors():
    spec = surjection([FinChain(1), OmegaUp()], [Const(LO), Const(MID)])
    elements = [Address(0, 0)] + [Address(1, k) for k in range(19)]
    for i, e in enumerate(elements):
        assert inversion_number(cell_from_subset(spec, [e])) == Finite(i)


def test_identity_over_nondecreasing_is_zero():
    for spec in (gr_k_omega(2), surjection([ZLine()], [MonotoneInto(0)],
                                          target=OrderSpec((ZLine(),), "A"))):
        assert inversion_number(CellDescriptor(spec, identity(spec.carrier))) == Finite(0)


def test_evens_on_integer_line_always_infinite(rng):
    spec = gr_evens_Z()
    pts = enumerate_truncation(spec.carrier, None, 3)
    for _ in range(40):
        cell = CellDescriptor(spec, random_perm(rng, pts, 4, spec.carrier))
        assert inversion_number(cell) == INFINITE


RANDOM_SPECS = [
    surjection([FinChain(3), OmegaUp()], [ExplicitList((MID, LO, HI)), Const(HI)], target=A3),
    surjection([OmegaDown(), FinChain(2), OmegaUp()],
               [Const(LO), ExplicitList((MID, LO)), Const(MID)]),
    surjection([OmegaDown(), ZLine()], [Const(LO), MonotoneInto(1, 1, 0)],
               target=OrderSpec((FinChain(1), ZLine()), "A")),
    surjection([ZLine()], [MonotoneInto(0, 2, 0)], target=OrderSpec((ZLine(),), "A")),
    surjection([ZLine()], [Periodic((LO, MID))]),
    surjection([OmegaUp(), OmegaUp()], [Const(LO), Const(MID)]),
]


@pytest.mark.parametrize("spec", RANDOM_SPECS)
def test_inversion_number_matches_window_oracle(spec, rng):
    E = spec.carrier
    pts = enumerate_truncation(E, None, 3)
    for _ in range(25):
        w = random_perm(rng, pts, 5, E)
        cell = CellDescriptor(spec, w)
        d = inversion_number(cell)
        if d.is_finite:
            assert window_dimension(cell, 14) == d.n == window_dimension(cell, 18)
        else:
            assert window_dimension(cell, 18) > window_dimension(cell, 9)


# ---------------------------------------------------------------------------
# omega_inversion_number


def test_omega_identity_is_zero():
    spec = isotropic_type_c()
    assert omega_inversion_number(CellDescriptor(spec, identity(spec.carrier))) == Finite(0)


def test_omega_crossing_cell_is_infinite():
    spec = gr_omega_type_b()
    E = spec.carrier
    w = omega_transposition((0, 0), (3, 5), spec.involution, E)
    assert omega_inversion_number(CellDescriptor(spec, w)) == INFINITE


def test_omega_crossing_without_infinite_middle_is_finite():
    # omega* + 1 + omega is the integers, so moving a label across the centre stays finite
    E = OrderSpec((OmegaDown(), FinChain(1), OmegaUp()))
    inv = InvolutionSpec((Pairing(0, 2, "identity"), Pairing(1, 1)), Address(1, 0), "B")
    iA = InvolutionSpec((Pairing(0, 0, "reflect"),), MID, "B")
    spec = SurjectionSpec(E, TargetOrder(A3, iA), (Const(LO), Const(MID), Const(HI)), inv)
    assert validate(spec)
    cell = CellDescriptor(spec, omega_transposition((0, 0), (2, 3), inv, E))
    assert omega_inversion_number(cell) == Finite(window_dimension(cell, 12)) == Finite(5)


def test_omega_b2_cells_match_coset_oracle():
    # B2 window of the isotropic type C example: four points, two mirror pairs.
    spec = isotropic_type_c()
    E, inv = spec.carrier, spec.involution
    pts = enumerate_truncation(E, inv, 1)
    assert len(pts) == 4
    mirror = mirror_indices(E, inv, pts)
    g = enumerate_group(pts, "BC", mirror)
    for w in g.elements:
        fin = FinPerm.from_mapping({pts[i]: pts[w[i]] for i in range(4)}, E)
        cell = CellDescriptor(spec, fin)
        image = [spec.A.position(sigma_eval(cell, p)) for p in pts]
        assert omega_inversion_number(cell) == Finite(labeling_dimension(image, mirror))


def test_omega_random_cells_match_window(rng):
    for spec in (isotropic_type_c(), gr_omega_type_b()):
        E, inv = spec.carrier, spec.involution
        pts = enumerate_truncation(E, inv, 2)
        for _ in range(40):
            cell = CellDescriptor(spec, random_omega_perm(rng, E, inv, pts, rng.randint(0, 3)))
            d = omega_inversion_number(cell)
            if d.is_finite:
                assert window_dimension(cell, 16) == d.n == window_dimension(cell, 20)
            else:
                assert window_dimension(cell, 20) > window_dimension(cell, 8)


# ---------------------------------------------------------------------------
# m_B_P


def test_m_identity_zero():
    spec = gr_k_omega(2)
    assert m_B_P(spec, identity(spec.carrier)) == Finite(0)


def test_m_is_minimum_of_lengths_over_coset():
    spec = grassmannian_finite(5, {0, 1})
    E = spec.carrier
    pts = E.elements()
    g = enumerate_group(pts, "A")
    perms = [FinPerm.from_mapping({pts[i]: pts[w[i]] for i in range(5)}, E) for w in g.elements]
    parabolic = [u for u in perms if is_in_W_P(u, spec)]
    for w in perms:
        best = min(length(compose(u, w), E).n for u in parabolic)
        assert m_B_P(spec, w) == Finite(best)


def test_m_evens_always_infinite(rng):
    spec = gr_evens_Z()
    pts = enumerate_truncation(spec.carrier, None, 3)
    for _ in range(20):
        assert m_B_P(spec, random_perm(rng, pts, 4, spec.carrier)) == INFINITE


# ---------------------------------------------------------------------------
# closure order


def gr2_omega_cell(*indices):
    """Subset cell in Gr(2) on the naturals; ``e_1, e_2`` are the finite block."""
    spec = gr_k_omega(2)
    addr = [Address(0, 0), Address(0, 1)] + [Address(1, k) for k in range(20)]
    return cell_from_subset(spec, [addr[i - 1] for i in indices])


def test_bruhat_leq_reflexive():
    c = gr2_omega_cell(2, 5)
    assert bruhat_leq(c, c)


def test_bruhat_leq_elementwise_rule():
    assert bruhat_leq(gr2_omega_cell(1, 3), gr2_omega_cell(2, 4))
    assert not bruhat_leq(gr2_omega_cell(1, 4), gr2_omega_cell(2, 3))


def test_bruhat_leq_rejects_different_bases():
    with pytest.raises(OrbitMismatch):
        bruhat_leq(CellDescriptor(gr_k_omega(2), identity()),
                   CellDescriptor(gr_k_omega(3), identity()))


def test_grassmannian_leq_matches_bruhat_leq():
    E = gr_k_omega(2).carrier
    addr = [Address(0, 0), Address(0, 1)] + [Address(1, k) for k in range(5)]
    subsets = list(itertools.combinations(addr, 2))
    for s in subsets:
        for t in subsets:
            assert grassmannian_leq(s, t, E) == bruhat_leq(cell_from_subset(gr_k_omega(2), s),
                                                           cell_from_subset(gr_k_omega(2), t))
    with pytest.raises(SizeMismatch):
        grassmannian_leq([addr[0]], addr[1:3], E)


def test_bruhat_leq_matches_move_closure_full_flags():
    spec = surjection([FinChain(4)], [MonotoneInto(0)], target=OrderSpec((FinChain(4),), "A"))
    E = spec.carrier
    pts = E.elements()
    g = enumerate_group(pts, "A")
    cells = {}
    for w in g.elements:
        cell = CellDescriptor(spec, FinPerm.from_mapping({pts[i]: pts[w[i]] for i in range(4)}, E))
        cells[tuple(spec.A.position(sigma_eval(cell, p)) for p in pts)] = cell
    for lab, cell in cells.items():
        up = move_closure(lab, None, True)
        for other, ocell in cells.items():
            assert bruhat_leq(cell, ocell) == (other in up)


def test_omega_bruhat_single_move():
    spec = isotropic_type_c()
    E, inv = spec.carrier, spec.involution
    base = CellDescriptor(spec, identity(E))
    # (0,1) is labelled low and (2,0) high, so the move goes up
    up = CellDescriptor(spec, omega_transposition((0, 1), (2, 0), inv, E))
    assert omega_bruhat_leq(base, up)
    assert not omega_bruhat_leq(up, base)


# ---------------------------------------------------------------------------
# canonical representatives and constructors


def test_canonical_representative_of_parabolic_elements():
    spec = gr_k_omega(2)
    E = spec.carrier
    assert canonical_representative(CellDescriptor(spec, transposition((1, 0), (1, 4), E))) \
        .is_identity()
    assert canonical_representative(CellDescriptor(spec, transposition((0, 0), (0, 1), E))) \
        .is_identity()


def test_canonical_representative_preserves_labels(rng):
    spec = surjection([FinChain(3), ZLine()], [ExplicitList((MID, LO, HI)), Periodic((LO, HI))],
                      target=A3)
    E = spec.carrier
    pts = enumerate_truncation(E, None, 3)
    for _ in range(40):
        cell = CellDescriptor(spec, random_perm(rng, pts, 5, E))
        rep = CellDescriptor(spec, canonical_representative(cell))
        for p in set(cell.w.support) | set(rep.w.support):
            assert sigma_eval(rep, p) == sigma_eval(cell, p)


def test_cell_from_labels_and_fibers():
    spec = gr_k_omega(2)
    cell = cell_from_labels(spec, {Address(0, 0): MID, Address(1, 2): LO})
    assert changed_points(cell) == {Address(0, 0): MID, Address(1, 2): LO}
    assert label_fiber(cell, LO) == {Address(0, 1), Address(1, 2)}
    assert label_fiber(cell, MID) is None


def test_cell_from_subset_needs_two_labels():
    with pytest.raises(SizeMismatch):
        cell_from_subset(surjection([FinChain(3)], [MonotoneInto(0)], target=A3), [(0, 0)])


def test_surjection_json_round_trip():
    for spec in (gr_omega_type_b(), isotropic_type_c(), RANDOM_SPECS[2]):
        assert surjection_from_json(surjection_to_json(spec)) == spec


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=2, max_size=6), st.randoms(use_true_random=False))
def test_finite_cells_match_oracle(raw, r):
    labels = tuple(Address(0, x) for x in raw)
    used = sorted(set(raw))
    if len(used) < 2:
        return
    target = OrderSpec((FinChain(3),), "A")
    spec = surjection([FinChain(len(raw))], [ExplicitList(labels)], target=target)
    spec = SurjectionSpec(spec.carrier, TargetOrder(target), spec.rules)
    if not validate(spec):
        return
    pts = spec.carrier.elements()
    img = pts[:]
    r.shuffle(img)
    cell = CellDescriptor(spec, FinPerm.from_mapping(dict(zip(pts, img)), spec.carrier))
    image = [spec.A.position(sigma_eval(cell, p)) for p in pts]
    assert inversion_number(cell) == Finite(labeling_dimension(image))
