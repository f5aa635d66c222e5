
import pytest
from hypothesis import given, settings, strategies as st

from indflag.carrier import (INFINITE, Address, FinChain, Finite, InvolutionSpec, OmegaDown,
                             OmegaUp, OrderSpec, Pairing, ZLine, enumerate_truncation,
                             involution_image)
from indflag.errors import (CarrierMismatch, EqualAddresses, FixedPointArgument,
                            NotEquivariant, SupportExceedsTruncation)
from indflag.permutations import (FinPerm, OmegaPerm, apply, compose, identity, inverse, is_in_W_P,
                                  length, length_truncated, omega_transposition, perm_from_json,
                                  perm_to_json, transposition)
from indflag.truncation_oracle import bfs_length, enumerate_group, mirror_indices, swap
from indflag.truncation_oracle import compose as oracle_compose

from conftest import gr_k_omega

Z = OrderSpec((ZLine(),))
TYPE_B = OrderSpec((OmegaDown(), FinChain(1), OmegaUp()))
TYPE_B_INV = InvolutionSpec((Pairing(0, 2, "identity"), Pairing(1, 1)), Address(1, 0), "B")

# Word lengths computed by breadth-first search in the finite group of the window.
FROZEN_T_0_5 = 9          # t_{(0,0),(0,5)} on Z, window of offsets -1..5
FROZEN_THREE_CYCLE = 2    # (e1 e2 e3) in S3


def zpoints(lo, hi):
    return [Address(0, i) for i in range(lo, hi + 1)]


def test_apply_identity_and_transposition():
    a, b = Address(0, 1), Address(0, 4)
    assert apply(identity(), a) == a
    assert apply(transposition(a, b), a) == b


def test_apply_composition_of_transpositions():
    # compose(u, v) applies v first: c -> b -> a.  Checked on 3 points with the oracle.
    a, b, c = zpoints(0, 2)
    oracle = oracle_compose(swap(3, [(0, 1)]), swap(3, [(1, 2)]))
    assert oracle[2] == 0
    assert apply(compose(transposition(a, b), transposition(b, c)), c) == a
    # read left to right (t_ab first) the same product sends c to b
    assert apply(compose(transposition(b, c), transposition(a, b)), c) == b


def test_compose_with_inverse_is_identity():
    w = FinPerm.from_mapping({(0, 0): (0, 2), (0, 2): (0, 5), (0, 5): (0, 0)})
    assert compose(w, inverse(w)).is_identity()
    t = transposition((0, 1), (0, 3))
    assert inverse(t) == t


def test_compose_matches_matrix_product(rng):
    pts = zpoints(0, 4)
    for _ in range(50):
        u = FinPerm.from_mapping(dict(zip(pts, rng.sample(pts, 5))))
        v = FinPerm.from_mapping(dict(zip(pts, rng.sample(pts, 5))))
        U = [[int(u.apply(pts[j]) == pts[i]) for j in range(5)] for i in range(5)]
        V = [[int(v.apply(pts[j]) == pts[i]) for j in range(5)] for i in range(5)]
        UV = [[sum(U[i][k] * V[k][j] for k in range(5)) for j in range(5)] for i in range(5)]
        uv = compose(u, v)
        assert all(UV[i][j] == int(uv.apply(pts[j]) == pts[i]) for i in range(5) for j in range(5))


def test_transposition_rejects_equal_addresses():
    with pytest.raises(EqualAddresses):
        transposition((0, 1), (0, 1))


def test_compose_rejects_different_carriers():
    E1, E2 = OrderSpec((ZLine(),)), OrderSpec((OmegaUp(),))
    with pytest.raises(CarrierMismatch):
        compose(transposition((0, 0), (0, 1), E1), transposition((0, 0), (0, 1), E2))


def test_omega_transposition_partner_case():
    a = Address(0, 2)
    w = omega_transposition(a, involution_image(TYPE_B, TYPE_B_INV, a), TYPE_B_INV, TYPE_B)
    assert w.support == {Address(0, 2), Address(2, 2)}


def test_omega_transposition_generic_case():
    w = omega_transposition((0, 1), (2, 3), TYPE_B_INV, TYPE_B)
    assert len(w.support) == 4
    for e in w.support:
        assert w.apply(involution_image(TYPE_B, TYPE_B_INV, e)) == \
            involution_image(TYPE_B, TYPE_B_INV, w.apply(e))


def test_omega_transposition_rejects_fixed_point():
    with pytest.raises(FixedPointArgument):
        omega_transposition((1, 0), (2, 0), TYPE_B_INV, TYPE_B)


def test_omega_perm_requires_equivariance():
    with pytest.raises(NotEquivariant):
        OmegaPerm(transposition((0, 0), (0, 1), TYPE_B), TYPE_B_INV, TYPE_B)


def test_length_identity():
    assert length(identity(Z), Z) == Finite(0)


def test_length_long_transposition_matches_bfs():
    pts = zpoints(-1, 5)
    g = enumerate_group(pts, "A")
    t = transposition((0, 0), (0, 5), Z)
    assert bfs_length(g, t) == FROZEN_T_0_5
    assert length(t, Z) == Finite(FROZEN_T_0_5)


def test_length_across_omega_tail_is_infinite():
    E = OrderSpec((OmegaUp(), OmegaUp()))
    assert length(transposition((0, 0), (1, 0), E), E) == INFINITE


def test_length_truncated_identity_and_three_cycle():
    E = OrderSpec((FinChain(3),))
    assert length_truncated(identity(E), E, 1) == 0
    cycle = FinPerm.from_mapping({(0, 0): (0, 1), (0, 1): (0, 2), (0, 2): (0, 0)}, E)
    assert bfs_length(enumerate_group(E.elements(), "A"), cycle) == FROZEN_THREE_CYCLE
    assert length_truncated(cycle, E, 1) == FROZEN_THREE_CYCLE


def test_length_truncated_support_must_fit():
    with pytest.raises(SupportExceedsTruncation):
        length_truncated(transposition((0, 0), (0, 9), Z), Z, 2)


def test_length_truncated_is_nondecreasing_and_converges(rng):
    pts = zpoints(-3, 3)
    for _ in range(40):
        w = FinPerm.from_mapping(dict(zip(pts, rng.sample(pts, len(pts)))), Z)
        seq = [length_truncated(w, Z, r) for r in range(3, 9)]
        assert seq == sorted(seq)
        assert length(w, Z) == Finite(seq[-1])


def test_type_a_lengths_match_bfs_exhaustively():
    E = OrderSpec((FinChain(5),))
    g = enumerate_group(E.elements(), "A")
    for w in g.elements:
        perm = FinPerm.from_mapping({E.elements()[i]: E.elements()[w[i]] for i in range(5)}, E)
        assert length(perm, E) == Finite(bfs_length(g, w))


@pytest.mark.parametrize("blocks,inv", [
    ((OmegaDown(), FinChain(1), OmegaUp()), TYPE_B_INV),
    ((ZLine(),), InvolutionSpec((Pairing(0, 0, "reflect", 0),), Address(0, 0), "B")),
    ((OmegaDown(), OmegaUp()), InvolutionSpec((Pairing(0, 1, "identity"),), None, "C")),
])
def test_omega_lengths_match_bfs_exhaustively(blocks, inv):
    E = OrderSpec(blocks)
    pts = enumerate_truncation(E, inv, 3)
    mirror = mirror_indices(E, inv, pts)
    g = enumerate_group(pts, "BC", mirror)
    for w in g.elements:
        fin = FinPerm.from_mapping({pts[i]: pts[w[i]] for i in range(len(pts))}, E)
        assert length(OmegaPerm(fin, inv, E), E) == Finite(bfs_length(g, w))


def test_is_in_W_P():
    spec = gr_k_omega(2)
    E = spec.carrier
    assert is_in_W_P(identity(E), spec)
    assert is_in_W_P(transposition((1, 0), (1, 7), E), spec)
    assert not is_in_W_P(transposition((0, 1), (1, 0), E), spec)


def test_json_round_trip():
    w = FinPerm.from_mapping({(0, 0): (0, 2), (0, 2): (0, 0)}, Z)
    assert perm_from_json(perm_to_json(w), carrier=Z) == w
    o = omega_transposition((0, 1), (2, 3), TYPE_B_INV, TYPE_B)
    back = perm_from_json(perm_to_json(o), carrier=TYPE_B, inv=TYPE_B_INV)
    assert isinstance(back, OmegaPerm) and back.moves == o.moves


offsets = st.lists(st.integers(-6, 6), min_size=1, max_size=6, unique=True)


@settings(max_examples=60, deadline=None)
@given(offsets, st.randoms(use_true_random=False))
def test_length_is_inverse_invariant(pts, r):
    pts = [Address(0, x) for x in pts]
    img = pts[:]
    r.shuffle(img)
    w = FinPerm.from_mapping(dict(zip(pts, img)), Z)
    assert length(w, Z) == length(inverse(w), Z)


@settings(max_examples=60, deadline=None)
@given(offsets, st.randoms(use_true_random=False))
def test_length_subadditive_over_composition(pts, r):
    pts = [Address(0, x) for x in pts]
    a, b = pts[:], pts[:]
    r.shuffle(a)
    r.shuffle(b)
    u = FinPerm.from_mapping(dict(zip(pts, a)), Z)
    v = FinPerm.from_mapping(dict(zip(pts, b)), Z)
    assert length(compose(u, v), Z) <= length(u, Z) + length(v, Z)
