"""Shared builders for the test suite."""

import random

import pytest

from indflag.carrier import (Address, FinChain, InvolutionSpec, OmegaDown, OmegaUp, OrderSpec,
                             Pairing, ZLine, involution_image)
from indflag.cells import (Const, ExplicitList, MonotoneInto, Periodic, SurjectionSpec,
                           TargetOrder)
from indflag.permutations import as_omega, compose, identity, omega_transposition

LO, MID, HI = Address(0, 0), Address(0, 1), Address(0, 2)
A2 = OrderSpec((FinChain(2),), "A")
A3 = OrderSpec((FinChain(3),), "A")


def surjection(blocks, rules, target=A2, inv=None, target_inv=None):
    return SurjectionSpec(OrderSpec(tuple(blocks)), TargetOrder(target, target_inv),
                          tuple(rules), inv)


def grassmannian_finite(n, subset):
    """``Gr(k, n)`` with ``subset`` (offsets) as the reference fiber of the smaller label."""
    labels = tuple(LO if i in subset else MID for i in range(n))
    return surjection([FinChain(n)], [ExplicitList(labels)])


def full_flag_finite(n):
    A = OrderSpec((FinChain(n),), "A")
    return surjection([FinChain(n)], [MonotoneInto(0)], target=A)


def gr_k_omega(k):
    return surjection([FinChain(k), OmegaUp()], [Const(LO), Const(MID)])


def gr_evens_Z():
    return surjection([ZLine()], [Periodic((LO, MID))])


def gr_omega_type_b():
    E = OrderSpec((FinChain(1), OmegaUp(), FinChain(1), OmegaDown(), FinChain(1)))
    inv = InvolutionSpec((Pairing(0, 4, "identity"), Pairing(1, 3, "identity"),
                          Pairing(2, 2, "reflect")), Address(2, 0), "B")
    iA = InvolutionSpec((Pairing(0, 0, "reflect"),), MID, "B")
    rules = (Const(LO), Const(MID), Const(MID), Const(MID), Const(HI))
    return SurjectionSpec(E, TargetOrder(A3, iA), rules, inv)


def isotropic_type_c():
    E = OrderSpec((OmegaDown(), FinChain(2), OmegaUp()))
    inv = InvolutionSpec((Pairing(0, 2, "identity"), Pairing(1, 1, "reflect")), None, "C")
    iA = InvolutionSpec((Pairing(0, 0, "reflect"),), None, "C")
    rules = (Const(LO), ExplicitList((LO, MID)), Const(MID))
    return SurjectionSpec(E, TargetOrder(A2, iA), rules, inv)


def random_perm(rng, points, max_support, carrier=None):
    """A random permutation of at most ``max_support`` of ``points``."""
    k = rng.randint(0, min(max_support, len(points)))
    chosen = rng.sample(list(points), k)
    shuffled = chosen[:]
    rng.shuffle(shuffled)
    from indflag.permutations import FinPerm
    return FinPerm.from_mapping(dict(zip(chosen, shuffled)), carrier)


def random_omega_perm(rng, E, inv, points, n_moves):
    free = [p for p in points if involution_image(E, inv, p) != p]
    w = as_omega(identity(E), inv, E)
    for _ in range(n_moves):
        a, b = rng.sample(free, 2)
        w = compose(w, omega_transposition(a, b, inv, E))
    return w


@pytest.fixture
def rng():
    return random.Random(20261016)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, ok, summary):
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} {summary}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
