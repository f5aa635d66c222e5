"""Smoothness of Schubert ind-varieties.

Two families are decidable here.

*Maximal flags.*  The target labels every carrier element differently, so it
is a second total order ``<_F`` on the carrier.  A cell is singular exactly when
some ``e1 < e2 < e3 < e4`` carries one of the patterns 3412 or 4231 in ``<_F``.
Over an infinite carrier the search runs on a finite window: the support plus
enough background elements from every block tail.

*Grassmannians.*  The target has two labels and one fiber is finite.  In a
finite window the Schubert variety of a subset ``S`` is smooth iff at most one
of the gaps in front of the elements of ``S`` is nonempty (its partition is a
rectangle).  The same holds for the complement read in reverse order.

Both rules only transfer from windows to the whole carrier under hypothesis
(H): the carrier order, or the order of the target labels with finite
intermediate fibers, embeds in the integers.  Without it no ``Smooth`` or
``Singular`` claim is made.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .carrier import (FinChain, Finite, OmegaDown, OmegaUp, OrderSpec, ZLine,
                      count_between_cuts, cut_after, cut_before, embeds_in_Z, end_cut,
                      enumerate_truncation, first_at_or_after, interval_cardinality,
                      last_before, start_cut)
from .cells import (CellDescriptor, Const, ExplicitList, MonotoneInto, Periodic,
                    SurjectionSpec, TargetOrder, keys_in_window, label_fiber, runs_of)
from .errors import NotTwoElements, UnsupportedFamily
from .permutations import Perm, inverse


# ---------------------------------------------------------------------------
# Verdicts


@dataclass(frozen=True)
class Smooth:
    note: str = ""

    def to_json(self) -> dict:
        out = {"verdict": "smooth"}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Singular:
    """``pattern``/``elements`` for a forbidden pattern, ``truncation`` for a window."""

    pattern: Optional[str] = None
    elements: tuple = ()
    truncation: tuple = ()

    def to_json(self) -> dict:
        witness = {}
        if self.pattern is not None:
            witness["pattern"] = self.pattern
            witness["elements"] = [list(e) for e in self.elements]
        if self.truncation:
            witness["truncation"] = [list(e) for e in self.truncation]
        return {"verdict": "singular", "witness": witness}


@dataclass(frozen=True)
class Inconclusive:
    reason: str

    def to_json(self) -> dict:
        return {"verdict": "inconclusive", "reason": self.reason}


SmoothnessVerdict = Union[Smooth, Singular, Inconclusive]


# ---------------------------------------------------------------------------
# Two orders on one carrier


@dataclass(frozen=True)
class TwoOrderCarrier:
    """The carrier with its order and a second order given by an injective labeling.

    ``e <_F e'`` iff ``labels(e) < labels(e')`` in the target of ``labels``.
    """

    order_B: OrderSpec
    labels: SurjectionSpec

    def __post_init__(self):
        if self.labels.carrier != self.order_B:
            raise UnsupportedFamily("the labeling must live on the carrier order")

    def f_position(self, e):
        return self.labels.label_position(e)


def natural_two_order(order: OrderSpec, reverse: bool = False) -> TwoOrderCarrier:
    """Both orders equal, or the second one reversed."""

    def flip(kind):
        if isinstance(kind, OmegaUp):
            return OmegaDown()
        if isinstance(kind, OmegaDown):
            return OmegaUp()
        return kind

    if not reverse:
        rules = tuple(MonotoneInto(j) for j in range(order.n_blocks))
        target = OrderSpec(order.blocks, "F")
    else:
        nb = order.n_blocks
        target = OrderSpec(tuple(flip(k) for k in reversed(order.blocks)), "F")
        rules = []
        for j, kind in enumerate(order.blocks):
            if isinstance(kind, FinChain):
                rules.append(MonotoneInto(nb - 1 - j, -1, kind.length - 1))
            elif isinstance(kind, ZLine):
                rules.append(MonotoneInto(nb - 1 - j, -1, 0))
            else:
                rules.append(MonotoneInto(nb - 1 - j, 1, 0))
        rules = tuple(rules)
    return TwoOrderCarrier(order, SurjectionSpec(order, TargetOrder(target), rules))


def _is_injective_rule(spec: SurjectionSpec, j: int) -> bool:
    rule, kind = spec.rules[j], spec.carrier.blocks[j]
    if isinstance(rule, MonotoneInto):
        return True
    if isinstance(rule, ExplicitList):
        return len(set(rule.labels)) == len(rule.labels)
    if isinstance(rule, Const):
        return isinstance(kind, FinChain) and kind.length == 1
    return False


def is_maximal_family(spec: SurjectionSpec, radius: int = 12) -> bool:
    """Every fiber is a single point (checked blockwise and on a window)."""
    if not all(_is_injective_rule(spec, j) for j in range(spec.carrier.n_blocks)):
        return False
    window = enumerate_truncation(spec.carrier, None, radius)
    labels = [spec.label(e) for e in window]
    return len(set(labels)) == len(labels)


def hypothesis_H(spec: SurjectionSpec) -> bool:
    """The carrier embeds in Z, or the target does with finite inner fibers."""
    if embeds_in_Z(spec.carrier):
        return True
    A = spec.A
    if not embeds_in_Z(A):
        return False
    if is_maximal_family(spec):
        return True
    if A.is_finite:
        inner = A.elements()[1:-1]
        return all(_fiber_size(spec, a).is_finite for a in inner)
    return False


def _fiber_size(spec: SurjectionSpec, label) -> Finite:
    A = spec.A
    pos = A.position(label)
    total = Finite(0)
    for _, run in runs_of(spec):
        total = total + keys_in_window(A, run, pos, (pos[0], pos[1] + 1)).count()
    return total


# ---------------------------------------------------------------------------
# Maximal flags


def _find_pattern(points: list, rank: dict):
    """First 3412 or 4231 occurrence among ``points`` (already sorted)."""
    for quad in itertools.combinations(points, 4):
        r1, r2, r3, r4 = (rank[e] for e in quad)
        if r3 < r4 < r1 < r2:
            return "3412", quad
        if r4 < r2 < r3 < r1:
            return "4231", quad
    return None


def _window_radius(spec: SurjectionSpec, support) -> int:
    r = 3 + max((abs(e.offset) for e in support), default=0)
    for rule in spec.rules:
        if isinstance(rule, MonotoneInto):
            r += abs(rule.base) + abs(rule.stride)
        elif isinstance(rule, Periodic):
            r += len(rule.pattern)
    return r


def _pattern_scan(two: TwoOrderCarrier, sigma: Perm, points) -> Optional[Singular]:
    E = two.order_B
    points = E.sorted(set(points))
    rank = {e: two.f_position(sigma.apply(e)) for e in points}
    hit = _find_pattern(points, rank)
    if hit is None:
        return None
    return Singular(pattern=hit[0], elements=tuple(hit[1]))


def maximal_flag_smooth(two: TwoOrderCarrier, sigma: Perm) -> SmoothnessVerdict:
    """Pattern test for the cell of the permutation ``sigma`` (labeling ``e -> sigma(e)``)."""
    spec = two.labels
    if not hypothesis_H(spec):
        return Inconclusive("neither the carrier nor the second order embeds in the integers")
    E = two.order_B
    support = set(sigma.support)
    if E.is_finite:
        window = E.elements()
    else:
        window = enumerate_truncation(E, None, _window_radius(spec, support))
    found = _pattern_scan(two, sigma, set(window) | support)
    return found if found is not None else Smooth()


# ---------------------------------------------------------------------------
# Grassmannians


def _gaps_smooth(points: list, subset: set) -> bool:
    """Rectangle test: at most one nonempty gap in front of the subset's elements."""
    nonempty, gap = 0, 0
    for e in points:
        if e in subset:
            if gap:
                nonempty += 1
            gap = 0
        else:
            gap += 1
    return nonempty <= 1


def grassmannian_window_smooth(points: list, subset) -> bool:
    """Smoothness of the Schubert variety of ``subset`` in the grassmannian of ``points``."""
    return _gaps_smooth(list(points), set(subset))


def gr2_smooth(sigma, border: OrderSpec) -> SmoothnessVerdict:
    """``{s1 < s2}`` is smooth iff ``s1`` is the minimum or the two are adjacent."""
    pts = {border.check(a) for a in sigma}
    if len(pts) != 2:
        raise NotTwoElements("expected exactly two distinct elements")
    s1, s2 = border.sorted(pts)
    before = last_before(border, cut_before(border, s1))
    at_min = count_between_cuts(border, start_cut(border), cut_before(border, s1)) == Finite(0)
    adjacent = interval_cardinality(border, s1, s2) == Finite(0)
    if at_min or adjacent:
        return Smooth()
    if before is None:
        before = first_at_or_after(border, start_cut(border))
    middle = first_at_or_after(border, cut_after(border, s1))
    return Singular(truncation=tuple(border.sorted([before, s1, middle, s2])))


def _gr_regions(E: OrderSpec, finite_fiber: list, reverse: bool):
    """Exact emptiness of the gaps that decide smoothness over the whole carrier."""
    pts = E.sorted(finite_fiber)
    flags = []
    if not reverse:
        lo = start_cut(E)
        for p in pts:
            flags.append(count_between_cuts(E, lo, cut_before(E, p)) != Finite(0))
            lo = cut_after(E, p)
    else:
        for p, q in zip(pts, pts[1:] + [None]):
            hi = end_cut(E) if q is None else cut_before(E, q)
            flags.append(count_between_cuts(E, cut_after(E, p), hi) != Finite(0))
    return sum(flags) <= 1


def _grassmannian_data(cell: CellDescriptor):
    """``(low, high, subset, reverse)`` for a grassmannian cell, else ``None``."""
    spec = cell.base
    A = spec.A
    if A.size() != Finite(2):
        return None
    low, high = A.elements()
    for label, reverse in ((low, False), (high, True)):
        fiber = label_fiber(cell, label)
        if fiber is not None:
            return low, label, fiber, reverse
    return None


def truncation_scan(cell: CellDescriptor, max_radius: int = 8) -> SmoothnessVerdict:
    """Grow windows around the support until a singular one appears or smoothness is certified."""
    spec = cell.base
    E = spec.carrier
    if spec.is_omega:
        raise UnsupportedFamily("isotropic cells are outside the decidable families")
    support = set(cell.w.support)
    holds = hypothesis_H(spec)

    def windows():
        yield E.sorted(support)
        for r in range(1, max_radius + 1):
            yield E.sorted(support | set(enumerate_truncation(E, None, r)))

    if is_maximal_family(spec):
        two = TwoOrderCarrier(E, spec)
        sigma = inverse(cell.w)
        for window in windows():
            found = _pattern_scan(two, sigma, window)
            if found is not None:
                if not holds:
                    return Inconclusive("a window is singular but hypothesis (H) fails")
                return Singular(pattern=found.pattern, elements=found.elements,
                                truncation=tuple(window))
        if not holds:
            return Inconclusive("hypothesis (H) fails")
        verdict = maximal_flag_smooth(two, sigma)
        if isinstance(verdict, Smooth):
            return Smooth(f"no pattern within radius {max_radius} or the certified window")
        return Inconclusive(f"radius budget {max_radius} exhausted")

    data = _grassmannian_data(cell)
    if data is None:
        raise UnsupportedFamily("only maximal flags and grassmannians with a finite fiber")
    _, label, fiber, reverse = data
    for window in windows():
        inside = [e for e in window if e in fiber]
        points = list(reversed(window)) if reverse else window
        if not _gaps_smooth(points, set(inside)):
            return Singular(truncation=tuple(window))
    if _gr_regions(E, list(fiber), reverse):
        return Smooth("at most one nonempty gap in the whole carrier")
    return Inconclusive(f"radius budget {max_radius} exhausted")
