"""Finiteness criteria: Borel-fixed points and the all-cells-finite test.

A cell is a single point exactly when its labeling is nondecreasing along the
carrier.  :func:`borel_fixed_point` looks for a finitely supported ``w`` making
``sigma0 o w^{-1}`` nondecreasing.

For a finite target this is a threshold problem.  For each label ``a`` the
nondecreasing labeling must send a left segment (ending at some cut ``c``) below
``a`` and the rest at or above ``a``.  The segment has to differ from
``L = {x : sigma0(x) < a}`` in finitely many points and by equally many on each
side, so ``c`` is found by first checking that the block tails are "in ``L``"
then "out of ``L``" and then walking a cut until the two differences balance.
"""

from __future__ import annotations

from typing import Optional

from .carrier import (INF, Finite, OrderSpec, block_key_window, embeds_in_Z, enumerate_truncation,
                      key_range, left_of, normalize_cut, shift_cut)
from .cells import (Run, SurjectionSpec, TargetOrder, cell_dimension, cell_from_labels,
                    is_nondecreasing, keys_in_window, runs_of, _glued_count)
from .errors import TrivialParabolic, UnsupportedRuleCombination
from .permutations import FinPerm, OmegaPerm, Perm, perm_to_json

# Radius budget for the window search used with infinite targets.
WINDOW_SEARCH_RADIUS = 40


def _identity(spec: SurjectionSpec) -> Perm:
    fin = FinPerm((), spec.carrier)
    if spec.is_omega:
        return OmegaPerm(fin, spec.involution, spec.carrier)
    return fin


def _part(spec: SurjectionSpec, j: int, lo_cut, hi_cut) -> Optional[Run]:
    E = spec.carrier
    window = block_key_window(E, j, lo_cut, hi_cut)
    if window is None:
        return None
    return Run(E.blocks[j], spec.rules[j], window[0], window[1])


def _start(A: OrderSpec):
    return (-1, -INF)


def _end(A: OrderSpec):
    return (A.n_blocks, -INF)


def _side_sets(spec: SurjectionSpec, cut, level):
    """Key sets of ``left(cut) - L`` and ``L - left(cut)`` for ``L = {label < level}``."""
    E, A = spec.carrier, spec.A
    begin, finish = (0, -INF), (E.n_blocks, -INF)
    out = []
    for j in range(E.n_blocks):
        left = _part(spec, j, begin, cut)
        right = _part(spec, j, cut, finish)
        if left is not None:
            out.append((j, "left", keys_in_window(A, left, level, _end(A))))
        if right is not None:
            out.append((j, "right", keys_in_window(A, right, _start(A), level)))
    return out


def _tail_status(spec: SurjectionSpec, j: int, side: str, level) -> Optional[bool]:
    """Whether the tail eventually lies below ``level``; ``None`` if it alternates."""
    kind = spec.carrier.blocks[j]
    lo, hi = key_range(kind)
    tail = Run(kind, spec.rules[j], lo, min(hi, 0)) if side == "low" else \
        Run(kind, spec.rules[j], max(lo, 0), hi)
    A = spec.A
    below = not keys_in_window(A, tail, _start(A), level).count().is_finite
    above = not keys_in_window(A, tail, level, _end(A)).count().is_finite
    if below and above:
        return None
    return below


def _balanced_cut(spec: SurjectionSpec, level):
    """The cut ``c`` with ``left(c)`` a finite rearrangement of ``{label < level}``."""
    E = spec.carrier
    tails = []
    for j, kind in enumerate(E.blocks):
        lo, hi = key_range(kind)
        if lo == -INF:
            tails.append((j, "low"))
        if hi == INF:
            tails.append((j, "high"))
    status = []
    for j, side in tails:
        s = _tail_status(spec, j, side, level)
        if s is None:
            return None
        status.append(s)
    first_out = next((i for i, s in enumerate(status) if not s), len(status))
    if any(status[first_out:]):
        return None
    # The cut lies after the last "in" tail and before the first "out" tail.
    # A bound is closed at a block boundary and open inside an integer line.
    lower = upper = None
    if first_out == 0:
        lower = (0, -INF)
    else:
        j_in, side = tails[first_out - 1]
        if side == "high":
            lower = (j_in + 1, -INF)
    if first_out == len(tails):
        upper = (E.n_blocks, -INF)
    else:
        j_out, side = tails[first_out]
        if side == "low":
            upper = (j_out, -INF)
    if lower is not None:
        ref = lower
    elif upper is not None:
        ref = upper
    else:
        ref = (j_in, 0) if j_in == j_out else (j_in + 1, -INF)
    ref = normalize_cut(E, ref)
    balance = 0
    for _, where, keys in _side_sets(spec, ref, level):
        n = keys.count()
        if not n.is_finite:
            return None
        balance += n.n if where == "left" else -n.n
    cut = shift_cut(E, ref, -balance)
    if cut is None:
        return None
    return cut


def _fixed_point_finite_target(spec: SurjectionSpec) -> Optional[Perm]:
    E, A = spec.carrier, spec.A
    labels = A.elements()
    cuts = []
    for a in labels[1:]:
        cut = _balanced_cut(spec, A.position(a))
        if cut is None:
            return None
        cuts.append(cut)
    changed = set()
    for cut, a in zip(cuts, labels[1:]):
        for j, _, keys in _side_sets(spec, cut, A.position(a)):
            changed.update(E.address(j, k) for k in keys.keys())
    new = {}
    for x in changed:
        rank = sum(1 for c in cuts if not left_of(E, x, c))
        new[x] = labels[rank]
    cell = cell_from_labels(spec, new)
    if cell_dimension(cell) != Finite(0):
        return None
    return cell.w


def _outside_count(spec: SurjectionSpec, window):
    return _glued_count(spec, {}, runs_of(spec, removed=window))


def _fixed_point_window_search(spec: SurjectionSpec) -> Optional[Perm]:
    E, A = spec.carrier, spec.A
    inv = spec.involution if spec.is_omega else None
    for r in range(1, WINDOW_SEARCH_RADIUS + 1):
        window = enumerate_truncation(E, inv, r)
        current = [spec.label(x) for x in window]
        ordered = sorted(current, key=A.position)
        new = {x: a for x, a, b in zip(window, ordered, current) if a != b}
        cell = cell_from_labels(spec, new)
        if cell_dimension(cell) == Finite(0):
            return cell.w
        if not _outside_count(spec, window).is_finite:
            return None
    raise UnsupportedRuleCombination(
        f"no nondecreasing rearrangement found within radius {WINDOW_SEARCH_RADIUS}")


def borel_fixed_point(spec: SurjectionSpec) -> Optional[Perm]:
    """A finitely supported ``w`` with ``sigma0 o w^{-1}`` nondecreasing, or ``None``.

    The answer is unique as a cell; ``w`` is the canonical representative.
    """
    if is_nondecreasing(spec):
        return _identity(spec)
    if spec.A.is_finite:
        return _fixed_point_finite_target(spec)
    return _fixed_point_window_search(spec)


def exists_finite_dimensional_cell(spec: SurjectionSpec) -> bool:
    return borel_fixed_point(spec) is not None


def all_cells_finite(spec: SurjectionSpec) -> bool:
    """Every cell is finite dimensional: a fixed point exists and the carrier embeds in Z."""
    if spec.A.size() == Finite(1):
        raise TrivialParabolic("a one-element target leaves a single cell")
    return exists_finite_dimensional_cell(spec) and embeds_in_Z(spec.carrier)


def is_flag(target: TargetOrder) -> bool:
    return embeds_in_Z(target.order)


def verdict(spec: SurjectionSpec) -> dict:
    """JSON verdict ``{"fixed_point", "all_finite", "reason"}``."""
    if spec.A.size() == Finite(1):
        raise TrivialParabolic("a one-element target leaves a single cell")
    w = borel_fixed_point(spec)
    embeds = embeds_in_Z(spec.carrier)
    if w is None:
        reason = "no finite rearrangement of sigma0 is nondecreasing"
    elif not embeds:
        reason = "a fixed point exists but the carrier has an infinite interval"
    else:
        reason = "a fixed point exists and the carrier embeds in the integers"
    return {"fixed_point": None if w is None else perm_to_json(w),
            "all_finite": w is not None and embeds,
            "reason": reason}
