"""Surjections onto a target order, Schubert cells and their inversion counts.

A surjection ``sigma0: E -> A`` is given by one :class:`LabelRule` per carrier
block.  A cell is ``sigma = sigma0 o w^{-1}`` for a finitely supported ``w``.

Inversion counts are exact and may be infinite.  They are assembled from a
small kernel: the carrier is cut into *points* (where ``sigma`` differs from
``sigma0``, with explicit labels) and *runs* (maximal key intervals of a block
free of points, labelled by the block rule).  Every pair count between runs
and points is then a closed-form count over a rule.

All label comparisons go through positions ``(block, key)`` of the target
order and cuts between them, exactly as for the carrier.
"""

from __future__ import annotations

import math
from bisect import bisect_right, insort
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Union

from .carrier import (INF, INFINITE, Address, ExtendedCount, Finite, InvolutionSpec,
                      OrderSpec, Validation, address_from_json, address_to_json,
                      computed_fixed_points, involution_image, is_infinite, key_range,
                      left_of, less, lower_half_end, offset_to_key, order_from_json,
                      order_to_json, range_size, upper_half_start, validate_involution)
from .carrier import OmegaDown as _OmegaDown
from .errors import (InvalidRule, OrbitMismatch, SchemaError, SizeMismatch,
                     UnsupportedRuleCombination)
from .permutations import FinPerm, OmegaPerm, Perm, as_omega, inverse

# Closed-form sums over more terms than this are refused rather than looped.
ENUMERATION_LIMIT = 1_000_000


# ---------------------------------------------------------------------------
# Rules and specifications


@dataclass(frozen=True)
class TargetOrder:
    """The label order ``A``, optionally with its involution."""

    order: OrderSpec
    involution: Optional[InvolutionSpec] = None


@dataclass(frozen=True)
class Const:
    alpha: Address

    def __post_init__(self):
        object.__setattr__(self, "alpha", Address(*self.alpha))


@dataclass(frozen=True)
class MonotoneInto:
    """Offset ``x`` goes to offset ``stride * x + base`` of target block ``a_block``."""

    a_block: int
    stride: int = 1
    base: int = 0


@dataclass(frozen=True)
class Periodic:
    """Offset ``x`` goes to ``pattern[x mod len(pattern)]``."""

    pattern: tuple

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(Address(*a) for a in self.pattern))


@dataclass(frozen=True)
class ExplicitList:
    """Offset ``x`` of a finite block goes to ``labels[x]``."""

    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(Address(*a) for a in self.labels))


LabelRule = Union[Const, MonotoneInto, Periodic, ExplicitList]


def _slope(carrier_kind, target_kind, stride: int, base: int):
    """Key-space form ``akey = m * ekey + c`` of a monotone rule."""
    se = -1 if isinstance(carrier_kind, _OmegaDown) else 1
    sa = -1 if isinstance(target_kind, _OmegaDown) else 1
    return sa * se * stride, sa * base


@dataclass(frozen=True)
class SurjectionSpec:
    """``sigma0: E -> A`` given blockwise."""

    carrier: OrderSpec
    target: TargetOrder
    rules: tuple
    involution: Optional[InvolutionSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def is_omega(self) -> bool:
        return self.involution is not None and self.target.involution is not None

    @property
    def A(self) -> OrderSpec:
        return self.target.order

    def label(self, e) -> Address:
        e = self.carrier.check(e)
        return rule_label(self.rules[e.block], e.offset)

    def label_position(self, e):
        return self.A.position(self.label(e))


def rule_label(rule: LabelRule, offset: int) -> Address:
    if isinstance(rule, Const):
        return rule.alpha
    if isinstance(rule, MonotoneInto):
        return Address(rule.a_block, rule.stride * offset + rule.base)
    if isinstance(rule, Periodic):
        return rule.pattern[offset % len(rule.pattern)]
    if isinstance(rule, ExplicitList):
        return rule.labels[offset]
    raise InvalidRule(f"unknown rule {rule!r}")


# ---------------------------------------------------------------------------
# Runs and key sets


@dataclass(frozen=True)
class Run:
    """A key interval ``[lo, hi]`` of one carrier block, labelled by its rule.

    ``lo``/``hi`` default to the whole block and may be infinite.
    """

    kind: object
    rule: LabelRule
    lo: float = None
    hi: float = None

    def __post_init__(self):
        a, b = key_range(self.kind)
        if self.lo is None:
            object.__setattr__(self, "lo", a)
        if self.hi is None:
            object.__setattr__(self, "hi", b)

    @property
    def size(self) -> ExtendedCount:
        return range_size(self.lo, self.hi)

    def offset(self, key: int) -> int:
        return offset_to_key(self.kind, key)

    def label(self, key: int) -> Address:
        return rule_label(self.rule, self.offset(key))


@dataclass(frozen=True)
class KeySet:
    """Keys ``k`` in ``[lo, hi]`` whose offset is in ``residues`` modulo ``modulus``.

    ``explicit`` replaces the description by a plain tuple of keys.
    """

    lo: float
    hi: float
    modulus: int = 1
    residues: tuple = (0,)
    sign: int = 1
    explicit: Optional[tuple] = None

    def count(self) -> ExtendedCount:
        if self.explicit is not None:
            return Finite(len(self.explicit))
        if self.lo > self.hi or not self.residues:
            return Finite(0)
        if self.lo == -INF or self.hi == INF:
            return INFINITE
        olo, ohi = sorted((self.sign * int(self.lo), self.sign * int(self.hi)))
        p = self.modulus
        return Finite(sum((ohi - r) // p - (olo - 1 - r) // p for r in self.residues))

    def keys(self) -> list:
        if self.explicit is not None:
            return list(self.explicit)
        size = self.count()
        if not size.is_finite:
            raise UnsupportedRuleCombination("cannot list an infinite key set")
        if size.n == 0:
            return []
        if self.hi - self.lo + 1 > ENUMERATION_LIMIT:
            raise UnsupportedRuleCombination("key set too large to enumerate")
        res = set(self.residues)
        return [k for k in range(int(self.lo), int(self.hi) + 1)
                if (self.sign * k) % self.modulus in res]


_EMPTY = KeySet(1, 0)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def keys_in_window(A: OrderSpec, run: Run, lo_cut, hi_cut) -> KeySet:
    """Keys of ``run`` whose label position lies in ``[lo_cut, hi_cut)``."""
    lo_cut, hi_cut = tuple(lo_cut), tuple(hi_cut)
    rule = run.rule
    if run.lo > run.hi:
        return _EMPTY
    if isinstance(rule, Const):
        pos = A.position(rule.alpha)
        return KeySet(run.lo, run.hi) if lo_cut <= pos < hi_cut else _EMPTY
    if isinstance(rule, Periodic):
        p = len(rule.pattern)
        good = tuple(r for r in range(p) if lo_cut <= A.position(rule.pattern[r]) < hi_cut)
        sign = -1 if isinstance(run.kind, _OmegaDown) else 1
        return KeySet(run.lo, run.hi, p, good, sign)
    if isinstance(rule, ExplicitList):
        keys = tuple(k for k in range(int(run.lo), int(run.hi) + 1)
                     if lo_cut <= A.position(run.label(k)) < hi_cut)
        return KeySet(run.lo, run.hi, explicit=keys)
    if isinstance(rule, MonotoneInto):
        ab = rule.a_block
        m, c = _slope(run.kind, A.blocks[ab], rule.stride, rule.base)
        lo, hi = run.lo, run.hi
        # lower bound: (ab, m*k + c) >= lo_cut
        if ab < lo_cut[0]:
            return _EMPTY
        if ab == lo_cut[0] and lo_cut[1] != -INF:
            if lo_cut[1] == INF:
                return _EMPTY
            t = int(lo_cut[1])
            if m > 0:
                lo = max(lo, _ceil_div(t - c, m))
            else:
                hi = min(hi, (t - c) // m)
        # upper bound: (ab, m*k + c) < hi_cut
        if ab > hi_cut[0]:
            return _EMPTY
        if ab == hi_cut[0] and hi_cut[1] != INF:
            if hi_cut[1] == -INF:
                return _EMPTY
            t = int(hi_cut[1]) - 1
            if m > 0:
                hi = min(hi, (t - c) // m)
            else:
                lo = max(lo, _ceil_div(t - c, m))
        return KeySet(lo, hi) if lo <= hi else _EMPTY
    raise InvalidRule(f"unknown rule {rule!r}")


def _after(pos):
    return pos[0], pos[1] + 1


def _start():
    return (-1, -INF)


def _end(A: OrderSpec):
    return (A.n_blocks, -INF)


def count_below(A: OrderSpec, run: Run, pos) -> ExtendedCount:
    """Keys of ``run`` whose label is strictly below position ``pos``."""
    return keys_in_window(A, run, _start(), pos).count()


def count_above(A: OrderSpec, run: Run, pos) -> ExtendedCount:
    """Keys of ``run`` whose label is strictly above position ``pos``."""
    return keys_in_window(A, run, _after(pos), _end(A)).count()


def _label_counts(A: OrderSpec, run: Run):
    """``[(position, multiplicity)]`` for rules with finitely many labels."""
    rule = run.rule
    if isinstance(rule, MonotoneInto):
        return None
    if run.lo > run.hi:
        return []
    if isinstance(rule, Const):
        return [(A.position(rule.alpha), run.size)]
    if isinstance(rule, ExplicitList):
        counts = Counter(A.position(run.label(k)) for k in range(int(run.lo), int(run.hi) + 1))
        return [(pos, Finite(n)) for pos, n in counts.items()]
    sign = -1 if isinstance(run.kind, _OmegaDown) else 1
    p = len(rule.pattern)
    by_pos = {}
    for r in range(p):
        pos = A.position(rule.pattern[r])
        by_pos.setdefault(pos, []).append(r)
    return [(pos, KeySet(run.lo, run.hi, p, tuple(rs), sign).count())
            for pos, rs in by_pos.items()]


def _finite_inversions(values) -> int:
    """Pairs ``i < j`` with ``values[j] < values[i]``."""
    seen = []
    count = 0
    for v in values:
        count += len(seen) - bisect_right(seen, v)
        insort(seen, v)
    return count


def _same_run_pairs(A: OrderSpec, run: Run) -> ExtendedCount:
    rule = run.rule
    if run.lo > run.hi or isinstance(rule, Const):
        return Finite(0)
    if isinstance(rule, MonotoneInto):
        m, _ = _slope(run.kind, A.blocks[rule.a_block], rule.stride, rule.base)
        if m > 0:
            return Finite(0)
        n = run.size
        return n if not n.is_finite else Finite(n.n * (n.n - 1) // 2)
    if not run.size.is_finite:
        distinct = {A.position(a) for a in rule.pattern}
        return INFINITE if len(distinct) > 1 else Finite(0)
    if run.hi - run.lo + 1 > ENUMERATION_LIMIT:
        raise UnsupportedRuleCombination("run too long for a direct count")
    labels = [A.position(run.label(k)) for k in range(int(run.lo), int(run.hi) + 1)]
    return Finite(_finite_inversions(labels))


def _monotone_pairs(A: OrderSpec, x: Run, y: Run) -> ExtendedCount:
    """Pairs for two monotone runs with ``x`` entirely before ``y``."""
    bx, by = x.rule.a_block, y.rule.a_block
    if bx != by:
        return x.size * y.size if bx > by else Finite(0)
    my, cy = _slope(y.kind, A.blocks[by], y.rule.stride, y.rule.base)
    if x.lo > x.hi or y.lo > y.hi:
        return Finite(0)
    low_end = y.lo if my > 0 else y.hi
    if abs(low_end) == INF:
        return INFINITE
    floor_label = (by, my * int(low_end) + cy)
    hits = keys_in_window(A, x, _after(floor_label), _end(A))
    n = hits.count()
    if not n.is_finite:
        return INFINITE
    if n.n > ENUMERATION_LIMIT:
        raise UnsupportedRuleCombination("monotone pair count too large to sum")
    total = Finite(0)
    for k in hits.keys():
        total = total + count_below(A, y, A.position(x.label(k)))
    return total


def pair_inversion_count(A: OrderSpec, x: Run, y: Optional[Run] = None,
                         relation: str = "before") -> ExtendedCount:
    """Inverted pairs inside one run (``relation="same"``) or across two runs.

    With ``relation="before"`` every key of ``x`` precedes every key of ``y``
    and the result is ``#{(s, t) in x * y : label(s) > label(t)}``.
    """
    if relation == "same":
        return _same_run_pairs(A, x)
    if relation != "before" or y is None:
        raise ValueError('relation must be "same" or "before" with a second run')
    lx = _label_counts(A, x)
    if lx is not None:
        total = Finite(0)
        for pos, mult in lx:
            if mult == Finite(0):
                continue
            total = total + mult * count_below(A, y, pos)
        return total
    ly = _label_counts(A, y)
    if ly is not None:
        total = Finite(0)
        for pos, mult in ly:
            if mult == Finite(0):
                continue
            total = total + mult * count_above(A, x, pos)
        return total
    return _monotone_pairs(A, x, y)


# ---------------------------------------------------------------------------
# Validation


def _check_label(A: OrderSpec, a, where: str, reasons: list):
    try:
        A.check(a)
    except Exception:
        reasons.append(f"{where}: label {tuple(a)} is not an element of the target")
        return False
    return True


def _finite_images(spec: SurjectionSpec, j: int) -> Optional[list]:
    """All labels of block ``j`` when that set is finite, else ``None``."""
    kind, rule = spec.carrier.blocks[j], spec.rules[j]
    if isinstance(rule, Const):
        return [rule.alpha]
    if isinstance(rule, Periodic):
        return list(rule.pattern)
    if isinstance(rule, ExplicitList):
        return list(rule.labels)
    if not is_infinite(kind):
        return [rule_label(rule, x) for x in range(kind.length)]
    return None


def _rule_reasons(spec: SurjectionSpec, j: int) -> list:
    kind, rule = spec.carrier.blocks[j], spec.rules[j]
    A = spec.A
    reasons = []
    where = f"block {j}"
    if isinstance(rule, Const):
        _check_label(A, rule.alpha, where, reasons)
    elif isinstance(rule, Periodic):
        if not is_infinite(kind):
            reasons.append(f"{where}: periodic rules need an infinite block")
        if not rule.pattern:
            reasons.append(f"{where}: empty periodic pattern")
        for a in rule.pattern:
            _check_label(A, a, where, reasons)
    elif isinstance(rule, ExplicitList):
        if is_infinite(kind) or len(rule.labels) != kind.length:
            reasons.append(f"{where}: explicit labels need a finite block of matching length")
        for a in rule.labels:
            _check_label(A, a, where, reasons)
    elif isinstance(rule, MonotoneInto):
        if not (0 <= rule.a_block < A.n_blocks):
            reasons.append(f"{where}: target block {rule.a_block} does not exist")
        elif rule.stride == 0 or not isinstance(rule.stride, int):
            reasons.append(f"{where}: stride must be a nonzero integer")
        else:
            m, c = _slope(kind, A.blocks[rule.a_block], rule.stride, rule.base)
            lo, hi = key_range(kind)
            ends = [m * lo + c if abs(lo) != INF else m * lo,
                    m * hi + c if abs(hi) != INF else m * hi]
            alo, ahi = key_range(A.blocks[rule.a_block])
            if min(ends) < alo or max(ends) > ahi:
                reasons.append(f"{where}: monotone image leaves target block {rule.a_block}")
    else:
        reasons.append(f"{where}: unknown rule {rule!r}")
    return reasons


def _coverage_reasons(spec: SurjectionSpec) -> list:
    A = spec.A
    reasons = []
    finite = {b: set() for b in range(A.n_blocks)}
    progressions = {b: [] for b in range(A.n_blocks)}
    for j, kind in enumerate(spec.carrier.blocks):
        images = _finite_images(spec, j)
        if images is not None:
            for a in images:
                finite[a.block].add(A.key(a))
            continue
        rule = spec.rules[j]
        m, c = _slope(kind, A.blocks[rule.a_block], rule.stride, rule.base)
        lo, hi = key_range(kind)
        ends = sorted([m * lo + c if abs(lo) != INF else m * lo,
                       m * hi + c if abs(hi) != INF else m * hi])
        progressions[rule.a_block].append((abs(m), c, ends[0], ends[1]))
    for b, kind in enumerate(A.blocks):
        alo, ahi = key_range(kind)
        progs = progressions[b]
        modulus = 1
        for step, *_ in progs:
            modulus = modulus * step // math.gcd(modulus, step)
        for r in range(modulus):
            spans = sorted((lo, hi) for step, c, lo, hi in progs if (r - c) % step == 0)
            gaps, cursor = [], alo
            for lo, hi in spans:
                if lo > cursor:
                    gaps.append((cursor, lo - 1))
                cursor = max(cursor, hi + 1)
            if cursor <= ahi and cursor != INF:
                gaps.append((cursor, ahi))
            for lo, hi in gaps:
                if lo == -INF or hi == INF:
                    reasons.append(f"target block {b}: infinitely many labels are never attained")
                    return reasons
                first = int(lo) + (r - int(lo)) % modulus
                for key in range(first, int(hi) + 1, modulus):
                    if key not in finite[b]:
                        reasons.append(f"target label {tuple(A.address(b, key))} is never attained")
                        return reasons
    return reasons


def _equivariance_reasons(spec: SurjectionSpec) -> list:
    E, A = spec.carrier, spec.A
    reasons = []
    for kind_check, order, inv in (("carrier", E, spec.involution),
                                   ("target", A, spec.target.involution)):
        v = validate_involution(order, inv)
        if not v:
            reasons.extend(f"{kind_check} involution: {r}" for r in v.reasons)
    if reasons:
        return reasons
    span = 4
    for rule in spec.rules:
        if isinstance(rule, Periodic):
            span += 2 * len(rule.pattern)
        if isinstance(rule, MonotoneInto):
            span += abs(rule.base)
    span += max((abs(p.shift) for p in spec.involution.pairing), default=0)
    for j, kind in enumerate(E.blocks):
        if is_infinite(kind):
            lo, hi = key_range(kind)
            keys = range(int(max(lo, -span)), int(min(hi, span)) + 1)
            offsets = [offset_to_key(kind, k) for k in keys]
        else:
            offsets = range(kind.length)
        for x in offsets:
            e = Address(j, x)
            left = spec.label(involution_image(E, spec.involution, e))
            right = involution_image(A, spec.target.involution, spec.label(e))
            if left != right:
                reasons.append(f"sigma0(i({tuple(e)})) = {tuple(left)} but "
                               f"i(sigma0({tuple(e)})) = {tuple(right)}")
                return reasons
    return reasons


def validate(spec: SurjectionSpec) -> Validation:
    """Well-formed rules, surjectivity and (with involutions) equivariance."""
    if len(spec.rules) != spec.carrier.n_blocks:
        return Validation(False, (f"{len(spec.rules)} rules for "
                                  f"{spec.carrier.n_blocks} carrier blocks",))
    reasons = []
    for j in range(spec.carrier.n_blocks):
        reasons.extend(_rule_reasons(spec, j))
    if reasons:
        return Validation(False, tuple(reasons))
    reasons.extend(_coverage_reasons(spec))
    if (spec.involution is None) != (spec.target.involution is None):
        reasons.append("carrier and target must both carry an involution or neither")
    elif spec.is_omega:
        reasons.extend(_equivariance_reasons(spec))
    return Validation(not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# Cells


@dataclass(frozen=True)
class CellDescriptor:
    """The cell of ``sigma0 o w^{-1}``."""

    base: SurjectionSpec
    w: Perm

    def __post_init__(self):
        if self.base.is_omega and not isinstance(self.w, OmegaPerm):
            object.__setattr__(self, "w", as_omega(self.w, self.base.involution,
                                                   self.base.carrier))


def sigma_eval(cell: CellDescriptor, e) -> Address:
    winv = inverse(cell.w)
    return cell.base.label(winv.apply(e))


def changed_points(cell: CellDescriptor) -> dict:
    """``{e: sigma(e)}`` for every ``e`` with ``sigma(e) != sigma0(e)``."""
    winv = inverse(cell.w)
    out = {}
    for e in cell.w.support:
        lab = cell.base.label(winv.apply(e))
        if lab != cell.base.label(e):
            out[e] = lab
    return out


def runs_of(spec: SurjectionSpec, removed=(), splits=()) -> list:
    """Runs of ``spec`` avoiding ``removed`` addresses, also broken at ``splits``.

    ``splits`` are cuts of the carrier; runs are returned in carrier order.
    """
    E = spec.carrier
    removed_keys = {}
    for e in removed:
        j, k = E.position(e)
        removed_keys.setdefault(j, set()).add(k)
    split_keys = {}
    for j, k in splits:
        if j < E.n_blocks and k not in (-INF, INF):
            split_keys.setdefault(j, set()).add(k)
    runs = []
    for j, kind in enumerate(E.blocks):
        lo, hi = key_range(kind)
        marks = sorted(set(removed_keys.get(j, ())) | set(split_keys.get(j, ())))
        start = lo
        for k in marks:
            if start <= k - 1:
                runs.append((j, Run(kind, spec.rules[j], start, k - 1)))
            start = k + 1 if k in removed_keys.get(j, ()) else k
        if start <= hi:
            runs.append((j, Run(kind, spec.rules[j], start, hi)))
    return runs


def _run_before_point(E: OrderSpec, j: int, run: Run, e) -> bool:
    pj, pk = E.position(e)
    return j < pj or (j == pj and run.hi < pk)


def _glued_count(spec: SurjectionSpec, points: dict, runs: list) -> ExtendedCount:
    """Inversions among the given points (with labels) and runs."""
    E, A = spec.carrier, spec.A
    order = E.sorted(points)
    pos = {e: A.position(points[e]) for e in order}
    total = Finite(_finite_inversions([pos[e] for e in order]))
    for j, run in runs:
        for e in order:
            if _run_before_point(E, j, run, e):
                total = total + count_above(A, run, pos[e])
            else:
                total = total + count_below(A, run, pos[e])
            if not total.is_finite:
                return INFINITE
    for i, (_, x) in enumerate(runs):
        total = total + pair_inversion_count(A, x, relation="same")
        for _, y in runs[i + 1:]:
            total = total + pair_inversion_count(A, x, y)
            if not total.is_finite:
                return INFINITE
    return total


def inversion_number(cell: CellDescriptor) -> ExtendedCount:
    """``#{e < e' : sigma(e) > sigma(e')}`` over the whole carrier."""
    points = changed_points(cell)
    runs = runs_of(cell.base, removed=points)
    return _glued_count(cell.base, points, runs)


def omega_inversion_number(cell: CellDescriptor) -> ExtendedCount:
    """Inversions over the non-fixed points, each mirror pair of pairs counted once."""
    spec = cell.base
    if not spec.is_omega:
        raise InvalidRule("the isotropic count needs involutions on carrier and target")
    E, A = spec.carrier, spec.A
    points = changed_points(cell)
    fixed = computed_fixed_points(E, spec.involution)
    low_end = lower_half_end(E, spec.involution)
    runs = runs_of(spec, removed=list(points) + fixed, splits=[low_end])
    total = _glued_count(spec, points, runs)
    if not total.is_finite:
        return INFINITE
    upper = upper_half_start(A, spec.target.involution)
    crossing = Finite(0)
    for e, lab in points.items():
        if left_of(E, e, low_end) and A.position(lab) >= tuple(upper):
            crossing = crossing + 1
    for j, run in runs:
        if (j, run.hi) < tuple(low_end):
            crossing = crossing + keys_in_window(A, run, upper, _end(A)).count()
    assert crossing.is_finite and (total.n + crossing.n) % 2 == 0
    return Finite((total.n + crossing.n) // 2)


def cell_dimension(cell: CellDescriptor) -> ExtendedCount:
    """The isotropic count for involution specs, the plain count otherwise."""
    if cell.base.is_omega:
        return omega_inversion_number(cell)
    return inversion_number(cell)


def m_B_P(spec: SurjectionSpec, w: Perm) -> ExtendedCount:
    """Dimension of the cell of ``sigma0 o w``."""
    return cell_dimension(CellDescriptor(spec, inverse(w)))


def is_nondecreasing(spec: SurjectionSpec) -> bool:
    return cell_dimension(CellDescriptor(spec, FinPerm((), spec.carrier))) == Finite(0)


# ---------------------------------------------------------------------------
# Closure order


def _check_same_orbit(s: CellDescriptor, t: CellDescriptor):
    if s.base != t.base:
        raise OrbitMismatch("cells over different base surjections")


def _rank_leq(E: OrderSpec, A: OrderSpec, ls: dict, lt: dict) -> bool:
    """Prefix rank comparison of two labelings of the same finite set."""
    points = E.sorted(ls)
    if Counter(ls.values()) != Counter(lt.values()):
        raise OrbitMismatch("the two cells rearrange different label multisets")
    thresholds = sorted({A.position(a) for a in ls.values()})
    for level in thresholds[1:]:
        cs = ct = 0
        for p in points:
            cs += A.position(ls[p]) >= level
            ct += A.position(lt[p]) >= level
            if ct < cs:
                return False
    return True


def _labels_on_difference(s: CellDescriptor, t: CellDescriptor):
    ps, pt = changed_points(s), changed_points(t)
    domain = set(ps) | set(pt)
    base = s.base
    ls = {e: ps.get(e, base.label(e)) for e in domain}
    lt = {e: pt.get(e, base.label(e)) for e in domain}
    return ls, lt


def bruhat_leq(s: CellDescriptor, t: CellDescriptor) -> bool:
    """Closure order: the cell of ``s`` lies in the closure of the cell of ``t``."""
    _check_same_orbit(s, t)
    ls, lt = _labels_on_difference(s, t)
    return _rank_leq(s.base.carrier, s.base.A, ls, lt)


def omega_bruhat_leq(s: CellDescriptor, t: CellDescriptor) -> bool:
    """Closure order for isotropic cells (same prefix rank test on the changed points)."""
    if not s.base.is_omega:
        raise InvalidRule("the isotropic order needs involutions on carrier and target")
    return bruhat_leq(s, t)


def grassmannian_leq(sigma, tau, border: OrderSpec) -> bool:
    """Elementwise comparison of the sorted differences of two finite subsets."""
    sigma = {Address(*a) for a in sigma}
    tau = {Address(*a) for a in tau}
    only_s = border.sorted(sigma - tau)
    only_t = border.sorted(tau - sigma)
    if len(only_s) != len(only_t):
        raise SizeMismatch("the subsets differ by sets of different sizes")
    return all(less(border, e, f) for e, f in zip(only_s, only_t))


# ---------------------------------------------------------------------------
# Canonical representatives and cells from labels


def _perm_from_labels(spec: SurjectionSpec, labels: dict) -> Perm:
    """The canonical ``w`` with ``sigma0 o w^{-1}`` agreeing with ``labels`` where given.

    ``labels`` must list every point whose label changes.  Inside each fiber
    the sorted old positions go to the sorted new positions.
    """
    E = spec.carrier
    moved_from, moved_to = {}, {}
    for e, lab in labels.items():
        e = E.check(e)
        lab = Address(*lab)
        old = spec.label(e)
        if lab != old:
            moved_to.setdefault(lab, []).append(e)
            moved_from.setdefault(old, []).append(e)
    if {a: len(v) for a, v in moved_from.items()} != {a: len(v) for a, v in moved_to.items()}:
        raise OrbitMismatch("the labels are not a finite rearrangement of sigma0")
    mapping = {}
    for lab, sources in moved_from.items():
        for d, t in zip(E.sorted(sources), E.sorted(moved_to[lab])):
            mapping[d] = t
    fin = FinPerm.from_mapping(mapping, E)
    if spec.is_omega:
        return OmegaPerm(fin, spec.involution, E)
    return fin


def canonical_representative(cell: CellDescriptor) -> Perm:
    """The representative moving each fiber's changed points in sorted order."""
    return _perm_from_labels(cell.base, changed_points(cell))


def cell_from_labels(spec: SurjectionSpec, labels: dict) -> CellDescriptor:
    return CellDescriptor(spec, _perm_from_labels(spec, labels))


def cell_from_subset(spec: SurjectionSpec, subset) -> CellDescriptor:
    """Grassmannian shorthand: ``subset`` is the fiber of the smaller of two labels."""
    A = spec.A
    if A.size() != Finite(2):
        raise SizeMismatch("subset notation needs a two-element target")
    low, high = A.elements()
    subset = {spec.carrier.check(a) for a in subset}
    labels = {e: low for e in subset}
    old = _lowest_fiber(spec, low)
    if old is None:
        raise OrbitMismatch("the fiber of the smaller label is infinite")
    for e in old - subset:
        labels[e] = high
    return cell_from_labels(spec, labels)


def _lowest_fiber(spec: SurjectionSpec, label: Address) -> Optional[set]:
    A = spec.A
    pos = A.position(label)
    out = set()
    for j, run in runs_of(spec):
        keys = keys_in_window(A, run, pos, _after(pos))
        if not keys.count().is_finite:
            return None
        out.update(spec.carrier.address(j, k) for k in keys.keys())
    return out


def label_fiber(cell: CellDescriptor, label) -> Optional[set]:
    """The addresses ``e`` with ``sigma(e) = label``, or ``None`` if there are infinitely many."""
    spec = cell.base
    label = spec.A.check(label)
    fiber = _lowest_fiber(spec, label)
    if fiber is None:
        return None
    for e, lab in changed_points(cell).items():
        if lab == label:
            fiber.add(e)
        else:
            fiber.discard(e)
    return fiber


# ---------------------------------------------------------------------------
# JSON


def rule_to_json(rule: LabelRule) -> dict:
    if isinstance(rule, Const):
        return {"const": address_to_json(rule.alpha)}
    if isinstance(rule, MonotoneInto):
        return {"monotone": {"a_block": rule.a_block, "stride": rule.stride, "base": rule.base}}
    if isinstance(rule, Periodic):
        return {"periodic": [address_to_json(a) for a in rule.pattern]}
    return {"explicit": [address_to_json(a) for a in rule.labels]}


def rule_from_json(obj, path="$") -> LabelRule:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SchemaError("a rule is an object with exactly one of const, monotone, "
                          "periodic, explicit", path)
    (kind, body), = obj.items()
    if kind == "const":
        return Const(address_from_json(body, path + ".const"))
    if kind == "monotone":
        if not isinstance(body, dict) or not isinstance(body.get("a_block"), int):
            raise SchemaError('expected {"a_block": j, "stride": s, "base": c}', path + ".monotone")
        return MonotoneInto(body["a_block"], body.get("stride", 1), body.get("base", 0))
    if kind in ("periodic", "explicit"):
        if not isinstance(body, list):
            raise SchemaError("expected a list of addresses", f"{path}.{kind}")
        labels = tuple(address_from_json(a, f"{path}.{kind}[{i}]") for i, a in enumerate(body))
        return Periodic(labels) if kind == "periodic" else ExplicitList(labels)
    raise SchemaError(f"unknown rule kind {kind!r}", path)


def surjection_to_json(spec: SurjectionSpec) -> dict:
    return {"carrier": order_to_json(spec.carrier, spec.involution),
            "target": order_to_json(spec.A, spec.target.involution),
            "sigma0": [rule_to_json(r) for r in spec.rules]}


def surjection_from_json(obj, path="$") -> SurjectionSpec:
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    carrier, inv = order_from_json(obj.get("carrier"), path + ".carrier", "E")
    target, tinv = order_from_json(obj.get("target"), path + ".target", "A")
    rules = obj.get("sigma0")
    if not isinstance(rules, list):
        raise SchemaError("sigma0 must be a list of rules", path + ".sigma0")
    parsed = tuple(rule_from_json(r, f"{path}.sigma0[{i}]") for i, r in enumerate(rules))
    return SurjectionSpec(carrier, TargetOrder(target, tinv), parsed, inv)
