"""Countable ordered bases assembled from finitely many blocks.

A carrier is a finite concatenation of blocks, each of which is a finite
chain, a copy of the naturals (``OmegaUp``), the reversed naturals
(``OmegaDown``) or the integers (``ZLine``).  Elements are addressed by
``(block_index, offset)``.  Inside an ``OmegaDown`` block offset 0 is the
largest element, so offsets run against the order there.

Internally every element gets a *key*: the offset itself, or its negation
inside ``OmegaDown``.  Keys increase with the order inside a block, so the
pair ``(block_index, key)`` is a sort key for the whole carrier.

A *cut* is a pair ``(block_index, key)`` with the key allowed to be
``-inf``/``+inf``.  The elements strictly to the left of a cut are those in
earlier blocks plus those of the same block with a smaller key.  Cuts are the
common currency for interval and threshold counts.

>>> spec = OrderSpec((OmegaDown(), OmegaUp()))
>>> interval_cardinality(spec, Address(0, 3), Address(1, 3))
Finite(n=6)
>>> embeds_in_Z(spec)
True
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple, Optional, Union

from .errors import InvalidAddress, NotOrdered, SchemaError

INF = math.inf


# ---------------------------------------------------------------------------
# Extended counts


class ExtendedCount:
    """A cardinality that is either a nonnegative integer or countably infinite."""

    __slots__ = ()

    @staticmethod
    def of(value) -> "ExtendedCount":
        if isinstance(value, ExtendedCount):
            return value
        if value == INF:
            return INFINITE
        return Finite(int(value))

    def _pair(self, other):
        return ExtendedCount.of(other)

    def __add__(self, other):
        other = self._pair(other)
        if isinstance(self, Infinite) or isinstance(other, Infinite):
            return INFINITE
        return Finite(self.n + other.n)

    __radd__ = __add__

    def __mul__(self, other):
        other = self._pair(other)
        if self == Finite(0) or other == Finite(0):
            return Finite(0)
        if isinstance(self, Infinite) or isinstance(other, Infinite):
            return INFINITE
        return Finite(self.n * other.n)

    __rmul__ = __mul__

    def _rank(self):
        return (1, 0) if isinstance(self, Infinite) else (0, self.n)

    def __lt__(self, other):
        return self._rank() < self._pair(other)._rank()

    def __le__(self, other):
        return self._rank() <= self._pair(other)._rank()

    def __gt__(self, other):
        return self._rank() > self._pair(other)._rank()

    def __ge__(self, other):
        return self._rank() >= self._pair(other)._rank()

    @property
    def is_finite(self) -> bool:
        return isinstance(self, Finite)

    def to_json(self):
        return {"finite": self.n} if self.is_finite else "infinite"

    @staticmethod
    def from_json(obj, path="$") -> "ExtendedCount":
        if obj == "infinite":
            return INFINITE
        if isinstance(obj, dict) and set(obj) == {"finite"}:
            n = obj["finite"]
            if isinstance(n, int) and not isinstance(n, bool) and n >= 0:
                return Finite(n)
        raise SchemaError('expected {"finite": n} or "infinite"', path)


@dataclass(frozen=True, eq=True)
class Finite(ExtendedCount):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("a finite count is nonnegative")

    def __hash__(self):
        return hash(("finite", self.n))


class Infinite(ExtendedCount):
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = object.__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinite"

    def __eq__(self, other):
        return isinstance(other, Infinite)

    def __hash__(self):
        return hash("infinite")


INFINITE = Infinite()


# ---------------------------------------------------------------------------
# Blocks and orders


@dataclass(frozen=True)
class FinChain:
    length: int

    def __post_init__(self):
        if not isinstance(self.length, int) or self.length < 1:
            raise ValueError("FinChain length must be a positive integer")


@dataclass(frozen=True)
class OmegaUp:
    pass


@dataclass(frozen=True)
class OmegaDown:
    pass


@dataclass(frozen=True)
class ZLine:
    pass


BlockKind = Union[FinChain, OmegaUp, OmegaDown, ZLine]


def key_range(kind: BlockKind):
    """Inclusive key bounds of a block (possibly infinite)."""
    if isinstance(kind, FinChain):
        return 0, kind.length - 1
    if isinstance(kind, OmegaUp):
        return 0, INF
    if isinstance(kind, OmegaDown):
        return -INF, 0
    return -INF, INF


def is_infinite(kind: BlockKind) -> bool:
    return not isinstance(kind, FinChain)


def offset_to_key(kind: BlockKind, offset: int) -> int:
    return -offset if isinstance(kind, OmegaDown) else offset


# The map is its own inverse.
key_to_offset = offset_to_key


class Address(NamedTuple):
    block: int
    offset: int


class Cmp(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class OrderSpec:
    """A total order given as a concatenation of blocks."""

    blocks: tuple
    name: str = "E"

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise ValueError("an order needs at least one block")

    def kind(self, j: int) -> BlockKind:
        return self.blocks[j]

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def is_finite(self) -> bool:
        return not any(is_infinite(k) for k in self.blocks)

    def check(self, a) -> Address:
        a = Address(*a)
        if not (0 <= a.block < len(self.blocks)):
            raise InvalidAddress(f"block index {a.block} out of range in {self.name}")
        lo, hi = key_range(self.blocks[a.block])
        k = offset_to_key(self.blocks[a.block], a.offset)
        if not (lo <= k <= hi):
            raise InvalidAddress(f"offset {a.offset} invalid for block {a.block} of {self.name}")
        return a

    def key(self, a) -> int:
        a = self.check(a)
        return offset_to_key(self.blocks[a.block], a.offset)

    def position(self, a):
        """Sort key ``(block_index, key)``."""
        a = self.check(a)
        return a.block, offset_to_key(self.blocks[a.block], a.offset)

    def address(self, block: int, key: int) -> Address:
        return Address(block, key_to_offset(self.blocks[block], key))

    def size(self) -> ExtendedCount:
        if not self.is_finite:
            return INFINITE
        return Finite(sum(k.length for k in self.blocks))

    def elements(self) -> list:
        """All elements in increasing order; finite orders only."""
        if not self.is_finite:
            raise ValueError("cannot list an infinite order")
        return [Address(j, x) for j, k in enumerate(self.blocks) for x in range(k.length)]

    def sorted(self, addresses) -> list:
        return sorted((Address(*a) for a in addresses), key=self.position)


def compare(spec: OrderSpec, a, b) -> Cmp:
    pa, pb = spec.position(a), spec.position(b)
    if pa < pb:
        return Cmp.LESS
    if pa > pb:
        return Cmp.GREATER
    return Cmp.EQUAL


def less(spec: OrderSpec, a, b) -> bool:
    return spec.position(a) < spec.position(b)


# ---------------------------------------------------------------------------
# Cuts and counting


def cut_before(spec: OrderSpec, a):
    return spec.position(a)


def cut_after(spec: OrderSpec, a):
    j, k = spec.position(a)
    return j, k + 1


def start_cut(spec: OrderSpec):
    return 0, -INF


def end_cut(spec: OrderSpec):
    return spec.n_blocks, -INF


def left_of(spec: OrderSpec, a, cut) -> bool:
    """True iff element ``a`` lies strictly left of ``cut``."""
    return spec.position(a) < tuple(cut)


def block_key_window(spec: OrderSpec, j: int, lo_cut, hi_cut):
    """Keys of block ``j`` lying in ``[lo_cut, hi_cut)``, as an inclusive range.

    Returns ``None`` when empty; bounds may be infinite.
    """
    a, b = key_range(spec.blocks[j])
    if j < lo_cut[0] or j > hi_cut[0]:
        return None
    if j == lo_cut[0]:
        a = max(a, lo_cut[1])
    if j == hi_cut[0]:
        b = min(b, hi_cut[1] - 1)
    if a > b or b == -INF or a == INF:
        return None
    return a, b


def range_size(lo, hi) -> ExtendedCount:
    if lo > hi:
        return Finite(0)
    if lo == -INF or hi == INF:
        return INFINITE
    return Finite(int(hi - lo + 1))


def count_between_cuts(spec: OrderSpec, lo_cut, hi_cut) -> ExtendedCount:
    """Number of elements ``x`` with ``lo_cut <= x < hi_cut``."""
    total = Finite(0)
    last = min(hi_cut[0], spec.n_blocks - 1)
    for j in range(max(lo_cut[0], 0), last + 1):
        w = block_key_window(spec, j, lo_cut, hi_cut)
        if w is not None:
            total = total + range_size(*w)
    return total


def interval_cardinality(spec: OrderSpec, a, b) -> ExtendedCount:
    """Number of elements strictly between ``a`` and ``b`` (``a`` must be smaller)."""
    if compare(spec, a, b) is not Cmp.LESS:
        raise NotOrdered(f"{tuple(a)} is not below {tuple(b)}")
    return count_between_cuts(spec, cut_after(spec, a), cut_before(spec, b))


def first_at_or_after(spec: OrderSpec, cut):
    """Smallest element not left of ``cut``, or ``None`` if there is none."""
    j, k = _normalize_cut(spec, cut)
    while j < spec.n_blocks:
        a, b = key_range(spec.blocks[j])
        if k == -INF:
            if a == -INF:
                return None
            k = a
        if k <= b:
            return spec.address(j, k)
        j, k = j + 1, -INF
    return None


def last_before(spec: OrderSpec, cut):
    """Largest element strictly left of ``cut``, or ``None`` if there is none."""
    j, k = _normalize_cut(spec, cut)
    if k != -INF:
        return spec.address(j, k - 1)
    j -= 1
    while j >= 0:
        a, b = key_range(spec.blocks[j])
        if b == INF:
            return None
        return spec.address(j, b)
    return None


def shift_cut(spec: OrderSpec, cut, steps: int):
    """Move a cut across ``steps`` elements (rightwards if positive).

    Returns ``None`` when the walk meets a limit point that no finite number of
    steps can cross.
    """
    cut = _normalize_cut(spec, cut)
    for _ in range(abs(steps)):
        if steps > 0:
            x = first_at_or_after(spec, cut)
            if x is None:
                return None
            cut = _normalize_cut(spec, cut_after(spec, x))
        else:
            x = last_before(spec, cut)
            if x is None:
                return None
            cut = _normalize_cut(spec, cut_before(spec, x))
    return cut


def _normalize_cut(spec: OrderSpec, cut):
    """Canonical form: block-boundary cuts are written ``(j, -inf)``."""
    j, k = cut
    while j < spec.n_blocks:
        a, b = key_range(spec.blocks[j])
        if k != -INF and a != -INF and k <= a:
            k = -INF
        if k == -INF:
            return j, -INF
        if k == INF or (b != INF and k > b):
            j, k = j + 1, -INF
            continue
        return j, k
    return spec.n_blocks, -INF


def normalize_cut(spec: OrderSpec, cut):
    return _normalize_cut(spec, cut)


def embeds_in_Z(spec: OrderSpec) -> bool:
    """True iff every open interval of the order is finite."""
    kinds = spec.blocks
    if len(kinds) == 1 and isinstance(kinds[0], ZLine):
        return True
    for j, kind in enumerate(kinds):
        if isinstance(kind, ZLine):
            return False
        if isinstance(kind, OmegaDown) and j != 0:
            return False
        if isinstance(kind, OmegaUp) and j != len(kinds) - 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Involutions


@dataclass(frozen=True)
class Pairing:
    """Block ``left`` is mirrored onto block ``right``.

    ``map`` is ``"identity"`` (offsets kept, used for ω against ω*) or
    ``"reflect"`` (``x -> shift - x`` on integer lines, ``x -> n-1-x`` on
    finite chains, where ``shift`` must stay 0).
    """

    left: int
    right: int
    map: str = "reflect"
    shift: int = 0


@dataclass(frozen=True)
class InvolutionSpec:
    pairing: tuple
    fixed_point: Optional[Address] = None
    type_tag: str = "C"

    def __post_init__(self):
        object.__setattr__(self, "pairing", tuple(self.pairing))
        if self.fixed_point is not None:
            object.__setattr__(self, "fixed_point", Address(*self.fixed_point))


@dataclass(frozen=True)
class Validation:
    ok: bool
    reasons: tuple = ()

    def __bool__(self):
        return self.ok


@lru_cache(maxsize=256)
def _partner_table(inv: InvolutionSpec):
    table = {}
    for p in inv.pairing:
        table.setdefault(p.left, (p.right, p.map, p.shift))
        table.setdefault(p.right, (p.left, p.map, p.shift))
    return table


def involution_image(spec: OrderSpec, inv: InvolutionSpec, a) -> Address:
    a = spec.check(a)
    partner, how, shift = _partner_table(inv)[a.block]
    if how == "identity":
        return Address(partner, a.offset)
    kind = spec.blocks[a.block]
    if isinstance(kind, FinChain):
        return Address(partner, kind.length - 1 - a.offset)
    return Address(partner, shift - a.offset)


def computed_fixed_points(spec: OrderSpec, inv: InvolutionSpec) -> list:
    """Fixed points implied by the block pairing (at most one)."""
    table = _partner_table(inv)
    nb = spec.n_blocks
    if nb % 2 == 0:
        return []
    m = nb // 2
    if m not in table or table[m][0] != m:
        return []
    kind = spec.blocks[m]
    if isinstance(kind, FinChain):
        return [Address(m, (kind.length - 1) // 2)] if kind.length % 2 == 1 else []
    if isinstance(kind, ZLine) and table[m][1] == "reflect":
        s = table[m][2]
        return [Address(m, s // 2)] if s % 2 == 0 else []
    return []


def _mirror_shift(spec: OrderSpec, inv: InvolutionSpec):
    """Reflection constant ``s`` of the self-paired middle block (``x -> s - x``)."""
    m = spec.n_blocks // 2
    kind = spec.blocks[m]
    if isinstance(kind, FinChain):
        return kind.length - 1
    return _partner_table(inv)[m][2]


def lower_half_end(spec: OrderSpec, inv: InvolutionSpec):
    """Cut ``c`` with ``{x < c} = {x : x < i(x)}``."""
    nb = spec.n_blocks
    if nb % 2 == 0:
        return nb // 2, -INF
    s = _mirror_shift(spec, inv)
    return _normalize_cut(spec, (nb // 2, (s - 1) // 2 + 1))


def upper_half_start(spec: OrderSpec, inv: InvolutionSpec):
    """Cut ``c`` with ``{x >= c} = {x : x > i(x)}``."""
    nb = spec.n_blocks
    if nb % 2 == 0:
        return nb // 2, -INF
    s = _mirror_shift(spec, inv)
    return _normalize_cut(spec, (nb // 2, s // 2 + 1))


def validate_involution(spec: OrderSpec, inv: InvolutionSpec) -> Validation:
    """Structural check that ``inv`` is an order-reversing involution of ``spec``."""
    reasons = []
    nb = spec.n_blocks
    seen = {}
    for p in inv.pairing:
        for j in (p.left, p.right):
            if not (0 <= j < nb):
                reasons.append(f"pairing names missing block {j}")
                continue
            if j in seen and seen[j] != p:
                reasons.append(f"block {j} is paired twice")
            seen[j] = p
        if p.map not in ("identity", "reflect"):
            reasons.append(f"unknown offset map {p.map!r}")
    for j in range(nb):
        if j not in seen:
            reasons.append(f"block {j} is not paired")
    if reasons:
        return Validation(False, tuple(reasons))

    for p in set(seen.values()):
        a, b = sorted((p.left, p.right))
        if a + b != nb - 1:
            reasons.append(f"block {a} must mirror block {nb - 1 - a}, not {b}")
            continue
        ka, kb = spec.blocks[a], spec.blocks[b]
        up_down = {type(ka), type(kb)} == {OmegaUp, OmegaDown}
        if up_down:
            if p.map != "identity" or p.shift != 0:
                reasons.append(f"blocks {a},{b}: omega against omega* needs the identity offset map")
        elif isinstance(ka, ZLine) and isinstance(kb, ZLine):
            if p.map != "reflect":
                reasons.append(f"blocks {a},{b}: integer lines must be reflected")
        elif isinstance(ka, FinChain) and isinstance(kb, FinChain):
            if ka.length != kb.length:
                reasons.append(f"blocks {a},{b}: finite chains of different lengths")
            elif p.shift != 0:
                reasons.append(f"blocks {a},{b}: finite chains take no shift")
            elif p.map != "reflect" and ka.length > 1:
                reasons.append(f"blocks {a},{b}: finite chains must be reflected")
        else:
            reasons.append(f"blocks {a},{b}: kinds {type(ka).__name__} and "
                           f"{type(kb).__name__} are not mirror images")

    if not reasons:
        fixed = computed_fixed_points(spec, inv)
        declared = [inv.fixed_point] if inv.fixed_point is not None else []
        if fixed != declared:
            reasons.append(f"declared fixed point {declared} but the pairing fixes {fixed}")
        if inv.type_tag not in ("B", "C", "D"):
            reasons.append(f"unknown type tag {inv.type_tag!r}")
        elif (inv.type_tag == "B") != (len(fixed) == 1):
            reasons.append(f"type {inv.type_tag} with {len(fixed)} fixed points")
    return Validation(not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# Truncations


def enumerate_truncation(spec: OrderSpec, inv: Optional[InvolutionSpec] = None,
                         radius: int = 1) -> list:
    """A finite, nested, involution-stable window of the carrier.

    Finite blocks are kept whole; each infinite tail contributes ``radius``
    elements (``2*radius + 1`` for an integer line).
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    r = radius
    table = _partner_table(inv) if inv is not None else {}
    out = []
    for j, kind in enumerate(spec.blocks):
        if isinstance(kind, FinChain):
            offsets = range(kind.length)
        elif isinstance(kind, (OmegaUp, OmegaDown)):
            offsets = range(r)
        else:
            partner = table.get(j)
            if partner is not None and partner[1] == "reflect":
                p, _, s = partner
                if p == j:
                    offsets = range(-((2 * r - s) // 2), (s + 2 * r) // 2 + 1)
                elif j < p:
                    offsets = range(-r, r + 1)
                else:
                    offsets = range(s - r, s + r + 1)
            else:
                offsets = range(-r, r + 1)
        out.extend(Address(j, x) for x in offsets)
    return spec.sorted(out)


# ---------------------------------------------------------------------------
# JSON


def block_to_json(kind: BlockKind):
    if isinstance(kind, FinChain):
        return {"kind": {"fin": kind.length}}
    if isinstance(kind, OmegaUp):
        return {"kind": "omega"}
    if isinstance(kind, OmegaDown):
        return {"kind": "omega_rev"}
    return {"kind": "Z"}


def block_from_json(obj, path="$") -> BlockKind:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError('expected an object with a "kind" field', path)
    k = obj["kind"]
    if k == "Z":
        return ZLine()
    if k == "omega":
        return OmegaUp()
    if k == "omega_rev":
        return OmegaDown()
    if isinstance(k, dict) and set(k) == {"fin"}:
        n = k["fin"]
        if isinstance(n, int) and not isinstance(n, bool) and n >= 1:
            return FinChain(n)
    raise SchemaError('kind must be "Z", "omega", "omega_rev" or {"fin": n} with n >= 1',
                      path + ".kind")


def address_from_json(obj, path="$") -> Address:
    if (isinstance(obj, list) and len(obj) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in obj)):
        return Address(obj[0], obj[1])
    raise SchemaError("an address is [block_index, offset]", path)


def address_to_json(a):
    return [a[0], a[1]]


def involution_to_json(inv: Optional[InvolutionSpec]):
    if inv is None:
        return None
    return {
        "type": inv.type_tag,
        "fixed_point": None if inv.fixed_point is None else address_to_json(inv.fixed_point),
        "pairing": [{"blocks": [p.left, p.right], "map": p.map, "shift": p.shift}
                    for p in inv.pairing],
    }


def involution_from_json(obj, path="$") -> Optional[InvolutionSpec]:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise SchemaError("involution must be an object or null", path)
    tag = obj.get("type", "C")
    if tag not in ("B", "C", "D"):
        raise SchemaError('type must be "B", "C" or "D"', path + ".type")
    raw = obj.get("pairing")
    if not isinstance(raw, list):
        raise SchemaError("pairing must be a list", path + ".pairing")
    pairs = []
    for i, p in enumerate(raw):
        ppath = f"{path}.pairing[{i}]"
        if not isinstance(p, dict) or not isinstance(p.get("blocks"), list) or len(p["blocks"]) != 2:
            raise SchemaError('expected {"blocks": [i, j], ...}', ppath)
        how = p.get("map", "reflect")
        if how not in ("identity", "reflect"):
            raise SchemaError('map must be "identity" or "reflect"', ppath + ".map")
        pairs.append(Pairing(p["blocks"][0], p["blocks"][1], how, p.get("shift", 0)))
    fp = obj.get("fixed_point")
    fixed = None if fp is None else address_from_json(fp, path + ".fixed_point")
    return InvolutionSpec(tuple(pairs), fixed, tag)


def order_to_json(spec: OrderSpec, inv: Optional[InvolutionSpec] = None) -> dict:
    return {"name": spec.name,
            "blocks": [block_to_json(k) for k in spec.blocks],
            "involution": involution_to_json(inv)}


def order_from_json(obj, path="$", default_name="E"):
    """Parse ``{"blocks": [...], "involution": ...}`` into ``(OrderSpec, InvolutionSpec|None)``."""
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    blocks = obj.get("blocks")
    if not isinstance(blocks, list) or not blocks:
        raise SchemaError("blocks must be a nonempty list", path + ".blocks")
    kinds = tuple(block_from_json(b, f"{path}.blocks[{i}]") for i, b in enumerate(blocks))
    spec = OrderSpec(kinds, obj.get("name", default_name))
    inv = involution_from_json(obj.get("involution"), path + ".involution")
    return spec, inv
