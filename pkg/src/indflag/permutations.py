"""Finitely supported permutations of a carrier, plain and involution-equivariant.

A :class:`FinPerm` stores only the points it moves, so two permutations are
equal exactly when their ``moves`` agree.  An :class:`OmegaPerm` additionally
commutes with the involution of its carrier.

Lengths are pair counts.  For a plain permutation ``w`` with support ``S``,
the inverted pairs are the inverted pairs inside ``S`` plus, for each
``e`` in ``S``, the points outside ``S`` strictly between ``e`` and ``w(e)``.
In the equivariant case pairs are counted up to the symmetry
``(e, f) -> (i(f), i(e))``, which is what makes the count agree with word
length in the signed-permutation generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .carrier import (INFINITE, Address, ExtendedCount, Finite, InvolutionSpec,
                      OrderSpec, address_from_json, address_to_json, computed_fixed_points,
                      enumerate_truncation, interval_cardinality, involution_image, less,
                      lower_half_end, left_of, upper_half_start)
from .errors import (CarrierMismatch, EqualAddresses, FixedPointArgument, NotEquivariant,
                     SchemaError, SupportExceedsTruncation)


@dataclass(frozen=True)
class FinPerm:
    """A permutation moving finitely many addresses.

    ``moves`` is a sorted tuple of ``(e, w(e))`` pairs with ``w(e) != e``.
    """

    moves: tuple = ()
    carrier: Optional[OrderSpec] = field(default=None, compare=False, repr=False)

    @staticmethod
    def from_mapping(mapping, carrier: Optional[OrderSpec] = None) -> "FinPerm":
        pairs = {Address(*a): Address(*b) for a, b in dict(mapping).items()}
        if set(pairs) != set(pairs.values()):
            raise ValueError("a permutation must map its domain onto itself")
        if carrier is not None:
            for a in pairs:
                carrier.check(a)
        moves = tuple(sorted((a, b) for a, b in pairs.items() if a != b))
        return FinPerm(moves, carrier)

    @property
    def mapping(self) -> dict:
        return dict(self.moves)

    @property
    def support(self) -> frozenset:
        return frozenset(a for a, _ in self.moves)

    def apply(self, e) -> Address:
        e = Address(*e)
        return self.mapping.get(e, e)

    def is_identity(self) -> bool:
        return not self.moves


@dataclass(frozen=True)
class OmegaPerm:
    """A finitely supported permutation commuting with the carrier involution."""

    underlying: FinPerm
    involution: InvolutionSpec
    carrier: OrderSpec

    def __post_init__(self):
        for e, image in self.underlying.moves:
            left = involution_image(self.carrier, self.involution, image)
            right = self.underlying.apply(involution_image(self.carrier, self.involution, e))
            if left != right:
                raise NotEquivariant(f"w(i({tuple(e)})) != i(w({tuple(e)}))")

    @property
    def moves(self) -> tuple:
        return self.underlying.moves

    @property
    def support(self) -> frozenset:
        return self.underlying.support

    @property
    def mapping(self) -> dict:
        return self.underlying.mapping

    def apply(self, e) -> Address:
        return self.underlying.apply(e)

    def is_identity(self) -> bool:
        return self.underlying.is_identity()


Perm = Union[FinPerm, OmegaPerm]


def identity(carrier: Optional[OrderSpec] = None) -> FinPerm:
    return FinPerm((), carrier)


def apply(w: Perm, e) -> Address:
    return w.apply(e)


def _carrier(w: Perm) -> Optional[OrderSpec]:
    return w.carrier


def _rewrap(template: Perm, other: Perm, fin: FinPerm) -> Perm:
    if isinstance(template, OmegaPerm) and isinstance(other, OmegaPerm):
        if template.involution != other.involution:
            raise CarrierMismatch("permutations use different involutions")
        return OmegaPerm(fin, template.involution, template.carrier)
    if isinstance(template, OmegaPerm) and other is None:
        return OmegaPerm(fin, template.involution, template.carrier)
    return fin


def compose(u: Perm, v: Perm) -> Perm:
    """``u o v``: apply ``v`` first."""
    cu, cv = _carrier(u), _carrier(v)
    if cu is not None and cv is not None and cu != cv:
        raise CarrierMismatch("permutations live on different carriers")
    points = set(u.support) | set(v.support)
    mapping = {p: u.apply(v.apply(p)) for p in points}
    fin = FinPerm.from_mapping(mapping, cu if cu is not None else cv)
    return _rewrap(u, v, fin)


def inverse(w: Perm) -> Perm:
    fin = FinPerm.from_mapping({b: a for a, b in w.moves}, _carrier(w))
    return _rewrap(w, None, fin)


def transposition(a, b, carrier: Optional[OrderSpec] = None) -> FinPerm:
    a, b = Address(*a), Address(*b)
    if a == b:
        raise EqualAddresses(f"cannot swap {tuple(a)} with itself")
    return FinPerm.from_mapping({a: b, b: a}, carrier)


def omega_transposition(a, b, inv: InvolutionSpec, carrier: OrderSpec) -> OmegaPerm:
    """The equivariant swap of ``a`` and ``b`` (and of their mirror images)."""
    a, b = Address(*a), Address(*b)
    if a == b:
        raise EqualAddresses(f"cannot swap {tuple(a)} with itself")
    ia, ib = involution_image(carrier, inv, a), involution_image(carrier, inv, b)
    if ia == a or ib == b:
        raise FixedPointArgument("the fixed point of the involution cannot be moved")
    if b == ia:
        fin = FinPerm.from_mapping({a: b, b: a}, carrier)
    else:
        fin = FinPerm.from_mapping({a: b, b: a, ia: ib, ib: ia}, carrier)
    return OmegaPerm(fin, inv, carrier)


def as_omega(w: FinPerm, inv: InvolutionSpec, carrier: OrderSpec) -> OmegaPerm:
    return OmegaPerm(FinPerm(w.moves, carrier), inv, carrier)


# ---------------------------------------------------------------------------
# Lengths


def _plain_pair_count(w: Perm, border: OrderSpec, skip=None) -> ExtendedCount:
    """Inverted pairs of ``w`` over the whole carrier, optionally ignoring one point."""
    support = sorted(w.support, key=border.position)
    count = 0
    for i, e in enumerate(support):
        for f in support[i + 1:]:
            if less(border, w.apply(f), w.apply(e)):
                count += 1
    total = Finite(count)
    for e in support:
        image = w.apply(e)
        lo, hi = (e, image) if less(border, e, image) else (image, e)
        between = interval_cardinality(border, lo, hi)
        inside = sum(1 for s in support if less(border, lo, s) and less(border, s, hi))
        if skip is not None and less(border, lo, skip) and less(border, skip, hi):
            inside += 1
        total = total + (between if not between.is_finite else Finite(between.n - inside))
    return total


def length(w: Perm, border: OrderSpec) -> ExtendedCount:
    """Number of inverted pairs, counted up to the mirror symmetry for ``OmegaPerm``."""
    if not isinstance(w, OmegaPerm):
        return _plain_pair_count(w, border)
    fixed = computed_fixed_points(border, w.involution)
    skip = fixed[0] if fixed else None
    pairs = _plain_pair_count(w, border, skip)
    if not pairs.is_finite:
        return INFINITE
    low_end = lower_half_end(border, w.involution)
    high_start = upper_half_start(border, w.involution)
    crossing = sum(1 for e in w.support
                   if left_of(border, e, low_end) and not left_of(border, w.apply(e), high_start))
    total = pairs.n + crossing
    assert total % 2 == 0
    return Finite(total // 2)


def truncated_pair_count(points, image, mirror=None) -> int:
    """Inversions of a permutation of an ordered window given by index images."""
    n = len(points)
    count = 0
    for i in range(n):
        if mirror is not None and mirror[i] == i:
            continue
        for j in range(i + 1, n):
            if mirror is not None and (mirror[j] == j or i > mirror[j]):
                continue
            if image[j] < image[i]:
                count += 1
    return count


def length_truncated(w: Perm, border: OrderSpec, radius: int,
                     inv: Optional[InvolutionSpec] = None) -> int:
    """Inversion count of ``w`` restricted to the window of the given radius."""
    if isinstance(w, OmegaPerm):
        inv = w.involution
    points = enumerate_truncation(border, inv, radius)
    index = {p: i for i, p in enumerate(points)}
    if not set(w.support) <= set(index):
        raise SupportExceedsTruncation(f"support of w is not inside the radius-{radius} window")
    image = [index[w.apply(p)] for p in points]
    mirror = None
    if isinstance(w, OmegaPerm):
        mirror = [index[involution_image(border, inv, p)] for p in points]
    return truncated_pair_count(points, image, mirror)


def is_in_W_P(w: Perm, sigma0) -> bool:
    """True iff ``w`` preserves every fiber of ``sigma0`` (checked on the support)."""
    return all(sigma0.label(w.apply(e)) == sigma0.label(e) for e in w.support)


# ---------------------------------------------------------------------------
# JSON


def perm_to_json(w: Perm) -> dict:
    return {"moves": [[address_to_json(a), address_to_json(b)] for a, b in w.moves]}


def perm_from_json(obj, path="$", carrier: Optional[OrderSpec] = None,
                   inv: Optional[InvolutionSpec] = None) -> Perm:
    if not isinstance(obj, dict) or not isinstance(obj.get("moves"), list):
        raise SchemaError('expected {"moves": [[addr, addr], ...]}', path)
    mapping = {}
    for i, pair in enumerate(obj["moves"]):
        p = f"{path}.moves[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("each move is a pair [addr, addr]", p)
        a = address_from_json(pair[0], p + "[0]")
        b = address_from_json(pair[1], p + "[1]")
        if a in mapping:
            raise SchemaError(f"address {list(a)} is moved twice", p)
        mapping[a] = b
    try:
        fin = FinPerm.from_mapping(mapping, carrier)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from exc
    if inv is not None and carrier is not None:
        return OmegaPerm(fin, inv, carrier)
    return fin
