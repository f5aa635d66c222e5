"""Brute-force ground truth on finite windows of the carrier.

Everything here works on plain finite data: a list of points in increasing
order, group elements as one-line tuples of indices (``w[i]`` is the index of
the image of ``points[i]``), and labelings as tuples of sortable label keys.
Nothing here calls the closed-form counting code in :mod:`indflag.cells` or
:mod:`indflag.permutations`.  That separation is what makes the comparisons
in the test suite meaningful.

Linear algebra uses exact rationals only; ranks come from fraction-free
(Bareiss) elimination on integer rows.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .carrier import Address, InvolutionSpec, OrderSpec, involution_image
from .errors import (CapExceeded, DegenerateFlag, NotMember, NotNested,
                     SupportExceedsTruncation, UnsupportedType)

CAP_A = 8
CAP_BC = 5


# ---------------------------------------------------------------------------
# Finite Weyl groups


def mirror_indices(spec: OrderSpec, inv: InvolutionSpec, points: Sequence) -> tuple:
    """The involution as a map on indices of ``points`` (which must be stable)."""
    index = {Address(*p): i for i, p in enumerate(points)}
    out = []
    for p in points:
        image = involution_image(spec, inv, p)
        if image not in index:
            raise SupportExceedsTruncation(f"window is not stable: {tuple(image)} missing")
        out.append(index[image])
    return tuple(out)


def compose(u: tuple, v: tuple) -> tuple:
    """``u o v`` (apply ``v`` first)."""
    return tuple(u[x] for x in v)


def inverse(w: tuple) -> tuple:
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x] = i
    return tuple(out)


def swap(n: int, pairs) -> tuple:
    w = list(range(n))
    for a, b in pairs:
        w[a], w[b] = w[b], w[a]
    return tuple(w)


@dataclass
class FiniteWeylGroup:
    """A finite Weyl group acting on a window of the carrier.

    ``kind`` is ``"A"`` (all permutations) or ``"BC"`` (permutations commuting
    with ``mirror``); ``even_signs`` restricts ``"BC"`` to the type D subgroup.
    """

    kind: str
    points: tuple
    elements: tuple
    generators: tuple
    reflections: tuple
    mirror: Optional[tuple] = None
    even_signs: bool = False
    _dist: Optional[dict] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def identity(self) -> tuple:
        return tuple(range(self.n))

    def lengths(self) -> dict:
        if self._dist is None:
            dist = {self.identity: 0}
            queue = deque([self.identity])
            while queue:
                x = queue.popleft()
                for s in self.generators:
                    y = compose(x, s)
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        queue.append(y)
            self._dist = dist
        return self._dist

    def to_tuple(self, w) -> tuple:
        """Accept a one-line tuple or anything with an ``apply`` method on addresses."""
        if isinstance(w, tuple) and all(isinstance(x, int) for x in w):
            return w
        index = {Address(*p): i for i, p in enumerate(self.points)}
        out = []
        for p in self.points:
            image = Address(*w.apply(p))
            if image not in index:
                raise SupportExceedsTruncation(f"{tuple(p)} leaves the window")
            out.append(index[image])
        return tuple(out)


def _free_pairs(mirror):
    lower = [i for i, m in enumerate(mirror) if i < m]
    fixed = [i for i, m in enumerate(mirror) if i == m]
    return lower, fixed


def enumerate_group(points: Sequence, kind: str = "A", mirror: Optional[tuple] = None,
                    even_signs: bool = False) -> FiniteWeylGroup:
    """Enumerate W of a window: ``n!`` permutations or ``2^m m!`` signed ones."""
    points = tuple(Address(*p) for p in points)
    n = len(points)
    if kind == "A":
        if n > CAP_A:
            raise CapExceeded(f"type A enumeration capped at n={CAP_A}, got {n}")
        elements = tuple(itertools.permutations(range(n)))
        generators = tuple(swap(n, [(i, i + 1)]) for i in range(n - 1))
        reflections = tuple(swap(n, [(i, j)]) for i in range(n) for j in range(i + 1, n))
        return FiniteWeylGroup("A", points, elements, generators, reflections)
    if kind != "BC":
        raise UnsupportedType(f"unknown group kind {kind!r}")
    if mirror is None:
        raise UnsupportedType("a signed group needs the involution on the window")
    lower, fixed = _free_pairs(mirror)
    m = len(lower)
    if m > CAP_BC:
        raise CapExceeded(f"type BC enumeration capped at m={CAP_BC}, got {m}")
    elements = []
    for perm in itertools.permutations(range(m)):
        for signs in itertools.product((0, 1), repeat=m):
            if even_signs and sum(signs) % 2:
                continue
            w = list(range(n))
            for k in range(m):
                target = lower[perm[k]]
                if signs[k]:
                    target = mirror[target]
                w[lower[k]] = target
                w[mirror[lower[k]]] = mirror[target]
            elements.append(tuple(w))
    free = [i for i in range(n) if i not in fixed]

    def omega_t(a, b):
        if b == mirror[a]:
            return swap(n, [(a, b)])
        return swap(n, [(a, b), (mirror[a], mirror[b])])

    generators = [omega_t(free[k], free[k + 1]) for k in range(len(free) - 1)]
    refl = {omega_t(a, b) for a in free for b in free if a != b}
    if even_signs:
        element_set = set(elements)
        generators = [g for g in generators if g in element_set]
        if m >= 2:
            a, b = lower[-2], lower[-1]
            generators.append(omega_t(a, mirror[b]))
        refl = {t for t in refl if t in element_set}
    generators = tuple(dict.fromkeys(generators))
    return FiniteWeylGroup("BC", points, tuple(elements), generators,
                           tuple(sorted(refl)), tuple(mirror), even_signs)


def bfs_length(g: FiniteWeylGroup, w) -> int:
    """Shortest word length of ``w`` in the simple generators."""
    w = g.to_tuple(w)
    dist = g.lengths()
    if w not in dist:
        raise NotMember(f"{w} is not in the group")
    return dist[w]


def lower_interval(g: FiniteWeylGroup, v) -> frozenset:
    """All ``u <= v``, found by descending along reflections that shorten."""
    v = g.to_tuple(v)
    dist = g.lengths()
    if v not in dist:
        raise NotMember(f"{v} is not in the group")
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for t in g.reflections:
            y = compose(x, t)
            if dist[y] < dist[x] and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def classical_bruhat_leq(g: FiniteWeylGroup, u, v) -> bool:
    u = g.to_tuple(u)
    if u not in g.lengths():
        raise NotMember(f"{u} is not in the group")
    return u in lower_interval(g, v)


# ---------------------------------------------------------------------------
# Cosets, cells and fixed points


def act(labels: Sequence, w: tuple) -> tuple:
    """The labeling ``labels o w^{-1}``."""
    winv = inverse(w)
    return tuple(labels[winv[i]] for i in range(len(w)))


def coset_classes(g: FiniteWeylGroup, labels: Sequence) -> dict:
    """Group elements sorted by the labeling they produce."""
    classes = {}
    for w in g.elements:
        classes.setdefault(act(labels, w), []).append(w)
    return classes


def minimal_coset_length(g: FiniteWeylGroup, labels: Sequence, labeling: tuple) -> int:
    dist = g.lengths()
    return min(dist[w] for w in g.elements if act(labels, w) == labeling)


def torus_fixed_points(labels: Sequence, g: FiniteWeylGroup) -> list:
    """One labeling per cell: the distinct ``labels o w^{-1}``."""
    return sorted(coset_classes(g, labels))


def labeling_dimension(labeling: Sequence, mirror: Optional[tuple] = None) -> int:
    """Dimension of the cell of a labeling of an ordered window.

    Counts pairs ``i < j`` with ``labeling[j] < labeling[i]``.  With a mirror,
    only non-fixed points are used and each pair orbit ``{(i, j), (m(j), m(i))}``
    is counted once, through the representative with ``i <= m(j)``.
    """
    n = len(labeling)
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            if not labeling[j] < labeling[i]:
                continue
            if mirror is not None:
                if mirror[i] == i or mirror[j] == j or i > mirror[j]:
                    continue
            count += 1
    return count


def finite_cell_dimension(labels: Sequence, w: tuple, mirror: Optional[tuple] = None) -> int:
    """Cell dimension of ``labels o w^{-1}`` in the finite flag variety of the window."""
    return labeling_dimension(act(labels, w), mirror)


def moves(labeling: tuple, mirror: Optional[tuple] = None, upward: bool = True) -> list:
    """Labelings one move away from ``labeling``.

    An upward move swaps the labels at positions ``i < j`` when
    ``labeling[i] < labeling[j]``; with a mirror the swap is mirrored too and
    fixed points are never touched.  Downward moves undo such swaps.
    """
    x = tuple(labeling)
    n = len(x)
    out = []
    for i in range(n):
        if mirror is not None and mirror[i] == i:
            continue
        for j in range(i + 1, n):
            if mirror is not None and mirror[j] == j:
                continue
            if upward and not x[i] < x[j]:
                continue
            if not upward and not x[j] < x[i]:
                continue
            y = list(x)
            y[i], y[j] = x[j], x[i]
            if mirror is not None and j != mirror[i]:
                a, b = mirror[i], mirror[j]
                y[a], y[b] = x[b], x[a]
            out.append(tuple(y))
    return out


def move_closure(labeling: tuple, mirror: Optional[tuple] = None, upward: bool = True,
                 limit: Optional[int] = None) -> set:
    """Labelings reachable from ``labeling`` by chains of moves.

    With a ``limit`` the search stops as soon as more than ``limit`` labelings are seen.
    """
    seen = {tuple(labeling)}
    queue = deque(seen)
    while queue:
        for y in moves(queue.popleft(), mirror, upward):
            if y not in seen:
                seen.add(y)
                queue.append(y)
                if limit is not None and len(seen) > limit:
                    return seen
    return seen


def tangent_space_dimension(g: FiniteWeylGroup, w, at) -> int:
    """Number of reflections ``t`` with ``t * at <= w`` (type A full flags)."""
    if g.kind != "A":
        raise UnsupportedType("tangent spaces are modelled for type A only")
    below = lower_interval(g, w)
    at = g.to_tuple(at)
    return sum(1 for t in g.reflections if compose(t, at) in below)


def smooth_by_tangent_spaces(g: FiniteWeylGroup, w) -> bool:
    """True iff the tangent dimension equals the length at every fixed point below ``w``."""
    if g.kind != "A":
        raise UnsupportedType("tangent spaces are modelled for type A only")
    below = lower_interval(g, w)
    ell = g.lengths()[g.to_tuple(w)]
    for v in below:
        if sum(1 for t in g.reflections if compose(t, v) in below) != ell:
            return False
    return True


# ---------------------------------------------------------------------------
# Exact rational flags


def _integer_rows(rows):
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rank(rows) -> int:
    """Rank of a list of rational rows by fraction-free elimination."""
    m = _integer_rows(rows)
    if not m:
        return 0
    n_cols = len(m[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, len(m)):
            m[i] = [(m[r][c] * m[i][k] - m[i][c] * m[r][k]) // prev for k in range(n_cols)]
        prev = m[r][c]
        r += 1
        if r == len(m):
            break
    return r


@dataclass(frozen=True)
class RationalFlag:
    """A flag in the span of finitely many coordinates.

    ``spaces[i]`` is a row basis (exact rationals, one entry per coordinate)
    of the member attached to ``labels[i]``, the members being nested in label
    order.  The member of a label collects everything labeled at most it.
    """

    coords: tuple
    labels: tuple
    spaces: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Address(*c) for c in self.coords))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "spaces", tuple(
            tuple(tuple(Fraction(x) for x in row) for row in space) for space in self.spaces))

    def dims(self) -> list:
        return [rank(space) for space in self.spaces]

    def check(self):
        """Raise ``DegenerateFlag`` unless the members are nested and end with everything."""
        previous, last = [], 0
        for label, space in zip(self.labels, self.spaces):
            d = rank(space)
            if d < last or rank(list(previous) + list(space)) != d:
                raise DegenerateFlag(f"member {label} does not contain its predecessor")
            previous, last = space, d
        if last != len(self.coords):
            raise DegenerateFlag("the last member is not the whole space")

    def to_json(self):
        return {
            "coords": [list(c) for c in self.coords],
            "labels": [list(l) if isinstance(l, tuple) else l for l in self.labels],
            "spaces": [[[[x.numerator, x.denominator] for x in row] for row in space]
                       for space in self.spaces],
        }

    @staticmethod
    def from_json(obj) -> "RationalFlag":
        labels = [tuple(l) if isinstance(l, list) else l for l in obj["labels"]]
        spaces = [[[Fraction(p, q) for p, q in row] for row in space] for space in obj["spaces"]]
        return RationalFlag(obj["coords"], labels, spaces)


def coordinate_flag(coords: Sequence, sigma: dict, labels: Sequence) -> RationalFlag:
    """The flag spanned fiberwise by the coordinates: member of ``a`` = span of ``sigma <= a``."""
    coords = [Address(*c) for c in coords]
    n = len(coords)
    spaces = []
    for a in labels:
        rows = []
        for i, c in enumerate(coords):
            if sigma[c] <= a:
                row = [0] * n
                row[i] = 1
                rows.append(row)
        spaces.append(rows)
    return RationalFlag(coords, labels, spaces)


def apply_matrix(b, flag: RationalFlag) -> RationalFlag:
    """Image of a flag under the matrix ``b`` acting on column vectors."""
    n = len(flag.coords)
    spaces = []
    for space in flag.spaces:
        spaces.append([[sum(b[i][k] * row[k] for k in range(n)) for i in range(n)]
                       for row in space])
    return RationalFlag(flag.coords, flag.labels, spaces)


def random_unitriangular(n: int, rng: random.Random, spread: int = 5):
    """Upper unitriangular rational matrix (stabilizes the standard coordinate flag)."""
    b = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        b[i][i] = Fraction(1)
        for j in range(i + 1, n):
            b[i][j] = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
    return b


def _meet_dim(space, n_keep: int, n: int) -> int:
    """``dim(space ∩ span(first n_keep coordinates))``."""
    tail = [row[n_keep:] for row in space]
    return rank(space) - (rank(tail) if n_keep < n else 0)


def sigma_of_flag(flag: RationalFlag) -> dict:
    """Relative position of a flag to the coordinate order.

    For each coordinate ``e`` this is the least label whose member meets
    ``span(x <= e)`` in more than it meets ``span(x < e)``.
    """
    n = len(flag.coords)
    out = {}
    for pos, e in enumerate(flag.coords):
        for label, space in zip(flag.labels, flag.spaces):
            if _meet_dim(space, pos + 1, n) != _meet_dim(space, pos, n):
                out[e] = label
                break
        else:
            raise DegenerateFlag(f"no member separates coordinate {tuple(e)}")
    return out


def embed_flag(flag: RationalFlag, J: Sequence, sigma: dict) -> RationalFlag:
    """Extend a flag on ``I`` to ``J ⊇ I`` by adding new coordinates fiberwise.

    The member of ``a`` gains the coordinates ``e`` in ``J \\ I`` with
    ``sigma[e] <= a``; ``J`` must be listed in increasing order.
    """
    J = [Address(*x) for x in J]
    old = {c: i for i, c in enumerate(flag.coords)}
    if not set(old) <= set(J):
        raise NotNested("the target window does not contain the source window")
    n = len(J)
    spaces = []
    for label, space in zip(flag.labels, flag.spaces):
        rows = []
        for row in space:
            new = [Fraction(0)] * n
            for k, c in enumerate(J):
                if c in old:
                    new[k] = row[old[c]]
            rows.append(new)
        for k, c in enumerate(J):
            if c not in old and sigma[c] <= label:
                unit = [Fraction(0)] * n
                unit[k] = Fraction(1)
                rows.append(unit)
        spaces.append(rows)
    return RationalFlag(J, flag.labels, spaces)
