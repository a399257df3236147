"""Finite T0 spaces as posets under the Alexandroff topology.

A finite T0 space is the same thing as a finite poset: the specialisation
order ``x <= y`` holds iff every open set containing ``x`` contains ``y``,
and the open sets are exactly the up-sets.  Subsets of a space are stored
as integer bitmasks over element indices; element ``i`` is bit ``1 << i``.

Elements of the double powerspace O²(Y) are Scott-open families of open
sets.  On a finite space these are the up-closed families in O(Y), stored
as their (unique) antichain of minimal members, see :class:`UpFamily`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, CycleError, DuplicateNameError, NotContinuous, NotOpenMap


@dataclass(frozen=True)
class Caps:
    """Enumeration limits. Exceeding one raises :class:`CapExceeded`."""

    opens: int = 16  # ground elements whose up-sets may be enumerated
    mu: int = 3  # |Y| for the O^4 representation used by ``mu``
    exponential: int = 4096  # number of monotone maps in an exponential
    branches: int = 64  # affine branches per interval in realpw composition


DEFAULT_CAPS = Caps()


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True)
class FinSpace:
    """A finite poset. ``up[i]`` is the bitmask of the principal up-set of ``i``."""

    names: tuple[str, ...]
    up: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.up):
            raise ValueError("names and up must have equal length")
        for i, u in enumerate(self.up):
            if not u >> i & 1:
                raise ValueError(f"order is not reflexive at {self.names[i]!r}")

    @classmethod
    def from_leq(cls, names: Sequence[str], leq) -> FinSpace:
        """Build from a predicate ``leq(i, j)`` already known to be a partial order."""
        n = len(names)
        up = tuple(sum(1 << j for j in range(n) if leq(i, j)) for i in range(n))
        return cls(tuple(names), up)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        return tuple(sum(1 << i for i in range(self.n) if self.up[i] >> j & 1) for j in range(self.n))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index(self, name: str) -> int:
        return self._index[name]

    def le(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def mask(self, indices: Iterable[int]) -> int:
        m = 0
        for i in indices:
            m |= 1 << i
        return m

    def mask_of_names(self, names: Iterable[str]) -> int:
        return self.mask(self.index(s) for s in names)

    def members(self, mask: int) -> list[int]:
        return list(bits(mask))

    def upclosure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def downclosure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def is_open(self, mask: int) -> bool:
        return self.upclosure(mask) == mask

    def is_closed(self, mask: int) -> bool:
        return self.downclosure(mask) == mask

    def interior(self, mask: int) -> int:
        return sum(1 << i for i in bits(mask) if subset(self.up[i], mask))

    def closure(self, mask: int) -> int:
        return self.full & ~self.interior(self.full & ~mask)

    def minimal(self, mask: int) -> int:
        return sum(1 << i for i in bits(mask) if self.down[i] & mask == 1 << i)

    def sort_key(self, mask: int) -> tuple[int, list[str]]:
        return popcount(mask), sorted(self.names[i] for i in bits(mask))

    def render(self, mask: int) -> str:
        return "{" + ",".join(sorted(self.names[i] for i in bits(mask))) + "}"

    def parse_set(self, text: str) -> int:
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"not a set literal: {text!r}")
        inner = body[1:-1].strip()
        return self.mask_of_names(s.strip() for s in inner.split(",")) if inner else 0

    def is_discrete(self) -> bool:
        return all(u == 1 << i for i, u in enumerate(self.up))

    def is_lattice(self) -> bool:
        downs = set(self.down)
        ups = set(self.up)
        for a, b in product(range(self.n), repeat=2):
            if self.down[a] & self.down[b] not in downs or self.up[a] & self.up[b] not in ups:
                return False
        return self.n > 0

    def opens(self, caps: Caps = DEFAULT_CAPS) -> OpensLattice:
        if self.n > caps.opens:
            raise CapExceeded("cap_opens", caps.opens, self.n)
        return _opens_cached(self)


def space_from_order(names: Sequence[str], le_pairs: Iterable[tuple[int, int]]) -> FinSpace:
    """Reflexive-transitive closure of ``le_pairs`` as a :class:`FinSpace`."""
    names = tuple(names)
    if not names:
        raise ValueError("a space needs at least one element")
    if len(set(names)) != len(names):
        dup = next(s for s in names if names.count(s) > 1)
        raise DuplicateNameError(f"duplicate element name {dup!r}")
    n = len(names)
    up = [1 << i for i in range(n)]
    for a, b in le_pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise IndexError(f"order pair ({a}, {b}) out of range")
        up[a] |= 1 << b
    for k in range(n):
        for i in range(n):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i in range(n):
        for j in bits(up[i] & ~(1 << i)):
            if up[j] >> i & 1:
                raise CycleError(f"{names[i]!r} <= {names[j]!r} <= {names[i]!r}: not T0")
    return FinSpace(names, tuple(up))


def chain(n: int, prefix: str = "c") -> FinSpace:
    return space_from_order([f"{prefix}{i}" for i in range(n)], [(i, i + 1) for i in range(n - 1)])


def discrete(n: int, prefix: str = "") -> FinSpace:
    return space_from_order([f"{prefix}{i}" for i in range(n)], [])


SIERPINSKI = space_from_order(["bot", "top"], [(0, 1)])


@dataclass(frozen=True)
class OpensLattice:
    """All open sets of ``space`` in canonical order: by size, then by sorted names."""

    space: FinSpace
    opens: tuple[int, ...]

    @cached_property
    def index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.opens)}

    @cached_property
    def as_space(self) -> FinSpace:
        """O(X) ordered by inclusion, as a finite space in its own right."""
        ops = self.opens
        return FinSpace.from_leq([self.space.render(m) for m in ops], lambda i, j: subset(ops[i], ops[j]))

    def __len__(self) -> int:
        return len(self.opens)

    def __iter__(self) -> Iterator[int]:
        return iter(self.opens)


_OPENS_MEMO: dict[FinSpace, OpensLattice] = {}


def _opens_cached(space: FinSpace) -> OpensLattice:
    hit = _OPENS_MEMO.get(space)
    if hit is None:
        hit = OpensLattice(space, tuple(sorted(_upsets(space), key=space.sort_key)))
        if len(_OPENS_MEMO) < 100_000:
            _OPENS_MEMO[space] = hit
    return hit


def _upsets(space: FinSpace) -> list[int]:
    # maximal elements first, so every strict upper bound is decided before its lower bounds
    order = sorted(range(space.n), key=lambda i: popcount(space.up[i]))
    out: list[int] = []

    def rec(k: int, mask: int) -> None:
        if k == len(order):
            out.append(mask)
            return
        i = order[k]
        rec(k + 1, mask)
        if subset(space.up[i] & ~(1 << i), mask):
            rec(k + 1, mask | 1 << i)

    rec(0, 0)
    return out


def opens(X: FinSpace, caps: Caps = DEFAULT_CAPS) -> OpensLattice:
    return X.opens(caps)


def interior(X: FinSpace, A: int) -> int:
    """Largest up-set contained in ``A``."""
    return X.interior(A)


@dataclass(frozen=True)
class UpFamily:
    """An up-closed family of open sets, stored as its antichain of minimal members.

    The family denoted is ``{V : A <= V for some A in antichain}``.  The
    empty antichain is the empty family (bottom of O²(Y)); the antichain
    ``{0}`` (just the empty open) is the family of all opens (top).
    """

    antichain: frozenset[int]

    @classmethod
    def generated(cls, gens: Iterable[int]) -> UpFamily:
        kept: list[int] = []
        for a in sorted(set(gens), key=popcount):
            if not any(subset(b, a) for b in kept):
                kept.append(a)
        return cls(frozenset(kept))

    @classmethod
    def empty(cls) -> UpFamily:
        return cls(frozenset())

    @classmethod
    def full(cls) -> UpFamily:
        return cls(frozenset({0}))

    def __contains__(self, V: int) -> bool:
        return any(subset(a, V) for a in self.antichain)

    def __le__(self, other: UpFamily) -> bool:
        return all(a in other for a in self.antichain)

    def __ge__(self, other: UpFamily) -> bool:
        return other <= self

    def union(self, other: UpFamily) -> UpFamily:
        return UpFamily.generated(self.antichain | other.antichain)

    def intersection(self, other: UpFamily) -> UpFamily:
        return UpFamily.generated(a | b for a in self.antichain for b in other.antichain)

    def is_empty(self) -> bool:
        return not self.antichain

    def members(self, ol: OpensLattice) -> list[int]:
        return [V for V in ol.opens if V in self]

    def sorted_antichain(self, space: FinSpace) -> list[int]:
        return sorted(self.antichain, key=space.sort_key)

    def render(self, space: FinSpace) -> str:
        return "[" + ",".join(space.render(a) for a in self.sorted_antichain(space)) + "]"


def union_all(families: Iterable[UpFamily]) -> UpFamily:
    gens: set[int] = set()
    for fam in families:
        gens |= fam.antichain
    return UpFamily.generated(gens)


def intersection_all(families: Iterable[UpFamily]) -> UpFamily:
    acc = UpFamily.full()
    for fam in families:
        acc = acc.intersection(fam)
    return acc


@dataclass(frozen=True)
class PointMap:
    """An arbitrary (not necessarily continuous) function between finite spaces."""

    domain: FinSpace
    codomain: FinSpace
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assignment) != self.domain.n:
            raise ValueError("assignment must be total on the domain")
        if any(not 0 <= v < self.codomain.n for v in self.assignment):
            raise ValueError("assignment value outside the codomain")

    @classmethod
    def from_names(cls, domain: FinSpace, codomain: FinSpace, mapping: dict[str, str]) -> PointMap:
        return cls(domain, codomain, tuple(codomain.index(mapping[s]) for s in domain.names))

    @classmethod
    def identity(cls, X: FinSpace) -> PointMap:
        return cls(X, X, tuple(range(X.n)))

    @classmethod
    def constant(cls, X: FinSpace, Y: FinSpace, value: int) -> PointMap:
        return cls(X, Y, (value,) * X.n)

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def preimage(self, mask: int) -> int:
        return sum(1 << i for i, v in enumerate(self.assignment) if mask >> v & 1)

    def image(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.assignment[i]
        return out

    def then(self, g: PointMap) -> PointMap:
        """The composite ``g o self``."""
        return PointMap(self.domain, g.codomain, tuple(g.assignment[v] for v in self.assignment))

    def is_continuous(self) -> bool:
        a, cod = self.assignment, self.codomain
        return all(cod.le(a[i], a[j]) for i in range(self.domain.n) for j in bits(self.domain.up[i]))

    def is_open_map(self, caps: Caps = DEFAULT_CAPS) -> bool:
        return all(self.codomain.is_open(self.image(U)) for U in self.domain.opens(caps))

    def as_dict(self) -> dict[str, str]:
        return {self.domain.names[i]: self.codomain.names[v] for i, v in enumerate(self.assignment)}


@dataclass(frozen=True)
class MapKind:
    continuous: bool
    open_map: bool


def classify_map(f: PointMap, caps: Caps = DEFAULT_CAPS) -> MapKind:
    return MapKind(continuous=f.is_continuous(), open_map=f.is_open_map(caps))


def nu(X: FinSpace, x: int) -> UpFamily:
    """Neighbourhood family of ``x``; its only minimal member is the up-set of ``x``."""
    return UpFamily(frozenset({X.up[x]}))


def int_preimage(f: PointMap, V: int) -> int:
    return f.domain.interior(f.preimage(V))


def pushforward(f: PointMap, U: int, caps: Caps = DEFAULT_CAPS) -> int:
    if not f.is_open_map(caps):
        raise NotOpenMap("pushforward needs a map sending opens to opens")
    return f.image(U)


def double_star(phi: PointMap, fam: UpFamily) -> UpFamily:
    """``{W open in M : phi^-1(W) in fam}`` for continuous ``phi: Y -> M``.

    ``phi^-1(W)`` contains a generator ``A`` iff ``W`` contains the up-closure
    of ``phi(A)``, so the result is generated by those up-closures and no
    enumeration of O(M) is needed.
    """
    if not phi.is_continuous():
        raise NotContinuous("double_star needs a continuous map")
    M = phi.codomain
    return UpFamily.generated(M.upclosure(phi.image(A)) for A in fam.antichain)


def o2_elements(Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> tuple[UpFamily, ...]:
    """Every element of O²(Y) in canonical order (this enumerates up-sets of O(Y))."""
    ol = Y.opens(caps)
    return _o2_cached(ol, caps)


_O2_MEMO: dict[tuple[FinSpace, int], tuple[UpFamily, ...]] = {}


def _o2_cached(ol: OpensLattice, caps: Caps) -> tuple[UpFamily, ...]:
    key = (ol.space, caps.opens)
    hit = _O2_MEMO.get(key)
    if hit is None:
        ospace = ol.as_space
        fams = ospace.opens(caps).opens
        hit = tuple(UpFamily.generated(ol.opens[i] for i in bits(m)) for m in fams)
        _O2_MEMO[key] = hit
    return hit


def o2_space(Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> FinSpace:
    """O²(Y) ordered by inclusion, as a finite space (names are rendered antichains)."""
    elems = o2_elements(Y, caps)
    return FinSpace.from_leq([e.render(Y) for e in elems], lambda i, j: elems[i] <= elems[j])


def mu(Y: FinSpace, fam: UpFamily, caps: Caps = DEFAULT_CAPS) -> UpFamily:
    """Multiplication of the O² monad.

    ``fam`` is an up-family over the space ``o2_space(Y)`` (its generators are
    bitmasks over the indices of ``o2_elements(Y)``).  The result is
    ``{V in O(Y) : {U in O²(Y) : V in U} in fam}``, evaluated by enumeration.
    """
    if Y.n > caps.mu:
        raise CapExceeded("cap_mu", caps.mu, Y.n)
    elems = o2_elements(Y, caps)
    keep = []
    for V in Y.opens(caps):
        S = sum(1 << i for i, e in enumerate(elems) if V in e)
        if S in fam:
            keep.append(V)
    return UpFamily.generated(keep)


def monotone_maps(Z: FinSpace, Y: FinSpace, limit: int | None = None) -> list[tuple[int, ...]]:
    """All monotone maps ``Z -> Y`` as assignment tuples, in lexicographic order."""
    out: list[tuple[int, ...]] = []
    h = [0] * Z.n

    def rec(z: int) -> None:
        if z == Z.n:
            out.append(tuple(h))
            if limit is not None and len(out) > limit:
                raise CapExceeded("cap_exponential", limit, len(out))
            return
        for y in range(Y.n):
            if all(
                (not Z.le(w, z) or Y.le(h[w], y)) and (not Z.le(z, w) or Y.le(y, h[w])) for w in range(z)
            ):
                h[z] = y
                rec(z + 1)

    rec(0)
    return out


def exponential(Z: FinSpace, Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> FinSpace:
    """Continuous maps ``Z -> Y`` under the pointwise order.

    Element ``k`` is ``monotone_maps(Z, Y)[k]``.
    """
    maps = monotone_maps(Z, Y, limit=caps.exponential)
    names = ["(" + ",".join(Y.names[v] for v in h) + ")" for h in maps]
    return FinSpace.from_leq(names, lambda i, j: all(Y.le(a, b) for a, b in zip(maps[i], maps[j])))


def product_space(A: FinSpace, B: FinSpace) -> FinSpace:
    """Componentwise order on pairs; element ``a * B.n + b`` is ``(a, b)``."""
    pairs = [(a, b) for a in range(A.n) for b in range(B.n)]
    names = [f"({A.names[a]},{B.names[b]})" for a, b in pairs]
    return FinSpace.from_leq(
        names, lambda i, j: A.le(pairs[i][0], pairs[j][0]) and B.le(pairs[i][1], pairs[j][1])
    )


def all_maps(X: FinSpace, Y: FinSpace) -> Iterator[PointMap]:
    for a in product(range(Y.n), repeat=X.n):
        yield PointMap(X, Y, a)
