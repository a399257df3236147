"""Finite complete lattices used as approximation spaces.

Three value representations share one small interface (``le``, ``meet``,
``join``, ``top``, ``bottom``, ``elements``):

* :class:`FiniteLattice` wraps a :class:`FinSpace` that happens to be a
  lattice; values are element indices.
* :class:`O2Lattice` is O²(Y); values are :class:`UpFamily` objects and the
  lattice operations never enumerate O²(Y).
* :class:`KBottomLattice` is the finite model of compact subsets of a
  discrete space under reverse inclusion with an added bottom ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Hashable, Iterable, Sequence

from .errors import NotALattice
from .finspace import (
    DEFAULT_CAPS,
    Caps,
    FinSpace,
    UpFamily,
    bits,
    nu,
    o2_elements,
    o2_space,
)


class Lattice:
    """Interface shared by the value representations."""

    def le(self, a, b) -> bool:
        raise NotImplementedError

    def meet(self, a, b):
        raise NotImplementedError

    def join(self, a, b):
        raise NotImplementedError

    @property
    def top(self):
        raise NotImplementedError

    @property
    def bottom(self):
        raise NotImplementedError

    def elements(self) -> Sequence:
        raise NotImplementedError

    def label(self, a) -> str:
        raise NotImplementedError

    def meet_all(self, values: Iterable):
        acc = self.top
        for v in values:
            acc = self.meet(acc, v)
        return acc

    def join_all(self, values: Iterable):
        acc = self.bottom
        for v in values:
            acc = self.join(acc, v)
        return acc

    def eq(self, a, b) -> bool:
        return self.le(a, b) and self.le(b, a)

    @cached_property
    def space(self) -> FinSpace:
        """The lattice as a finite space, element ``k`` being ``elements()[k]``."""
        els = self.elements()
        return FinSpace.from_leq([self.label(e) for e in els], lambda i, j: self.le(els[i], els[j]))

    @cached_property
    def _position(self) -> dict:
        return {e: k for k, e in enumerate(self.elements())}

    def index_of(self, a) -> int:
        return self._position[a]


class FiniteLattice(Lattice):
    """A finite poset with all meets and joins; values are element indices."""

    def __init__(self, space: FinSpace):
        if space.n == 0:
            raise NotALattice("a lattice needs at least one element")
        by_down = {d: i for i, d in enumerate(space.down)}
        by_up = {u: i for i, u in enumerate(space.up)}
        n = space.n
        meets = [[0] * n for _ in range(n)]
        joins = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                # the meet is the element whose down-set is down(a) & down(b), if any
                m = by_down.get(space.down[a] & space.down[b])
                j = by_up.get(space.up[a] & space.up[b])
                if m is None or j is None:
                    raise NotALattice(
                        f"{space.names[a]!r} and {space.names[b]!r} have no "
                        f"{'meet' if m is None else 'join'}"
                    )
                meets[a][b] = meets[b][a] = m
                joins[a][b] = joins[b][a] = j
        tops = [i for i in range(n) if space.up[i] == 1 << i and space.down[i] == space.full]
        bots = [i for i in range(n) if space.down[i] == 1 << i and space.up[i] == space.full]
        if not tops or not bots:
            raise NotALattice("no top or no bottom element")
        self._space = space
        self._meets = meets
        self._joins = joins
        self._top = tops[0]
        self._bottom = bots[0]

    @property
    def space(self) -> FinSpace:  # type: ignore[override]
        return self._space

    def le(self, a: int, b: int) -> bool:
        return self._space.le(a, b)

    def meet(self, a: int, b: int) -> int:
        return self._meets[a][b]

    def join(self, a: int, b: int) -> int:
        return self._joins[a][b]

    @property
    def top(self) -> int:
        return self._top

    @property
    def bottom(self) -> int:
        return self._bottom

    def elements(self) -> Sequence[int]:
        return range(self._space.n)

    def index_of(self, a: int) -> int:
        return a

    def label(self, a: int) -> str:
        return self._space.names[a]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteLattice) and other._space == self._space

    def __hash__(self) -> int:
        return hash(self._space)


@dataclass(frozen=True, eq=False)
class O2Lattice(Lattice):
    """O²(Y): up-families of opens of ``Y`` ordered by inclusion."""

    Y: FinSpace
    caps: Caps = field(default=DEFAULT_CAPS)

    def le(self, a: UpFamily, b: UpFamily) -> bool:
        return a <= b

    def meet(self, a: UpFamily, b: UpFamily) -> UpFamily:
        return a.intersection(b)

    def join(self, a: UpFamily, b: UpFamily) -> UpFamily:
        return a.union(b)

    @property
    def top(self) -> UpFamily:
        return UpFamily.full()

    @property
    def bottom(self) -> UpFamily:
        return UpFamily.empty()

    def elements(self) -> Sequence[UpFamily]:
        return o2_elements(self.Y, self.caps)

    @cached_property
    def space(self) -> FinSpace:  # type: ignore[override]
        return o2_space(self.Y, self.caps)

    def label(self, a: UpFamily) -> str:
        return a.render(self.Y)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, O2Lattice) and other.Y == self.Y

    def __hash__(self) -> int:
        return hash(("O2", self.Y))


@dataclass(frozen=True, eq=False)
class KBottomLattice(Lattice):
    """Compact subsets of a discrete space, reverse inclusion, plus a bottom.

    Values are ``None`` (the added bottom) or a ``frozenset`` of element
    indices.  Smaller sets carry more information and sit higher.
    """

    Y: FinSpace

    def __post_init__(self) -> None:
        if not self.Y.is_discrete():
            raise ValueError("the finite K_bot model needs a discrete space")

    def le(self, a, b) -> bool:
        if a is None:
            return True
        if b is None:
            return False
        return b <= a

    def meet(self, a, b):
        if a is None or b is None:
            return None
        return a | b

    def join(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        return a & b

    @property
    def top(self) -> frozenset:
        return frozenset()

    @property
    def bottom(self):
        return None

    def elements(self) -> Sequence:
        n = self.Y.n
        subsets = [frozenset(c) for k in range(n + 1) for c in combinations(range(n), k)]
        return [None] + sorted(subsets, key=lambda s: (-len(s), sorted(self.Y.names[i] for i in s)))

    def label(self, a) -> str:
        if a is None:
            return "bot"
        return "{" + ",".join(sorted(self.Y.names[i] for i in a)) + "}"

    def embed(self, a) -> UpFamily:
        """``i_Y``: a compact set goes to the family of opens containing it."""
        if a is None:
            return UpFamily.empty()
        return UpFamily(frozenset({self.Y.mask(a)}))

    def point(self, y: int) -> frozenset:
        return frozenset({y})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KBottomLattice) and other.Y == self.Y

    def __hash__(self) -> int:
        return hash(("Kbot", self.Y))


def nu_values(Y: FinSpace) -> tuple[UpFamily, ...]:
    return tuple(nu(Y, y) for y in range(Y.n))


def opens_lattice(Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> FiniteLattice:
    return FiniteLattice(Y.opens(caps).as_space)


def overt_space(Y: FinSpace) -> tuple[FinSpace, tuple[int, ...]]:
    """Nonempty closed (down-closed) subsets of ``Y`` under inclusion.

    Returns the space and the tuple of closed-set masks, element ``k`` of
    the space being ``masks[k]``.
    """
    masks = [m for m in range(1, Y.full + 1) if Y.is_closed(m)]
    masks.sort(key=Y.sort_key)
    space = FinSpace.from_leq([Y.render(m) for m in masks], lambda i, j: masks[i] & ~masks[j] == 0)
    return space, tuple(masks)


def lattice_values_mask(values: Iterable[Any], lattice: Lattice) -> int:
    m = 0
    for v in values:
        m |= 1 << lattice.index_of(v)
    return m


def mask_values(mask: int, lattice: Lattice) -> list:
    els = lattice.elements()
    return [els[k] for k in bits(mask)]
