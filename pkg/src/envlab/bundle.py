"""Advice bundles, co-envelopes and the least advice bundle of a finite map.

The relation lattice ``L_f`` holds the pairs ``(U, V)`` of opens with
``U <= f^-1(V)``.  The greatest monotone self-map of ``L_f`` that keeps the
second component fixed is found by a generic descending fixpoint; its range
is the least advice bundle.  A co-envelope is a monotone table from a bundle
lattice to O(X) below ``int f^-1 o pi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterator, Optional, Sequence

from .errors import NotABundle, NotASection, NotJoinPreserving
from .finspace import DEFAULT_CAPS, Caps, FinSpace, PointMap, bits, int_preimage, product_space
from .lattice import FiniteLattice


def _pair_name(X: FinSpace, Y: FinSpace, U: int, V: int) -> str:
    return f"({X.render(U)},{Y.render(V)})"


def greatest_constrained_selfmap(lattice: FiniteLattice, key: Sequence[Hashable]) -> tuple[int, ...]:
    """Greatest monotone ``P`` with ``key[P(a)] == key[a]`` for every element ``a``.

    Starts from the greatest element of each fibre and lowers ``P(a)`` to
    the greatest fibre element below ``P(a) ^ P(b)`` whenever ``a <= b`` but
    ``P(a) !<= P(b)``.  Every admissible map stays below the iterate, so the
    stable result is the greatest one.
    """
    n = lattice.space.n
    fibres: dict[Hashable, list[int]] = {}
    for a in range(n):
        fibres.setdefault(key[a], []).append(a)

    def floor(c: int, k: Hashable) -> int:
        below = [e for e in fibres[k] if lattice.le(e, c)]
        best = lattice.join_all(below)
        if not below or key[best] != k or not lattice.le(best, c):
            raise ValueError("fibre has no greatest element below the requested bound")
        return best

    P = [floor(lattice.top, key[a]) for a in range(n)]
    up = lattice.space.up
    changed = True
    while changed:
        changed = False
        for a in range(n):
            for b in bits(up[a]):
                if not lattice.le(P[a], P[b]):
                    P[a] = floor(lattice.meet(P[a], P[b]), key[a])
                    changed = True
    return tuple(P)


def iter_selfmaps(lattice: FiniteLattice, key: Sequence[Hashable]) -> Iterator[tuple[int, ...]]:
    """Every monotone fibre-preserving self-map, by backtracking over bitmasks."""
    sp = lattice.space
    n = sp.n
    up, down = sp.up, sp.down
    choices = [[c for c in range(n) if key[c] == key[a]] for a in range(n)]
    below = [[b for b in range(a) if down[a] >> b & 1] for a in range(n)]
    above = [[b for b in range(a) if up[a] >> b & 1] for a in range(n)]
    full = (1 << n) - 1
    P = [0] * n

    def rec(a: int) -> Iterator[tuple[int, ...]]:
        if a == n:
            yield tuple(P)
            return
        allowed = full
        for b in below[a]:
            allowed &= up[P[b]]
        for b in above[a]:
            allowed &= down[P[b]]
        for c in choices[a]:
            if allowed >> c & 1:
                P[a] = c
                yield from rec(a + 1)

    yield from rec(0)


def brute_force_selfmaps(lattice: FiniteLattice, key: Sequence[Hashable]) -> list[tuple[int, ...]]:
    return list(iter_selfmaps(lattice, key))


@dataclass(frozen=True)
class Bundle:
    """An advice bundle: lattice ``A``, projection ``pi: A -> O(Y)`` and a section.

    ``section[k]`` is the element over the ``k``-th open of ``Y`` in canonical order.
    """

    Y: FinSpace
    lattice: FiniteLattice
    pi: tuple[int, ...]
    section: tuple[int, ...]
    caps: Caps = DEFAULT_CAPS

    def validate(self) -> None:
        L, Y = self.lattice, self.Y
        ops = Y.opens(self.caps).opens
        n = L.space.n
        if any(not Y.is_open(V) for V in self.pi):
            raise NotABundle("projection leaves O(Y)")
        if self.pi[L.top] != Y.full or self.pi[L.bottom] != 0:
            raise NotABundle("projection must send top to Y and bottom to the empty open")
        for a in range(n):
            for b in range(n):
                if self.pi[L.meet(a, b)] != self.pi[a] & self.pi[b]:
                    raise NotABundle("projection does not preserve meets")
                if self.pi[L.join(a, b)] != self.pi[a] | self.pi[b]:
                    raise NotABundle("projection does not preserve joins")
        for k, V in enumerate(ops):
            if self.pi[self.section[k]] != V:
                raise NotABundle(f"section is not a section at {Y.render(V)}")
            for k2, V2 in enumerate(ops):
                if V & ~V2 == 0 and not L.le(self.section[k], self.section[k2]):
                    raise NotABundle("section is not monotone")

    def sigma(self, V: int) -> int:
        return self.section[self.Y.opens(self.caps).index[V]]

    def fibre(self, V: int) -> list[int]:
        return [a for a in range(self.lattice.space.n) if self.pi[a] == V]


def opens_bundle(Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> Bundle:
    """O(Y) over itself with the identity projection."""
    ol = Y.opens(caps)
    return Bundle(Y, FiniteLattice(ol.as_space), tuple(ol.opens), tuple(range(len(ol))), caps)


def product_bundle(Y: FinSpace, extra: FinSpace, caps: Caps = DEFAULT_CAPS) -> Bundle:
    """``O(Y) x extra`` projecting to the first factor; ``extra`` must be a lattice."""
    ol = Y.opens(caps)
    P = product_space(ol.as_space, extra)
    lat = FiniteLattice(P)
    bot = FiniteLattice(extra).bottom
    pi = tuple(ol.opens[k // extra.n] for k in range(P.n))
    section = tuple(k * extra.n + bot for k in range(len(ol)))
    return Bundle(Y, lat, pi, section, caps)


@dataclass(frozen=True)
class AdviceLattice:
    """``L_f`` with the fixpoint ``P_f``, its range ``A_f`` and the section ``sigma``."""

    f: PointMap
    pairs: tuple[tuple[int, int], ...]
    lattice: FiniteLattice
    Pf: Optional[tuple[int, ...]] = None
    caps: Caps = DEFAULT_CAPS

    @property
    def space(self) -> FinSpace:
        return self.lattice.space

    def index(self, U: int, V: int) -> int:
        return self.pairs.index((U, V))

    def piY(self, k: int) -> int:
        return self.pairs[k][1]

    def piX(self, k: int) -> int:
        return self.pairs[k][0]

    @property
    def Af(self) -> tuple[int, ...]:
        if self.Pf is None:
            raise ValueError("P_f has not been computed")
        return tuple(sorted(set(self.Pf)))

    def sigma(self, V: int) -> int:
        return self.Pf[self.index(0, V)]

    def af_iso_OY(self) -> bool:
        """``pi_Y`` restricted to ``A_f`` is an order isomorphism onto O(Y)."""
        ops = self.f.codomain.opens(self.caps).opens
        af = self.Af
        images = [self.piY(k) for k in af]
        if sorted(images) != sorted(ops) or len(set(images)) != len(images):
            return False
        return all(
            self.lattice.le(a, b) == (self.piY(a) & ~self.piY(b) == 0) for a in af for b in af
        )

    def fibres(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for k in self.Af:
            out.setdefault(self.piY(k), []).append(k)
        return out

    def af_lattice(self) -> tuple[FiniteLattice, tuple[int, ...]]:
        af = self.Af
        names = [self.space.names[k] for k in af]
        sub = FinSpace.from_leq(names, lambda i, j: self.lattice.le(af[i], af[j]))
        return FiniteLattice(sub), af

    def is_distributive(self) -> bool:
        L, _ = self.af_lattice()
        n = L.space.n
        return all(
            L.meet(a, L.join(b, c)) == L.join(L.meet(a, b), L.meet(a, c))
            for a in range(n) for b in range(n) for c in range(n)
        )

    def to_bundle(self) -> Bundle:
        L, af = self.af_lattice()
        pos = {k: i for i, k in enumerate(af)}
        ops = self.f.codomain.opens(self.caps).opens
        return Bundle(
            self.f.codomain, L, tuple(self.piY(k) for k in af),
            tuple(pos[self.sigma(V)] for V in ops), self.caps,
        )

    def report(self) -> dict:
        X, Y = self.f.domain, self.f.codomain
        ops = Y.opens(self.caps).opens
        name = lambda k: _pair_name(X, Y, *self.pairs[k])  # noqa: E731
        return {
            "Lf_size": len(self.pairs),
            "Af_size": len(self.Af),
            "Af_iso_OY": self.af_iso_OY(),
            "Af_distributive": self.is_distributive(),
            "sigma": {Y.render(V): name(self.sigma(V)) for V in ops},
            "Pf": {name(k): name(self.Pf[k]) for k in range(len(self.pairs))},
        }


def relation_lattice(f: PointMap, caps: Caps = DEFAULT_CAPS) -> AdviceLattice:
    X, Y = f.domain, f.codomain
    pairs = tuple(
        (U, V) for V in Y.opens(caps) for U in X.opens(caps) if U & ~f.preimage(V) == 0
    )
    names = [_pair_name(X, Y, U, V) for U, V in pairs]
    space = FinSpace.from_leq(
        names,
        lambda i, j: pairs[i][0] & ~pairs[j][0] == 0 and pairs[i][1] & ~pairs[j][1] == 0,
    )
    return AdviceLattice(f, pairs, FiniteLattice(space), None, caps)


def advice_bundle(f: PointMap, caps: Caps = DEFAULT_CAPS) -> AdviceLattice:
    L = relation_lattice(f, caps)
    key = [V for _, V in L.pairs]
    return AdviceLattice(f, L.pairs, L.lattice, greatest_constrained_selfmap(L.lattice, key), caps)


# ---------------------------------------------------------------- lifts and co-envelopes


def _check_join_preserving(rho: PointMap, C: FiniteLattice, B: FiniteLattice) -> None:
    if rho(C.bottom) != B.bottom:
        raise NotJoinPreserving("the empty join is not preserved")
    for a in range(C.space.n):
        for b in range(C.space.n):
            if rho(C.join(a, b)) != B.join(rho(a), rho(b)):
                raise NotJoinPreserving(f"join of {C.label(a)} and {C.label(b)} is not preserved")


def greatest_lift(rho: PointMap, sigma: PointMap, phi: PointMap) -> PointMap:
    """Greatest monotone ``lift: A -> C`` with ``rho o lift = phi``."""
    C, B = FiniteLattice(rho.domain), FiniteLattice(rho.codomain)
    if sigma.then(rho).assignment != tuple(range(B.space.n)):
        raise NotASection("rho o sigma is not the identity")
    _check_join_preserving(rho, C, B)
    lift = tuple(
        C.join_all(c for c in range(C.space.n) if B.le(rho(c), phi(a))) for a in range(phi.domain.n)
    )
    return PointMap(phi.domain, rho.domain, lift)


@dataclass(frozen=True)
class CoEnvelope:
    """A monotone ``Fstar: A -> O(X)`` below ``int f^-1 o pi``, stored as masks of ``X``."""

    f: PointMap
    bundle: Bundle
    Fstar: tuple[int, ...]

    def __post_init__(self) -> None:
        L = self.bundle.lattice
        X = self.f.domain
        for a in range(L.space.n):
            if not X.is_open(self.Fstar[a]):
                raise ValueError("co-envelope values must be open")
            if self.Fstar[a] & ~int_preimage(self.f, self.bundle.pi[a]):
                raise ValueError(f"co-envelope exceeds int f^-1 at {L.label(a)}")
            for b in bits(L.space.up[a]):
                if self.Fstar[a] & ~self.Fstar[b]:
                    raise ValueError("co-envelope is not monotone")

    def table(self) -> dict[str, str]:
        L, X = self.bundle.lattice, self.f.domain
        return {L.label(a): X.render(v) for a, v in enumerate(self.Fstar)}


def principal_coenvelope(f: PointMap, bundle: Bundle) -> CoEnvelope:
    bundle.validate()
    L = bundle.lattice
    bound = [int_preimage(f, V) for V in bundle.pi]
    full = f.domain.full
    Fstar = []
    for a in range(L.space.n):
        acc = full
        for b in bits(L.space.up[a]):
            acc &= bound[b]
        Fstar.append(acc)
    return CoEnvelope(f, bundle, tuple(Fstar))


def coenvelope_tightens(F: CoEnvelope, G: CoEnvelope, limit: int = 200_000) -> Optional[tuple[int, ...]]:
    """A monotone ``Phi: B -> A`` with ``pi_A o Phi = pi_B`` and ``F o Phi >= G``, or None."""
    A, B = F.bundle, G.bundle
    nB = B.lattice.space.n
    choices = [
        [c for c in range(A.lattice.space.n) if A.pi[c] == B.pi[b] and G.Fstar[b] & ~F.Fstar[c] == 0]
        for b in range(nB)
    ]
    for cand in _monotone_choices(B.lattice, A.lattice, choices, limit):
        return cand
    return None


def _monotone_choices(dom: FiniteLattice, cod: FiniteLattice, choices, limit: int):
    n = dom.space.n
    P = [0] * n
    count = 0

    def rec(a: int):
        nonlocal count
        if a == n:
            count += 1
            if count > limit:
                return
            yield tuple(P)
            return
        for c in sorted(choices[a], key=lambda c: -bin(cod.space.down[c]).count("1")):
            if all(
                (not dom.le(b, a) or cod.le(P[b], c)) and (not dom.le(a, b) or cod.le(c, P[b]))
                for b in range(a)
            ):
                P[a] = c
                yield from rec(a + 1)

    yield from rec(0)


def compose_coenvelopes(coF: CoEnvelope, coG: CoEnvelope, advice_f: AdviceLattice) -> tuple[int, ...]:
    """``coF o lift_{pi_Y}(coG)`` as a table over the bundle of ``coG``.

    ``coF`` must live over the least bundle of ``f`` (``advice_f.to_bundle()``).
    """
    Y = advice_f.f.codomain
    A = coF.bundle
    OY = FiniteLattice(Y.opens(A.caps).as_space)
    where = Y.opens(A.caps).index
    rho = PointMap(A.lattice.space, OY.space, tuple(where[V] for V in A.pi))
    sigma = PointMap(OY.space, A.lattice.space, A.section)
    phi = PointMap(coG.bundle.lattice.space, OY.space, tuple(where[V] for V in coG.Fstar))
    lift = greatest_lift(rho, sigma, phi)
    return tuple(coF.Fstar[lift(b)] for b in range(coG.bundle.lattice.space.n))


# ---------------------------------------------------------------- duality


def duality(F, caps: Caps = DEFAULT_CAPS) -> tuple[CoEnvelope | None, dict]:
    """Envelope ``(F, xi)`` to co-envelope ``(F*, xi*)`` over the lattice O(L).

    The projection ``xi*`` need not have a section; then only the tables are
    returned and the co-envelope slot is None.
    """
    from .envelope import Envelope  # noqa: F401  (type only)

    L = F.approx.lattice
    Ls = L.space
    ol = Ls.opens(caps)
    X, Y = F.X, F.Y
    pos = [L.index_of(v) for v in F.approx.xi]
    fpos = [L.index_of(v) for v in F.F]
    pi = tuple(sum(1 << y for y in range(Y.n) if W >> pos[y] & 1) for W in ol.opens)
    Fstar = tuple(sum(1 << x for x in range(X.n) if W >> fpos[x] & 1) for W in ol.opens)
    tables = {"pi": pi, "Fstar": Fstar, "lattice": ol}
    lat = FiniteLattice(ol.as_space)
    section = []
    for V in Y.opens(caps):
        # least open of L over V, if xi* hits V at all
        hits = [k for k, W in enumerate(ol.opens) if pi[k] == V]
        if not hits:
            return None, tables
        section.append(lat.meet_all(hits))
    bundle = Bundle(Y, lat, pi, tuple(section), caps)
    try:
        bundle.validate()
    except NotABundle:
        return None, tables
    return CoEnvelope(F.f, bundle, Fstar), tables


def duality_inv(c: CoEnvelope, caps: Caps = DEFAULT_CAPS):
    """Co-envelope to envelope over O(A): ``y -> {a : y in pi(a)}``, ``x -> {a : x in F*(a)}``."""
    from .envelope import ApproxSpace, Envelope

    A = c.bundle.lattice
    ol = A.space.opens(caps)
    OA = FiniteLattice(ol.as_space)
    X, Y = c.f.domain, c.f.codomain
    n = A.space.n
    xi = tuple(ol.index[sum(1 << a for a in range(n) if c.bundle.pi[a] >> y & 1)] for y in range(Y.n))
    F = tuple(ol.index[sum(1 << a for a in range(n) if c.Fstar[a] >> x & 1)] for x in range(X.n))
    return Envelope(c.f, ApproxSpace(Y, OA, xi), F)


def duality_inv_tables(f: PointMap, pi: Sequence[int], Fstar: Sequence[int], A: FinSpace,
                       caps: Caps = DEFAULT_CAPS):
    """As :func:`duality_inv` but from raw tables, for projections without a section."""
    from .envelope import ApproxSpace, Envelope

    ol = A.opens(caps)
    OA = FiniteLattice(ol.as_space)
    X, Y = f.domain, f.codomain
    xi = tuple(ol.index[sum(1 << a for a in range(A.n) if pi[a] >> y & 1)] for y in range(Y.n))
    F = tuple(ol.index[sum(1 << a for a in range(A.n) if Fstar[a] >> x & 1)] for x in range(X.n))
    return Envelope(f, ApproxSpace(Y, OA, xi), F)


# ---------------------------------------------------------------- least bundle property


@dataclass(frozen=True)
class LeastBundleCheck:
    universal: bool
    maps_found: int
    unique: bool
    has_section: bool

    @property
    def ok(self) -> bool:
        return not self.universal or (self.unique and self.has_section)


def least_bundle_check(f: PointMap, candidate: Bundle, advice: AdviceLattice, limit: int = 200_000) -> LeastBundleCheck:
    """Test the universal property of ``A_f`` against one candidate bundle.

    Counts monotone fibre-preserving ``r: candidate -> A_f`` that witness the
    tightening of the candidate's principal co-envelope by that of ``A_f``,
    and looks for a section ``s`` witnessing the reverse tightening.
    """
    E = advice.to_bundle()
    PE = principal_coenvelope(f, E)
    PA = principal_coenvelope(f, candidate)
    # tightening the int-table co-envelope over O(Y) suffices: every co-envelope
    # over B factors through it along pi_B
    universal = coenvelope_tightens(PA, principal_coenvelope(f, opens_bundle(f.codomain, candidate.caps))) is not None
    nA, nE = candidate.lattice.space.n, E.lattice.space.n
    r_choices = [
        [e for e in range(nE) if E.pi[e] == candidate.pi[a] and PA.Fstar[a] & ~PE.Fstar[e] == 0]
        for a in range(nA)
    ]
    rs = list(_monotone_choices(candidate.lattice, E.lattice, r_choices, limit))
    has_section = False
    if len(rs) == 1:
        r = rs[0]
        s_choices = [
            [a for a in range(nA) if r[a] == e and PE.Fstar[e] & ~PA.Fstar[a] == 0] for e in range(nE)
        ]
        has_section = next(_monotone_choices(E.lattice, candidate.lattice, s_choices, limit), None) is not None
    return LeastBundleCheck(universal, len(rs), len(rs) == 1, has_section)
