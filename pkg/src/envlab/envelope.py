"""Envelopes of arbitrary maps between finite spaces.

An approximation space over ``Y`` is a finite complete lattice ``L`` with a
monotone inclusion ``xi: Y -> L``.  An envelope of ``f: X -> Y`` is a
monotone ``F: X -> L`` with ``F <= xi o f``.  The canonical lattice is
O²(Y) with ``xi = nu``; there envelopes are tables of :class:`UpFamily`
values and most operations reduce to the star table ``V -> {x : V in F(x)}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence

from .errors import CapExceeded, NotAnEnvelope, NotContinuous
from .finspace import (
    DEFAULT_CAPS,
    Caps,
    FinSpace,
    PointMap,
    UpFamily,
    bits,
    int_preimage,
    intersection_all,
    mu,
    nu,
    o2_elements,
    o2_space,
    union_all,
)
from .lattice import FiniteLattice, KBottomLattice, Lattice, O2Lattice, nu_values, overt_space


@dataclass(frozen=True)
class Verdict:
    verdict: bool
    counterexample: Optional[dict] = None
    checked: int = 0
    note: str = ""

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict, "counterexample": self.counterexample}
        if self.checked:
            out["checked"] = self.checked
        if self.note:
            out["note"] = self.note
        return out


def _monotone(X: FinSpace, lattice: Lattice, values: Sequence) -> Optional[tuple[int, int]]:
    for i in range(X.n):
        for j in bits(X.up[i]):
            if not lattice.le(values[i], values[j]):
                return i, j
    return None


@dataclass(frozen=True)
class ApproxSpace:
    """A complete lattice with a monotone inclusion of ``Y``; ``xi[y]`` is a lattice value."""

    Y: FinSpace
    lattice: Lattice
    xi: tuple

    def __post_init__(self) -> None:
        if len(self.xi) != self.Y.n:
            raise ValueError("xi must assign a lattice value to every point")
        bad = _monotone(self.Y, self.lattice, self.xi)
        if bad is not None:
            a, b = (self.Y.names[k] for k in bad)
            raise NotContinuous(f"xi is not monotone: {a} <= {b} but xi({a}) not <= xi({b})")

    @classmethod
    def o2(cls, Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> ApproxSpace:
        return cls(Y, O2Lattice(Y, caps), nu_values(Y))

    @classmethod
    def from_map(cls, xi: PointMap) -> ApproxSpace:
        return cls(xi.domain, FiniteLattice(xi.codomain), xi.assignment)

    @classmethod
    def kbottom(cls, Y: FinSpace) -> ApproxSpace:
        K = KBottomLattice(Y)
        return cls(Y, K, tuple(K.point(y) for y in range(Y.n)))

    def label(self, value) -> str:
        return self.lattice.label(value)


@dataclass(frozen=True)
class Envelope:
    """A monotone ``F: X -> L`` below ``xi o f``; validated on construction."""

    f: PointMap
    approx: ApproxSpace
    F: tuple

    def __post_init__(self) -> None:
        X, L = self.f.domain, self.approx.lattice
        if self.f.codomain != self.approx.Y:
            raise ValueError("approximation space is over a different space than the codomain of f")
        if len(self.F) != X.n:
            raise ValueError("F must assign a value to every point")
        bad = _monotone(X, L, self.F)
        if bad is not None:
            raise NotContinuous(f"F is not monotone at {X.names[bad[0]]} <= {X.names[bad[1]]}")
        for x in range(X.n):
            if not L.le(self.F[x], self.approx.xi[self.f(x)]):
                raise NotAnEnvelope(f"F({X.names[x]}) is not below xi(f({X.names[x]}))")

    @property
    def X(self) -> FinSpace:
        return self.f.domain

    @property
    def Y(self) -> FinSpace:
        return self.f.codomain

    def table(self) -> dict[str, str]:
        return {self.X.names[x]: self.approx.label(v) for x, v in enumerate(self.F)}


@dataclass(frozen=True)
class UniformApproxSpace:
    """An approximation space with a uniformity map ``u: L -> O²(Y)``."""

    base: ApproxSpace
    u: Callable[[Any], UpFamily]
    name: str = ""

    @property
    def Y(self) -> FinSpace:
        return self.base.Y

    @property
    def lattice(self) -> Lattice:
        return self.base.lattice

    @classmethod
    def o2(cls, Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> UniformApproxSpace:
        return cls(ApproxSpace.o2(Y, caps), lambda fam: fam, name="O2")


@dataclass(frozen=True)
class StarTable:
    """``rows[V] = {x : V in F(x)}`` for every open ``V`` of ``Y``, as masks."""

    X: FinSpace
    Y: FinSpace
    rows: tuple[tuple[int, int], ...]  # (V, row) in canonical order of O(Y)

    def row(self, V: int) -> int:
        return dict(self.rows)[V]

    def as_dict(self) -> dict[int, int]:
        return dict(self.rows)

    def is_monotone(self) -> bool:
        for V, r in self.rows:
            for V2, r2 in self.rows:
                if V & ~V2 == 0 and r & ~r2 != 0:
                    return False
        return True

    def render(self) -> dict[str, str]:
        return {self.Y.render(V): self.X.render(r) for V, r in self.rows}


@dataclass(frozen=True)
class LatticeMap:
    """A map between lattices given by a function; ``table`` enumerates the source."""

    source: Lattice
    target: Lattice
    fn: Callable[[Any], Any]

    def __call__(self, value):
        return self.fn(value)

    def table(self) -> list:
        return [self.fn(v) for v in self.source.elements()]

    def is_monotone(self) -> bool:
        els = self.source.elements()
        vals = self.table()
        return all(
            self.target.le(vals[i], vals[j])
            for i in range(len(els))
            for j in range(len(els))
            if self.source.le(els[i], els[j])
        )


# ---------------------------------------------------------------- principal envelopes


def principal_envelope(f: PointMap, approx: ApproxSpace) -> Envelope:
    """Greatest monotone map below ``xi o f``: the meet over the up-set of each point."""
    X, L = f.domain, approx.lattice
    F = tuple(L.meet_all(approx.xi[f(x2)] for x2 in bits(X.up[x])) for x in range(X.n))
    return Envelope(f, approx, F)


def principal_O2_envelope(f: PointMap, caps: Caps = DEFAULT_CAPS) -> Envelope:
    """``F(x) = {V : f(up x) <= V}``; the single generator is the up-closure of ``f(up x)``."""
    X, Y = f.domain, f.codomain
    if Y.n > caps.opens:
        raise CapExceeded("cap_opens", caps.opens, Y.n)
    F = tuple(UpFamily(frozenset({Y.upclosure(f.image(X.up[x]))})) for x in range(X.n))
    return Envelope(f, ApproxSpace.o2(Y, caps), F)


def o2_envelope(f: PointMap, values: Sequence[UpFamily], caps: Caps = DEFAULT_CAPS) -> Envelope:
    return Envelope(f, ApproxSpace.o2(f.codomain, caps), tuple(values))


def nu_after(f: PointMap) -> tuple[UpFamily, ...]:
    return tuple(nu(f.codomain, f(x)) for x in range(f.domain.n))


# ---------------------------------------------------------------- star calculus


def star_of_values(X: FinSpace, Y: FinSpace, values: Sequence[UpFamily], caps: Caps = DEFAULT_CAPS) -> StarTable:
    rows = tuple(
        (V, sum(1 << x for x in range(X.n) if V in values[x])) for V in Y.opens(caps)
    )
    return StarTable(X, Y, rows)


def star(F: Envelope, caps: Caps = DEFAULT_CAPS) -> StarTable:
    if not isinstance(F.approx.lattice, O2Lattice):
        raise TypeError("star needs an envelope with values in O2(Y)")
    return star_of_values(F.X, F.Y, F.F, caps)


def int_table(f: PointMap, caps: Caps = DEFAULT_CAPS) -> StarTable:
    """The table ``V -> int f^-1(V)``."""
    rows = tuple((V, int_preimage(f, V)) for V in f.codomain.opens(caps))
    return StarTable(f.domain, f.codomain, rows)


def robust_filter(f: PointMap, x: int, caps: Caps = DEFAULT_CAPS) -> list[int]:
    """Opens ``V`` whose preimage is a neighbourhood of ``x``, in canonical order."""
    return [V for V in f.codomain.opens(caps) if int_preimage(f, V) >> x & 1]


def is_uniformly_universal(f: PointMap, F: Envelope, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """Compare the star table of ``F`` with the interior-preimage table of ``f``."""
    X, Y = f.domain, f.codomain
    for x in range(X.n):
        for A in F.F[x].antichain:
            if not A >> f(x) & 1:
                raise NotAnEnvelope(f"F({X.names[x]}) contains an open missing f({X.names[x]})")
    got = star_of_values(X, Y, F.F, caps)
    want = int_table(f, caps)
    for (V, r), (_, w) in zip(got.rows, want.rows):
        if r != w:
            x = next(bits(r ^ w))
            return Verdict(False, {"x": X.names[x], "V": Y.render(V)}, checked=len(got.rows))
    return Verdict(True, checked=len(got.rows))


def universal_via_robust_filter(f: PointMap, F: Envelope, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """Every robust property of ``f`` at ``x`` is a member of ``F(x)``."""
    for x in range(f.domain.n):
        for V in robust_filter(f, x, caps):
            if V not in F.F[x]:
                return Verdict(False, {"x": f.domain.names[x], "V": f.codomain.render(V)})
    return Verdict(True, checked=f.domain.n)


# ---------------------------------------------------------------- composition


def kleisli_o2(
    Gvalues: Sequence[UpFamily], Fvalues: Sequence[UpFamily], X: FinSpace, Y: FinSpace, Z: FinSpace,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[UpFamily, ...]:
    """``(G . F)(x) = {W : star(G)(W) in F(x)}`` for tables ``G: Y -> O2(Z)``, ``F: X -> O2(Y)``."""
    sg = star_of_values(Y, Z, Gvalues, caps)
    return tuple(
        UpFamily.generated(W for W, row in sg.rows if row in Fvalues[x]) for x in range(X.n)
    )


def compose_O2(G: Envelope, F: Envelope, caps: Caps = DEFAULT_CAPS) -> Envelope:
    """Composite envelope of ``g o f`` in O²(Z)."""
    if F.Y != G.X:
        raise ValueError("codomain of f must be the domain of g")
    values = kleisli_o2(G.F, F.F, F.X, F.Y, G.Y, caps)
    return Envelope(F.f.then(G.f), ApproxSpace.o2(G.Y, caps), values)


def monad_extend(Gvalues: Sequence[UpFamily], fam: UpFamily) -> UpFamily:
    """``mu o G**`` on one family, in generator form (no enumeration of O²)."""
    return union_all(intersection_all(Gvalues[y] for y in bits(A)) for A in fam.antichain)


def monad_extend_literal(Gvalues: Sequence[UpFamily], Y: FinSpace, Z: FinSpace, fam: UpFamily,
                         caps: Caps = DEFAULT_CAPS) -> UpFamily:
    """``mu_Z o G**`` evaluated through the enumerated space O²(Z) (needs ``|Z| <= caps.mu``)."""
    from .finspace import double_star

    elems = o2_elements(Z, caps)
    where = {e: k for k, e in enumerate(elems)}
    Gmap = PointMap(Y, o2_space(Z, caps), tuple(where[g] for g in Gvalues))
    return mu(Z, double_star(Gmap, fam), caps)


def compose(G: Envelope, F: Envelope, uspace: UniformApproxSpace) -> Envelope:
    """``G . F = E(G) o F`` for ``F`` over the uniform space ``uspace``."""
    if F.approx != uspace.base:
        raise ValueError("F must be an envelope over the given uniform space")
    M = G.approx.lattice
    values = tuple(_rho_of_generators(M, G.F, uspace.u(v)) for v in F.F)
    return Envelope(F.f.then(G.f), G.approx, values)


# ---------------------------------------------------------------- extensions and tightening


def _rho_of_generators(M: Lattice, phi: Sequence, fam: UpFamily):
    # rho_M(phi**(fam)): join over generators of the meet of their images
    return M.join_all(M.meet_all(phi[y] for y in bits(A)) for A in fam.antichain)


def rho(lattice: Lattice, fam: UpFamily):
    """Left inverse of ``nu`` on a complete lattice: join of the meets of the generators.

    Generators of ``fam`` are masks over ``lattice.elements()`` indices.
    """
    els = lattice.elements()
    return lattice.join_all(lattice.meet_all(els[k] for k in bits(A)) for A in fam.antichain)


def right_extension(aL: ApproxSpace, aM: ApproxSpace) -> LatticeMap:
    """Greatest monotone ``Phi: L -> M`` with ``Phi o xi_L <= xi_M``."""
    if aL.Y != aM.Y:
        raise ValueError("both approximation spaces must be over the same space")
    L, M = aL.lattice, aM.lattice

    def phi(l):
        return M.meet_all(aM.xi[y] for y in range(aL.Y.n) if L.le(l, aL.xi[y]))

    return LatticeMap(L, M, phi)


def tightens(F: Envelope, G: Envelope) -> Verdict:
    """Does some monotone map carry ``F`` above ``G``? Only the greatest candidate needs checking."""
    if F.f != G.f:
        raise ValueError("tightening compares envelopes of the same map")
    Phi = right_extension(F.approx, G.approx)
    M = G.approx.lattice
    for x in range(F.X.n):
        if not M.le(G.F[x], Phi(F.F[x])):
            return Verdict(False, {"x": F.X.names[x]}, checked=F.X.n)
    return Verdict(True, checked=F.X.n)


def extension_E(uspace: UniformApproxSpace, M: Lattice, phi: Sequence) -> LatticeMap:
    """``rho_M o phi** o u_L`` for a monotone ``phi: Y -> M`` given as a value table."""
    return LatticeMap(uspace.lattice, M, lambda l: _rho_of_generators(M, phi, uspace.u(l)))


def extension_contract(uspace: UniformApproxSpace, M: Lattice, phi: Sequence) -> Verdict:
    """``E(phi) o xi_L <= phi`` pointwise."""
    E = extension_E(uspace, M, phi)
    for y in range(uspace.Y.n):
        if not M.le(E(uspace.base.xi[y]), phi[y]):
            return Verdict(False, {"y": uspace.Y.names[y]})
    return Verdict(True, checked=uspace.Y.n)


def uniformly_tightens(F: Envelope, G: Envelope, uspace: UniformApproxSpace) -> Verdict:
    """``E(xi_M) o F >= G`` pointwise."""
    if F.f != G.f:
        raise ValueError("tightening compares envelopes of the same map")
    M = G.approx.lattice
    E = extension_E(uspace, M, G.approx.xi)
    for x in range(F.X.n):
        if not M.le(G.F[x], E(F.F[x])):
            return Verdict(False, {"x": F.X.names[x]}, checked=F.X.n)
    return Verdict(True, checked=F.X.n)


# ---------------------------------------------------------------- uniform axioms


@dataclass(frozen=True)
class AxiomReport:
    ax1: Verdict
    ax2: Verdict
    ax3: Verdict
    ax3_scope: str

    @property
    def ok(self) -> bool:
        return bool(self.ax1 and self.ax2 and self.ax3)

    def to_dict(self) -> dict:
        return {
            "ax1": self.ax1.to_dict(),
            "ax2": self.ax2.to_dict(),
            "ax3": self.ax3.to_dict(),
            "ax3_scope": self.ax3_scope,
        }


def _antichains(space: FinSpace) -> list[int]:
    out: list[int] = []
    n = space.n

    def rec(i: int, chosen: int, blocked: int) -> None:
        if i == n:
            out.append(chosen)
            return
        rec(i + 1, chosen, blocked)
        if not blocked >> i & 1:
            rec(i + 1, chosen | 1 << i, blocked | space.up[i] | space.down[i])

    rec(0, 0, 0)
    return out


def _ax3_families(L: Lattice, caps: Caps) -> tuple[list[UpFamily], str]:
    Ls = L.space
    if Ls.n <= caps.opens and len(Ls.opens(caps)) <= caps.opens:
        return list(o2_elements(Ls, caps)), "all of O2(L)"
    fams = [UpFamily.generated(Ls.up[k] for k in bits(S)) for S in _antichains(Ls)]
    return fams, "join-closure of nu-images"


def check_uniform_axioms(uspace: UniformApproxSpace, caps: Caps = DEFAULT_CAPS) -> AxiomReport:
    Y, L, xi, u = uspace.Y, uspace.lattice, uspace.base.xi, uspace.u

    ax1 = Verdict(True, checked=Y.n)
    for y in range(Y.n):
        if not u(xi[y]) <= nu(Y, y):
            ax1 = Verdict(False, {"y": Y.names[y]}, checked=Y.n)
            break

    els = L.elements()
    ax2 = Verdict(True, checked=len(els))
    for l in els:
        if not L.le(l, _rho_of_generators(L, xi, u(l))):
            ax2 = Verdict(False, {"l": L.label(l)}, checked=len(els))
            break

    fams, scope = _ax3_families(L, caps)
    literal = Y.n <= caps.mu
    if literal:
        elems = o2_elements(Y, caps)
        where = {e: k for k, e in enumerate(elems)}
        O2Y = o2_space(Y, caps)
    ax3 = Verdict(True, checked=len(fams), note="literal mu" if literal else "generator-form mu")
    for fam in fams:
        lhs = u(rho(L, fam))
        if literal:
            lifted = UpFamily.generated(
                O2Y.upclosure(O2Y.mask(where[u(els[k])] for k in bits(A))) for A in fam.antichain
            )
            rhs = mu(Y, lifted, caps)
        else:
            rhs = union_all(intersection_all(u(els[k]) for k in bits(A)) for A in fam.antichain)
        if lhs != rhs:
            ax3 = Verdict(False, {"family": fam.render(L.space)}, checked=len(fams), note=ax3.note)
            break
    return AxiomReport(ax1, ax2, ax3, scope)


def overt_uniform_space(Y: FinSpace, caps: Caps = DEFAULT_CAPS) -> UniformApproxSpace:
    """O²(Y) as a uniform approximation space for the overt subsets of ``Y``.

    The base space is the set of nonempty closed subsets of ``Y`` under
    inclusion.  ``i(A)`` is the family of opens meeting ``A`` and
    ``j(U)`` is generated by the set of closed ``A`` meeting every member of ``U``.
    """
    if Y.n > caps.mu:
        raise CapExceeded("cap_mu", caps.mu, Y.n)
    V, masks = overt_space(Y)

    def i(A: int) -> UpFamily:
        return UpFamily.generated(Y.up[a] for a in bits(A))

    def j(fam: UpFamily) -> UpFamily:
        K = sum(1 << k for k, A in enumerate(masks) if all(A & U for U in fam.antichain))
        return UpFamily(frozenset({K}))

    base = ApproxSpace(V, O2Lattice(Y, caps), tuple(i(A) for A in masks))
    return UniformApproxSpace(base, j, name="overt")


# ---------------------------------------------------------------- separation


@dataclass(frozen=True)
class SeparationReport:
    separated: Verdict
    regular: Verdict
    method: str

    def to_dict(self) -> dict:
        return {
            "separated": self.separated.to_dict(),
            "regular": self.regular.to_dict(),
            "method": self.method,
        }


def _fibre(approx: ApproxSpace, test: Callable[[Any], bool]) -> int:
    return sum(1 << y for y in range(approx.Y.n) if test(approx.xi[y]))


def separated_regular_check(approx: ApproxSpace, caps: Caps = DEFAULT_CAPS) -> SeparationReport:
    """Separated: every fibre of ``xi`` over a principal up-set of ``L`` is closed in ``Y``.

    Regular: additionally, every ``x in V`` (``V`` open in ``L``) has an open
    ``U`` around ``x`` with ``cl(xi^-1 U) <= xi^-1 V``.  When O(L) is too large
    to enumerate only ``U = V = up(x)`` is tried; monotonicity of the closure
    makes that choice decisive.
    """
    Y, L = approx.Y, approx.lattice
    els = L.elements()
    separated = Verdict(True, checked=len(els))
    for l in els:
        fib = _fibre(approx, lambda v: L.le(l, v))
        if not Y.is_closed(fib):
            separated = Verdict(False, {"l": L.label(l), "fibre": Y.render(fib)}, checked=len(els))
            break

    Ls = L.space
    exhaustive = Ls.n <= caps.opens
    method = "exhaustive" if exhaustive else "principal"
    if not separated:
        return SeparationReport(separated, Verdict(False, separated.counterexample, note="not separated"), method)

    def pre(W: int) -> int:
        return sum(1 << y for y in range(Y.n) if W >> L.index_of(approx.xi[y]) & 1)

    opens_L = list(Ls.opens(caps)) if exhaustive else [Ls.up[k] for k in range(Ls.n)]
    checked = 0
    regular = None
    for x in range(Ls.n):
        cands = [U for U in opens_L if U >> x & 1] if exhaustive else [Ls.up[x]]
        for Vo in opens_L:
            if not Vo >> x & 1:
                continue
            checked += 1
            target = pre(Vo)
            if not any(Y.closure(pre(U)) & ~target == 0 for U in cands):
                regular = Verdict(False, {"x": Ls.names[x], "V": Ls.render(Vo)}, checked=checked)
                break
        if regular is not None:
            break
    if regular is None:
        regular = Verdict(True, checked=checked)
    return SeparationReport(separated, regular, method)


def pullback_approx(g: PointMap, approx: ApproxSpace) -> ApproxSpace:
    if not g.is_continuous():
        raise NotContinuous("pullback needs a continuous map")
    if g.codomain != approx.Y:
        raise ValueError("g must land in the space the approximation space is over")
    return ApproxSpace(g.domain, approx.lattice, tuple(approx.xi[g(y)] for y in range(g.domain.n)))


def pushforward_approx(approx: ApproxSpace, Z: FinSpace, caps: Caps = DEFAULT_CAPS) -> ApproxSpace:
    """``(xi)_*: Y^Z -> L^Z`` on the finite exponentials."""
    from .finspace import exponential, monotone_maps

    maps_Y = monotone_maps(Z, approx.Y, limit=caps.exponential)
    L = approx.lattice
    Ls = L.space
    maps_L = monotone_maps(Z, Ls, limit=caps.exponential)
    LZ = FiniteLattice(exponential(Z, Ls, caps))
    where = {h: k for k, h in enumerate(maps_L)}
    xi = tuple(where[tuple(L.index_of(approx.xi[y]) for y in h)] for h in maps_Y)
    return ApproxSpace(exponential(Z, approx.Y, caps), LZ, xi)


# ---------------------------------------------------------------- K_bot model


def kbot_principal(f: PointMap) -> Envelope:
    """Greatest K_bot approximation of ``f`` into a discrete space."""
    return principal_envelope(f, ApproxSpace.kbottom(f.codomain))


def kbot_from_O2(F: Envelope, caps: Caps = DEFAULT_CAPS) -> tuple:
    """``x -> intersection of all members of F(x)``; ``None`` when ``F(x)`` is empty."""
    Y = F.Y
    out = []
    for fam in F.F:
        members = fam.members(Y.opens(caps))
        if not members:
            out.append(None)
            continue
        acc = Y.full
        for U in members:
            acc &= U
        out.append(frozenset(bits(acc)))
    return tuple(out)


def kleisli_kbot(Gvalues: Sequence, Fvalues: Sequence) -> tuple:
    """``(G o F)(x) = union of G(y) over y in F(x)``, bottom if anything involved is bottom."""
    out = []
    for K in Fvalues:
        if K is None or any(Gvalues[y] is None for y in K):
            out.append(None)
        else:
            out.append(frozenset().union(*(Gvalues[y] for y in K)))
    return tuple(out)


def kbot_embed(Y: FinSpace, values: Iterable) -> tuple[UpFamily, ...]:
    K = KBottomLattice(Y)
    return tuple(K.embed(v) for v in values)
