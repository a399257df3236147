"""Exact piecewise-affine functions on the reals and their K_bot envelopes.

A :class:`PAFunction` has rational breakpoints with explicit values and one
affine piece on each open interval between them.  Its best continuous
approximation into compact subsets (reverse inclusion) is the cluster-set
map: a singleton away from breakpoints and ``{left limit, value, right
limit}`` at a breakpoint.  Envelopes are stored as finite sets of affine
branches per interval plus finite value sets at breakpoints, which is
closed under Kleisli composition.  No floating point is used anywhere.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import BranchCapExceeded, ParseError
from .finspace import DEFAULT_CAPS, Caps

Q = Fraction
DEFAULT_MAX_DELTA = Fraction(10**9)


def rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def fmt(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True, order=True)
class Affine:
    slope: Fraction
    intercept: Fraction

    def __call__(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def after(self, inner: Affine) -> Affine:
        """``self o inner``."""
        return Affine(self.slope * inner.slope, self.slope * inner.intercept + self.intercept)

    def solve(self, y: Fraction) -> Fraction:
        return (y - self.intercept) / self.slope

    def render(self) -> str:
        if self.slope == 0:
            return fmt(self.intercept)
        s = "x" if self.slope == 1 else "-x" if self.slope == -1 else f"{fmt(self.slope)}*x"
        if self.intercept == 0:
            return s
        sign = "+" if self.intercept > 0 else "-"
        return f"{s}{sign}{fmt(abs(self.intercept))}"


@dataclass(frozen=True)
class PAFunction:
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    pieces: tuple[Affine, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.breakpoints):
            raise ValueError("every breakpoint needs a value")
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need one affine piece per open interval (breakpoints + 1)")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @classmethod
    def affine(cls, slope, intercept) -> PAFunction:
        return cls((), (), (Affine(rat(slope), rat(intercept)),))

    @classmethod
    def build(cls, breakpoints: Sequence[tuple], pieces: Sequence[tuple]) -> PAFunction:
        """``breakpoints`` as ``(x, value)`` pairs, ``pieces`` as ``(slope, intercept)`` pairs."""
        return cls(
            tuple(rat(x) for x, _ in breakpoints),
            tuple(rat(v) for _, v in breakpoints),
            tuple(Affine(rat(s), rat(c)) for s, c in pieces),
        )

    def locate(self, x: Fraction) -> tuple[str, int]:
        """``("bp", i)`` if ``x`` is breakpoint ``i``, else ``("iv", j)`` for open interval ``j``."""
        j = bisect_left(self.breakpoints, x)
        if j < len(self.breakpoints) and self.breakpoints[j] == x:
            return "bp", j
        return "iv", j

    def __call__(self, x) -> Fraction:
        x = rat(x)
        kind, i = self.locate(x)
        return self.values[i] if kind == "bp" else self.pieces[i](x)

    def left_limit(self, i: int) -> Fraction:
        return self.pieces[i](self.breakpoints[i])

    def right_limit(self, i: int) -> Fraction:
        return self.pieces[i + 1](self.breakpoints[i])

    def is_continuous_at(self, x) -> bool:
        kind, i = self.locate(rat(x))
        if kind == "iv":
            return True
        return self.left_limit(i) == self.values[i] == self.right_limit(i)

    def reflect(self) -> PAFunction:
        """``x -> f(-x)``."""
        return PAFunction(
            tuple(-b for b in reversed(self.breakpoints)),
            tuple(reversed(self.values)),
            tuple(Affine(-p.slope, p.intercept) for p in reversed(self.pieces)),
        )

    def to_json(self) -> dict:
        return {
            "schema": "envlab/1",
            "breakpoints": [{"x": fmt(b), "value": fmt(v)} for b, v in zip(self.breakpoints, self.values)],
            "pieces": [{"slope": fmt(p.slope), "intercept": fmt(p.intercept)} for p in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict) -> PAFunction:
        try:
            bps = data["breakpoints"]
            pcs = data["pieces"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"missing field {exc}") from None
        try:
            out = cls(
                tuple(_parse_rat(b["x"], f"$.breakpoints[{k}].x") for k, b in enumerate(bps)),
                tuple(_parse_rat(b["value"], f"$.breakpoints[{k}].value") for k, b in enumerate(bps)),
                tuple(
                    Affine(
                        _parse_rat(p["slope"], f"$.pieces[{k}].slope"),
                        _parse_rat(p["intercept"], f"$.pieces[{k}].intercept"),
                    )
                    for k, p in enumerate(pcs)
                ),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed entry {exc}") from None
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        return out


def _parse_rat(text, where: str) -> Fraction:
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise ParseError("rationals must be 'p/q' strings", where)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational: {text!r}", where) from None


# ---------------------------------------------------------------- K_bot values


@dataclass(frozen=True)
class CompactSet:
    """A value of K_bot(R): ``None`` parts for bottom, else sorted disjoint closed intervals."""

    parts: Optional[tuple[tuple[Fraction, Fraction], ...]]

    @classmethod
    def bottom(cls) -> CompactSet:
        return cls(None)

    @classmethod
    def points(cls, values: Iterable[Fraction]) -> CompactSet:
        return cls(tuple((v, v) for v in sorted(set(values))))

    @property
    def is_bottom(self) -> bool:
        return self.parts is None

    def __contains__(self, v: Fraction) -> bool:
        return self.parts is not None and any(lo <= v <= hi for lo, hi in self.parts)

    def render(self) -> str:
        if self.parts is None:
            return "bot"
        return "{" + ",".join(fmt(lo) if lo == hi else f"[{fmt(lo)},{fmt(hi)}]" for lo, hi in self.parts) + "}"

    def point_values(self) -> frozenset[Fraction]:
        if self.parts is None or any(lo != hi for lo, hi in self.parts):
            raise ValueError("not a finite point set")
        return frozenset(lo for lo, _ in self.parts)


# ---------------------------------------------------------------- envelopes


@dataclass(frozen=True)
class PAEnvelope:
    """Finite sets of affine branches per open interval and finite value sets at breakpoints.

    Always kept canonical: a breakpoint is dropped when both neighbouring
    branch sets agree and its value set is exactly what the branches give.
    """

    breakpoints: tuple[Fraction, ...]
    branches: tuple[frozenset[Affine], ...]
    bp_values: tuple[frozenset[Fraction], ...]

    def __post_init__(self) -> None:
        if len(self.branches) != len(self.breakpoints) + 1 or len(self.bp_values) != len(self.breakpoints):
            raise ValueError("inconsistent envelope shape")
        if any(not b for b in self.branches) or any(not v for v in self.bp_values):
            raise ValueError("envelope values must be nonempty")

    @classmethod
    def canonical(cls, breakpoints, branches, bp_values) -> PAEnvelope:
        bps, brs, vals = [], [frozenset(branches[0])], []
        for i, b in enumerate(breakpoints):
            right = frozenset(branches[i + 1])
            vs = frozenset(bp_values[i])
            if right == brs[-1] and vs == frozenset(a(b) for a in right):
                continue
            bps.append(b)
            vals.append(vs)
            brs.append(right)
        return cls(tuple(bps), tuple(brs), tuple(vals))

    def locate(self, x: Fraction) -> tuple[str, int]:
        j = bisect_left(self.breakpoints, x)
        if j < len(self.breakpoints) and self.breakpoints[j] == x:
            return "bp", j
        return "iv", j

    def value_at(self, x) -> frozenset[Fraction]:
        x = rat(x)
        kind, i = self.locate(x)
        if kind == "bp":
            return self.bp_values[i]
        return frozenset(a(x) for a in self.branches[i])

    def compact_at(self, x) -> CompactSet:
        return CompactSet.points(self.value_at(x))

    def is_usc(self) -> bool:
        """Limits of the neighbouring branches lie in every breakpoint value set."""
        return all(self.usc_at(i) for i in range(len(self.breakpoints)))

    def usc_at(self, i: int) -> bool:
        b = self.breakpoints[i]
        limits = {a(b) for a in self.branches[i]} | {a(b) for a in self.branches[i + 1]}
        return limits <= self.bp_values[i]

    def max_branches(self) -> int:
        return max(len(b) for b in self.branches)

    def intervals(self) -> list[tuple[Optional[Fraction], Optional[Fraction]]]:
        edges: list[Optional[Fraction]] = [None, *self.breakpoints, None]
        return list(zip(edges[:-1], edges[1:]))

    def to_json(self) -> dict:
        return {
            "schema": "envlab/1",
            "breakpoints": [
                {"x": fmt(b), "values": [fmt(v) for v in sorted(vs)]}
                for b, vs in zip(self.breakpoints, self.bp_values)
            ],
            "pieces": [
                {
                    "interval": [_end(lo, "-inf"), _end(hi, "+inf")],
                    "branches": [
                        {"slope": fmt(a.slope), "intercept": fmt(a.intercept)} for a in sorted(brs)
                    ],
                }
                for (lo, hi), brs in zip(self.intervals(), self.branches)
            ],
        }

    def render(self) -> str:
        lines = []
        for k, ((lo, hi), brs) in enumerate(zip(self.intervals(), self.branches)):
            vals = ", ".join(a.render() for a in sorted(brs))
            lines.append(f"({_end(lo, '-inf')}, {_end(hi, '+inf')}): {{{vals}}}")
            if k < len(self.breakpoints):
                b = self.breakpoints[k]
                lines.append(f"x = {fmt(b)}: {{{', '.join(fmt(v) for v in sorted(self.bp_values[k]))}}}")
        return "\n".join(lines)


def _end(v: Optional[Fraction], inf: str) -> str:
    return inf if v is None else fmt(v)


def cluster_envelope(f: PAFunction) -> PAEnvelope:
    vals = [
        {f.left_limit(i), f.values[i], f.right_limit(i)} for i in range(len(f.breakpoints))
    ]
    return PAEnvelope.canonical(f.breakpoints, [{p} for p in f.pieces], vals)


def identity_envelope() -> PAEnvelope:
    return PAEnvelope((), (frozenset({Affine(Q(1), Q(0))}),), ())


def _sample(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    if lo is None and hi is None:
        return Q(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def kleisli_compose(G: PAEnvelope, F: PAEnvelope, caps: Caps = DEFAULT_CAPS) -> PAEnvelope:
    """``x -> union of G(y) over y in F(x)``, exactly.

    The composite's breakpoints are those of ``F`` plus, for every
    non-constant branch of ``F``, the preimages of ``G``'s breakpoints that
    fall inside the branch's interval.  On each refined open interval a
    non-constant branch lands inside one interval of ``G``; a constant branch
    ``c`` contributes the constants ``G(c)``.
    """
    cuts = set(F.breakpoints)
    for (lo, hi), brs in zip(F.intervals(), F.branches):
        for a in brs:
            if a.slope == 0:
                continue
            for t in G.breakpoints:
                x = a.solve(t)
                if (lo is None or x > lo) and (hi is None or x < hi):
                    cuts.add(x)
    bps = sorted(cuts)
    edges: list[Optional[Fraction]] = [None, *bps, None]
    branches = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = _sample(lo, hi)
        _, j = F.locate(m)
        out: set[Affine] = set()
        for a in F.branches[j]:
            if a.slope == 0:
                out |= {Affine(Q(0), v) for v in G.value_at(a.intercept)}
            else:
                kind, k = G.locate(a(m))
                assert kind == "iv", "refinement must separate G's breakpoints"
                out |= {g.after(a) for g in G.branches[k]}
        if len(out) > caps.branches:
            raise BranchCapExceeded("cap_branches", caps.branches, len(out))
        branches.append(out)
    values = []
    for b in bps:
        ys = F.value_at(b)
        values.append(frozenset().union(*(G.value_at(y) for y in ys)))
    return PAEnvelope.canonical(bps, branches, values)


# ---------------------------------------------------------------- open sets of R


@dataclass(frozen=True)
class OpenUnion:
    """A finite union of open intervals; ``None`` endpoints stand for infinity."""

    intervals: tuple[tuple[Optional[Fraction], Optional[Fraction]], ...]

    @classmethod
    def of(cls, intervals: Iterable[tuple]) -> OpenUnion:
        ivs = []
        for lo, hi in intervals:
            lo = None if lo is None else rat(lo)
            hi = None if hi is None else rat(hi)
            if lo is not None and hi is not None and lo >= hi:
                continue
            ivs.append((lo, hi))
        ivs.sort(key=lambda p: (p[0] is not None, p[0] if p[0] is not None else 0))
        merged: list[list] = []
        for lo, hi in ivs:
            # merge only overlapping intervals: touching open intervals leave the endpoint out
            prev = merged[-1] if merged else None
            if prev is not None and (prev[1] is None or lo is None or lo < prev[1]):
                if prev[1] is not None and (hi is None or hi > prev[1]):
                    prev[1] = hi
                continue
            merged.append([lo, hi])
        return cls(tuple((lo, hi) for lo, hi in merged))

    @classmethod
    def real_line(cls) -> OpenUnion:
        return cls(((None, None),))

    def __contains__(self, v: Fraction) -> bool:
        return any((lo is None or lo < v) and (hi is None or v < hi) for lo, hi in self.intervals)

    def has_upper_end(self, v: Fraction) -> bool:
        """Some interval ``(lo, v)`` with ``lo < v``: points just below ``v`` are inside."""
        return any(hi == v for lo, hi in self.intervals if hi is not None)

    def has_lower_end(self, v: Fraction) -> bool:
        return any(lo == v for lo, hi in self.intervals if lo is not None)

    def render(self) -> str:
        if not self.intervals:
            return "{}"
        return " U ".join(f"({_end(lo, '-inf')},{_end(hi, '+inf')})" for lo, hi in self.intervals)

    @classmethod
    def parse(cls, text: str) -> OpenUnion:
        parts = [p.strip() for p in text.split("U")] if text.strip() not in ("", "{}") else []
        ivs = []
        for p in parts:
            if not (p.startswith("(") and p.endswith(")")) or p.count(",") != 1:
                raise ParseError(f"not an open interval: {p!r}")
            a, b = (s.strip() for s in p[1:-1].split(","))
            lo = None if a in ("-inf", "-oo") else _parse_rat(a, "$")
            hi = None if b in ("+inf", "inf", "+oo") else _parse_rat(b, "$")
            ivs.append((lo, hi))
        return cls.of(ivs)


def _side_covered(V: OpenUnion, limit: Fraction, slope: Fraction, from_left: bool) -> bool:
    # values of the branch approach `limit` as x approaches the breakpoint from one side
    if limit in V:
        return True
    if slope == 0:
        return False
    approach_from_below = (slope > 0) == from_left
    return V.has_upper_end(limit) if approach_from_below else V.has_lower_end(limit)


def is_robust(f: PAFunction, x0, V: OpenUnion) -> bool:
    """Is ``f^-1(V)`` a neighbourhood of ``x0``?"""
    x0 = rat(x0)
    if f(x0) not in V:
        return False
    kind, i = f.locate(x0)
    if kind == "iv":
        return True
    return _side_covered(V, f.left_limit(i), f.pieces[i].slope, True) and _side_covered(
        V, f.right_limit(i), f.pieces[i + 1].slope, False
    )


@dataclass(frozen=True)
class Defect:
    breakpoint: Fraction
    orphan: Fraction
    witness: OpenUnion

    def to_json(self) -> dict:
        return {"breakpoint": fmt(self.breakpoint), "orphan_value": fmt(self.orphan), "witness": self.witness.render()}


def universality_defects(f: PAFunction) -> list[Defect]:
    """Cluster values that ``f`` does not attain arbitrarily close to their breakpoint.

    Each defect comes with an open set that is a robust property of ``f`` at
    the breakpoint yet misses the orphan value, so the cluster envelope does
    not witness it.
    """
    out = []
    for i, b in enumerate(f.breakpoints):
        L, R, v0 = f.left_limit(i), f.right_limit(i), f.values[i]
        sl, sr = f.pieces[i].slope, f.pieces[i + 1].slope
        for v in sorted({L, v0, R}):
            attained = v == v0 or (v == L and sl == 0) or (v == R and sr == 0)
            if attained:
                continue
            W = _defect_witness(v, [(L, sl, True), (R, sr, False)], v0)
            assert is_robust(f, b, W) and v not in W
            out.append(Defect(b, v, W))
    return out


def _defect_witness(v: Fraction, sides, v0: Fraction) -> OpenUnion:
    ivs: list[tuple] = []
    others = {v0}
    for limit, slope, from_left in sides:
        if limit == v and slope != 0:
            from_below = (slope > 0) == from_left
            ivs.append((None, v) if from_below else (v, None))
        else:
            others.add(limit)
    W = OpenUnion.of(ivs)
    for w in sorted(others):
        if w not in W:
            h = min(abs(w - v) / 2, Q(1))
            ivs.append((w - h, w + h))
    return OpenUnion.of(ivs)


# ---------------------------------------------------------------- local modulus


def _first_bad_right(p: Affine, s: Fraction, e: Optional[Fraction], c: Fraction, eps: Fraction) -> Optional[Fraction]:
    """Infimum of ``{x in (s, e) : |p(x) - c| >= eps}``, or None if empty."""
    cands = []
    for target, above in ((c + eps, True), (c - eps, False)):
        if p.slope == 0:
            bad = p.intercept >= target if above else p.intercept <= target
            if bad:
                cands.append(s)
            continue
        x1 = p.solve(target)
        grows_into = (p.slope > 0) == above  # bad region is [x1, inf) rather than (-inf, x1]
        if grows_into:
            start = max(x1, s)
            if e is None or start < e:
                cands.append(start)
        elif x1 > s:
            cands.append(s)
    return min(cands) if cands else None


def _right_modulus(f: PAFunction, x0: Fraction, eps: Fraction) -> Optional[Fraction]:
    c = f(x0)
    kind, i = f.locate(x0)
    j = i + 1 if kind == "bp" else i
    s = x0
    best = None
    while True:
        e = f.breakpoints[j] if j < len(f.breakpoints) else None
        bad = _first_bad_right(f.pieces[j], s, e, c, eps)
        if bad is not None:
            best = bad
            break
        if e is None:
            break
        if abs(f.values[j] - c) >= eps:
            best = e
            break
        s = e
        j += 1
    return None if best is None else best - x0


def local_modulus(f: PAFunction, x0, eps, max_delta: Fraction = DEFAULT_MAX_DELTA) -> Optional[Fraction]:
    """Largest ``delta`` with ``f((x0 - delta, x0 + delta))`` inside ``(f(x0) - eps, f(x0) + eps)``.

    None at a discontinuity.  The supremum is attained (the interval is open
    and the bad set's infimum is rational), so it is returned exactly;
    ``max_delta`` stands in for an unbounded modulus.
    """
    x0, eps = rat(x0), rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not f.is_continuous_at(x0):
        return None
    right = _right_modulus(f, x0, eps)
    left = _right_modulus(f.reflect(), -x0, eps)
    cands = [d for d in (left, right, max_delta) if d is not None]
    return min(cands)


# ---------------------------------------------------------------- fixtures


def example_f() -> PAFunction:
    """``-x`` for ``x <= 0`` and ``1`` for ``x > 0``."""
    return PAFunction.build([(0, 0)], [(-1, 0), (0, 1)])


def example_g() -> PAFunction:
    """``-x`` for ``x < 0`` and ``1`` for ``x >= 0``."""
    return PAFunction.build([(0, 1)], [(-1, 0), (0, 1)])
