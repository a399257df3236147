from fractions import Fraction as Q

import hypothesis.strategies as st
import pytest
from hypothesis import assume, given

from envlab.errors import BranchCapExceeded, ParseError
from envlab.finspace import Caps
from envlab.realpw import (
    DEFAULT_MAX_DELTA,
    Affine,
    OpenUnion,
    PAEnvelope,
    PAFunction,
    cluster_envelope,
    example_f,
    example_g,
    identity_envelope,
    is_robust,
    kleisli_compose,
    local_modulus,
    rat,
    universality_defects,
)

F_ = cluster_envelope(example_f())
G_ = cluster_envelope(example_g())
SAMPLES = [Q(-2), Q(-1), Q(0), Q(1, 2), Q(3)]

small = st.integers(-3, 3).map(Q)
slopes = st.sampled_from([Q(-2), Q(-1), Q(-1, 2), Q(0), Q(1, 2), Q(1), Q(2)])


@st.composite
def pa_functions(draw, max_breaks=3):
    bps = sorted(set(draw(st.lists(small, max_size=max_breaks))))
    values = [draw(small) for _ in bps]
    pieces = [Affine(draw(slopes), draw(small)) for _ in range(len(bps) + 1)]
    return PAFunction(tuple(bps), tuple(values), tuple(pieces))


def points_near(env: PAEnvelope, extra=()):
    pts = set(env.breakpoints) | set(extra) | {Q(0)}
    for b in list(pts):
        pts |= {b - 1, b - Q(1, 3), b + Q(1, 3), b + 1}
    return sorted(pts)


# ---------------------------------------------------------------- envelopes


def test_cluster_envelope_of_jump():
    assert F_.value_at(0) == {Q(0), Q(1)}
    assert F_.value_at(Q(-3, 2)) == {Q(3, 2)}
    assert F_.value_at(Q(5)) == {Q(1)}
    assert F_.is_usc()


def test_two_jumps_share_an_envelope():
    assert F_ == G_
    assert all(F_.value_at(x) == G_.value_at(x) for x in SAMPLES)


def test_affine_envelope_is_the_graph():
    f = PAFunction.affine(2, -1)
    E = cluster_envelope(f)
    assert E.breakpoints == () and E.value_at(Q(3)) == {Q(5)}


def test_composite_of_jumps():
    # the union over F(0) = {0, 1} of G keeps the value 0 at the origin
    GF = kleisli_compose(G_, F_)
    FG = kleisli_compose(F_, G_)
    for x in SAMPLES:
        want = {Q(0), Q(1)} if x == 0 else {Q(1)}
        assert GF.value_at(x) == want
        assert FG.value_at(x) == want
    assert GF.breakpoints == (Q(0),) and GF.branches == (frozenset({Affine(Q(0), Q(1))}),) * 2


def test_identity_is_a_kleisli_unit():
    ident = identity_envelope()
    assert kleisli_compose(ident, ident) == ident
    assert kleisli_compose(F_, ident) == F_ and kleisli_compose(ident, F_) == F_


@given(pa_functions())
def test_unit_laws(f):
    E = cluster_envelope(f)
    assert kleisli_compose(identity_envelope(), E) == E
    assert kleisli_compose(E, identity_envelope()) == E


@given(pa_functions(2), pa_functions(2), pa_functions(2))
def test_associativity(f, g, h):
    F, G, H = cluster_envelope(f), cluster_envelope(g), cluster_envelope(h)
    assert kleisli_compose(H, kleisli_compose(G, F)) == kleisli_compose(kleisli_compose(H, G), F)


@given(pa_functions(2), pa_functions(2))
def test_composite_matches_pointwise_union(f, g):
    F, G = cluster_envelope(f), cluster_envelope(g)
    GF = kleisli_compose(G, F)
    assert GF.is_usc()
    for x in points_near(GF, F.breakpoints):
        want = frozenset().union(*(G.value_at(y) for y in F.value_at(x)))
        assert GF.value_at(x) == want


@given(pa_functions())
def test_breakpoint_sets_are_maximal(f):
    # dropping a value breaks semicontinuity or loses f(b); adding one stays valid but less informative
    E = cluster_envelope(f)
    for i, b in enumerate(E.breakpoints):
        for v in E.bp_values[i]:
            rest = E.bp_values[i] - {v}
            if not rest:
                continue
            smaller = PAEnvelope(E.breakpoints, E.branches, E.bp_values[:i] + (rest,) + E.bp_values[i + 1:])
            assert not smaller.usc_at(i) or v == f(b)
        extra = max(E.bp_values[i]) + 1
        bigger = PAEnvelope(E.breakpoints, E.branches, E.bp_values[:i] + (E.bp_values[i] | {extra},) + E.bp_values[i + 1:])
        assert bigger.usc_at(i) and E.bp_values[i] < bigger.bp_values[i]


def test_branch_cap():
    # a breakpoint value set feeding a constant branch multiplies branches
    wide = PAEnvelope((Q(0),), (frozenset({Affine(Q(0), Q(0))}), frozenset({Affine(Q(0), Q(0))})),
                      (frozenset({Q(0), Q(1), Q(2)}),))
    const = PAEnvelope((), (frozenset({Affine(Q(0), Q(0))}),), ())
    assert kleisli_compose(wide, const).value_at(5) == {Q(0), Q(1), Q(2)}
    with pytest.raises(BranchCapExceeded):
        kleisli_compose(wide, const, Caps(branches=2))


# ---------------------------------------------------------------- robustness and defects


def test_robust_examples():
    V = OpenUnion.parse("(0,+inf)")
    assert is_robust(example_g(), 0, V)
    assert not is_robust(example_f(), 0, V)
    assert is_robust(example_f(), 0, OpenUnion.real_line())


def test_defects():
    assert universality_defects(example_f()) == []
    (d,) = universality_defects(example_g())
    assert d.to_json() == {"breakpoint": "0", "orphan_value": "0", "witness": "(0,+inf)"}
    assert universality_defects(PAFunction.affine(3, 1)) == []


def generated_opens(f: PAFunction):
    ends = set()
    for i in range(len(f.breakpoints)):
        ends |= {f.left_limit(i), f.values[i], f.right_limit(i)}
    ends = sorted({e + d for e in ends for d in (Q(-1), Q(-1, 2), Q(0), Q(1, 2), Q(1))})
    out = [OpenUnion.real_line()]
    out += [OpenUnion.of([(a, b)]) for a in ends for b in ends if a < b]
    out += [OpenUnion.of([(None, a)]) for a in ends] + [OpenUnion.of([(a, None)]) for a in ends]
    # one-sided approach to a value needs two components that straddle it
    out += [OpenUnion.of([(a, b), (c, d)]) for a, b, c, d in _quads(ends)]
    return out


def _quads(ends):
    for i, a in enumerate(ends):
        for b in ends[i + 1:]:
            for c in (e for e in ends if e >= b):
                for d in (e for e in ends if e > c):
                    yield a, b, c, d


@given(pa_functions(2))
def test_defects_match_robust_properties(f):
    E = cluster_envelope(f)
    defects = universality_defects(f)
    for d in defects:
        assert is_robust(f, d.breakpoint, d.witness) and d.orphan not in d.witness
    witnessed = all(
        not is_robust(f, b, V) or all(v in V for v in E.value_at(b))
        for b in f.breakpoints
        for V in generated_opens(f)
    )
    assert witnessed == (not defects)


# ---------------------------------------------------------------- modulus


def test_modulus_examples():
    assert local_modulus(PAFunction.affine(2, 0), 5, 1) == Q(1, 2)
    assert local_modulus(example_f(), 0, 1) is None
    assert local_modulus(PAFunction.affine(0, 4), 0, Q(1, 10)) == DEFAULT_MAX_DELTA
    with pytest.raises(ValueError):
        local_modulus(example_f(), 1, 0)


@given(pa_functions(), small, st.sampled_from([Q(1, 2), Q(1), Q(2)]))
def test_modulus_is_sharp(f, x0, eps):
    assume(f.is_continuous_at(x0))
    d = local_modulus(f, x0, eps)
    c = f(x0)
    cuts = sorted({x0 - d, x0 + d, *f.breakpoints})
    inside = [x for x in cuts if x0 - d < x < x0 + d]
    grid = sorted(set(inside) | {x0} | {(a + b) / 2 for a, b in zip(cuts, cuts[1:])})
    # every point strictly inside the window stays within eps (pieces are affine, so checking
    # breakpoints and one-sided limits at the window edges suffices)
    for x in grid:
        if x0 - d < x < x0 + d:
            assert abs(f(x) - c) < eps
    if d < DEFAULT_MAX_DELTA:
        # some point just outside violates, or the limit at the edge touches eps
        edges = [x0 - d, x0 + d]
        assert any(
            abs(f(e) - c) >= eps
            or abs(f(e + s * Q(1, 10**6)) - c) >= eps
            or abs(_limit(f, e, -s) - c) >= eps
            for e, s in zip(edges, (-1, 1))
        )


def _limit(f: PAFunction, x: Q, side: int) -> Q:
    """One-sided limit of ``f`` at ``x`` from the left (``side < 0``) or right."""
    kind, i = f.locate(x)
    if kind == "iv":
        return f(x)
    return f.left_limit(i) if side < 0 else f.right_limit(i)


# ---------------------------------------------------------------- serialisation


@given(pa_functions())
def test_json_round_trip(f):
    assert PAFunction.from_json(f.to_json()) == f


def test_parse_errors_have_locations():
    data = example_f().to_json()
    data["pieces"][1]["slope"] = "one"
    with pytest.raises(ParseError) as exc:
        PAFunction.from_json(data)
    assert exc.value.location == "$.pieces[1].slope"
    data = example_f().to_json()
    data["breakpoints"][0]["x"] = 0.5
    with pytest.raises(ParseError):
        PAFunction.from_json(data)


def test_no_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat("3/4") == Q(3, 4)


def test_open_union_parsing():
    V = OpenUnion.parse("(-inf,0) U (1,2) U (3/2,4)")
    assert V.render() == "(-inf,0) U (1,4)"
    assert Q(0) not in V and Q(3) in V
    with pytest.raises(ParseError):
        OpenUnion.parse("[0,1)")
