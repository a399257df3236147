import pytest
from hypothesis import given

from envlab.errors import CapExceeded, CycleError, DuplicateNameError, NotContinuous, NotOpenMap
from envlab.finspace import (
    SIERPINSKI,
    Caps,
    PointMap,
    UpFamily,
    chain,
    classify_map,
    discrete,
    double_star,
    exponential,
    int_preimage,
    monotone_maps,
    mu,
    nu,
    o2_elements,
    o2_space,
    pushforward,
    space_from_order,
)

from conftest import maps, spaces

S = SIERPINSKI
D2 = discrete(2)


def brute_opens(X):
    """Subsets closed upward, by filtering all 2^n subsets."""
    out = []
    for m in range(1 << X.n):
        if all(X.up[i] & ~m == 0 for i in range(X.n) if m >> i & 1):
            out.append(m)
    return sorted(out)


def test_space_construction():
    p = space_from_order(["p"], [])
    assert p.n == 1 and p.opens().opens == (0, 1)
    assert S.le(0, 1) and not S.le(1, 0)
    with pytest.raises(CycleError):
        space_from_order(["a", "b"], [(0, 1), (1, 0)])
    with pytest.raises(DuplicateNameError):
        space_from_order(["a", "a"], [])


def test_transitive_closure():
    X = space_from_order(["a", "b", "c"], [(0, 1), (1, 2)])
    assert X.le(0, 2)
    assert X.up == chain(3).up


def test_opens_examples():
    assert [S.render(V) for V in S.opens()] == ["{}", "{top}", "{bot,top}"]
    assert len(D2.opens()) == 4
    assert len(discrete(3).opens()) == 8


@given(spaces(max_size=4))
def test_opens_match_subset_filter(X):
    assert sorted(X.opens()) == brute_opens(X)
    assert X.opens().opens[0] == 0 and X.opens().opens[-1] == X.full


def test_opens_cap():
    with pytest.raises(CapExceeded) as exc:
        discrete(5).opens(Caps(opens=4))
    assert exc.value.cap == "cap_opens" and "--cap-opens" in str(exc.value)


def test_interior_examples():
    assert S.interior(S.mask([0])) == 0
    assert S.interior(S.mask([1])) == S.mask([1])
    C = chain(3)
    assert C.interior(C.mask([0, 2])) == C.mask([2])


@given(spaces(max_size=4), spaces(max_size=1))
def test_interior_is_largest_open_inside(X, _):
    for A in range(1 << X.n):
        I = X.interior(A)
        assert X.is_open(I) and I & ~A == 0
        assert all(V & ~I == 0 for V in X.opens() if V & ~A == 0)


def test_classify_examples():
    ident = classify_map(PointMap.identity(S))
    assert ident.continuous and ident.open_map
    f = PointMap(S, D2, (0, 1))
    k = classify_map(f)
    assert (k.continuous, k.open_map) == (False, True)
    g = PointMap(D2, S, (0, 1))
    k = classify_map(g)
    assert (k.continuous, k.open_map) == (True, False)


def test_nu_examples():
    assert nu(S, 1).antichain == frozenset({S.mask([1])})
    assert nu(S, 0).antichain == frozenset({S.full})
    D3 = discrete(3)
    assert all(nu(D3, x).antichain == frozenset({1 << x}) for x in range(3))


def test_int_preimage_examples():
    f = PointMap(S, D2, (0, 1))
    assert int_preimage(f, D2.mask([0])) == 0
    assert int_preimage(f, D2.mask([1])) == S.mask([1])


@given(maps())
def test_int_preimage_of_continuous_is_preimage(f):
    if f.is_continuous():
        assert all(int_preimage(f, V) == f.preimage(V) for V in f.codomain.opens())


def test_pushforward():
    C = chain(3)
    top = PointMap.constant(C, C, 2)
    assert pushforward(PointMap.identity(C), C.mask([1, 2])) == C.mask([1, 2])
    assert pushforward(top, C.mask([2])) == C.mask([2])
    with pytest.raises(NotOpenMap):
        pushforward(PointMap(D2, S, (0, 1)), D2.mask([0]))


def test_double_star_identity_and_naturality():
    for U in o2_elements(S):
        assert double_star(PointMap.identity(S), U) == U
    f = PointMap(D2, S, (0, 1))
    for x in range(2):
        assert double_star(f, nu(D2, x)) == nu(S, f(x))
    with pytest.raises(NotContinuous):
        double_star(PointMap(S, D2, (0, 1)), nu(S, 0))


def test_double_star_by_comprehension():
    # phi**(U) = {W : phi^-1(W) in U}, enumerated directly
    C = chain(3)
    for a in monotone_maps(C, S):
        phi = PointMap(C, S, a)
        for U in o2_elements(C):
            want = UpFamily.generated(W for W in S.opens() if phi.preimage(W) in U)
            assert double_star(phi, U) == want


def dedekind_free(n):
    """Monotone Boolean functions on n variables, by brute force over truth tables."""
    points = range(1 << n)
    count = 0
    for table in range(1 << (1 << n)):
        if all(not (table >> a & 1) or table >> b & 1 for a in points for b in points if a & ~b == 0):
            count += 1
    return count


def test_o2_sizes_are_dedekind_numbers():
    # O2 of a discrete n-point space is the free distributive lattice: 3, 6, 20
    for n in (1, 2, 3):
        assert len(o2_elements(discrete(n))) == dedekind_free(n)
    assert len(o2_elements(S)) == 4


def test_mu_laws_and_comprehension():
    O2 = o2_space(S)
    elems = o2_elements(S)
    for k, U in enumerate(elems):
        assert mu(S, nu(O2, k)) == U
    assert mu(S, UpFamily.empty()) == UpFamily.empty()
    # mu(UU) = {V : {U : V in U} in UU}
    for k in range(O2.n):
        big = UpFamily.generated([O2.up[k]])
        want = UpFamily.generated(
            V for V in S.opens() if O2.mask(j for j, e in enumerate(elems) if V in e) in big
        )
        assert mu(S, big) == want


def test_mu_cap():
    with pytest.raises(CapExceeded):
        mu(discrete(4), UpFamily.empty())


def test_exponentials():
    one = discrete(1)
    assert exponential(one, chain(3)).n == 3
    E = exponential(S, S)
    assert E.n == 3 and E.is_lattice()
    assert [E.names[i] for i in range(3)] == ["(bot,bot)", "(bot,top)", "(top,top)"]
    assert exponential(S, one).n == 1


def test_upfamily_canonical():
    a = UpFamily.generated([0b01, 0b11, 0b01])
    assert a.antichain == frozenset({0b01})
    assert UpFamily.full() == UpFamily.generated([0, 0b11])
    assert 0 not in UpFamily.empty()
