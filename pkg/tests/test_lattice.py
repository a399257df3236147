import pytest
from hypothesis import given
import hypothesis.strategies as st

from envlab.corpus import small_lattices
from envlab.errors import NotALattice
from envlab.finspace import SIERPINSKI, chain, discrete, o2_elements
from envlab.lattice import FiniteLattice, KBottomLattice, O2Lattice, overt_space

LATTICES = [FiniteLattice(X) for X in small_lattices(4)]


def brute_meet(X, a, b):
    lower = [c for c in range(X.n) if X.le(c, a) and X.le(c, b)]
    return [c for c in lower if all(X.le(d, c) for d in lower)]


@pytest.mark.parametrize("L", LATTICES, ids=lambda L: ",".join(map(str, L.space.up)))
def test_meet_join_match_bounds(L):
    X = L.space
    for a in range(X.n):
        for b in range(X.n):
            assert [L.meet(a, b)] == brute_meet(X, a, b)
            assert L.le(a, L.join(a, b)) and L.le(b, L.join(a, b))
            assert L.meet(a, L.join(a, b)) == a  # absorption


def test_lattice_counts():
    # labeled lattices on 1..4 points: 1 + 2 + 6 + 36 (24 chains and 12 diamonds)
    assert [sum(1 for L in LATTICES if L.space.n == n) for n in (1, 2, 3, 4)] == [1, 2, 6, 36]


def test_not_a_lattice():
    with pytest.raises(NotALattice):
        FiniteLattice(discrete(2))


def test_chain_extremes():
    L = FiniteLattice(chain(4))
    assert (L.bottom, L.top) == (0, 3)
    assert L.meet_all([]) == 3 and L.join_all([]) == 0


@given(st.data())
def test_o2_operations_are_set_operations(data):
    Y = data.draw(st.sampled_from([SIERPINSKI, discrete(2), chain(3)]))
    L = O2Lattice(Y)
    els = o2_elements(Y)
    a, b = data.draw(st.sampled_from(els)), data.draw(st.sampled_from(els))

    ma, mb = set(a.members(Y.opens())), set(b.members(Y.opens()))
    assert set(L.meet(a, b).members(Y.opens())) == ma & mb
    assert set(L.join(a, b).members(Y.opens())) == ma | mb
    assert L.le(L.bottom, a) and L.le(a, L.top)


def test_kbottom_order():
    K = KBottomLattice(discrete(2))
    els = K.elements()
    assert els[0] is None and K.top == frozenset()
    assert K.le(frozenset({0, 1}), frozenset({0}))
    assert K.join(frozenset({0}), frozenset({1})) == frozenset()
    assert K.meet(frozenset({0}), None) is None
    assert K.embed(None).is_empty()
    with pytest.raises(ValueError):
        KBottomLattice(SIERPINSKI)


def test_overt_space():
    V, masks = overt_space(SIERPINSKI)
    # nonempty closed sets of Sigma: {bot} and the whole space
    assert [SIERPINSKI.render(m) for m in masks] == ["{bot}", "{bot,top}"]
    assert V.le(0, 1)
    V3, _ = overt_space(discrete(3))
    assert V3.n == 7
