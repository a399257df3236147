import hypothesis.strategies as st
from hypothesis import settings

from envlab.corpus import posets
from envlab.finspace import PointMap

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def spaces(draw, min_size=1, max_size=3):
    n = draw(st.integers(min_size, max_size))
    return draw(st.sampled_from(posets(n)))


@st.composite
def maps(draw, X=None, Y=None, max_size=3):
    X = X if X is not None else draw(spaces(max_size=max_size))
    Y = Y if Y is not None else draw(spaces(max_size=max_size))
    a = draw(st.tuples(*[st.integers(0, Y.n - 1) for _ in range(X.n)]))
    return PointMap(X, Y, a)


@st.composite
def composable(draw, max_size=3):
    f = draw(maps(max_size=max_size))
    g = draw(maps(X=f.codomain, max_size=max_size))
    return f, g


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
