import pytest
from hypothesis import strategies as st

from parry_sullivan.multigraph import Multigraph

# The worked example: vertices top=0, left=1, right=2; e1..e7 become ids 0..6.
EXAMPLE_PAIRS = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 1), (2, 2), (1, 2)]
EXAMPLE_TEXT = "vertices 3\n" + "".join(f"edge {s} {t}\n" for s, t in EXAMPLE_PAIRS)


@pytest.fixture
def example_graph() -> Multigraph:
    return Multigraph.from_pairs(3, EXAMPLE_PAIRS)


@st.composite
def multigraphs(draw, max_vertices=6, max_edges=10, min_vertices=0):
    n = draw(st.integers(min_vertices, max_vertices))
    if n == 0:
        return Multigraph(0)
    v = st.integers(0, n - 1)
    pairs = draw(st.lists(st.tuples(v, v), max_size=max_edges))
    return Multigraph.from_pairs(n, pairs)


@st.composite
def dags(draw, max_vertices=7, max_edges=12):
    n = draw(st.integers(0, max_vertices))
    if n < 2:
        return Multigraph(n)
    pair = st.tuples(st.integers(0, n - 2), st.integers(1, n - 1)).filter(lambda p: p[0] < p[1])
    order = draw(st.permutations(range(n)))
    pairs = draw(st.lists(pair, max_size=max_edges))
    # relabel so the topological order is not simply 0..n-1
    return Multigraph.from_pairs(n, [(order[s], order[t]) for s, t in pairs])


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_LOG: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
