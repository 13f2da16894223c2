"""Exit criteria. Each test logs one PASS/FAIL line to the terminal summary."""

import contextlib
import time

import pytest

from parry_sullivan.circuits import (
    enumerate_circuits,
    class_product_table,
    materialize_families,
    ps_via_circuits,
    signed_family_count,
)
from parry_sullivan.cli import case_seed
from parry_sullivan.exact_linear import (
    all_permutations,
    determinant,
    identity_minus,
    inversion_sign,
    leibniz_determinant,
    ps_via_determinant,
    sign,
)
from parry_sullivan.flow_moves import reduce_to_closure
from parry_sullivan.multigraph import Multigraph, random_graph

from .conftest import ACCEPTANCE_LOG, EXAMPLE_PAIRS

CORPUS_SEED = 42
CORPUS_SIZE = 1000
CLASS_SEED = 7
CLASS_CORPUS_SIZE = 300


@contextlib.contextmanager
def criterion(label, budget_s=None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget_s is not None:
            assert elapsed < budget_s, f"took {elapsed:.2f}s, budget {budget_s}s"
    except BaseException as exc:
        ACCEPTANCE_LOG.append(f"FAIL  {label}: {exc}")
        print(f"FAIL  {label}")
        raise
    ACCEPTANCE_LOG.append(f"PASS  {label} ({elapsed:.2f}s)")
    print(f"PASS  {label}")


@pytest.fixture(scope="module")
def corpus():
    return [random_graph(6, 10, case_seed(CORPUS_SEED, i)) for i in range(CORPUS_SIZE)]


def test_1_worked_example():
    with criterion("1 worked example: PS = 4 - 5 = -1", budget_s=1.0):
        g = Multigraph.from_pairs(3, EXAMPLE_PAIRS)
        circuits = enumerate_circuits(g)
        count = signed_family_count(g, circuits)
        assert ps_via_determinant(g) == -1
        assert ps_via_circuits(g) == -1
        assert (count.even, count.odd) == (4, 5)
        assert len(circuits) == 5
        # listing with e_k written as edge id k - 1
        e1, e2, e3, e4, e5, e6, e7 = range(7)
        expected_even = {
            frozenset(),
            frozenset({frozenset({e5}), frozenset({e3, e4})}),
            frozenset({frozenset({e6}), frozenset({e1, e2})}),
            frozenset({frozenset({e5}), frozenset({e6})}),
        }
        expected_odd = {
            frozenset({frozenset({e1, e2})}),
            frozenset({frozenset({e3, e4})}),
            frozenset({frozenset({e5})}),
            frozenset({frozenset({e6})}),
            frozenset({frozenset({e1, e7, e4})}),
        }
        fams = [frozenset(c.edge_ids for c in fam) for fam in materialize_families(circuits)]
        assert len(fams) == 9
        assert {f for f in fams if len(f) % 2 == 0} == expected_even
        assert {f for f in fams if len(f) % 2} == expected_odd


def test_2_oracle_equivalence(corpus):
    with criterion(f"2 circuits = determinant = Leibniz on {CORPUS_SIZE} graphs", budget_s=60.0):
        assert len(corpus) >= 1000
        assert all(g.vertex_count <= 6 and g.edge_count <= 10 for g in corpus)
        for i, g in enumerate(corpus):
            det = ps_via_determinant(g)
            leib = leibniz_determinant(identity_minus(g.adjacency_matrix()))
            circ = ps_via_circuits(g)
            assert circ == det == leib, f"case {i} (seed {case_seed(CORPUS_SEED, i)})"


def test_3_per_permutation_classes():
    with criterion(
        f"3 per-permutation class counts = elementary products on {CLASS_CORPUS_SIZE} graphs",
        budget_s=60.0,
    ):
        for i in range(CLASS_CORPUS_SIZE):
            g = random_graph(5, 10, case_seed(CLASS_SEED, i))
            assert g.vertex_count <= 5
            rows = class_product_table(g)
            assert len(rows) == len(list(all_permutations(g.vertex_count)))
            bad = [r for r in rows if not r.agrees]
            assert not bad, f"case {i}: {bad[0]}"


def test_4_sign_from_cycle_structure():
    with criterion("4 cycle-structure sign = inversion parity, all of S_1..S_7", budget_s=10.0):
        checked = 0
        for n in range(1, 8):
            for rho in all_permutations(n):
                assert sign(rho) == inversion_sign(rho), str(rho)
                checked += 1
        assert checked == 5913


def test_5_source_sink_elimination(corpus):
    with criterion("5 reduction preserves PS and circuits on the corpus", budget_s=60.0):
        for i, g in enumerate(corpus):
            trace = reduce_to_closure(g)
            final = trace.final
            assert ps_via_determinant(final) == ps_via_determinant(g), f"case {i}"
            assert ps_via_circuits(final) == ps_via_circuits(g), f"case {i}"
            mapped = sorted(
                sorted(trace.relabeling.edges[k] for k in c.edge_ids)
                for c in enumerate_circuits(g)
            )
            assert mapped == sorted(sorted(c.edge_ids) for c in enumerate_circuits(final)), (
                f"case {i}"
            )


def test_6_disjoint_loops_cancel():
    with criterion("6 n disjoint loops: even = odd = 2^(n-1), PS = 0", budget_s=1.0):
        for n in range(1, 11):
            g = Multigraph.from_pairs(n, [(v, v) for v in range(n)])
            count = signed_family_count(g, enumerate_circuits(g))
            assert count.even == count.odd == 2 ** (n - 1), n
            assert ps_via_determinant(g) == 0
            assert count.value == 0


def test_7_transpose_convention(corpus):
    with criterion("7 det(I - A) = det(I - A^T) on the corpus"):
        for i, g in enumerate(corpus):
            m = identity_minus(g.adjacency_matrix())
            assert determinant(m) == determinant(m.transpose()), f"case {i}"


def test_8_degenerate_anchors():
    with criterion("8 empty graph, DAGs and single-vertex loops"):
        assert ps_via_determinant(Multigraph(0)) == ps_via_circuits(Multigraph(0)) == 1
        for s in range(200):
            g = random_graph(7, 12, s)
            dag = Multigraph.from_pairs(
                g.vertex_count, [(min(a, b), max(a, b)) for a, b in g.pairs() if a != b]
            )
            assert ps_via_determinant(dag) == ps_via_circuits(dag) == 1
        for k in range(6):
            g = Multigraph.from_pairs(1, [(0, 0)] * k)
            assert ps_via_determinant(g) == ps_via_circuits(g) == 1 - k
