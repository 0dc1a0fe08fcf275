import pytest

from kthit.errors import CapExceeded
from kthit.graph import Graph
from kthit.oracle import (
    all_optimal_solutions,
    brute_bed_plus,
    brute_opt_ekt,
    brute_opt_pattern,
    brute_ved_plus,
    conflict_value,
    is_blocking_set,
    minimal_blocking_sets,
    mmbs_graph,
)
from kthit.solver import ExtendedInstance

K3 = Graph.complete(3)


def test_brute_opt_ekt():
    assert brute_opt_ekt(ExtendedInstance(Graph.complete(4), (), 3))[0] == 2
    assert brute_opt_ekt(ExtendedInstance(K3, ((0,), (1,)), 3)) == (2, (0, 1))
    assert brute_opt_ekt(ExtendedInstance(Graph.cycle(5), (), 3)) == (0, ())
    assert len(all_optimal_solutions(ExtendedInstance(K3, (), 3))) == 3


def test_brute_opt_pattern(diamond):
    assert brute_opt_pattern(Graph.complete(4), Graph.complete(3))[0] == 2
    assert brute_opt_pattern(diamond, diamond)[0] == 1
    assert brute_opt_pattern(Graph.complete(4), diamond, induced=True)[0] == 0


def test_brute_bed_plus():
    assert brute_bed_plus(Graph.complete(4), 4) == 1
    shared = Graph(7, [(u, v) for clique in ((0, 1, 2, 3), (0, 4, 5, 6)) for u in clique for v in clique if u < v])
    assert brute_bed_plus(shared, 4) == 1
    assert brute_bed_plus(Graph.path(6), 3) == 0
    with pytest.raises(CapExceeded):
        brute_bed_plus(Graph.path(11), 3)


def test_brute_ved_plus(diamond):
    assert brute_ved_plus(diamond, diamond) == 1
    assert brute_ved_plus(Graph.complete(5), Graph.complete(3)) == 3
    assert brute_ved_plus(Graph.cycle(4), Graph.complete(3)) == 0


def test_is_blocking_set():
    inst = ExtendedInstance(K3, (), 3)
    assert is_blocking_set(inst, [(0, 1), (0, 2), (1, 2)])
    assert is_blocking_set(inst, [(0,), (1,)])
    assert not is_blocking_set(inst, [(0,)])
    assert not is_blocking_set(inst, [(0, 1, 2)])


def test_minimal_blocking_sets():
    found = minimal_blocking_sets(ExtendedInstance(K3, (), 3), size_cap=2)
    assert len(found) == 6
    assert ((0,), (1,)) in found
    assert ((0,), (1, 2)) in found
    assert all(len(blocking) == 2 for blocking in found)


def test_conflict_value():
    triangle = Graph(3, [(0, 1), (0, 2), (1, 2)])
    assert conflict_value(triangle, {2}, {0, 1}, 3) == 1
    assert conflict_value(triangle, set(), {0, 1, 2}, 3) == 0


def test_mmbs_of_cliques():
    for t in (3, 4):
        result = mmbs_graph(Graph.complete(t), t)
        assert result.value == t
        assert is_blocking_set(ExtendedInstance(Graph.complete(t), result.family, t), result.blocking)


def test_mmbs_of_kt_free_graphs():
    assert mmbs_graph(Graph.path(4), 3).value == 1
    assert mmbs_graph(Graph(0), 3).value == 0


def test_triangle_chain_blocking(triangle_chain):
    g, tops = triangle_chain
    inst = ExtendedInstance(g, tuple(g.edges), 4)
    blocking = [(x,) for x in tops]
    assert is_blocking_set(inst, blocking)
    for i in range(len(blocking)):
        assert not is_blocking_set(inst, blocking[:i] + blocking[i + 1 :])


def test_mmbs_ground_cap_gives_lower_bound():
    result = mmbs_graph(Graph.complete(5), 3, ground_cap=4)
    assert result.lower_bound
    assert result.value >= 1
