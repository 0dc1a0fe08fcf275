import pytest

from kthit.corpus import random_extended_instance, random_graph
from kthit.decomposition import bed_value, non_kt_vertices, pending_partition
from kthit.errors import GraphError, PreconditionViolated
from kthit.graph import Graph, enumerate_t_cliques, has_t_clique
from kthit.oracle import all_optimal_solutions, brute_opt_ekt, conflict_value, mmbs_graph
from kthit.solver import (
    EktSolver,
    ExtendedInstance,
    SolveBudget,
    conflict_positive,
    min_hitting_set,
    opt_and_clean,
    project,
    solve_ekt,
)
from kthit.utils import hits_all, subsets_by_size

K3 = Graph.complete(3)
# Triangle 0 1 2 with an extra vertex 3 adjacent to 0 and 1.
KITE = Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])


def test_instance_validation():
    with pytest.raises(GraphError):
        ExtendedInstance(K3, ((0, 1, 2),), 3)
    with pytest.raises(GraphError):
        ExtendedInstance(Graph.path(3), ((0, 2),), 3)
    with pytest.raises(GraphError):
        ExtendedInstance(K3, ((), (1,)), 3)
    assert ExtendedInstance(K3, ((1,), (0,), (1,)), 3).family == ((0,), (1,))
    with pytest.raises(ValueError):
        SolveBudget(-1, 0)


def test_project():
    assert project(KITE, {3}, {0, 1, 2}, 3) == ((0, 1),)
    assert project(Graph.path(4), {0}, {2, 3}, 3) == ()
    assert project(K3, {0}, {1, 2}, 3) == ((1, 2),)
    with pytest.raises(ValueError):
        project(K3, {0}, {0, 1}, 3)


def test_min_hitting_set():
    assert min_hitting_set([(0, 1), (1, 2)], 1) == frozenset({1})
    assert min_hitting_set([(0,), (1,)], 1) is None
    assert min_hitting_set([], 0) == frozenset()


def test_solve_examples():
    assert len(solve_ekt(ExtendedInstance(K3, (), 3), SolveBudget(1, 0))) == 1
    assert solve_ekt(ExtendedInstance(K3, ((0,),), 3), SolveBudget(1, 0)) == (0,)
    assert solve_ekt(ExtendedInstance(K3, ((0,), (1,)), 3), SolveBudget(1, 1)) == (0, 1)


def test_opt_and_clean():
    assert opt_and_clean(ExtendedInstance(K3, ((0,),), 3), 1) == (1, True)
    assert opt_and_clean(ExtendedInstance(K3, ((0,), (1,)), 3), 1) == (1, False)
    assert opt_and_clean(ExtendedInstance(Graph.cycle(5), (), 3), 0) == (0, True)


def test_solver_matches_oracle(rng):
    for _ in range(60):
        inst = random_extended_instance(rng, max_n=8)
        g, t = inst.graph, inst.t
        opt, _ = brute_opt_ekt(inst)
        opt_g, _ = brute_opt_ekt(ExtendedInstance(g, (), t))
        lam = bed_value(g, t, lambda_cap=g.n).value
        solution = solve_ekt(inst, SolveBudget(lam, opt - opt_g))
        assert hits_all(solution, enumerate_t_cliques(g, t) + list(inst.family))
        assert len(solution) == opt


def test_solver_output_valid_without_promises(rng):
    for _ in range(60):
        inst = random_extended_instance(rng, max_n=8)
        sets = enumerate_t_cliques(inst.graph, inst.t) + list(inst.family)
        for lam, kappa in ((0, 0), (1, 0), (1, 1)):
            assert hits_all(solve_ekt(inst, SolveBudget(lam, kappa)), sets)


def test_memoized_solver_agrees(rng):
    for _ in range(20):
        inst = random_extended_instance(rng, max_n=8)
        budget = SolveBudget(bed_value(inst.graph, inst.t, inst.graph.n).value, 1)
        assert len(solve_ekt(inst, budget, memoize=True)) == len(solve_ekt(inst, budget))


def test_conflict_examples():
    triangle = Graph(3, [(0, 1), (0, 2), (1, 2)])
    assert conflict_positive(triangle, {2}, {0, 1}, 3, 0)
    assert not conflict_positive(triangle, set(), {0, 1, 2}, 3, 1)
    assert not conflict_positive(KITE, {3}, {0, 1, 2}, 3, 1)
    with pytest.raises(PreconditionViolated):
        conflict_positive(Graph.complete(4), {0, 1, 2}, {3}, 3, 1)
    with pytest.raises(ValueError):
        conflict_positive(KITE, {0}, {0, 1}, 3, 1)


def test_conflict_matches_oracle(rng):
    checked = 0
    while checked < 30:
        g = random_graph(7, 0.6, rng)
        s1 = {v for v in g.vertices if rng.rand() < 0.3}
        s2 = {v for v in g.vertices if v not in s1 and rng.rand() < 0.8}
        if has_t_clique(g, 3, s1):
            continue
        lam = bed_value(g, 3, 7, within=s2).value
        solver = EktSolver(g, 3)
        assert conflict_positive(g, s1, s2, 3, lam, solver) == (conflict_value(g, s1, s2, 3) > 0)
        checked += 1


def test_small_certificate_for_conflict(rng):
    checked = 0
    while checked < 10:
        g = random_graph(6, 0.7, rng)
        s1 = [v for v in g.vertices if rng.rand() < 0.4]
        s2 = [v for v in g.vertices if v not in s1]
        if has_t_clique(g, 3, s1) or conflict_value(g, s1, s2, 3) == 0:
            continue
        sub, _ = g.subgraph(s2)
        bound = 2 * mmbs_graph(sub, 3, ground_cap=64).value
        assert any(conflict_value(g, part, s2, 3) > 0 for part in subsets_by_size(s1, bound, min_size=1))
        checked += 1


def test_solve_with_pendant_vertex():
    # Triangle 0 1 2 with a pendant vertex 3 on 1.
    g = Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3)])
    solution = solve_ekt(ExtendedInstance(g, (), 3), SolveBudget(1, 0))
    assert len(solution) == 1
    assert hits_all(solution, [(0, 1, 2)])


def test_non_kt_vertices_switch_conflict_sides(rng):
    checked = 0
    while checked < 40:
        g = random_graph(7, 0.6, rng)
        x = {v for v in g.vertices if rng.rand() < 0.35}
        rest = [v for v in g.vertices if v not in x]
        n_set = non_kt_vertices(g, 3, rest)
        x_part = {v for v in x if rng.rand() < 0.6}
        n_part = {v for v in n_set if rng.rand() < 0.6}
        if has_t_clique(g, 3, x_part | n_part):
            continue
        r_part = {v for v in rest if v not in n_part and rng.rand() < 0.8}
        left = conflict_value(g, x_part | n_part, r_part, 3)
        right = conflict_value(g, x_part, r_part | n_part, 3)
        assert (left == 0) == (right == 0)
        checked += 1


def _replaced_solutions(inst, dec, v):
    g, t = inst.graph, inst.t
    pending = set(dec.pending_of(v))
    sub, relabel = g.subgraph(pending)
    back = {new: old for old, new in relabel.items()}
    family = tuple(tuple(relabel[u] for u in z) for z in inst.family if set(z) <= pending)
    local = [{back[u] for u in s} for s in all_optimal_solutions(ExtendedInstance(sub, family, t))]
    with_v = [s for s in local if v in s]
    for u in all_optimal_solutions(inst):
        if with_v:
            yield from ((set(u) - pending) | s for s in with_v)
        else:
            yield from ((set(u) - (pending - {v})) | s for s in local)


def test_pending_component_replacement(rooted_example):
    g, names = rooted_example
    roots = [[names[v] for v in ("v1", "v2", "v3", "v4")], [names["u1"], names["u2"]]]
    dec = pending_partition(g, 4, (), roots)
    for family in ((), ((names["v2"],), (7, 8))):
        inst = ExtendedInstance(g, family, 4)
        opt, _ = brute_opt_ekt(inst)
        sets = enumerate_t_cliques(g, 4) + list(inst.family)
        for v in dec.root_vertices:
            for solution in _replaced_solutions(inst, dec, v):
                assert len(solution) == opt
                assert hits_all(solution, sets)
