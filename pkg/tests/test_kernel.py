from dataclasses import replace

import pytest

from kthit.corpus import disjoint_cliques, random_modulator_instance
from kthit.decomposition import compute_bed_root, non_kt_vertices
from kthit.errors import GraphError, PreconditionViolated
from kthit.graph import Graph
from kthit.kernel import (
    Kernelizer,
    ModulatorInstance,
    base_kernel,
    chunks,
    find_sunflower,
    kernelize,
    petal_graph,
    replay_trace,
)
from kthit.oracle import brute_opt_ekt, brute_opt_pattern
from kthit.solver import ExtendedInstance

K4 = Graph.complete(4)


def test_modulator_instance_validation():
    with pytest.raises(PreconditionViolated):
        ModulatorInstance(K4, (), 1, 3, 0)
    with pytest.raises(GraphError):
        ModulatorInstance(K4, (4,), 1, 3, 1)
    with pytest.raises(ValueError):
        ModulatorInstance(K4, (), -1, 3, 2)
    assert ModulatorInstance(K4, (2, 0), 1, 3, 1).rest == (1, 3)


def test_chunks():
    inst = ModulatorInstance(K4, (0, 1, 2), 1, 3, 1)
    assert list(chunks(inst, 16)) == [{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}]
    assert list(chunks(inst, 1)) == [{0}, {1}, {2}]
    with pytest.raises(ValueError):
        chunks(inst, 0)
    independent = ModulatorInstance(Graph(4), (0, 1, 2), 1, 3, 1)
    assert len(list(chunks(independent, 3))) == 7
    assert list(chunks(ModulatorInstance(Graph.cycle(5), (), 0, 3, 0), 16)) == []


def test_find_sunflower():
    edges = [frozenset(e) for e in ((0, 1), (0, 2), (0, 3))]
    core, petals = find_sunflower(edges, 3)
    assert core == {0}
    assert len(petals) == 3
    assert find_sunflower(edges, 4) is None
    core, _ = find_sunflower([frozenset((0, 1)), frozenset((2, 3))], 2)
    assert core == frozenset()


def test_petal_graph():
    graph, relabel, fresh = petal_graph(Graph.path(3), (0, 1, 2), [(0, 1)], 1, 3)
    assert graph.n == 5
    assert fresh == [3, 4]
    assert relabel == {0: 0, 1: 1, 2: 2}
    for p in fresh:
        assert graph.has_edge(0, p) and graph.has_edge(1, p)


def test_base_kernel_decisions():
    for t in (3, 4):
        for k in range(3):
            assert base_kernel(disjoint_cliques(k + 1, t), k, t).decision is False
    assert base_kernel(Graph.path(4), 0, 3).decision is True
    bowtie = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    base = base_kernel(bowtie, 1, 3)
    assert base.decision is True
    assert base.forced == [(2, 0)]


def test_base_kernel_output():
    base = base_kernel(K4, 2, 3)
    assert base.decision is None
    assert base.graph.n == 4
    assert base.budget == 2
    assert base.hyperedges == 4


def test_kernelize_triangle():
    assert kernelize(ModulatorInstance(Graph.complete(3), (), 0, 3, 1)).decision is False
    result = kernelize(ModulatorInstance(Graph.complete(3), (), 1, 3, 1))
    assert result.decision is True
    assert [entry["event"] for entry in result.trace] == ["remove", "level", "decide"]
    assert result.guarantee == "theoretical"


def test_kernelize_emits_instance():
    inst = ModulatorInstance(K4, (0, 1, 2, 3), 2, 3, 1)
    result = kernelize(inst)
    assert result.decision is None
    out = result.instance
    assert out.graph.n == 4 and out.budget == 2 and out.lam == 0
    assert kernelize(replace(inst, budget=1)).decision is False
    replayed = replay_trace(inst, result)
    assert replayed.graph == out.graph and replayed.budget == out.budget


def test_capped_guarantee():
    result = Kernelizer(chunk_cap=16).kernelize(ModulatorInstance(K4, (0, 1, 2, 3), 2, 3, 2))
    assert result.guarantee == "capped"


def test_trace_frame():
    result = kernelize(ModulatorInstance(Graph.complete(3), (), 1, 3, 1))
    frame = result.trace_frame()
    assert list(frame["event"]) == ["remove", "level", "decide"]
    assert frame["budget"].iloc[-1] == 0


def test_kernelize_is_safe(rng):
    for _ in range(8):
        inst = random_modulator_instance(rng, max_n=9, max_x=3, t=3, lam=1, budget=0)
        opt, _ = brute_opt_ekt(ExtendedInstance(inst.graph, (), 3))
        for k in (max(opt - 1, 0), opt):
            case = replace(inst, budget=k)
            result = kernelize(case)
            if result.decision is not None:
                assert result.decision == (opt <= k)
            else:
                out_opt, _ = brute_opt_pattern(result.instance.graph, Graph.complete(3), cap=256)
                assert (out_opt <= result.instance.budget) == (opt <= k)


def test_kernelize_is_deterministic(rng):
    for _ in range(4):
        inst = random_modulator_instance(rng, max_n=9, max_x=3, t=3, lam=1)
        first, second = kernelize(inst), kernelize(inst)
        assert first.trace == second.trace
        replayed = replay_trace(inst, first)
        if first.decision is not None:
            assert replayed == first.decision
        else:
            assert replayed.graph == first.instance.graph


def _two_k4s():
    # x = 0 completes each of the triangles 1 2 3 and 4 5 6 to a K_4.
    edges = [(0, v) for v in range(1, 7)]
    edges += [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]
    return Graph(7, edges)


def _context(kernelizer, g, modulator, lam=1):
    host = [v for v in g.vertices if v not in modulator]
    dec = compute_bed_root(g, 3, lam, within=host)
    return kernelizer.context(dec, frozenset(), frozenset(modulator), lam)


def test_mark_full_packing():
    kernelizer = Kernelizer()
    ctx = _context(kernelizer, _two_k4s(), {0})
    marked = kernelizer.mark(ctx, {0}, ctx.c)
    assert marked == set(ctx.dec.root_vertices)
    assert len(ctx.packings) == 1
    assert len(ctx.packings[0]["parts"]) == 2


def test_mark_edge_cases():
    kernelizer = Kernelizer()
    g = _two_k4s()
    ctx = _context(kernelizer, g, {0})
    assert kernelizer.mark(ctx, {0}, -1) == frozenset()
    with pytest.raises(PreconditionViolated):
        kernelizer.mark(ctx, {0}, ctx.c + 1)
    with pytest.raises(PreconditionViolated):
        kernelizer.mark(ctx, {0}, ctx.c, m_prime={2})
    # An isolated modulator vertex is in no conflict.
    lonely = Graph(4, [(1, 2), (1, 3), (2, 3)])
    ctx = _context(kernelizer, lonely, {0})
    assert kernelizer.mark(ctx, {0}, ctx.c) == frozenset()


def test_step1_and_step2_on_disjoint_triangles():
    kernelizer = Kernelizer()
    g = disjoint_cliques(5, 3)
    ctx = _context(kernelizer, g, set())
    marks = kernelizer.step1_mark(ctx)
    assert marks.union == ()
    removal = kernelizer.step2_remove(ctx, marks)
    assert removal.vertex == 0
    assert removal.removed == (0, 1, 2)
    assert removal.opt == 1
    reduced, _, budget = removal.apply(g, 5)
    assert reduced.n == 12 and budget == 4


def test_step2_without_unmarked_roots():
    kernelizer = Kernelizer()
    ctx = _context(kernelizer, _two_k4s(), {0})
    marks = kernelizer.step1_mark(ctx)
    assert set(marks.union) == set(ctx.dec.root_vertices)
    assert kernelizer.step2_remove(ctx, marks) is None


def test_kernelize_disjoint_triangles():
    no = kernelize(ModulatorInstance(disjoint_cliques(5, 3), (), 4, 3, 1))
    assert no.decision is False
    removals = [entry for entry in no.trace if entry["event"] == "remove"]
    assert len(removals) == 5
    assert sum(entry["opt"] for entry in removals) == 5
    assert kernelize(ModulatorInstance(disjoint_cliques(5, 3), (), 5, 3, 1)).decision is True
    assert kernelize(ModulatorInstance(Graph.cycle(5), (), 0, 3, 1)).decision is True


def test_kernelize_modulator_next_to_shared_triangles():
    # Triangles 1 2 3 and 3 4 5 share vertex 3, the modulator vertex 0 sees 4.
    g = Graph(6, [(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5), (0, 4)])
    for k in (0, 1):
        result = kernelize(ModulatorInstance(g, (0,), k, 3, 1))
        if result.decision is not None:
            assert result.decision == (k >= 1)
        else:
            out_opt, _ = brute_opt_pattern(result.instance.graph, Graph.complete(3), cap=256)
            assert (out_opt <= result.instance.budget) == (k >= 1)


def test_conflict_cache_depends_on_lambda():
    kernelizer = Kernelizer()
    ctx = _context(kernelizer, _two_k4s(), {0})
    deeper = kernelizer.context(ctx.dec, ctx.n_set, ctx.modulator, 2)
    assert kernelizer.conflict(ctx, frozenset({0}), {1, 2, 3})
    assert kernelizer.conflict(deeper, frozenset({0}), {1, 2, 3})
    assert len(kernelizer._conflicts) == 2


def test_every_removal_is_safe(rng):
    cases = [ModulatorInstance(disjoint_cliques(3, 3), (), 0, 3, 1)]
    cases += [random_modulator_instance(rng, max_n=9, max_x=3, t=3, lam=1, budget=0) for _ in range(10)]
    fired = 0
    for inst in cases:
        g = inst.graph
        rest = [v for v in g.vertices if v not in inst.modulator]
        n_set = non_kt_vertices(g, 3, rest)
        host = [v for v in rest if v not in n_set]
        if not host:
            continue
        kernelizer = Kernelizer()
        ctx = kernelizer.context(compute_bed_root(g, 3, 1, within=host), n_set, inst.modulator, 1)
        removal = kernelizer.step2_remove(ctx, kernelizer.step1_mark(ctx))
        if removal is None:
            continue
        fired += 1
        opt, _ = brute_opt_ekt(ExtendedInstance(g, (), 3))
        for k in (max(opt - 1, 0), opt, opt + 1):
            reduced, _, budget = removal.apply(g, k)
            reduced_opt, _ = brute_opt_ekt(ExtendedInstance(reduced, (), 3))
            assert (opt <= k) == (reduced_opt <= budget)
    assert fired >= 1


def test_unchecked_kernel_matches_checked(rng):
    for _ in range(4):
        inst = random_modulator_instance(rng, max_n=9, max_x=3, t=3, lam=1)
        checked = kernelize(inst)
        unchecked = kernelize(inst, check_invariants=False)
        assert unchecked.trace == checked.trace
