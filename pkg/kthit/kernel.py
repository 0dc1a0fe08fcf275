import math
from dataclasses import dataclass, field
from itertools import combinations

import pandas as pd

from kthit.blocking import capped_chunk_bound
from kthit.decomposition import BedSearch, compute_bed_root, validate_root
from kthit.errors import GraphError, InvariantBroken, PreconditionViolated
from kthit.graph import Graph, cliques_below, enumerate_t_cliques, has_t_clique
from kthit.solver import EktSolver, conflict_positive
from kthit.utils import subsets_by_size, vertex_set


@dataclass(frozen=True)
class ModulatorInstance:
    """
    A K_t-subgraph hitting instance (G, k) with a modulator X such that bed+(G - X) <= lam.
    """

    graph: object
    modulator: tuple
    budget: int
    t: int
    lam: int

    def __post_init__(self):
        modulator = vertex_set(self.modulator)
        if any(not 0 <= v < self.graph.n for v in modulator):
            raise GraphError(f"Modulator {list(modulator)} is out of range.")
        if self.budget < 0:
            raise ValueError(f"Budget must be nonnegative, got {self.budget}.")
        if self.lam < 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam}.")
        object.__setattr__(self, "modulator", modulator)
        if not BedSearch(self.graph, self.t).at_most(self.rest, self.lam):
            raise PreconditionViolated(f"bed+ of G - X exceeds {self.lam}.")

    @property
    def rest(self):
        modulator = set(self.modulator)
        return vertex_set(v for v in self.graph.vertices if v not in modulator)


@dataclass(frozen=True)
class Part:
    v_set: frozenset
    n_set: frozenset


@dataclass
class MarkState:
    rounds: list
    union: tuple
    packings: list = field(default_factory=list)


@dataclass(frozen=True)
class Removal:
    vertex: int
    removed: tuple
    opt: int

    def apply(self, graph, budget):
        reduced, relabel = graph.remove(self.removed)
        return reduced, relabel, budget - self.opt


class MarkContext:
    """
    One level of the kernel: a root decomposition of G - X - N, the non-K_t set N and the modulator X.
    """

    def __init__(self, dec, n_set, modulator, lam, solver, chunk_cap):
        self.dec = dec
        self.g = dec.graph
        self.t = dec.t
        self.n_set = frozenset(n_set)
        self.modulator = frozenset(modulator)
        self.lam = lam
        self.solver = solver
        self.c = capped_chunk_bound(lam, self.t, chunk_cap)
        self.memo = {}
        self.packings = []


@dataclass
class KernelResult:
    decision: object
    instance: object
    trace: list
    guarantee: str
    relabel: dict = field(default_factory=dict)

    def trace_frame(self):
        return pd.DataFrame(self.trace)


@dataclass
class BaseKernel:
    decision: object
    graph: object = None
    relabel: dict = field(default_factory=dict)
    budget: int = 0
    forced: list = field(default_factory=list)
    cores: list = field(default_factory=list)
    fresh: list = field(default_factory=list)
    hyperedges: int = 0


def chunks_of(g, t, modulator, size):
    for subset in subsets_by_size(modulator, size, min_size=1):
        if not has_t_clique(g, t, subset):
            yield frozenset(subset)


def chunks(inst, cap):
    """
    Nonempty K_t-free subsets of the modulator up to min(c(lam, t), cap) vertices, size then lex order.
    """
    if cap < 1:
        raise ValueError(f"Chunk cap must be positive, got {cap}.")
    return chunks_of(inst.graph, inst.t, inst.modulator, capped_chunk_bound(inst.lam, inst.t, cap))


class Kernelizer:
    """
    Polynomial kernel for K_t-subgraph hitting parameterized by a modulator to bounded bed+.
    """

    def __init__(self, chunk_cap=16, check_invariants=True, memoize=False):
        self.chunk_cap = chunk_cap
        self.check_invariants = check_invariants
        self.memoize = memoize
        self._solvers = {}
        self._conflicts = {}

    def solver_for(self, g, t):
        key = (id(g), t)
        if key not in self._solvers:
            self._solvers[key] = (g, EktSolver(g, t, memoize=self.memoize))
        return self._solvers[key][1]

    def context(self, dec, n_set, modulator, lam):
        return MarkContext(dec, n_set, modulator, lam, self.solver_for(dec.graph, dec.t), self.chunk_cap)

    def conflict(self, ctx, x_chunk, s2):
        key = (id(ctx.g), ctx.t, ctx.lam, x_chunk, frozenset(s2))
        if key not in self._conflicts:
            self._conflicts[key] = conflict_positive(ctx.g, x_chunk, s2, ctx.t, ctx.lam, ctx.solver)
        return self._conflicts[key]

    def candidate_parts(self, ctx, x_chunk, c, n_prime, m_prime):
        g, t = ctx.g, ctx.t
        root = [v for v in ctx.dec.root_vertices if v not in m_prime]
        free = sorted(ctx.n_set - n_prime)
        for v_set in subsets_by_size(root, t - 1 - len(m_prime), min_size=1):
            if not g.is_clique(tuple(m_prime) + v_set):
                continue
            for n_set in subsets_by_size(free, c):
                if has_t_clique(g, t, x_chunk | n_prime | set(n_set)):
                    continue
                yield Part(frozenset(v_set), frozenset(n_set))

    def is_part(self, ctx, x_chunk, n_prime, m_prime, part):
        s2 = set(m_prime) | set(ctx.dec.pending_of_set(part.v_set)) | set(n_prime) | set(part.n_set)
        return self.conflict(ctx, x_chunk, s2)

    def packing(self, ctx, x_chunk, c, n_prime, m_prime):
        limit = len(ctx.modulator) + 1
        used_v, used_n = set(), set()
        parts = []
        for part in self.candidate_parts(ctx, x_chunk, c, n_prime, m_prime):
            if used_v & part.v_set or used_n & part.n_set:
                continue
            if not self.is_part(ctx, x_chunk, n_prime, m_prime, part):
                continue
            parts.append(part)
            used_v |= part.v_set
            used_n |= part.n_set
            if len(parts) == limit:
                break
        return parts

    def mark(self, ctx, x_chunk, c, n_prime=frozenset(), m_prime=frozenset()):
        x_chunk, n_prime, m_prime = frozenset(x_chunk), frozenset(n_prime), frozenset(m_prime)
        if c == -1:
            return frozenset()
        if self.check_invariants:
            self._check_mark_input(ctx, x_chunk, c, n_prime, m_prime)
        key = (x_chunk, n_prime, m_prime, c)
        if key in ctx.memo:
            return ctx.memo[key]
        parts = self.packing(ctx, x_chunk, c, n_prime, m_prime)
        marked = {v for part in parts for v in part.v_set}
        if len(parts) == len(ctx.modulator) + 1:
            ctx.packings.append({"chunk": vertex_set(x_chunk), "m_prime": vertex_set(m_prime), "parts": parts})
        else:
            for extra in sorted({v for part in parts for v in part.n_set}):
                marked |= self.mark(ctx, x_chunk, c - 1, n_prime | {extra}, m_prime)
        ctx.memo[key] = frozenset(marked)
        return ctx.memo[key]

    def _check_mark_input(self, ctx, x_chunk, c, n_prime, m_prime):
        if not -1 <= c <= ctx.c:
            raise PreconditionViolated(f"c = {c} is outside [-1, {ctx.c}].")
        if not x_chunk <= ctx.modulator or not n_prime <= ctx.n_set:
            raise PreconditionViolated("chunk or N' outside of X or N")
        if len(n_prime) > ctx.c - c:
            raise PreconditionViolated(f"|N'| = {len(n_prime)} exceeds {ctx.c - c}.")
        if has_t_clique(ctx.g, ctx.t, x_chunk | n_prime):
            raise PreconditionViolated("X' | N' contains a t-clique")
        if len(m_prime) > ctx.t - 2 or not m_prime <= set(ctx.dec.root_vertices) or not ctx.g.is_clique(m_prime):
            raise PreconditionViolated(f"M' = {sorted(m_prime)} is not a small clique of root vertices.")

    def step1_mark(self, ctx):
        """
        Marking rounds l = 1..t-1, each over every chunk and every clique M' meeting all earlier rounds.
        """
        rounds = []
        marked = set()
        chunk_list = list(chunks_of(ctx.g, ctx.t, ctx.modulator, ctx.c))
        for _ in range(1, ctx.t):
            if rounds and not rounds[-1]:
                rounds.append(())
                continue
            candidates = [()] + [m for m in cliques_below(ctx.g, ctx.t - 1, marked) if all(set(m) & set(r) for r in rounds)]
            level = set()
            for x_chunk in chunk_list:
                for m_prime in candidates:
                    level |= self.mark(ctx, x_chunk, ctx.c, frozenset(), frozenset(m_prime))
            fresh = vertex_set(level - marked)
            rounds.append(fresh)
            marked.update(fresh)
        return MarkState(rounds, vertex_set(marked), ctx.packings)

    def step2_remove(self, ctx, marks):
        marked = set(marks.union)
        unmarked = [v for v in ctx.dec.root_vertices if v not in marked]
        if not unmarked:
            return None
        v = unmarked[0]
        removed = ctx.dec.pending_of(v)
        return Removal(v, removed, len(ctx.solver.solve(removed, (), ctx.lam, 0)))

    def kernelize(self, inst):
        g, t = inst.graph, inst.t
        solver = self.solver_for(g, t)
        alive = set(g.vertices)
        modulator = set(inst.modulator)
        k = inst.budget
        trace = []
        capped = False
        for lam in range(inst.lam, 0, -1):
            ctx_c = capped_chunk_bound(lam, t, self.chunk_cap + 1)
            capped = capped or ctx_c > self.chunk_cap
            rest = frozenset(alive - modulator)
            n_set = solver.search.non_kt(rest)
            host = rest - n_set
            promoted = ()
            if host:
                dec = compute_bed_root(g, t, lam, within=host, search=solver.search)
                original = dict(dec.pending)
                while True:
                    ctx = self.context(dec, n_set, modulator, lam)
                    removal = self.step2_remove(ctx, self.step1_mark(ctx))
                    if removal is None:
                        break
                    alive -= set(removal.removed)
                    k -= removal.opt
                    trace.append(
                        {"event": "remove", "lam": lam, "vertex": removal.vertex, "removed": list(removal.removed), "opt": removal.opt, "budget": k}
                    )
                    dec = dec.shrink(removal.vertex)
                    if self.check_invariants:
                        self._check_loop(g, t, dec, alive, modulator, n_set, original)
                    if k < 0:
                        trace.append({"event": "decide", "lam": lam, "decision": False, "budget": k})
                        return KernelResult(False, None, trace, self._guarantee(capped))
                promoted = dec.root_vertices
            modulator.update(promoted)
            if self.check_invariants and not solver.search.at_most(alive - modulator, lam - 1):
                raise InvariantBroken(f"bed+ of G' - X' exceeds {lam - 1}.")
            trace.append({"event": "level", "lam": lam, "promoted": list(promoted), "modulator": len(modulator), "budget": k})
        return self._finish(g, t, alive, modulator, k, trace, capped)

    def _finish(self, g, t, alive, modulator, k, trace, capped):
        guarantee = self._guarantee(capped)
        if k >= len(modulator):
            trace.append({"event": "decide", "lam": 0, "decision": True, "budget": k})
            return KernelResult(True, None, trace, guarantee)
        base = base_kernel(g, k, t, within=alive)
        for v, budget in base.forced:
            trace.append({"event": "force", "lam": 0, "vertex": v, "budget": budget})
        if base.decision is not None:
            trace.append({"event": "decide", "lam": 0, "decision": base.decision, "budget": base.budget})
            return KernelResult(base.decision, None, trace, guarantee)
        trace.append({"event": "kernel", "lam": 0, "kept": list(base.relabel), "cores": [list(c) for c in base.cores], "budget": base.budget})
        x = [base.relabel[v] for v in sorted(modulator) if v in base.relabel] + base.fresh
        output = ModulatorInstance(base.graph, x, base.budget, t, 0)
        return KernelResult(None, output, trace, guarantee, base.relabel)

    def _guarantee(self, capped):
        return "capped" if capped else "theoretical"

    def _check_loop(self, g, t, dec, alive, modulator, n_set, original):
        assert set(dec.host) == alive - modulator - n_set, "G' - X - N does not match the host"
        assert all(dec.pending[v] == original[v] for v in dec.pending), "pending components changed"
        assert set(dec.root_vertices) <= set(original), "root grew"
        ok, diagnostic = validate_root(g, t, dec.roots, dec.host)
        assert ok, diagnostic


def kernelize(inst, chunk_cap=16, check_invariants=True, memoize=False):
    return Kernelizer(chunk_cap, check_invariants, memoize).kernelize(inst)


def _sunflower(sets, petals):
    if len(sets) < petals:
        return None
    disjoint, used = [], set()
    for s in sorted(sets, key=sorted):
        if used.isdisjoint(s):
            disjoint.append(s)
            used |= s
    if len(disjoint) >= petals:
        return frozenset(), disjoint[:petals]
    for x in sorted(used):
        found = _sunflower([s - {x} for s in sets if x in s], petals)
        if found is not None:
            core, members = found
            return core | {x}, [m | {x} for m in members]
    return None


def find_sunflower(edges, petals):
    """
    A sunflower with the given number of petals among equal-size hyperedges, smallest size first.
    """
    for size in sorted({len(e) for e in edges}):
        found = _sunflower([e for e in edges if len(e) == size], petals)
        if found is not None:
            return found
    return None


def petal_graph(g, kept, cores, k, t):
    """
    G[kept] with every core completed to a t-clique by k+1 fresh disjoint petals.
    """
    graph, relabel = g.subgraph(kept)
    n = graph.n
    edges = list(graph.edges)
    fresh = []
    for core in cores:
        for _ in range(k + 1):
            petal = list(range(n, n + t - len(core)))
            n += len(petal)
            fresh += petal
            edges += combinations(petal, 2)
            edges += [(relabel[y], p) for y in core for p in petal]
    return Graph(n, edges), relabel, fresh


def base_kernel(g, k, t, within=None):
    """
    Solution-size kernel by the sunflower reduction on the t-clique hypergraph.
    """
    edges = {frozenset(c) for c in enumerate_t_cliques(g, t, within)}
    forced = []
    while True:
        if k < 0:
            return BaseKernel(False, budget=k, forced=forced)
        if not edges:
            return BaseKernel(True, budget=k, forced=forced)
        found = find_sunflower(edges, k + 1)
        if found is None:
            break
        core, _ = found
        if not core:
            return BaseKernel(False, budget=k, forced=forced)
        if len(core) == 1:
            (v,) = core
            k -= 1
            forced.append((v, k))
            edges = {e for e in edges if v not in e}
        else:
            edges = {e for e in edges if not core <= e} | {core}
    assert len(edges) <= t * math.factorial(t) * k**t, "sunflower fixpoint exceeds its size bound"
    kept = vertex_set(v for e in edges for v in e)
    cores = sorted((vertex_set(e) for e in edges if len(e) < t), key=lambda c: (len(c), c))
    graph, relabel, fresh = petal_graph(g, kept, cores, k, t)
    return BaseKernel(None, graph, relabel, k, forced, cores, fresh, len(edges))


def replay_trace(inst, result):
    """
    Re-apply a kernel trace to its input: the decision, or the output instance.
    """
    g, t = inst.graph, inst.t
    alive = set(g.vertices)
    modulator = set(inst.modulator)
    k = inst.budget
    for entry in result.trace:
        event = entry["event"]
        if event == "remove":
            removed = set(entry["removed"])
            if not removed <= alive - modulator:
                raise InvariantBroken(f"removal of {sorted(removed)} touches dead or modulator vertices")
            alive -= removed
            k -= entry["opt"]
        elif event == "level":
            modulator.update(entry["promoted"])
        elif event == "force":
            alive.discard(entry["vertex"])
            k -= 1
        elif event == "decide":
            return entry["decision"]
        elif event == "kernel":
            kept = entry["kept"]
            if not set(kept) <= alive:
                raise InvariantBroken("kernel keeps removed vertices")
            graph, relabel, fresh = petal_graph(g, kept, [tuple(c) for c in entry["cores"]], k, t)
            x = [relabel[v] for v in sorted(modulator) if v in relabel] + fresh
            return ModulatorInstance(graph, x, k, t, 0)
        if entry["budget"] != k:
            raise InvariantBroken(f"budget {entry['budget']} recorded, {k} replayed")
    raise InvariantBroken("trace does not end in a decision or a kernel")
