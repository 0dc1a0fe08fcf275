from dataclasses import dataclass

from kthit.decomposition import BedSearch, compute_bed_root
from kthit.errors import GraphError, PreconditionViolated
from kthit.graph import components, enumerate_t_cliques, has_t_clique
from kthit.utils import canonical_family, restrict_family, subsets_by_size, vertex_set


@dataclass(frozen=True)
class ExtendedInstance:
    """
    A graph with a family of annotated cliques, each of size 1 to t-1, that must also be hit.
    """

    graph: object
    family: tuple
    t: int

    def __post_init__(self):
        if self.t < 3:
            raise GraphError(f"t must be at least 3, got {self.t}.")
        family = canonical_family(self.family)
        for member in family:
            if not 1 <= len(member) <= self.t - 1:
                raise GraphError(f"Family member {list(member)} must have 1 to {self.t - 1} vertices.")
            if any(not 0 <= v < self.graph.n for v in member):
                raise GraphError(f"Family member {list(member)} is out of range.")
            if not self.graph.is_clique(member):
                raise GraphError(f"Family member {list(member)} is not a clique.")
        object.__setattr__(self, "family", family)


@dataclass(frozen=True)
class SolveBudget:
    lam: int
    kappa: int

    def __post_init__(self):
        if self.lam < 0 or self.kappa < 0:
            raise ValueError(f"Budget must be nonnegative, got lambda={self.lam}, kappa={self.kappa}.")


def project(g, a, b, t):
    """
    Traces on b of the t-cliques of g[a | b] that meet both a and b.
    """
    a, b = set(a), set(b)
    if a & b:
        raise ValueError("Projection sides must be disjoint.")
    traces = []
    for clique in enumerate_t_cliques(g, t, a | b):
        if a.intersection(clique) and b.intersection(clique):
            traces.append([v for v in clique if v in b])
    return canonical_family(traces)


def min_hitting_set(sets, budget):
    """
    Smallest set hitting every given set, if one of size at most budget exists.
    """

    def branch(sets, size):
        if not sets:
            return frozenset()
        if size == 0:
            return None
        for v in sets[0]:
            found = branch([z for z in sets if v not in z], size - 1)
            if found is not None:
                return found | {v}
        return None

    for size in range(budget + 1):
        found = branch(list(sets), size)
        if found is not None:
            return found
    return None


class EktSolver:
    """
    Extended K_t-Subgraph Hitting on induced subgraphs of one graph with bounded bed+.
    The result is always a solution; it is optimal when bed+ <= lam and the family
    raises the optimum by at most kappa.
    """

    def __init__(self, g, t, memoize=False, search=None):
        self.g = g
        self.t = t
        self.memoize = memoize
        self.search = search or BedSearch(g, t)
        self.calls = 0
        self._memo = {}

    def solve(self, vertices, family, lam, kappa):
        vertices = frozenset(vertices)
        if not self.search.at_most(vertices, lam):
            return vertices
        return self._call(vertices, family, lam, kappa)

    def _call(self, vertices, family, lam, kappa):
        vertices = frozenset(vertices)
        family = canonical_family(family)
        if not self.memoize:
            return self._solve(vertices, family, lam, kappa)
        key = (vertices, family, lam, kappa)
        if key not in self._memo:
            self._memo[key] = self._solve(vertices, family, lam, kappa)
        return self._memo[key]

    def _solve(self, vertices, family, lam, kappa):
        self.calls += 1
        if not vertices:
            return frozenset()
        if lam == 0:
            return self._search_tree(vertices, family, kappa)
        comps = components(self.g, vertices)
        if len(comps) > 1:
            solution = set()
            for comp in comps:
                solution |= self._call(comp, restrict_family(family, comp), lam, kappa)
            return frozenset(solution)
        z = self.search.non_kt(vertices)
        if z:
            return self._guess_non_kt(vertices, family, lam, kappa, z)
        return self._root_step(vertices, family, lam, kappa)

    def _search_tree(self, vertices, family, kappa):
        if has_t_clique(self.g, self.t, vertices):
            return vertices
        if not family:
            return frozenset()
        if kappa == 0:
            return vertices
        best = None
        for v in family[0]:
            rest = vertices - {v}
            candidate = {v} | self._call(rest, restrict_family(family, rest), 0, kappa - 1)
            if best is None or len(candidate) < len(best):
                best = candidate
        return frozenset(best)

    def _guess_non_kt(self, vertices, family, lam, kappa, z):
        best = None
        for guess in subsets_by_size(z, kappa):
            guess = set(guess)
            projected = [[v for v in member if v not in z] for member in family if not guess.intersection(member)]
            if any(not member for member in projected):
                continue
            candidate = guess | self._call(vertices - z, projected, lam, kappa - len(guess))
            if best is None or len(candidate) < len(best):
                best = candidate
        return vertices if best is None else frozenset(best)

    def _root_step(self, vertices, family, lam, kappa):
        try:
            decomposition = compute_bed_root(self.g, self.t, lam, within=vertices, search=self.search)
        except PreconditionViolated:
            return vertices
        root = decomposition.root_vertices
        solution = set()
        forced = set()
        for v in root:
            comp = frozenset(decomposition.pending_of(v))
            inner = comp - {v}
            inside = restrict_family(family, comp)
            plus = {v} | self._call(inner, restrict_family(inside, inner), lam - 1, kappa)
            annotations = [[u for u in member if u != v] for member in inside]
            annotations += [[u for u in clique if u != v] for clique in enumerate_t_cliques(self.g, self.t, comp) if v in clique]
            if any(not member for member in annotations):
                minus = inner
            else:
                minus = self._call(inner, annotations, lam - 1, kappa + 1)
            if len(plus) <= len(minus):
                solution |= plus
                forced.add(v)
            else:
                solution |= minus
        leftover = [member for member in restrict_family(family, root) if not solution.intersection(member)]
        extra = min_hitting_set(leftover, kappa)
        if extra is None:
            return vertices
        return frozenset(solution | extra)


def solve_ekt(inst, budget, memoize=False):
    solver = EktSolver(inst.graph, inst.t, memoize=memoize)
    return vertex_set(solver.solve(inst.graph.vertices, inst.family, budget.lam, budget.kappa))


def opt_and_clean(inst, lam, solver=None):
    """
    opt(G) and whether the family leaves the optimum unchanged.
    """
    solver = solver or EktSolver(inst.graph, inst.t)
    vertices = inst.graph.vertices
    opt_g = len(solver.solve(vertices, (), lam, 0))
    return opt_g, len(solver.solve(vertices, inst.family, lam, 0)) == opt_g


def conflict_positive(g, s1, s2, t, lam, solver=None):
    """
    Whether forcing s2 to hit the traces of the t-cliques crossing from s1 raises opt(G[s2]).
    """
    if set(s1) & set(s2):
        raise ValueError("Conflict sides must be disjoint.")
    if has_t_clique(g, t, s1):
        raise PreconditionViolated(f"{list(vertex_set(s1))} contains a t-clique.")
    traces = project(g, s1, s2, t)
    if not traces:
        return False
    solver = solver or EktSolver(g, t)
    base = len(solver.solve(s2, (), lam, 0))
    return len(solver.solve(s2, traces, lam, 1)) > base
