from dataclasses import dataclass, field

import networkx as nx

from kthit.errors import CapExceeded, ComponentMismatch, InvalidRoot, InvariantBroken, PreconditionViolated
from kthit.graph import biconnected_components, block_edges, components, enumerate_t_cliques, has_t_clique, members
from kthit.utils import vertex_set


def non_kt_vertices(g, t, within=None):
    """
    Vertices of the (induced) graph that lie in no t-clique.
    """
    vertices = set(members(g, within))
    for clique in enumerate_t_cliques(g, t, within):
        vertices.difference_update(clique)
    return vertex_set(vertices)


def is_root(g, t, root, component):
    """
    Check that root is a root of the connected vertex set component.
    Returns (ok, diagnostic) where diagnostic names the first violated clause.
    """
    root = set(root)
    if not root:
        return False, "root is empty"
    if not root.issubset(component):
        return False, "root leaves its component"
    if len(components(g, root)) != 1:
        return False, "root is not connected"
    if has_t_clique(g, t, root):
        return False, "root contains a t-clique"
    for rest in components(g, set(component) - root):
        attached = root.intersection(g.boundary(rest))
        if len(attached) != 1:
            return False, f"component {list(rest)} sees {len(attached)} root vertices"
    return True, ""


def validate_root(g, t, roots, within=None):
    """
    Check a root list against the connected components of the (induced) graph, one root per
    component. Raises ComponentMismatch when the roots do not align with the components.
    """
    comps = components(g, within)
    roots = [vertex_set(root) for root in roots]
    if len(roots) != len(comps):
        raise ComponentMismatch(f"{len(roots)} roots for {len(comps)} components.")
    owner = {v: i for i, comp in enumerate(comps) for v in comp}
    assigned = {}
    for root in roots:
        if not root:
            return False, "root is empty"
        if any(v not in owner for v in root):
            raise ComponentMismatch(f"Root {list(root)} is not inside the graph.")
        indices = {owner[v] for v in root}
        if len(indices) != 1 or indices.issubset(assigned):
            raise ComponentMismatch(f"Root {list(root)} does not match a single free component.")
        assigned[indices.pop()] = root
    for i, comp in enumerate(comps):
        ok, diagnostic = is_root(g, t, assigned[i], comp)
        if not ok:
            return False, f"component {i}: {diagnostic}"
    return True, ""


@dataclass(frozen=True)
class RootDecomposition:
    """
    A root per connected component of the host vertex set, with the pending component C(v)
    of every root vertex v.
    """

    graph: object
    t: int
    host: tuple
    roots: tuple
    pending: dict = field(repr=False)

    @property
    def root_vertices(self):
        return vertex_set(v for root in self.roots for v in root)

    def pending_of(self, v):
        return self.pending[v]

    def pending_of_set(self, vertices):
        return vertex_set(u for v in vertices for u in self.pending[v])

    def check(self):
        seen = []
        for v in self.root_vertices:
            seen.extend(self.pending[v])
        assert sorted(seen) == list(self.host), "pending components do not partition the host"
        for v in self.root_vertices:
            inner = set(self.pending[v]) - {v}
            assert set(self.graph.boundary(inner)) & set(self.host) <= {v}, f"C({v}) leaks outside of {v}"

    def shrink(self, v):
        """
        Remove C(v) from the host and v from its root, re-splitting that root per new component.
        """
        removed = set(self.pending[v])
        host = vertex_set(set(self.host) - removed)
        roots = []
        for root in self.roots:
            if v not in root:
                roots.append(root)
                continue
            rest = set(root) - {v}
            for comp in components(self.graph, host):
                piece = vertex_set(rest.intersection(comp))
                if piece:
                    roots.append(piece)
        roots = tuple(sorted(roots))
        pending = {u: c for u, c in self.pending.items() if u != v}
        decomposition = RootDecomposition(self.graph, self.t, host, roots, pending)
        decomposition.check()
        return decomposition


def pending_partition(g, t, n_set, roots, within=None):
    """
    Build the RootDecomposition of the host (the graph, or the induced subgraph on within,
    minus n_set) for the given roots. Raises InvalidRoot when the roots are not a root.
    """
    host = vertex_set(set(members(g, within)) - set(n_set))
    ok, diagnostic = validate_root(g, t, roots, host)
    if not ok:
        raise InvalidRoot(diagnostic)
    roots = tuple(sorted(vertex_set(root) for root in roots))
    pending = {v: {v} for root in roots for v in root}
    root_vertices = set(pending)
    for rest in components(g, set(host) - root_vertices):
        (v,) = root_vertices.intersection(g.boundary(rest))
        pending[v].update(rest)
    pending = {v: vertex_set(c) for v, c in pending.items()}
    decomposition = RootDecomposition(g, t, host, roots, pending)
    decomposition.check()
    return decomposition


def root_candidates(g, t, within=None):
    """
    Components of the union of the K_t-free biconnected blocks.
    """
    blocks, _ = biconnected_components(g, within)
    free = nx.Graph()
    for block in blocks:
        if not has_t_clique(g, t, block):
            free.add_edges_from(block_edges(g, block))
    return sorted(vertex_set(c) for c in nx.connected_components(free))


class BedSearch:
    """
    Memoised bed+ decisions on induced subgraphs of a single graph.
    """

    def __init__(self, g, t):
        if t < 3:
            raise ValueError(f"t must be at least 3, got {t}.")
        self.g = g
        self.t = t
        self._memo = {}
        self._non_kt = {}

    def non_kt(self, vertices):
        if vertices not in self._non_kt:
            self._non_kt[vertices] = frozenset(non_kt_vertices(self.g, self.t, vertices))
        return self._non_kt[vertices]

    def at_most(self, vertices, lam):
        vertices = frozenset(vertices)
        key = (vertices, lam)
        if key not in self._memo:
            self._memo[key] = self._decide(vertices, lam)
        return self._memo[key]

    def _decide(self, vertices, lam):
        if not vertices:
            return True
        if lam == 0:
            return not has_t_clique(self.g, self.t, vertices)
        removable = self.non_kt(vertices)
        if removable:
            return self.at_most(vertices - removable, lam)
        comps = components(self.g, vertices)
        if len(comps) > 1:
            return all(self.at_most(comp, lam) for comp in comps)
        if any(self.at_most(vertices - {v}, lam - 1) for v in sorted(vertices)):
            return True
        return any(self.at_most(vertices - set(root), lam - 1) for root in root_candidates(self.g, self.t, vertices))

    def exact(self, vertices, cap):
        for lam in range(cap + 1):
            if self.at_most(vertices, lam):
                return lam
        raise CapExceeded(f"bed+ exceeds {cap}.")

    def connected_root(self, vertices, lam):
        """
        A root of a connected vertex set with no non-K_t vertices whose removal leaves bed+ <= lam - 1.
        Single vertices are tried first in id order, then the root candidates.
        """
        vertices = frozenset(vertices)
        for v in sorted(vertices):
            if self.at_most(vertices - {v}, lam - 1):
                return (v,)
        for root in root_candidates(self.g, self.t, vertices):
            if self.at_most(vertices - set(root), lam - 1):
                return root
        return None

    def explain(self, vertices, lam):
        """
        Trace node for a vertex set of exact bed+ value lam.
        """
        vertices = frozenset(vertices)
        node = {"vertices": vertex_set(vertices), "value": lam}
        if not vertices:
            node.update(case="empty", removed=[], children=[])
            return node
        removable = self.non_kt(vertices)
        if removable:
            node.update(case="non_kt", removed=vertex_set(removable), children=[self.explain(vertices - removable, lam)])
            return node
        comps = components(self.g, vertices)
        if len(comps) > 1:
            children = [self.explain(comp, self.exact(comp, lam)) for comp in comps]
            node.update(case="components", removed=[], children=children)
            return node
        root = self.connected_root(vertices, lam)
        assert root is not None, "no root decreases bed+"
        node.update(case="root", removed=list(root), children=[self.explain(vertices - set(root), lam - 1)])
        return node


def bed_at_most(g, t, lam, within=None):
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}.")
    return BedSearch(g, t).at_most(members(g, within), lam)


@dataclass(frozen=True)
class BedResult:
    value: int
    trace: dict


def bed_value(g, t, lambda_cap, within=None):
    """
    Smallest lambda with bed+ <= lambda, found by linear scan up to lambda_cap.
    """
    search = BedSearch(g, t)
    vertices = frozenset(members(g, within))
    value = search.exact(vertices, lambda_cap)
    return BedResult(value, search.explain(vertices, value))


def replay_bed_trace(g, t, trace):
    """
    Recompute the value a bed+ trace claims, checking every step against the graph.
    """
    vertices = set(trace["vertices"])
    case = trace["case"]
    children = trace["children"]
    if case == "empty":
        if vertices:
            raise InvariantBroken("empty case on a nonempty vertex set")
        return 0
    if case == "non_kt":
        removed = set(trace["removed"])
        if not removed or removed != set(non_kt_vertices(g, t, vertices)):
            raise InvariantBroken(f"{sorted(removed)} is not the non-K_t set")
        if set(children[0]["vertices"]) != vertices - removed:
            raise InvariantBroken("non_kt child does not match")
        return replay_bed_trace(g, t, children[0])
    if case == "components":
        comps = components(g, vertices)
        if len(comps) < 2 or sorted(tuple(child["vertices"]) for child in children) != comps:
            raise InvariantBroken("components case does not match")
        return max(replay_bed_trace(g, t, child) for child in children)
    if case == "root":
        removed = set(trace["removed"])
        ok, diagnostic = is_root(g, t, removed, vertices)
        if not ok or non_kt_vertices(g, t, vertices) or len(components(g, vertices)) != 1:
            raise InvariantBroken(f"bad root step: {diagnostic}")
        if set(children[0]["vertices"]) != vertices - removed:
            raise InvariantBroken("root child does not match")
        return 1 + replay_bed_trace(g, t, children[0])
    raise InvariantBroken(f"unknown case {case!r}")


def compute_bed_root(g, t, lam, within=None, search=None):
    """
    A bed+-root of the (induced) graph: one root per connected component, each decreasing
    the bed+ value of its component by one.
    """
    search = search or BedSearch(g, t)
    vertices = frozenset(members(g, within))
    if search.non_kt(vertices):
        raise PreconditionViolated("graph has non-K_t vertices")
    if not search.at_most(vertices, lam):
        raise PreconditionViolated(f"bed+ exceeds {lam}")
    if search.at_most(vertices, 0):
        raise PreconditionViolated("bed+ is zero")
    roots = []
    for comp in components(g, vertices):
        exact = search.exact(comp, lam)
        root = search.connected_root(comp, exact)
        assert root is not None, f"no bed+-root in component {list(comp)}"
        roots.append(root)
    return pending_partition(g, t, (), roots, vertices)
