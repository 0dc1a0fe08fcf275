from functools import lru_cache
from itertools import combinations

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from kthit.errors import CapExceeded, GraphError
from kthit.utils import vertex_set


class Graph:
    """
    Undirected simple graph on the vertices 0..n-1.
    """

    def __init__(self, num_vertices, edges=()):
        if num_vertices < 0:
            raise GraphError(f"Negative number of vertices: {num_vertices}.")
        adjacency = [set() for _ in range(num_vertices)]
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise GraphError(f"Edge ({u}, {v}) is out of range for {num_vertices} vertices.")
            if u == v:
                raise GraphError(f"Self-loop at vertex {u}.")
            if v in adjacency[u]:
                raise GraphError(f"Duplicate edge ({u}, {v}).")
            adjacency[u].add(v)
            adjacency[v].add(u)
        self._adjacency = tuple(frozenset(s) for s in adjacency)
        self._neighbors = tuple(tuple(sorted(s)) for s in adjacency)
        self._nx = None

    @classmethod
    def complete(cls, n):
        return cls(n, combinations(range(n), 2))

    @classmethod
    def path(cls, n):
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n):
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def from_networkx(cls, graph):
        relabel = {v: i for i, v in enumerate(sorted(graph.nodes))}
        return cls(len(relabel), [(relabel[u], relabel[v]) for u, v in graph.edges])

    @property
    def n(self):
        return len(self._adjacency)

    @property
    def vertices(self):
        return range(self.n)

    @property
    def edges(self):
        return [(u, v) for u in range(self.n) for v in self._neighbors[u] if u < v]

    @property
    def num_edges(self):
        return sum(len(s) for s in self._adjacency) // 2

    def neighbors(self, v):
        return self._neighbors[v]

    def adjacency(self, v):
        return self._adjacency[v]

    def has_edge(self, u, v):
        return v in self._adjacency[u]

    def degree(self, v):
        return len(self._adjacency[v])

    def is_clique(self, vertices):
        return all(self.has_edge(u, v) for u, v in combinations(list(vertices), 2))

    def boundary(self, vertices):
        vertices = set(vertices)
        return vertex_set(u for v in vertices for u in self._adjacency[v] if u not in vertices)

    def subgraph(self, vertices):
        """
        Induced subgraph on the given vertices, relabelled to 0..k-1 in increasing order.
        Returns the subgraph and the old -> new relabel map.
        """
        order = vertex_set(vertices)
        relabel = {v: i for i, v in enumerate(order)}
        edges = [(relabel[u], relabel[v]) for u in order for v in self._neighbors[u] if u < v and v in relabel]
        return Graph(len(order), edges), relabel

    def remove(self, vertices):
        vertices = set(vertices)
        return self.subgraph(v for v in range(self.n) if v not in vertices)

    def add_edges(self, edges):
        merged = set(self.edges)
        merged.update((min(u, v), max(u, v)) for u, v in edges)
        return Graph(self.n, sorted(merged))

    def disjoint_union(self, other):
        shift = self.n
        return Graph(self.n + other.n, self.edges + [(u + shift, v + shift) for u, v in other.edges])

    def to_networkx(self):
        if self._nx is None:
            graph = nx.Graph()
            graph.add_nodes_from(range(self.n))
            graph.add_edges_from(self.edges)
            self._nx = graph
        return self._nx

    def __eq__(self, other):
        return isinstance(other, Graph) and self._neighbors == other._neighbors

    def __hash__(self):
        return hash(self._neighbors)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


def members(g, within=None):
    return range(g.n) if within is None else vertex_set(within)


def _cliques(g, size, within=None):
    def extend(clique, candidates):
        if len(clique) == size:
            yield tuple(clique)
            return
        for i, v in enumerate(candidates):
            if len(clique) + len(candidates) - i < size:
                return
            yield from extend(clique + [v], [u for u in candidates[i + 1 :] if g.has_edge(v, u)])

    yield from extend([], list(members(g, within)))


def enumerate_t_cliques(g, t, within=None):
    if t < 2:
        raise ValueError(f"t must be at least 2, got {t}.")
    return list(_cliques(g, t, within))


def has_t_clique(g, t, within=None):
    return next(_cliques(g, t, within), None) is not None


def cliques_below(g, t, within=None):
    """
    All cliques with 1 to t-1 vertices, by size then lexicographically.
    """
    return [clique for size in range(1, t) for clique in _cliques(g, size, within)]


def components(g, within=None):
    graph = g.to_networkx() if within is None else g.to_networkx().subgraph(vertex_set(within))
    return sorted(vertex_set(c) for c in nx.connected_components(graph))


def biconnected_components(g, within=None):
    graph = g.to_networkx() if within is None else g.to_networkx().subgraph(vertex_set(within))
    blocks = sorted(vertex_set(b) for b in nx.biconnected_components(graph))
    cuts = vertex_set(nx.articulation_points(graph))
    return blocks, cuts


def block_edges(g, block):
    block = set(block)
    return [(u, v) for u, v in g.edges if u in block and v in block]


def _matcher_iter(h, g, induced, within):
    host = g.to_networkx() if within is None else g.to_networkx().subgraph(vertex_set(within))
    matcher = GraphMatcher(host, h.to_networkx())
    return matcher.subgraph_isomorphisms_iter() if induced else matcher.subgraph_monomorphisms_iter()


def occurrences_of(h, g, induced=False, cap=10):
    """
    Whether g contains h as a subgraph (or induced subgraph), with one witness map h -> g.
    """
    if h.n > cap:
        raise CapExceeded(f"Pattern has {h.n} vertices, cap is {cap}.")
    if h.n > g.n:
        return False, None
    mapping = next(_matcher_iter(h, g, induced, None), None)
    if mapping is None:
        return False, None
    return True, {hv: gv for gv, hv in sorted(mapping.items(), key=lambda item: item[1])}


def pattern_copies(h, g, induced=False, within=None, cap=10):
    """
    Vertex sets of all copies of h in g, sorted.
    """
    if h.n > cap:
        raise CapExceeded(f"Pattern has {h.n} vertices, cap is {cap}.")
    return sorted({vertex_set(mapping) for mapping in _matcher_iter(h, g, induced, within)})


def treedepth_exact(g, within=None, cap=16):
    """
    Exact treedepth with a witness elimination forest (vertex -> parent, roots map to None).
    The cap bounds the size of each connected component.
    """
    depth = 0
    parent = {}
    for comp in components(g, within):
        if len(comp) > cap:
            raise CapExceeded(f"Component with {len(comp)} vertices, cap is {cap}.")
        comp_depth, comp_parent = _component_treedepth(g, comp)
        depth = max(depth, comp_depth)
        parent.update(comp_parent)
    return depth, parent


def _component_treedepth(g, comp):
    index = {v: i for i, v in enumerate(comp)}
    masks = [sum(1 << index[u] for u in g.neighbors(v) if u in index) for v in comp]

    def split(mask):
        parts = []
        while mask:
            part = frontier = mask & -mask
            while frontier:
                i = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                new = masks[i] & mask & ~part
                part |= new
                frontier |= new
            parts.append(part)
            mask &= ~part
        return parts

    def bits(mask):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    @lru_cache(maxsize=None)
    def td(mask):
        if mask == 0:
            return 0
        if mask & (mask - 1) == 0:
            return 1
        parts = split(mask)
        if len(parts) > 1:
            return max(td(p) for p in parts)
        return 1 + min(td(mask & ~(1 << i)) for i in bits(mask))

    parent = {}

    def build(mask, root):
        for part in split(mask):
            target = td(part)
            for i in bits(part):
                if 1 + td(part & ~(1 << i)) == target:
                    break
            parent[comp[i]] = root
            build(part & ~(1 << i), comp[i])

    full = (1 << len(comp)) - 1
    build(full, None)
    return td(full), parent


def forest_depth(parent):
    depth = {}

    def walk(v):
        if v not in depth:
            depth[v] = 1 if parent[v] is None else 1 + walk(parent[v])
        return depth[v]

    return max((walk(v) for v in parent), default=0)


def is_elimination_forest(g, parent, within=None):
    if set(parent) != set(members(g, within)):
        return False

    def ancestors(v):
        seen = set()
        while v is not None:
            seen.add(v)
            v = parent[v]
        return seen

    for u, v in g.edges:
        if u in parent and v in parent and u not in ancestors(v) and v not in ancestors(u):
            return False
    return True
