from dataclasses import dataclass, field
from itertools import combinations, product

import networkx as nx

from kthit.errors import CapExceeded, IsClique, PreconditionViolated
from kthit.graph import Graph
from kthit.utils import vertex_set


class GraphBuilder:
    """
    Incrementally assembles a graph from tagged copies of a pattern.
    """

    def __init__(self):
        self.n = 0
        self.edges = set()
        self.role_tags = {}
        self.copies = {}

    def add_vertices(self, count, tag):
        vertices = list(range(self.n, self.n + count))
        self.n += count
        for v in vertices:
            self.role_tags[v] = tag
        return vertices

    def add_edge(self, u, v):
        self.edges.add((min(u, v), max(u, v)))

    def add_pattern(self, h, vertices, mapping):
        # mapping: pattern vertex -> position in vertices
        for x, y in h.edges:
            if x in mapping and y in mapping:
                self.add_edge(vertices[mapping[x]], vertices[mapping[y]])

    def add_copy(self, h, tag, fixed=None, copy_tag=None):
        """
        Add a copy of h. Pattern vertices in fixed reuse existing graph vertices; the rest are new.
        Returns the pattern vertex -> graph vertex map.
        """
        fixed = dict(fixed or {})
        missing = [x for x in h.vertices if x not in fixed]
        for x, v in zip(missing, self.add_vertices(len(missing), tag)):
            fixed[x] = v
        for x, y in h.edges:
            self.add_edge(fixed[x], fixed[y])
        self.copies.setdefault(copy_tag or tag, []).append(tuple(fixed[x] for x in h.vertices))
        return fixed

    def build(self):
        return Graph(self.n, sorted(self.edges))


def non_adjacent_pair(h):
    for u, v in combinations(h.vertices, 2):
        if not h.has_edge(u, v):
            return u, v
    raise IsClique(f"{h!r} is a clique.")


def find_anticomplete_pair(h, cap=12):
    """
    Disjoint nonempty anticomplete sets A, B with |A| >= |B| and |A| + |B| maximum, lex-least.
    """
    if h.n > cap:
        raise CapExceeded(f"Pattern has {h.n} vertices, cap is {cap}.")
    if h.is_clique(h.vertices):
        raise IsClique(f"{h!r} is a clique.")
    best = None
    for labels in product((0, 1, 2), repeat=h.n):
        a_set = tuple(v for v in h.vertices if labels[v] == 1)
        b_set = tuple(v for v in h.vertices if labels[v] == 2)
        if not b_set or len(a_set) < len(b_set):
            continue
        if any(h.has_edge(u, v) for u in a_set for v in b_set):
            continue
        key = (-(len(a_set) + len(b_set)), a_set, b_set)
        if best is None or key < best:
            best = key
    return best[1], best[2]


def has_stable_cutset(h, cap=12):
    """
    Whether removing some independent set (possibly empty) disconnects h.
    """
    if h.n > cap:
        raise CapExceeded(f"Pattern has {h.n} vertices, cap is {cap}.")
    graph = h.to_networkx()
    for size in range(0, h.n - 1):
        for cut in combinations(h.vertices, size):
            if any(h.has_edge(u, v) for u, v in combinations(cut, 2)):
                continue
            rest = graph.subgraph(v for v in h.vertices if v not in cut)
            if not nx.is_connected(rest):
                return True
    return False


@dataclass
class ABGadget:
    attachments: list
    a_vertices: list
    b_vertices: list
    copies: list = field(default_factory=list)
    graph: object = None


def add_ab_gadget(builder, h, a_set, b_set, s=None, t_vertex=None, tag="gadget-copy"):
    """
    2a copies of h glued in a circle (s of each copy is t of the next). Odd attachments y1, y3, ...
    carry H[A]; the lex-least b of the even attachments carry H[B].
    """
    a_set, b_set = vertex_set(a_set), vertex_set(b_set)
    if not a_set or not b_set or set(a_set) & set(b_set):
        raise PreconditionViolated("A and B must be disjoint and nonempty.")
    if any(h.has_edge(u, v) for u in a_set for v in b_set):
        raise PreconditionViolated("A and B are not anticomplete.")
    if len(b_set) > len(a_set):
        a_set, b_set = b_set, a_set
    if s is None or t_vertex is None:
        s, t_vertex = non_adjacent_pair(h)
    if s == t_vertex:
        raise PreconditionViolated("s and t must be distinct.")
    a = len(a_set)
    attachments = builder.add_vertices(2 * a, "gadget-attachment")
    copies = []
    for c in range(2 * a):
        fixed = {s: attachments[c], t_vertex: attachments[c - 1]}
        copies.append(builder.add_copy(h, tag, fixed))
    a_vertices = attachments[0::2]
    b_vertices = attachments[1::2]
    builder.add_pattern(h, a_vertices, {x: i for i, x in enumerate(a_set)})
    builder.add_pattern(h, b_vertices, {x: i for i, x in enumerate(b_set)})
    return ABGadget(attachments, a_vertices, b_vertices, copies)


def build_ab_gadget(h, a_set, b_set, s=None, t_vertex=None):
    builder = GraphBuilder()
    gadget = add_ab_gadget(builder, h, a_set, b_set, s, t_vertex)
    gadget.graph = builder.build()
    return gadget
