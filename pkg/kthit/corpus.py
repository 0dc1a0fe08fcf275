"""
Seeded random and exhaustive corpora. Every generator takes a numpy RandomState; nothing reads global random state.
"""
from itertools import combinations, permutations, product

import networkx as nx

from kthit.decomposition import bed_at_most
from kthit.graph import Graph, cliques_below
from kthit.kernel import ModulatorInstance
from kthit.reduction.cnf import CnfFormula
from kthit.solver import ExtendedInstance


def diamond():
    # K_4 minus the edge (0, 1).
    return Graph(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def disjoint_cliques(count, t):
    g = Graph(0)
    for _ in range(count):
        g = g.disjoint_union(Graph.complete(t))
    return g


def triangle_chain(ell):
    """
    Triangles x_i l_i r_i joined by edges r_i - l_{i+1}, with pendant edges u - l_1 and r_ell - w.
    Returns the graph and the tops x_1..x_ell.
    """
    u = 0
    w = 3 * ell + 1
    edges = []
    tops = []
    for i in range(ell):
        x, left, right = 1 + 3 * i, 2 + 3 * i, 3 + 3 * i
        tops.append(x)
        edges += [(x, left), (x, right), (left, right)]
        if i > 0:
            edges.append((right - 3, left))
    edges += [(u, 2), (3 * ell, w)]
    return Graph(3 * ell + 2, edges), tuple(tops)


def rooted_example():
    """
    Two components for t = 4. The first hangs K_4's off a path v1 v2 v3 v4 at v2 and v4,
    the second hangs K_4's off both ends of an edge u1 u2.
    """
    names = {"v1": 0, "v2": 1, "v3": 2, "v4": 3, "w1": 4, "w2": 5, "w3": 6, "u1": 10, "u2": 11}
    edges = [(0, 1), (1, 2), (2, 3), (10, 11)]
    for clique in ((1, 4, 5, 6), (3, 7, 8, 9), (10, 12, 13, 14), (11, 15, 16, 17)):
        edges += list(combinations(clique, 2))
    return Graph(18, edges), names


def random_graph(n, p, rng):
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if rng.rand() < p])


def connected_graphs(max_n, min_n=1):
    """
    All connected graphs with min_n..max_n vertices up to isomorphism (max_n <= 7).
    """
    if max_n > 7:
        raise ValueError(f"The graph atlas stops at 7 vertices, got {max_n}.")
    for graph in nx.graph_atlas_g():
        if min_n <= graph.number_of_nodes() <= max_n and nx.is_connected(graph):
            yield Graph.from_networkx(graph)


def random_graphs(count, max_n, rng, min_n=1, p_range=(0.3, 0.8)):
    for _ in range(count):
        n = rng.randint(min_n, max_n + 1)
        p = rng.uniform(*p_range)
        yield random_graph(n, p, rng)


def random_extended_instance(rng, max_n=9, max_family=4, t_choices=(3, 4)):
    t = int(rng.choice(t_choices))
    g = random_graph(rng.randint(1, max_n + 1), rng.uniform(0.3, 0.8), rng)
    ground = cliques_below(g, t)
    size = rng.randint(0, min(max_family, len(ground)) + 1)
    picks = rng.choice(len(ground), size=size, replace=False) if size else []
    return ExtendedInstance(g, tuple(ground[i] for i in sorted(picks)), t)


def random_modulator_instance(rng, max_n=12, max_x=5, t=3, lam=1, budget=None, attempts=1000):
    """
    Rejection-samples a graph and modulator with bed+(G - X) <= lam.
    """
    for _ in range(attempts):
        n = rng.randint(t, max_n + 1)
        g = random_graph(n, rng.uniform(0.2, 0.6), rng)
        size = rng.randint(0, min(max_x, n) + 1)
        modulator = sorted(int(v) for v in rng.choice(n, size=size, replace=False))
        rest = [v for v in g.vertices if v not in modulator]
        if bed_at_most(g, t, lam, within=rest):
            k = budget if budget is not None else int(rng.randint(0, n + 1))
            return ModulatorInstance(g, tuple(modulator), k, t, lam)
    raise RuntimeError(f"No instance with bed+ <= {lam} after {attempts} attempts.")


def _clause_options(num_vars, max_width):
    options = []
    for signs in product((0, 1, -1), repeat=num_vars):
        clause = tuple(sign * (i + 1) for i, sign in enumerate(signs) if sign)
        if 1 <= len(clause) <= max_width:
            options.append(clause)
    return options


def _canonical_cnf(clauses, num_vars):
    best = None
    for perm in permutations(range(1, num_vars + 1)):
        for flips in product((1, -1), repeat=num_vars):
            renamed = tuple(
                sorted(tuple(sorted(flips[abs(lit) - 1] * (perm[abs(lit) - 1] if lit > 0 else -perm[abs(lit) - 1]) for lit in c)) for c in clauses)
            )
            if best is None or renamed < best:
                best = renamed
    return best


def cnf_corpus(max_vars=3, max_clauses=3, max_width=3):
    """
    Formulas with distinct clauses, every variable occurring, deduplicated modulo renaming and polarity flips.
    """
    seen = set()
    formulas = []
    for num_vars in range(1, max_vars + 1):
        options = _clause_options(num_vars, max_width)
        for count in range(1, max_clauses + 1):
            for clauses in combinations(options, count):
                if {abs(lit) for c in clauses for lit in c} != set(range(1, num_vars + 1)):
                    continue
                key = (num_vars, _canonical_cnf(clauses, num_vars))
                if key not in seen:
                    seen.add(key)
                    formulas.append(CnfFormula(num_vars, key[1]))
    return formulas
