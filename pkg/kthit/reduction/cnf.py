from dataclasses import dataclass, field
from itertools import product

import networkx as nx

from kthit.errors import FormulaError, PreconditionViolated
from kthit.reduction.gadget import GraphBuilder, add_ab_gadget, find_anticomplete_pair, has_stable_cutset, non_adjacent_pair
from kthit.utils import vertex_set

# Pattern vertices whose variable-copy images encode a true / false assignment.
Z_PLUS, Z_MINUS = 0, 1

H_COPY_TAGS = ("variable-copy", "clause-copy", "gadget-copy", "transversal")


@dataclass(frozen=True)
class CnfFormula:
    """
    CNF over the variables 1..num_vars; a literal is a signed variable index.
    """

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        if self.num_vars < 0:
            raise FormulaError(f"Negative number of variables: {self.num_vars}.")
        clauses = tuple(tuple(int(lit) for lit in clause) for clause in self.clauses)
        for j, clause in enumerate(clauses):
            if not clause:
                raise FormulaError(f"Clause {j} is empty.")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise FormulaError(f"Literal {lit} in clause {j} is out of range for {self.num_vars} variables.")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self):
        return len(self.clauses)

    def evaluate(self, assignment):
        # assignment[i - 1] is the value of variable i
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause) for clause in self.clauses)

    def satisfied_literal(self, clause, assignment):
        for i, lit in enumerate(clause):
            if (lit > 0) == bool(assignment[abs(lit) - 1]):
                return i
        return None


def satisfiable(phi):
    """
    First satisfying assignment in lexicographic order, or None.
    """
    for assignment in product((False, True), repeat=phi.num_vars):
        if phi.evaluate(assignment):
            return assignment
    return None


@dataclass
class ReductionOutput:
    graph: object
    modulator: tuple
    budget: int
    role_tags: dict
    h: object
    copies: dict = field(default_factory=dict)
    variant: str = "ved"
    # (z+ image, z- image) per variable
    literals: list = field(default_factory=list)
    # per clause, the (left, right) vertex sets of each clause-copy or gadget in chain order
    links: list = field(default_factory=list)

    def tagged_copies(self, tag):
        return self.copies.get(tag, [])

    def disjoint_copies(self):
        """
        Greedy disjoint selection among the variable, clause and gadget copies, in construction order.
        """
        used = set()
        chosen = []
        for tag in ("variable-copy", "clause-copy", "gadget-copy"):
            for copy in self.tagged_copies(tag):
                if used.isdisjoint(copy):
                    used.update(copy)
                    chosen.append(copy)
        return chosen

    def audit(self):
        """
        Check that every tagged copy is an occurrence of h and that the counts match the budget.
        """
        for tag in H_COPY_TAGS:
            for copy in self.tagged_copies(tag):
                for x, y in self.h.edges:
                    if not self.graph.has_edge(copy[x], copy[y]):
                        raise PreconditionViolated(f"A {tag} misses the edge ({copy[x]}, {copy[y]}).")
        if len(self.modulator) != self.h.n * len(self.literals):
            raise PreconditionViolated(f"Modulator has {len(self.modulator)} vertices.")
        if len(self.disjoint_copies()) != self.budget:
            raise PreconditionViolated(f"{len(self.disjoint_copies())} disjoint copies for budget {self.budget}.")
        return True

    def witness_solution(self, phi, assignment):
        """
        The solution of size budget built from a satisfying assignment.
        """
        if not phi.evaluate(assignment):
            raise PreconditionViolated("Assignment does not satisfy the formula.")
        solution = [plus if assignment[i] else minus for i, (plus, minus) in enumerate(self.literals)]
        for clause, chain in zip(phi.clauses, self.links):
            chosen = phi.satisfied_literal(clause, assignment)
            for i, (left, right) in enumerate(chain):
                solution.extend(right if i < chosen else left)
        return vertex_set(solution)

    def to_dict(self):
        return {
            "variant": self.variant,
            "modulator": list(self.modulator),
            "budget": self.budget,
            "role_tags": {str(v): tag for v, tag in sorted(self.role_tags.items())},
        }


def _variable_copies(builder, phi, h):
    literals = []
    for _ in range(phi.num_vars):
        image = builder.add_copy(h, "variable-copy")
        literals.append((image[Z_PLUS], image[Z_MINUS]))
    return literals


def _literal_vertex(literals, lit):
    plus, minus = literals[abs(lit) - 1]
    return plus if lit > 0 else minus


def _output(builder, phi, h, budget, literals, links, variant):
    modulator = vertex_set(v for v, tag in builder.role_tags.items() if tag == "variable-copy")
    return ReductionOutput(
        graph=builder.build(),
        modulator=modulator,
        budget=budget,
        role_tags=dict(builder.role_tags),
        h=h,
        copies={tag: list(copies) for tag, copies in builder.copies.items()},
        variant=variant,
        literals=literals,
        links=links,
    )


def reduce_cnf_ved(phi, h):
    """
    CNF-SAT to H-hitting with a modulator X to ved+ at most 1. phi is satisfiable iff
    some solution has at most n - m + sum of clause lengths vertices.
    """
    if h.n < 3 or not nx.is_biconnected(h.to_networkx()):
        raise PreconditionViolated(f"{h!r} is not biconnected.")
    if h.is_clique(h.vertices):
        raise PreconditionViolated(f"{h!r} is a clique.")
    u, v = non_adjacent_pair(h)
    w = min(x for x in h.vertices if x not in (u, v))
    rest = [x for x in h.vertices if x not in (u, v, w)]
    assert rest, "H - {u, v, w} is empty"
    h_prime, relabel = h.subgraph(rest)

    builder = GraphBuilder()
    literals = _variable_copies(builder, phi, h)
    links = []
    for clause in phi.clauses:
        copies = [builder.add_copy(h, "clause-copy") for _ in range(len(clause) - 1)]
        first = builder.add_vertices(1, "clause-endpoint")[0]
        last = builder.add_vertices(1, "clause-endpoint")[0]
        us = [first] + [image[u] for image in copies]
        vs = [image[v] for image in copies] + [last]
        for i, lit in enumerate(clause):
            f_image = builder.add_copy(h_prime, "h-prime-copy")
            fixed = {x: f_image[relabel[x]] for x in rest}
            fixed.update({w: _literal_vertex(literals, lit), u: us[i], v: vs[i]})
            builder.add_copy(h, "transversal", fixed)
        links.append([((image[u],), (image[v],)) for image in copies])
    budget = phi.num_vars - phi.num_clauses + sum(len(clause) for clause in phi.clauses)
    return _output(builder, phi, h, budget, literals, links, "ved")


def reduce_cnf_td(phi, h, cap=12):
    """
    CNF-SAT to H-hitting with a modulator X to treedepth O(|V(h)|), for h without a stable cutset.
    phi is satisfiable iff some solution has at most n + a * sum(c_j - 1) vertices.
    """
    if h.is_clique(h.vertices):
        raise PreconditionViolated(f"{h!r} is a clique.")
    if has_stable_cutset(h, cap):
        raise PreconditionViolated(f"{h!r} has a stable cutset.")
    a_set, b_set = find_anticomplete_pair(h, cap)
    a, b = len(a_set), len(b_set)
    w = min(x for x in h.vertices if x not in a_set and x not in b_set)
    rest = [x for x in h.vertices if x not in a_set and x not in b_set and x != w]
    h_prime, relabel = h.subgraph(rest)
    h_a, _ = h.subgraph(a_set)
    h_b, _ = h.subgraph(b_set)

    builder = GraphBuilder()
    literals = _variable_copies(builder, phi, h)
    links = []
    for clause in phi.clauses:
        gadgets = [add_ab_gadget(builder, h, a_set, b_set) for _ in range(len(clause) - 1)]
        a_first = list(builder.add_copy(h_a, "clause-endpoint", copy_tag="a-endpoint").values())
        b_last = list(builder.add_copy(h_b, "clause-endpoint", copy_tag="b-endpoint").values())
        b_last += builder.add_vertices(a - b, "clause-endpoint")
        f_image = builder.add_copy(h_prime, "h-prime-copy")
        a_sides = [a_first] + [gadget.a_vertices for gadget in gadgets]
        b_sides = [gadget.b_vertices for gadget in gadgets] + [b_last]
        for i, lit in enumerate(clause):
            fixed = {x: f_image[relabel[x]] for x in rest}
            fixed.update({x: a_sides[i][r] for r, x in enumerate(a_set)})
            fixed.update({x: b_sides[i][r] for r, x in enumerate(b_set)})
            fixed[w] = _literal_vertex(literals, lit)
            builder.add_copy(h, "transversal", fixed)
        links.append([(tuple(gadget.a_vertices), tuple(gadget.b_vertices)) for gadget in gadgets])
    budget = phi.num_vars + sum(a * (len(clause) - 1) for clause in phi.clauses)
    return _output(builder, phi, h, budget, literals, links, "td")
