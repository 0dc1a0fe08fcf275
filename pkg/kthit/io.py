"""
Text formats: graphs ("p graph n m" / "e u v"), DIMACS CNF and JSON instance documents.
"""
import json
from dataclasses import dataclass, field

from kthit.errors import FormulaError, GraphError, ParseError
from kthit.graph import Graph
from kthit.reduction.cnf import CnfFormula


def _lines(text):
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        yield number, line.split()


def _int(token, number, what):
    try:
        return int(token)
    except ValueError:
        raise ParseError(number, f"{what} {token!r} is not an integer") from None


def parse_graph(text):
    header = None
    edges = []
    seen = {}
    for number, tokens in _lines(text):
        if tokens[0] == "p":
            if header is not None:
                raise ParseError(number, "second header line")
            if len(tokens) != 4 or tokens[1] != "graph":
                raise ParseError(number, "expected 'p graph <n> <m>'")
            header = (_int(tokens[2], number, "vertex count"), _int(tokens[3], number, "edge count"))
            if header[0] < 0 or header[1] < 0:
                raise ParseError(number, "negative count")
            continue
        if tokens[0] != "e":
            raise ParseError(number, f"unknown line type {tokens[0]!r}")
        if header is None:
            raise ParseError(number, "edge before header")
        if len(tokens) != 3:
            raise ParseError(number, "expected 'e <u> <v>'")
        u, v = _int(tokens[1], number, "vertex"), _int(tokens[2], number, "vertex")
        if u == v:
            raise ParseError(number, f"self-loop at vertex {u}")
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise ParseError(number, f"edge ({u}, {v}) out of range for {header[0]} vertices")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(number, f"duplicate edge ({u}, {v}), first on line {seen[key]}")
        seen[key] = number
        edges.append(key)
    if header is None:
        raise ParseError(0, "missing 'p graph' header")
    if len(edges) != header[1]:
        raise ParseError(0, f"header announces {header[1]} edges, found {len(edges)}")
    return Graph(header[0], edges)


def format_graph(g):
    lines = [f"p graph {g.n} {g.num_edges}"]
    lines += [f"e {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_cnf(text):
    header = None
    clauses = []
    current = []
    for number, tokens in _lines(text):
        if tokens[0] == "p":
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise ParseError(number, "expected 'p cnf <n> <m>'")
            header = (_int(tokens[2], number, "variable count"), _int(tokens[3], number, "clause count"))
            continue
        if header is None:
            raise ParseError(number, "clause before header")
        for token in tokens:
            lit = _int(token, number, "literal")
            if lit == 0:
                if not current:
                    raise ParseError(number, "empty clause")
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise ParseError(number, f"literal {lit} out of range for {header[0]} variables")
            else:
                current.append(lit)
    if header is None:
        raise ParseError(0, "missing 'p cnf' header")
    if current:
        raise ParseError(0, "last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(0, f"header announces {header[1]} clauses, found {len(clauses)}")
    try:
        return CnfFormula(header[0], clauses)
    except FormulaError as e:
        raise ParseError(0, str(e)) from None


def format_cnf(phi):
    lines = [f"p cnf {phi.num_vars} {phi.num_clauses}"]
    lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in phi.clauses]
    return "\n".join(lines) + "\n"


def parse_family(text):
    """
    A JSON list of vertex lists.
    """
    try:
        family = json.loads(text) if text.strip() else []
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.msg) from None
    if not isinstance(family, list) or any(not isinstance(z, list) for z in family):
        raise ParseError(1, "family must be a list of vertex lists")
    return [[int(v) for v in z] for z in family]


def graph_block(g):
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges]}


def graph_from_block(block):
    try:
        return Graph(block["n"], [tuple(e) for e in block["edges"]])
    except (KeyError, TypeError) as e:
        raise ParseError(0, f"bad graph block: {e}") from None
    except GraphError as e:
        raise ParseError(0, str(e)) from None


@dataclass
class InstanceDocument:
    """
    JSON form of (G, X, k, t, lambda) plus free-form metadata.
    """

    graph: object
    x: list
    k: int
    t: int
    lam: int
    family: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "graph": graph_block(self.graph),
            "x": list(self.x),
            "k": self.k,
            "t": self.t,
            "lambda": self.lam,
            "family": [list(z) for z in self.family],
            "metadata": self.metadata,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.lineno, e.msg) from None
        try:
            graph = graph_from_block(data["graph"])
            doc = cls(
                graph,
                [int(v) for v in data["x"]],
                int(data["k"]),
                int(data["t"]),
                int(data["lambda"]),
                [[int(v) for v in z] for z in data.get("family", [])],
                data.get("metadata", {}),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(0, f"bad instance document: {e}") from None
        for v in doc.x + [v for z in doc.family for v in z]:
            if not 0 <= v < graph.n:
                raise ParseError(0, f"vertex {v} out of range for {graph.n} vertices")
        return doc

    @classmethod
    def from_instance(cls, inst, metadata=None):
        return cls(inst.graph, list(inst.modulator), inst.budget, inst.t, inst.lam, metadata=dict(metadata or {}))


ROLE_COLORS = {
    "variable-copy": "lightblue",
    "clause-copy": "lightblue",
    "clause-endpoint": "gray",
    "h-prime-copy": "white",
    "gadget-attachment": "orange",
    "gadget-copy": "lightyellow",
}


def to_dot(g, role_tags=None, highlight=()):
    role_tags = role_tags or {}
    highlight = set(highlight)
    lines = ["graph G {"]
    for v in g.vertices:
        attrs = []
        tag = role_tags.get(v)
        if tag is not None:
            attrs.append(f'label="{v}\\n{tag}"')
            attrs.append(f'style=filled fillcolor="{ROLE_COLORS.get(tag, "white")}"')
        if v in highlight:
            attrs.append('color="red" penwidth=3')
        lines.append(f"  {v}" + (f" [{' '.join(attrs)}]" if attrs else "") + ";")
    lines += [f"  {u} -- {v};" for u, v in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
