"""
Brute-force reference implementations. Nothing here calls into the modules they check.
"""
from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import combinations
from time import time

from kthit.errors import CapExceeded


@dataclass
class OracleReport:
    computed: object
    witness: object = None
    elapsed: float = 0.0
    lower_bound: bool = False

    def to_dict(self):
        return asdict(self)


def timed(fn, *args, **kwargs):
    start = time()
    result = fn(*args, **kwargs)
    return result, time() - start


def _check_cap(size, cap, what="Graph"):
    if size > cap:
        raise CapExceeded(f"{what} has {size} vertices, cap is {cap}.")


def _cliques(g, vertices, size):
    return [
        frozenset(c) for c in combinations(sorted(vertices), size) if all(g.has_edge(u, v) for u, v in combinations(c, 2))
    ]


def _components(g, vertices):
    vertices = set(vertices)
    parts = []
    while vertices:
        start = min(vertices)
        part = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w in vertices and w not in part:
                    part.add(w)
                    stack.append(w)
        vertices -= part
        parts.append(frozenset(part))
    return parts


def _packing_bound(sets):
    used = set()
    count = 0
    for s in sorted(sets, key=len):
        if used.isdisjoint(s):
            used |= s
            count += 1
    return count


def _hit_search(sets, budget):
    if not sets:
        return frozenset()
    if budget == 0 or _packing_bound(sets) > budget:
        return None
    target = min(sets, key=len)
    for v in sorted(target):
        found = _hit_search([s for s in sets if v not in s], budget - 1)
        if found is not None:
            return found | {v}
    return None


def _min_hit(sets):
    sets = [frozenset(s) for s in sets]
    if any(not s for s in sets):
        raise ValueError("The empty set cannot be hit.")
    size = _packing_bound(sets)
    while True:
        found = _hit_search(sets, size)
        if found is not None:
            return found
        size += 1


def _ekt_sets(inst, family=()):
    return _cliques(inst.graph, inst.graph.vertices, inst.t) + [frozenset(z) for z in inst.family] + [
        frozenset(z) for z in family
    ]


def brute_opt_ekt(inst, cap=20):
    """
    Exact opt(G, F) with a minimum witness.
    """
    _check_cap(inst.graph.n, cap)
    witness = _min_hit(_ekt_sets(inst))
    return len(witness), tuple(sorted(witness))


def all_optimal_solutions(inst, cap=20):
    opt, _ = brute_opt_ekt(inst, cap)
    sets = _ekt_sets(inst)
    return [c for c in combinations(inst.graph.vertices, opt) if all(s.intersection(c) for s in sets)]


def _pattern_copies(g, h, induced):
    order = []
    for x in sorted(range(h.n), key=lambda x: -h.degree(x)):
        if x not in order:
            queue = [x]
            while queue:
                y = queue.pop(0)
                if y not in order:
                    order.append(y)
                    queue.extend(z for z in h.neighbors(y) if z not in order)
    image = {}
    copies = set()

    def extend(i):
        if i == len(order):
            copies.add(frozenset(image.values()))
            return
        x = order[i]
        placed = order[:i]
        anchors = [image[y] for y in placed if h.has_edge(x, y)]
        candidates = g.neighbors(anchors[0]) if anchors else g.vertices
        used = set(image.values())
        for v in candidates:
            if v in used:
                continue
            if any(not g.has_edge(v, a) for a in anchors):
                continue
            if induced and any(g.has_edge(v, image[y]) for y in placed if not h.has_edge(x, y)):
                continue
            image[x] = v
            extend(i + 1)
            del image[x]

    extend(0)
    return sorted(copies, key=lambda c: (len(c), sorted(c)))


def brute_opt_pattern(g, h, induced=False, cap=64):
    """
    Minimum number of vertices hitting every (induced) copy of h in g.
    """
    _check_cap(g.n, cap)
    witness = _min_hit(_pattern_copies(g, h, induced))
    return len(witness), tuple(sorted(witness))


def hits_within(g, h, induced, budget, cap=64):
    _check_cap(g.n, cap)
    return _hit_search(_pattern_copies(g, h, induced), budget) is not None


def _is_root(g, vertices, root):
    for rest in _components(g, vertices - root):
        touching = {u for v in rest for u in g.neighbors(v) if u in root}
        if len(touching) != 1:
            return False
    return True


def _all_roots(g, vertices, cliques):
    # Connected vertex subsets grown one neighbour at a time; supersets of a t-clique are skipped.
    frontier = [frozenset([v]) for v in sorted(vertices)]
    seen = set(frontier)
    while frontier:
        root = frontier.pop()
        if any(c <= root for c in cliques):
            continue
        if _is_root(g, vertices, root):
            yield root
        for u in root:
            for w in g.neighbors(u):
                if w in vertices and w not in root:
                    bigger = root | {w}
                    if bigger not in seen:
                        seen.add(bigger)
                        frontier.append(bigger)


def brute_bed_plus(g, t, cap=10):
    """
    bed+ by the definitional recursion over every root.
    """
    _check_cap(g.n, cap)
    cliques = _cliques(g, g.vertices, t)

    @lru_cache(maxsize=None)
    def bed(vertices):
        if not vertices:
            return 0
        inside = [c for c in cliques if c <= vertices]
        covered = frozenset().union(*inside)
        if covered != vertices:
            return bed(covered)
        parts = _components(g, vertices)
        if len(parts) > 1:
            return max(bed(p) for p in parts)
        return 1 + min(bed(vertices - root) for root in _all_roots(g, vertices, inside))

    return bed(frozenset(g.vertices))


def brute_ved_plus(g, h, induced=False, cap=14, pattern_cap=6):
    """
    ved+ by the definitional recursion. The cap bounds each connected component reached.
    """
    _check_cap(h.n, pattern_cap, "Pattern")
    copies = _pattern_copies(g, h, induced)

    @lru_cache(maxsize=None)
    def ved(vertices):
        if not vertices:
            return 0
        inside = [c for c in copies if c <= vertices]
        covered = frozenset().union(*inside)
        if covered != vertices:
            return ved(covered)
        parts = _components(g, vertices)
        if len(parts) > 1:
            return max(ved(p) for p in parts)
        _check_cap(len(vertices), cap, "Component")
        return 1 + min(ved(vertices - {v}) for v in vertices)

    return ved(frozenset(g.vertices))


def _ground(g, t):
    return [c for size in range(1, t) for c in _cliques(g, g.vertices, size)]


def is_blocking_set(inst, blocking, cap=20):
    g = inst.graph
    for z in blocking:
        if not 1 <= len(z) <= inst.t - 1 or any(not 0 <= v < g.n for v in z):
            return False
        if any(not g.has_edge(u, v) for u, v in combinations(z, 2)):
            return False
    _check_cap(g.n, cap)
    return len(_min_hit(_ekt_sets(inst, blocking))) > len(_min_hit(_ekt_sets(inst)))


def minimal_blocking_sets(inst, size_cap, ground_cap=18, cap=20):
    """
    Every inclusion-minimal blocking set with at most size_cap members.
    """
    _check_cap(inst.graph.n, cap)
    ground = [tuple(sorted(c)) for c in _ground(inst.graph, inst.t)]
    if len(ground) > ground_cap:
        raise CapExceeded(f"{len(ground)} candidate cliques, cap is {ground_cap}.")
    base = len(_min_hit(_ekt_sets(inst)))
    found = []
    for size in range(1, size_cap + 1):
        for blocking in combinations(ground, size):
            if any(set(smaller) <= set(blocking) for smaller in found):
                continue
            if len(_min_hit(_ekt_sets(inst, blocking))) > base:
                found.append(blocking)
    return found


def conflict_value(g, s1, s2, t, cap=20):
    """
    opt(G[s2], traces of the t-cliques crossing from s1) - opt(G[s2]).
    """
    s1, s2 = set(s1), set(s2)
    _check_cap(len(s1 | s2), cap)
    traces = [c & s2 for c in _cliques(g, s1 | s2, t) if c & s1 and c & s2]
    inner = _cliques(g, s2, t)
    return len(_min_hit(inner + traces)) - len(_min_hit(inner))


@dataclass
class MmbsResult:
    value: int
    family: tuple
    blocking: tuple
    lower_bound: bool = False


def _popcount(mask):
    return bin(mask).count("1")


def _largest_irredundant_cover(universe, options):
    """
    Largest set of masks covering universe where every chosen mask owns an element no other covers.
    """
    masks, owners = [], []
    for mask, owner in options:
        mask &= universe
        if mask and mask not in masks:
            masks.append(mask)
            owners.append(owner)
    suffix = [0] * (len(masks) + 1)
    for i in range(len(masks) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[i]
    if suffix[0] != universe:
        return 0, ()
    limit = _popcount(universe)
    best = [0, ()]

    def keeps_private(chosen, extra):
        for j in chosen:
            others = extra
            for k in chosen:
                if k != j:
                    others |= masks[k]
            if not masks[j] & ~others:
                return False
        return True

    def dfs(i, chosen, covered):
        if covered == universe:
            if len(chosen) > best[0]:
                best[:] = [len(chosen), tuple(owners[j] for j in chosen)]
            return
        if best[0] == limit or i == len(masks) or len(chosen) + len(masks) - i <= best[0]:
            return
        if covered | suffix[i] != universe:
            return
        mask = masks[i]
        if mask & ~covered and keeps_private(chosen, mask):
            dfs(i + 1, chosen + [i], covered | mask)
        dfs(i + 1, chosen, covered)

    dfs(0, [], 0)
    return best[0], best[1]


def _greedy_irredundant_cover(universe, options):
    chosen = []
    for mask, owner in options:
        if mask & universe and all(mask & universe != m for m, _ in chosen):
            chosen.append((mask & universe, owner))
    if not chosen or _union(m for m, _ in chosen) != universe:
        return 0, ()
    for item in list(chosen):
        rest = [c for c in chosen if c is not item]
        if rest and _union(m for m, _ in rest) == universe:
            chosen = rest
    return len(chosen), tuple(owner for _, owner in chosen)


def _union(masks):
    total = 0
    for mask in masks:
        total |= mask
    return total


def mmbs_graph(g, t, ground_cap=18, cap=20):
    """
    Largest minimal blocking set over all clean families of cliques with fewer than t vertices.
    Above ground_cap candidate cliques, a greedy lower bound for the empty family is returned.
    """
    _check_cap(g.n, cap)
    cliques = _cliques(g, g.vertices, t)
    optimal = [frozenset(s) for s in _all_hitting_of_min_size(g, cliques)]
    full = (1 << len(optimal)) - 1
    ground = [tuple(sorted(c)) for c in _ground(g, t)]
    hit = {z: sum(1 << i for i, s in enumerate(optimal) if s.intersection(z)) for z in ground}
    options = [(full & ~hit[z], z) for z in ground]
    if len(ground) > ground_cap:
        value, blocking = _greedy_irredundant_cover(full, options)
        return MmbsResult(value, (), blocking, lower_bound=True)
    families = {full: ()}
    queue = [full]
    while queue:
        current = queue.pop(0)
        for z in ground:
            narrowed = current & hit[z]
            if narrowed and narrowed not in families:
                families[narrowed] = families[current] + (z,)
                queue.append(narrowed)
    best = MmbsResult(0, (), ())
    for universe in sorted(families, key=lambda m: (-_popcount(m), m)):
        if _popcount(universe) <= best.value:
            break
        value, blocking = _largest_irredundant_cover(universe, options)
        if value > best.value:
            best = MmbsResult(value, families[universe], blocking)
    return best


def _all_hitting_of_min_size(g, cliques):
    opt = len(_min_hit(cliques))
    return [c for c in combinations(g.vertices, opt) if all(s.intersection(c) for s in cliques)]
