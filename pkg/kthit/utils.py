from itertools import combinations


def vertex_set(vertices):
    return tuple(sorted(set(vertices)))


def set_key(vertices):
    return (len(vertices), tuple(vertices))


def canonical_family(sets):
    """
    Deduplicate vertex sets and order them by size, then lexicographically.
    """
    return tuple(sorted({vertex_set(z) for z in sets}, key=set_key))


def subsets_by_size(items, max_size, min_size=0):
    # Size-then-lex order.
    items = sorted(items)
    for size in range(min_size, min(max_size, len(items)) + 1):
        yield from combinations(items, size)


def hits_all(solution, sets):
    solution = set(solution)
    return all(solution.intersection(z) for z in sets)


def restrict_family(family, vertices):
    vertices = set(vertices)
    return tuple(z for z in family if vertices.issuperset(z))


def parse_ids(text):
    """
    Parse a comma separated list of vertex ids ("" gives the empty set).
    """
    text = text.strip()
    if not text:
        return ()
    return vertex_set(int(x) for x in text.split(","))
