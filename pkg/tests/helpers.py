"""Independent oracles used to derive expected values in tests.

Everything here recomputes quantities from first principles (exhaustive
enumeration, path enumeration, subset search) without reusing the library's
algorithmic shortcuts, so library results can be checked against them.
"""

from fractions import Fraction
from itertools import product

from expsearch import shortest_distances, validate_search

ZERO = Fraction(0)


def brute_distance(G, target):
    """Shortest root-target distance by enumerating all simple paths."""
    best = None

    def walk(v, seen, total):
        nonlocal best
        if v == target:
            if best is None or total < best:
                best = total
            return
        for idx, w in G.adjacency(v):
            if w not in seen:
                walk(w, seen | {w}, total + G.edges[idx].length)

    walk(G.root, {G.root}, ZERO)
    return best


def all_searches_unrestricted(G):
    """Every Definition-1 expanding search (no minimum-edge restriction)."""
    n = G.vertex_count
    out = []
    seq = []
    reached = {G.root}

    def rec():
        if len(reached) == n:
            out.append(validate_search(G, list(seq)))
            return
        for idx, e in enumerate(G.edges):
            inside = (e.u in reached, e.v in reached)
            if any(inside) and not all(inside):
                new = e.v if inside[0] else e.u
                reached.add(new)
                seq.append(idx)
                rec()
                seq.pop()
                reached.remove(new)

    rec()
    return out


def steiner_brute(G, terminals):
    """Minimum length of a connected edge subset containing the terminals."""
    terms = set(terminals)
    m = len(G.edges)
    best = None
    for mask in range(1 << m):
        edges = [G.edges[i] for i in range(m) if mask >> i & 1]
        adj = {}
        for e in edges:
            adj.setdefault(e.u, []).append(e.v)
            adj.setdefault(e.v, []).append(e.u)
        start = next(iter(terms))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if terms <= seen:
            total = sum((e.length for e in edges), ZERO)
            if best is None or total < best:
                best = total
    return best


def _phase_realizations(members, dmap):
    """Both DFS edge orders (forward and mirrored) of one contracted level.

    Returns a pair of lists of original vertices in discovery order.
    """
    member_set = set(members)
    children = {}
    roots = []
    for v in sorted(members):
        p = dmap.parent[v]
        if p in member_set:
            children.setdefault(p, []).append(v)
        else:
            roots.append(v)

    def dfs(reverse):
        order = []

        def go(vs):
            for v in (reversed(vs) if reverse else vs):
                order.append(v)
                go(children.get(v, []))

        go(roots)
        return order

    return dfs(False), dfs(True)


def deepening_exact_means(tree):
    """Exact per-vertex expected normalized time of the deepening strategy.

    Enumerates every level-split pattern with its exact probability and both
    RDFS realizations per phase, averaging search times directly.
    """
    dmap = shortest_distances(tree)
    vertices = sorted(tree.non_root_vertices())
    t = 0
    while 2**t <= dmap.radius:
        t += 1
    classes = []
    for i in range(1, t + 1):
        lo = Fraction(2) ** (i - 1)
        members = sorted((v for v in vertices if lo <= dmap.dist[v] < 2 * lo),
                         key=lambda v: (dmap.dist[v], v))
        if members:
            cuts = [(dmap.dist[v] - lo) / lo for v in members]  # in [0, 1)
            probs = []
            for s in range(len(members) + 1):
                low = cuts[s - 1] if s >= 1 else ZERO
                high = cuts[s] if s < len(members) else Fraction(1)
                probs.append(high - low)
            classes.append((i, members, probs))

    total = {v: ZERO for v in vertices}
    for splits in product(*[range(len(m) + 1) for _, m, _ in classes]):
        prob = Fraction(1)
        level_of = {}
        for (i, members, probs), s in zip(classes, splits):
            prob *= probs[s]
            for j, v in enumerate(members):
                level_of[v] = i if j >= s else i - 1
        if prob == 0:
            continue
        by_level = {}
        for v in vertices:
            by_level.setdefault(level_of[v], []).append(v)
        expect = {v: ZERO for v in vertices}
        prefix = ZERO
        for i in sorted(by_level):
            members = by_level[i]
            forward, backward = _phase_realizations(members, dmap)
            for order in (forward, backward):
                clock = prefix
                for v in order:
                    clock += dmap.lam[v]
                    expect[v] += Fraction(1, 2) * clock
            prefix += sum((dmap.lam[v] for v in members), ZERO)
        for v in vertices:
            total[v] += prob * expect[v]
    return {v: total[v] / dmap.dist[v] for v in vertices}
