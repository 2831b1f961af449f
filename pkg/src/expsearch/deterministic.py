"""Deterministic search strategies and the exact sigma oracle.

On trees and unweighted graphs, searching vertices in non-decreasing order
of distance is optimal and sigma has closed forms over the finite set of
vertex distances.  On general weighted graphs computing sigma is NP-hard,
so the module offers an exponential brute-force oracle plus an iterative
radius-doubling strategy whose phases search (near-)minimal Steiner trees
of growing balls: factor 4 with exact Steiner trees, 8 with the
metric-closure MST 2-approximation.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CapExceededError,
    TooManyTerminalsForExactError,
    UnsupportedGraphClassError,
)
from .graphs import RootedGraph, ZERO, ball_vertices, shortest_distances
from .oracle import _iter_search_rows, count_searches
from .search import ExpandingSearch, search_ratio, validate_search

EXACT_TERMINAL_CAP = 14


def distance_order_search(G: RootedGraph) -> tuple[ExpandingSearch, Fraction]:
    """Optimal deterministic search for trees and unweighted graphs.

    Visits vertices by non-decreasing (d(v), id), attaching each by its
    shortest-path-tree parent edge; returns the search and its ratio,
    which equals sigma(G) for these graph classes.
    """
    if not (G.is_tree or G.is_unweighted):
        raise UnsupportedGraphClassError(
            "distance-order optimality holds only for trees and unweighted graphs")
    dmap = shortest_distances(G)
    order = sorted(G.non_root_vertices(), key=lambda v: (dmap.dist[v], v))
    search = validate_search(G, [dmap.parent_edge[v] for v in order])
    sigma, _ = search_ratio(search)
    return search, sigma


def sigma_closed_form(G: RootedGraph) -> Fraction:
    """sigma via sup over r of lam(G_r)/r (trees) or (|V_r|-1)/r (unweighted).

    The sup is attained on the finite set of vertex distances.
    """
    if not (G.is_tree or G.is_unweighted):
        raise UnsupportedGraphClassError(
            "closed forms hold only for trees and unweighted graphs")
    dmap = shortest_distances(G)
    by_dist = sorted(G.non_root_vertices(), key=lambda v: dmap.dist[v])
    best = None
    if G.is_tree:
        prefix = ZERO
        for i, v in enumerate(by_dist):
            prefix += dmap.lam[v]
            r = dmap.dist[v]
            if i + 1 < len(by_dist) and dmap.dist[by_dist[i + 1]] == r:
                continue  # evaluate each distinct radius once, fully loaded
            value = prefix / r
            if best is None or value > best:
                best = value
    else:
        for i, v in enumerate(by_dist):
            r = dmap.dist[v]
            if i + 1 < len(by_dist) and dmap.dist[by_dist[i + 1]] == r:
                continue
            value = Fraction(i + 1) / r
            if best is None or value > best:
                best = value
    return best


def brute_force_sigma(G: RootedGraph, cap: int = 10**7
                      ) -> tuple[Fraction, ExpandingSearch]:
    """Exact sigma by exhausting the oracle's canonical search space.

    Ties keep the lexicographically first minimizing vertex order.
    """
    count_searches(G, cap)
    d = shortest_distances(G).dist
    non_root = G.non_root_vertices()
    same_d = len({d[v] for v in non_root}) == 1
    d0 = d[non_root[0]]
    best = None
    best_row = None
    for seq, order, times in _iter_search_rows(G):
        if same_d:  # the last vertex is always the worst one
            worst = times[-1] / d0
            if best is not None and worst >= best:
                continue
        else:
            worst = ZERO
            for v, t in zip(order, times):
                ratio = t / d[v]
                if ratio > worst:
                    worst = ratio
                    if best is not None and worst >= best:
                        break
            if best is not None and worst >= best:
                continue
        best = worst
        best_row = (seq, order, times)
    seq, order, times = best_row
    search = ExpandingSearch(G, seq, order, dict(zip(order, times)),
                             _trusted=True)
    return best, search


# -- Steiner trees ------------------------------------------------------------


@dataclass(frozen=True)
class SteinerResult:
    """A subtree of G spanning the requested terminals (root included)."""

    edge_indices: frozenset[int]
    total_length: Fraction
    mode: str
    terminals: frozenset[int]


def _single_source(G: RootedGraph, src: int):
    """Exact Dijkstra from src: (dist list, parent-edge list).

    Parent edges are picked in a deterministic second pass, preferring the
    smallest neighbour id among tight predecessors.
    """
    n = G.vertex_count
    dist = [None] * n
    dist[src] = ZERO
    heap = [(ZERO, src)]
    done = [False] * n
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for idx, w in G.adjacency(u):
            dw = du + G.edges[idx].length
            if dist[w] is None or dw < dist[w]:
                dist[w] = dw
                heapq.heappush(heap, (dw, w))
    parent_edge = [-1] * n
    for v in range(n):
        if v == src:
            continue
        for idx, u in G.adjacency(v):  # sorted by neighbour id
            if dist[u] + G.edges[idx].length == dist[v]:
                parent_edge[v] = idx
                break
    return dist, parent_edge


def _path_edges(G, parent_edge, src, v):
    """Edge indices along the recorded shortest path src -> v."""
    out = []
    while v != src:
        idx = parent_edge[v]
        out.append(idx)
        v = G.edges[idx].other(v)
    out.reverse()
    return out


def _check_terminals(G, terminals):
    terms = sorted(set(terminals))
    if G.root not in terms:
        raise ValueError("terminals must include the root")
    for t in terms:
        if not (0 <= t < G.vertex_count):
            raise ValueError(f"terminal {t} out of range")
    return terms


def _steiner_exact(G: RootedGraph, terms):
    """Dreyfus-Wagner dynamic program over terminal subsets."""
    if len(terms) > EXACT_TERMINAL_CAP:
        raise TooManyTerminalsForExactError(
            f"exact Steiner is capped at {EXACT_TERMINAL_CAP} terminals, "
            f"got {len(terms)}")
    sp = {v: _single_source(G, v) for v in range(G.vertex_count)}
    dist = {v: sp[v][0] for v in sp}
    base, rest = terms[0], terms[1:]
    if not rest:
        return frozenset(), ZERO
    n = G.vertex_count
    full = (1 << len(rest)) - 1
    dp = [[None] * n for _ in range(full + 1)]
    back = [[None] * n for _ in range(full + 1)]
    for mask in range(1, full + 1):
        bits = [i for i in range(len(rest)) if mask >> i & 1]
        merged = [None] * n
        merged_split = [None] * n
        if len(bits) == 1:
            merged[rest[bits[0]]] = ZERO
        else:
            low = mask & -mask
            sub = (mask - 1) & mask
            while sub:
                if sub & low:  # enumerate each unordered split once
                    other = mask ^ sub
                    for v in range(n):
                        a, b = dp[sub][v], dp[other][v]
                        if a is not None and b is not None:
                            cost = a + b
                            if merged[v] is None or cost < merged[v]:
                                merged[v] = cost
                                merged_split[v] = sub
                sub = (sub - 1) & mask
        for v in range(n):
            best = None
            best_u = None
            for u in range(n):
                if merged[u] is None:
                    continue
                cost = merged[u] + dist[u][v]
                if best is None or cost < best:
                    best, best_u = cost, u
            dp[mask][v] = best
            back[mask][v] = (best_u, merged_split[best_u])

    edges = set()

    def collect(mask, v):
        u, split = back[mask][v]
        edges.update(_path_edges(G, sp[u][1], u, v))
        if split is not None:
            collect(split, u)
            collect(mask ^ split, u)

    collect(full, base)
    total = sum((G.edges[i].length for i in edges), ZERO)
    if total != dp[full][base]:
        raise AssertionError("Steiner reconstruction does not match DP value")
    return frozenset(edges), total


def _spanning_tree_of_subset(G, edge_subset, start):
    """Minimum spanning tree (Prim) of the subgraph given by edge_subset."""
    adj = {}
    for idx in edge_subset:
        e = G.edges[idx]
        adj.setdefault(e.u, []).append((e.length, idx, e.v))
        adj.setdefault(e.v, []).append((e.length, idx, e.u))
    tree = set()
    seen = {start}
    heap = list(adj.get(start, []))
    heapq.heapify(heap)
    while heap:
        length, idx, v = heapq.heappop(heap)
        if v in seen:
            continue
        seen.add(v)
        tree.add(idx)
        for item in adj[v]:
            if item[2] not in seen:
                heapq.heappush(heap, item)
    return tree


def _steiner_mst2(G: RootedGraph, terms):
    """Metric-closure MST on the terminals, unfolded to graph edges.

    Guaranteed within twice the optimal Steiner length.
    """
    sp = {t: _single_source(G, t) for t in terms}
    in_tree = {terms[0]}
    union = set()
    pending = [(sp[terms[0]][0][t], terms[0], t) for t in terms[1:]]
    heapq.heapify(pending)
    while len(in_tree) < len(terms):
        dist_ut, u, t = heapq.heappop(pending)
        if t in in_tree:
            continue
        in_tree.add(t)
        union.update(_path_edges(G, sp[u][1], u, t))
        for t2 in terms:
            if t2 not in in_tree:
                heapq.heappush(pending, (sp[t][0][t2], t, t2))
    # the unfolded union may overlap itself: keep a spanning tree and prune
    tree = _spanning_tree_of_subset(G, union, G.root)
    term_set = set(terms)
    while True:
        degree = {}
        for idx in tree:
            e = G.edges[idx]
            degree[e.u] = degree.get(e.u, 0) + 1
            degree[e.v] = degree.get(e.v, 0) + 1
        removable = [idx for idx in tree
                     for w in (G.edges[idx].u, G.edges[idx].v)
                     if degree[w] == 1 and w not in term_set]
        if not removable:
            break
        tree.difference_update(removable)
    total = sum((G.edges[i].length for i in tree), ZERO)
    return frozenset(tree), total


def steiner_tree(G: RootedGraph, terminals, mode: str = "exact") -> SteinerResult:
    """Minimum (or 2-approximate) subtree containing the terminals."""
    terms = _check_terminals(G, terminals)
    if mode == "exact":
        edges, total = _steiner_exact(G, terms)
    elif mode in ("mst2", "mst-2approx"):
        edges, total = _steiner_mst2(G, terms)
    else:
        raise ValueError(f"unknown Steiner mode {mode!r}")
    return SteinerResult(edges, total, mode, frozenset(terms))


# -- doubling strategy ---------------------------------------------------------


@dataclass(frozen=True)
class DoublingResult:
    search: ExpandingSearch
    sigma: Fraction
    certified_factor: int
    phases: tuple[tuple[Fraction, SteinerResult], ...]


def _phase_radii(radius: Fraction) -> list[Fraction]:
    if radius < 2:
        return [radius]
    radii = []
    r = Fraction(1)
    while r < radius:
        radii.append(r)
        r *= 2
    radii.append(r)
    return radii


def doubling_search(G: RootedGraph, steiner_mode: str = "exact") -> DoublingResult:
    """Search balls of radius 1, 2, 4, ... via (near-)minimal Steiner trees.

    Each phase walks its Steiner tree root-to-leaf (children by vertex id),
    skipping vertices already reached, so prefixes stay subtrees even when
    phase trees overlap.  The returned ratio is certified within factor 4
    (exact Steiner) or 8 (MST 2-approximation) of sigma(G).
    """
    dmap = shortest_distances(G)
    reached = {G.root}
    sequence = []
    phases = []
    for r in _phase_radii(dmap.radius):
        result = steiner_tree(G, ball_vertices(G, r), steiner_mode)
        phases.append((r, result))
        adj = {}
        for idx in result.edge_indices:
            e = G.edges[idx]
            adj.setdefault(e.u, []).append((e.v, idx))
            adj.setdefault(e.v, []).append((e.u, idx))
        stack = [(G.root, -1)]
        visited = {G.root}
        while stack:
            u, via = stack.pop()
            if u not in reached:
                sequence.append(via)
                reached.add(u)
            children = sorted((w, idx) for w, idx in adj.get(u, ())
                              if w not in visited)
            for w, idx in reversed(children):
                visited.add(w)
                stack.append((w, idx))
    search = validate_search(G, sequence)
    sigma, _ = search_ratio(search)
    factor = 4 if steiner_mode == "exact" else 8
    return DoublingResult(search, sigma, factor, tuple(phases))
