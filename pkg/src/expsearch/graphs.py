"""Rooted edge-weighted graphs: the search environment.

A RootedGraph is an immutable, connected, undirected graph with a
distinguished root, dense vertex ids 0..n, and exact rational edge lengths
normalized to be >= 1.  All derived structure (shortest-path distances,
parent edges, class flags) is computed once and cached; every operation in
this module is a pure function of its inputs.

Shortest-path ties are broken by smallest predecessor id, which makes the
parent map, the shortest-path tree and every downstream strategy
deterministic and reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    LengthBelowOneError,
    NotARootedSubtreeError,
    SelfLoopError,
)
from .rational import as_rational

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Edge:
    """Undirected edge; identity within a graph is its index in G.edges."""

    u: int
    v: int
    length: Fraction

    def key(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)

    def other(self, w: int) -> int:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise ValueError(f"vertex {w} is not an endpoint of {self}")

    def touches(self, w: int) -> bool:
        return w == self.u or w == self.v


@dataclass(frozen=True)
class DistanceMap:
    """Single-source shortest paths from the root.

    lam[v] is the length of the last edge on the chosen shortest root-v
    path (0 at the root); parent/parent_edge identify that edge.
    """

    dist: tuple[Fraction, ...]
    parent: tuple[int, ...]
    parent_edge: tuple[int, ...]
    lam: tuple[Fraction, ...]

    @property
    def radius(self) -> Fraction:
        return max(self.dist)


class RootedGraph:
    """Validated immutable rooted graph."""

    __slots__ = ("vertex_count", "edges", "root", "labels", "source_ids",
                 "_adj", "_dmap", "is_tree", "is_unweighted", "is_star")

    def __init__(self, vertex_count, edges, root=0, labels=None, source_ids=None):
        if vertex_count < 1:
            raise DisconnectedGraphError("a graph needs at least the root")
        if not (0 <= root < vertex_count):
            raise DisconnectedGraphError(f"root {root} out of range")
        normalized = []
        seen = set()
        for e in edges:
            if isinstance(e, Edge):
                u, v, length = e.u, e.v, e.length
            else:
                u, v, length = e
            length = as_rational(length)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise DisconnectedGraphError(f"edge endpoint out of range: ({u}, {v})")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if length < 1:
                raise LengthBelowOneError(f"edge ({u}, {v}) has length {length} < 1")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdgeError(f"parallel edge between {key[0]} and {key[1]}")
            seen.add(key)
            normalized.append(Edge(u, v, length))
        self.vertex_count = vertex_count
        self.edges = tuple(normalized)
        self.root = root
        self.labels = tuple(labels) if labels is not None else None
        self.source_ids = tuple(source_ids) if source_ids is not None else None
        if self.labels is not None and len(self.labels) != vertex_count:
            raise ValueError("labels must match vertex_count")
        adj = [[] for _ in range(vertex_count)]
        for idx, e in enumerate(self.edges):
            adj[e.u].append((idx, e.v))
            adj[e.v].append((idx, e.u))
        self._adj = tuple(tuple(sorted(a, key=lambda t: (t[1], t[0]))) for a in adj)
        self._check_connected()
        self.is_tree = len(self.edges) == vertex_count - 1
        self.is_unweighted = all(e.length == 1 for e in self.edges)
        self.is_star = all(e.touches(root) for e in self.edges)
        self._dmap = None  # set last: __setattr__ freezes everything else

    def __setattr__(self, name, value):  # pragma: no cover - guarded by slots
        if hasattr(self, "_dmap") and name != "_dmap":
            raise AttributeError("RootedGraph is immutable")
        object.__setattr__(self, name, value)

    def _check_connected(self):
        seen = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            for _, w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.vertex_count:
            missing = sorted(set(range(self.vertex_count)) - seen)
            raise DisconnectedGraphError(f"vertices unreachable from root: {missing}")

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        """Number of non-root vertices."""
        return self.vertex_count - 1

    def non_root_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if v != self.root)

    def adjacency(self, v: int) -> tuple[tuple[int, int], ...]:
        """(edge_index, neighbour) pairs, sorted by neighbour id."""
        return self._adj[v]

    def label_of(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else f"v{v}"

    def edge_between(self, u: int, v: int):
        for idx, w in self._adj[u]:
            if w == v:
                return idx
        return None

    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), ZERO)

    def __repr__(self):
        kind = "star" if self.is_star else "tree" if self.is_tree else "graph"
        return (f"RootedGraph({kind}, {self.vertex_count} vertices, "
                f"{len(self.edges)} edges, root={self.label_of(self.root)})")


def build_graph(vertex_count, edges, root=0, labels=None) -> RootedGraph:
    """Validate and freeze a rooted graph from (u, v, length) triples.

    A search environment needs at least one non-root vertex; the degenerate
    single-vertex graph only arises internally (full contraction).
    """
    if vertex_count < 2:
        raise DisconnectedGraphError("a search environment needs at least 2 vertices")
    return RootedGraph(vertex_count, edges, root=root, labels=labels)


def shortest_distances(G: RootedGraph) -> DistanceMap:
    """Exact Dijkstra from the root; parents by smallest-id tie-break."""
    if G._dmap is not None:
        return G._dmap
    n = G.vertex_count
    INF = None
    dist = [INF] * n
    dist[G.root] = ZERO
    heap = [(ZERO, G.root)]
    done = [False] * n
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for idx, w in G._adj[u]:
            dw = du + G.edges[idx].length
            if dist[w] is None or dw < dist[w]:
                dist[w] = dw
                heapq.heappush(heap, (dw, w))
    # deterministic parents: smallest predecessor id among tight edges
    parent = [-1] * n
    parent_edge = [-1] * n
    lam = [ZERO] * n
    for v in range(n):
        if v == G.root:
            continue
        for idx, u in G._adj[v]:
            if dist[u] + G.edges[idx].length == dist[v]:
                parent[v] = u
                parent_edge[v] = idx
                lam[v] = G.edges[idx].length
                break  # adjacency sorted by neighbour id
    dmap = DistanceMap(tuple(dist), tuple(parent), tuple(parent_edge), tuple(lam))
    G._dmap = dmap
    return dmap


def ball_vertices(G: RootedGraph, r) -> frozenset[int]:
    """Vertices at distance <= r from the root (always contains the root)."""
    r = as_rational(r)
    d = shortest_distances(G).dist
    return frozenset(v for v in range(G.vertex_count) if d[v] <= r)


def induced_ball_subgraph(G: RootedGraph, r) -> RootedGraph:
    """Induced subgraph on the radius-r ball, re-rooted at the root.

    New ids follow ascending old ids; source_ids maps them back.
    """
    keep = sorted(ball_vertices(G, r))
    index = {old: new for new, old in enumerate(keep)}
    edges = [(index[e.u], index[e.v], e.length)
             for e in G.edges if e.u in index and e.v in index]
    labels = tuple(G.label_of(v) for v in keep) if G.labels is not None else None
    return RootedGraph(len(keep), edges, root=index[G.root], labels=labels,
                       source_ids=tuple(keep))


def shortest_path_tree(G: RootedGraph) -> RootedGraph:
    """Spanning tree of parent edges: tree distances equal graph distances."""
    dmap = shortest_distances(G)
    edges = [G.edges[dmap.parent_edge[v]]
             for v in range(G.vertex_count) if v != G.root]
    return RootedGraph(G.vertex_count, edges, root=G.root, labels=G.labels)


def _as_edge_indices(G: RootedGraph, searched) -> set[int]:
    out = set()
    for item in searched:
        if isinstance(item, Edge):
            idx = G.edge_between(item.u, item.v)
            if idx is None or G.edges[idx].length != item.length:
                raise NotARootedSubtreeError(f"{item} is not an edge of the graph")
            out.add(idx)
        else:
            idx = int(item)
            if not (0 <= idx < len(G.edges)):
                raise NotARootedSubtreeError(f"edge index {idx} out of range")
            out.add(idx)
    return out


def contract_to_root(G: RootedGraph, searched_edges) -> RootedGraph:
    """Merge the vertices touched by a searched rooted subtree into the root.

    searched_edges may contain Edge objects or edge indices and must form a
    subtree of G containing the root.  Parallel edges created by the merge
    collapse to the minimum length.
    """
    indices = _as_edge_indices(G, searched_edges)
    touched = {G.root}
    remaining = set(indices)
    # grow from the root; every searched edge must attach to the grown set
    grew = True
    while remaining and grew:
        grew = False
        for idx in sorted(remaining):
            e = G.edges[idx]
            inside = (e.u in touched, e.v in touched)
            if all(inside):
                raise NotARootedSubtreeError("searched edges contain a cycle")
            if any(inside):
                touched.add(e.u if not inside[0] else e.v)
                remaining.discard(idx)
                grew = True
    if remaining:
        raise NotARootedSubtreeError("searched edges are not connected to the root")

    keep = [v for v in range(G.vertex_count) if v not in touched]
    index = {old: new + 1 for new, old in enumerate(keep)}  # new root gets id 0
    best: dict[tuple[int, int], Fraction] = {}
    for e in G.edges:
        nu = 0 if e.u in touched else index[e.u]
        nv = 0 if e.v in touched else index[e.v]
        if nu == nv:
            continue
        key = (nu, nv) if nu < nv else (nv, nu)
        if key not in best or e.length < best[key]:
            best[key] = e.length
    labels = None
    if G.labels is not None:
        labels = (G.label_of(G.root),) + tuple(G.label_of(v) for v in keep)
    return RootedGraph(len(keep) + 1,
                       [(u, v, L) for (u, v), L in sorted(best.items())],
                       root=0, labels=labels,
                       source_ids=(G.root,) + tuple(keep))


def star_closure(G: RootedGraph) -> RootedGraph:
    """Star on the same vertex set with one root edge of length d(v) per v."""
    dmap = shortest_distances(G)
    edges = [(G.root, v, dmap.dist[v])
             for v in range(G.vertex_count) if v != G.root]
    return RootedGraph(G.vertex_count, edges, root=G.root, labels=G.labels)
