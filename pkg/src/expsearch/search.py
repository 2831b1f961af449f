"""Expanding searches, mixed strategies, payoffs and Hider lower bounds.

An expanding search is an edge sequence whose every prefix is a subtree
rooted at the root; each edge therefore introduces exactly one new vertex,
and the search time T(S, v) is the total length searched up to and
including the edge that introduces v.  The normalized time T(S, v)/d(v)
is the payoff of the Searcher-Hider game solved in `oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EmptySetError,
    IncompleteCoverError,
    PrefixNotTreeError,
    SearchValidationError,
)
from .graphs import Edge, RootedGraph, ZERO, shortest_distances
from .rational import as_rational


class ExpandingSearch:
    """Validated pure Searcher strategy: an ordered edge sequence."""

    __slots__ = ("graph", "edge_indices", "vertex_order", "times")

    def __init__(self, graph, edge_indices, vertex_order, times, _trusted=False):
        if not _trusted:
            raise TypeError("use validate_search() to construct an ExpandingSearch")
        self.graph = graph
        self.edge_indices = tuple(edge_indices)
        self.vertex_order = tuple(vertex_order)
        self.times = dict(times)

    def time_of(self, v: int) -> Fraction:
        return self.times[v]

    def normalized_time(self, v: int) -> Fraction:
        return self.times[v] / shortest_distances(self.graph).dist[v]

    def total_length(self) -> Fraction:
        return self.times[self.vertex_order[-1]]

    def edges(self) -> tuple[Edge, ...]:
        return tuple(self.graph.edges[i] for i in self.edge_indices)

    def __eq__(self, other):
        return (isinstance(other, ExpandingSearch)
                and self.graph is other.graph
                and self.edge_indices == other.edge_indices)

    def __hash__(self):
        return hash((id(self.graph), self.edge_indices))

    def __repr__(self):
        G = self.graph
        steps = ",".join(f"{G.label_of(G.edges[i].u)}-{G.label_of(G.edges[i].v)}"
                         for i in self.edge_indices)
        return f"ExpandingSearch({steps})"


def _resolve_edge(G: RootedGraph, item) -> int:
    if isinstance(item, Edge):
        idx = G.edge_between(item.u, item.v)
        if idx is None:
            raise SearchValidationError(f"{item} is not an edge of the graph")
        return idx
    if isinstance(item, tuple) and len(item) == 2:
        idx = G.edge_between(item[0], item[1])
        if idx is None:
            raise SearchValidationError(f"no edge between {item[0]} and {item[1]}")
        return idx
    idx = int(item)
    if not (0 <= idx < len(G.edges)):
        raise SearchValidationError(f"edge index {idx} out of range")
    return idx


def validate_search(G: RootedGraph, sequence) -> ExpandingSearch:
    """Check Definition-1 validity: tree prefixes and full vertex cover.

    Sequence items may be edge indices, Edge objects, or (u, v) pairs.
    """
    indices = [_resolve_edge(G, item) for item in sequence]
    reached = {G.root}
    order = []
    times = {}
    t = ZERO
    for step, idx in enumerate(indices):
        e = G.edges[idx]
        inside = (e.u in reached, e.v in reached)
        if all(inside):
            raise PrefixNotTreeError(
                f"step {step}: edge ({e.u}, {e.v}) closes a cycle in the prefix")
        if not any(inside):
            raise PrefixNotTreeError(
                f"step {step}: edge ({e.u}, {e.v}) does not touch the searched tree")
        new = e.v if inside[0] else e.u
        t += e.length
        reached.add(new)
        order.append(new)
        times[new] = t
    if len(reached) != G.vertex_count:
        missing = sorted(set(range(G.vertex_count)) - reached)
        raise IncompleteCoverError(f"vertices never reached: {missing}")
    return ExpandingSearch(G, indices, order, times, _trusted=True)


@dataclass(frozen=True)
class PayoffTable:
    """Search times and normalized search times of one pure search."""

    time: dict[int, Fraction]
    normalized: dict[int, Fraction]


def search_times(search: ExpandingSearch) -> PayoffTable:
    d = shortest_distances(search.graph).dist
    return PayoffTable(dict(search.times),
                       {v: t / d[v] for v, t in search.times.items()})


def search_ratio(search: ExpandingSearch) -> tuple[Fraction, int]:
    """Maximum normalized search time and its smallest-id witness vertex."""
    d = shortest_distances(search.graph).dist
    best = None
    witness = None
    for v in sorted(search.times):
        ratio = search.times[v] / d[v]
        if best is None or ratio > best:
            best, witness = ratio, v
    return best, witness


class MixedSearch:
    """Finite-support probability distribution over expanding searches."""

    __slots__ = ("graph", "support")

    def __init__(self, pairs):
        merged: dict[ExpandingSearch, Fraction] = {}
        graph = None
        for search, prob in pairs:
            prob = as_rational(prob)
            if prob < 0:
                raise SearchValidationError("mixed-search probabilities must be >= 0")
            if graph is None:
                graph = search.graph
            elif search.graph is not graph:
                raise SearchValidationError("all support searches must share one graph")
            if prob > 0:
                merged[search] = merged.get(search, ZERO) + prob
        if graph is None or sum(merged.values(), ZERO) != 1:
            raise SearchValidationError("mixed-search probabilities must sum to 1")
        self.graph = graph
        self.support = tuple(sorted(merged.items(),
                                    key=lambda kv: kv[0].edge_indices))

    @classmethod
    def point_mass(cls, search: ExpandingSearch) -> "MixedSearch":
        return cls([(search, Fraction(1))])

    def __len__(self):
        return len(self.support)

    def __iter__(self):
        return iter(self.support)


class HiderDistribution:
    """Probability distribution over the non-root vertices."""

    __slots__ = ("probs",)

    def __init__(self, probs):
        items = []
        total = ZERO
        for v, p in sorted(dict(probs).items()):
            p = as_rational(p)
            if p < 0:
                raise ValueError("hider probabilities must be >= 0")
            if p > 0:
                items.append((v, p))
                total += p
        if total != 1:
            raise ValueError(f"hider probabilities sum to {total}, not 1")
        self.probs = tuple(items)

    @classmethod
    def for_graph(cls, G: RootedGraph, probs) -> "HiderDistribution":
        h = cls(probs)
        for v, _ in h.probs:
            if not (0 <= v < G.vertex_count) or v == G.root:
                raise ValueError(f"hider vertex {v} is not a non-root vertex")
        return h

    @classmethod
    def uniform(cls, G: RootedGraph) -> "HiderDistribution":
        n = G.n
        return cls.for_graph(G, {v: Fraction(1, n) for v in G.non_root_vertices()})

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.probs)

    def __iter__(self):
        return iter(self.probs)


@dataclass(frozen=True)
class MixedPayoffs:
    normalized: dict[int, Fraction]
    rho: Fraction
    witness: int


def mixed_payoffs(mixed: MixedSearch) -> MixedPayoffs:
    """Exact per-vertex expected normalized times and their maximum."""
    G = mixed.graph
    d = shortest_distances(G).dist
    expect = {v: ZERO for v in G.non_root_vertices()}
    for search, prob in mixed:
        for v, t in search.times.items():
            expect[v] += prob * t
    normalized = {v: expect[v] / d[v] for v in expect}
    witness = min(normalized, key=lambda v: (-normalized[v], v))
    return MixedPayoffs(normalized, normalized[witness], witness)


def expected_payoff(mixed: MixedSearch, hider: HiderDistribution) -> Fraction:
    """Bilinear expectation of the normalized search time."""
    d = shortest_distances(mixed.graph).dist
    total = ZERO
    for search, prob in mixed:
        for v, hv in hider:
            total += prob * hv * search.times[v] / d[v]
    return total


def pure_expected_payoff(search: ExpandingSearch, hider: HiderDistribution) -> Fraction:
    d = shortest_distances(search.graph).dist
    return sum((hv * search.times[v] / d[v] for v, hv in hider), ZERO)


@dataclass(frozen=True)
class HiderBound:
    """Lower bound on the randomized search ratio from a Hider mix.

    The bound argument is sound whenever every edge into an A-vertex costs
    at least its shortest-path entry length lam_v; `certified` records
    that.  It always holds on trees and unweighted graphs; on weighted
    non-trees a cheap side edge into an A-vertex can defeat it.
    """

    bound: Fraction
    vertices: frozenset[int]
    hider: HiderDistribution
    certified: bool


def lemma1_bound(G: RootedGraph, vertices) -> HiderBound:
    """Hider mix p_v proportional to lam_v * d(v) on a vertex set A.

    Yields rho(G) >= (sum_{i<=j} lam_i lam_j) / Delta(A) where
    Delta(A) = sum lam_v d(v); the numerator is order-independent,
    equal to (lam(A)^2 + sum lam_v^2) / 2.  See HiderBound.certified
    for the validity condition.
    """
    A = sorted(set(vertices))
    if not A:
        raise EmptySetError("lemma1_bound needs a non-empty vertex set")
    dmap = shortest_distances(G)
    for v in A:
        if v == G.root or not (0 <= v < G.vertex_count):
            raise EmptySetError(f"vertex {v} is not a non-root vertex")
    lam_total = sum((dmap.lam[v] for v in A), ZERO)
    sq_total = sum((dmap.lam[v] ** 2 for v in A), ZERO)
    delta = sum((dmap.lam[v] * dmap.dist[v] for v in A), ZERO)
    bound = (lam_total * lam_total + sq_total) / (2 * delta)
    hider = HiderDistribution.for_graph(
        G, {v: dmap.lam[v] * dmap.dist[v] / delta for v in A})
    certified = G.is_tree or G.is_unweighted or all(
        G.edges[idx].length >= dmap.lam[v]
        for v in A for idx, _ in G.adjacency(v))
    return HiderBound(bound, frozenset(A), hider, certified)


def best_prefix_bound(G: RootedGraph, all_subsets: bool = False) -> HiderBound:
    """Best Lemma-1 bound over distance-prefix sets A_r = {v : d(v) <= r}.

    With all_subsets=True (allowed up to 15 non-root vertices) the
    maximization runs over every non-empty vertex subset instead.
    """
    dmap = shortest_distances(G)
    candidates = []
    if all_subsets:
        others = G.non_root_vertices()
        if len(others) > 15:
            raise EmptySetError("all-subsets search is capped at 15 non-root vertices")
        for mask in range(1, 1 << len(others)):
            candidates.append([others[i] for i in range(len(others))
                               if mask >> i & 1])
    else:
        for r in sorted({dmap.dist[v] for v in G.non_root_vertices()}):
            candidates.append([v for v in G.non_root_vertices()
                               if dmap.dist[v] <= r])
    best = None
    for A in candidates:
        result = lemma1_bound(G, A)
        if best is None or result.bound > best.bound:
            best = result
    return best
