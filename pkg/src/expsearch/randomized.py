"""Randomized search strategies and their guarantees.

Contents:

- random depth-first search (RDFS): an equiprobable mix of a DFS and its
  mirror, whose per-vertex expected time obeys an exact rational law;
- the randomized deepening strategy: random dyadic radius cuts split the
  tree into levels, each searched by an RDFS of its contracted subtree;
  represented as a sampler plus a Monte-Carlo ratio estimator;
- the closed-form randomized search ratio of stars and the recursive
  two-strategy star mixture whose ratio never exceeds (n+1)/2;
- the inductive (n+1)/2 strategy for unweighted graphs; and
- lifting of star strategies to arbitrary graphs through their star
  closure, which never increases any expected search time.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotATreeError, OutOfRegimeError, UnsupportedGraphClassError
from .graphs import RootedGraph, ZERO, build_graph, shortest_distances, shortest_path_tree
from .rational import as_rational
from .search import (
    ExpandingSearch,
    MixedSearch,
    mixed_payoffs,
    search_ratio,
    validate_search,
)

_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


# -- random depth-first search -------------------------------------------------


def _tree_children(G: RootedGraph) -> list[list[int]]:
    """Children lists of a rooted tree, sorted by vertex id."""
    if not G.is_tree:
        raise NotATreeError("expected a rooted tree")
    dmap = shortest_distances(G)
    children = [[] for _ in range(G.vertex_count)]
    for v in range(G.vertex_count):
        if v != G.root:
            children[dmap.parent[v]].append(v)
    for c in children:
        c.sort()
    return children


def _dfs_sequence(G: RootedGraph, children) -> list[int]:
    """Parent-edge sequence of the DFS realizing the given child orders."""
    dmap = shortest_distances(G)
    seq = []

    def visit(u):
        for w in children[u]:
            seq.append(dmap.parent_edge[w])
            visit(w)

    visit(G.root)
    return seq


def _child_order_of(G: RootedGraph, search: ExpandingSearch) -> list[list[int]]:
    """Per-vertex child order realized by a DFS search; None check included."""
    dmap = shortest_distances(G)
    children = [[] for _ in range(G.vertex_count)]
    stack = [G.root]
    for v in search.vertex_order:
        parent = dmap.parent[v]
        while stack and stack[-1] != parent:
            stack.pop()
        if not stack:
            raise NotATreeError("edge sequence is not a depth-first search")
        children[parent].append(v)
        stack.append(v)
    return children


def rdfs(tree: RootedGraph, dfs=None) -> MixedSearch:
    """Equiprobable mix of a DFS and the DFS hitting leaves in reverse order.

    `dfs` may supply the forward DFS (an ExpandingSearch or edge sequence);
    by default children are taken in vertex-id order.  Every leaf v has
    expected search time exactly (lam(tree)+d(v))/2; internal vertices come
    in earlier, at (lam(tree)+d(v)-lam(subtree below v))/2.
    """
    children = _tree_children(tree)
    if dfs is not None:
        search = dfs if isinstance(dfs, ExpandingSearch) else validate_search(tree, dfs)
        if search.graph is not tree:
            raise NotATreeError("supplied DFS belongs to a different graph")
        children = _child_order_of(tree, search)
    else:
        search = validate_search(tree, _dfs_sequence(tree, children))
    mirrored = [list(reversed(c)) for c in children]
    mirror = validate_search(tree, _dfs_sequence(tree, mirrored))
    half = Fraction(1, 2)
    return MixedSearch([(search, half), (mirror, half)])


# -- randomized deepening --------------------------------------------------------


@dataclass(frozen=True)
class DeepeningSample:
    """One realization of the deepening strategy's randomness."""

    cut_points: tuple[float, ...]          # x_0 .. x_{t+1}
    levels: tuple[frozenset[int], ...]     # V_0 .. V_t over original ids
    phase_trees: tuple[RootedGraph | None, ...]
    search: ExpandingSearch
    t: int


def _deepening_t(dmap) -> int:
    t = 0
    radius = dmap.radius
    while 2**t <= radius:
        t += 1
    return t


def _phase_tree(G: RootedGraph, dmap, members: list[int]) -> RootedGraph:
    """Contracted level subtree: anchors outside the level collapse to root."""
    member_set = set(members)
    index = {old: new + 1 for new, old in enumerate(sorted(members))}
    edges = []
    for v in sorted(members):
        p = dmap.parent[v]
        anchor = index[p] if p in member_set else 0
        edges.append((anchor, index[v], dmap.lam[v]))
    labels = (G.label_of(G.root),) + tuple(G.label_of(v) for v in sorted(members))
    return RootedGraph(len(members) + 1, edges, root=0, labels=labels,
                       source_ids=(G.root,) + tuple(sorted(members)))


def deepening_sample(tree: RootedGraph, rng=None) -> DeepeningSample:
    """Draw cuts, build levels and contracted phase trees, realize RDFS coins.

    rng is a numpy Generator or a seed; the resulting edge sequence is a
    valid expanding search of the input tree.
    """
    if not tree.is_tree:
        raise NotATreeError("the deepening strategy is defined on trees")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    dmap = shortest_distances(tree)
    t = _deepening_t(dmap)
    cuts = [1.0]
    for i in range(1, t + 1):
        cuts.append(float(rng.uniform(2.0 ** (i - 1), 2.0**i)))
    cuts.append(2.0**t)
    levels = []
    for i in range(t + 1):
        levels.append(frozenset(
            v for v in tree.non_root_vertices()
            if cuts[i] <= dmap.dist[v] < cuts[i + 1]))
    phase_trees = []
    sequence = []
    for level in levels:
        if not level:
            phase_trees.append(None)
            continue
        sub = _phase_tree(tree, dmap, sorted(level))
        phase_trees.append(sub)
        children = _tree_children(sub)
        if rng.integers(0, 2):  # the RDFS coin of this phase
            children = [list(reversed(c)) for c in children]
        for idx in _dfs_sequence(sub, children):
            child = sub.edges[idx].v  # phase edges are (anchor, member)
            sequence.append(dmap.parent_edge[sub.source_ids[child]])
    search = validate_search(tree, sequence)
    return DeepeningSample(tuple(cuts), tuple(levels), tuple(phase_trees),
                           search, t)


@dataclass(frozen=True)
class DeepeningEstimate:
    """Monte-Carlo estimate of the deepening strategy's expected ratios."""

    means: dict[int, float]
    halfwidths: dict[int, float]
    rho_hat: float
    witness: int
    rho_halfwidth: float
    trials: int
    confidence: float


def _conditional_profile(vertices, dmap, parent, level_of):
    """Expected times given the level split, RDFS coins averaged out.

    Per level i the contracted tree G_i is implicit: within-level parent
    chains give depths and below-subtree sums, and the RDFS law yields
    E[T | levels] = prefix + (lam(G_i) + depth(v) - below(v)) / 2.
    """
    by_level: dict[int, list[int]] = {}
    for v in vertices:
        by_level.setdefault(level_of[v], []).append(v)
    out = {}
    prefix = ZERO
    for i in sorted(by_level):
        members = sorted(by_level[i], key=lambda v: (dmap.dist[v], v))
        lam_total = sum((dmap.lam[v] for v in members), ZERO)
        member_set = set(members)
        depth = {}
        for v in members:
            p = parent[v]
            depth[v] = dmap.lam[v] + (depth[p] if p in member_set else ZERO)
        below = {v: ZERO for v in members}
        for v in reversed(members):
            p = parent[v]
            if p in member_set:
                below[p] += below[v] + dmap.lam[v]
        for v in members:
            out[v] = prefix + (lam_total + depth[v] - below[v]) / 2
        prefix += lam_total
    return out


def deepening_ratio_estimate(G: RootedGraph, trials: int, seed=None,
                             confidence: float = 0.99) -> DeepeningEstimate:
    """Estimate per-vertex expected normalized times of the deepening strategy.

    Runs on the graph itself if a tree, else on its shortest path tree
    (valid for unweighted graphs).  Each trial draws the radius cuts; the
    two RDFS realizations per phase are averaged analytically, which leaves
    the estimator unbiased with reduced variance.  Confidence intervals use
    the normal approximation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if G.is_tree:
        tree = G
    elif G.is_unweighted:
        tree = shortest_path_tree(G)
    else:
        raise NotATreeError(
            "deepening is defined for trees and unweighted graphs")
    dmap = shortest_distances(tree)
    vertices = list(tree.non_root_vertices())
    t = _deepening_t(dmap)
    # group vertices into dyadic classes; only one cut matters per vertex
    classes = []
    for i in range(1, t + 1):
        lo, hi = Fraction(2) ** (i - 1), Fraction(2)**i
        members = sorted((v for v in vertices if lo <= dmap.dist[v] < hi),
                         key=lambda v: (dmap.dist[v], v))
        if members:
            thresholds = np.array([float((dmap.dist[v] - lo) / lo)
                                   for v in members])
            classes.append((i, members, thresholds))

    rng = np.random.default_rng(seed)
    if classes:
        split_cols = []
        for _, members, thresholds in classes:
            u = rng.random(trials)
            split_cols.append(np.searchsorted(thresholds, u, side="left"))
        patterns, counts = np.unique(np.stack(split_cols, axis=1), axis=0,
                                     return_counts=True)
    else:  # unreachable for a valid graph; kept for safety
        patterns, counts = np.zeros((1, 0), dtype=int), np.array([trials])

    index_of = {v: i for i, v in enumerate(vertices)}
    dist_f = {v: float(dmap.dist[v]) for v in vertices}
    mean = np.zeros(len(vertices))
    second = np.zeros(len(vertices))
    for pattern, count in zip(patterns, counts):
        level_of = {}
        for (i, members, _), s in zip(classes, pattern):
            for j, v in enumerate(members):
                level_of[v] = i if j >= s else i - 1
        profile = _conditional_profile(vertices, dmap, dmap.parent, level_of)
        vec = np.array([float(profile[v]) / dist_f[v] for v in vertices])
        w = count / trials
        mean += w * vec
        second += w * vec * vec

    if trials > 1:
        var = np.maximum(second - mean * mean, 0.0) * trials / (trials - 1)
        half = _Z99 * np.sqrt(var / trials)
    else:
        half = np.zeros(len(vertices))
    means = {v: float(mean[index_of[v]]) for v in vertices}
    halfwidths = {v: float(half[index_of[v]]) for v in vertices}
    witness = max(vertices, key=lambda v: (means[v], -v))
    return DeepeningEstimate(means, halfwidths, means[witness], witness,
                             halfwidths[witness], trials, confidence)


# -- stars: closed form and recursive strategy ----------------------------------


def star_rho_formula(lengths) -> tuple[Fraction, int]:
    """Exact rho of a star: max over k of prefix sum-products ratio.

    Returns (rho, k*) with the smallest maximizing prefix size k*.
    Lengths are sorted non-decreasingly first.
    """
    c = sorted(as_rational(x) for x in lengths)
    if not c:
        raise ValueError("star needs at least one edge")
    best = None
    best_k = None
    mu = ZERO
    sq = ZERO
    for k, x in enumerate(c, start=1):
        mu += x
        sq += x * x
        value = (mu * mu + sq) / (2 * sq)
        if best is None or value > best:
            best, best_k = value, k
    return best, best_k


def _solve_2x2(a: Fraction, b: Fraction, c: Fraction, d: Fraction
               ) -> tuple[Fraction, Fraction]:
    """Value and row-1 weight of [[a,b],[c,d]], rows minimizing.

    Saddle points resolve to pure strategies, preferring row 1 on ties.
    """
    minimax = min(max(a, b), max(c, d))
    maximin = max(min(a, c), min(b, d))
    if minimax == maximin:
        q = Fraction(1) if max(a, b) <= max(c, d) else ZERO
        return minimax, q
    den = a - b - c + d
    q = (d - c) / den
    value = (a * d - b * c) / den
    if not (0 < q < 1):
        raise AssertionError("mixed 2x2 solution outside (0,1)")
    return value, q


@dataclass(frozen=True)
class StarState:
    """State of the recursive star strategy after k edges."""

    k: int
    lengths: tuple[Fraction, ...]
    mu: Fraction
    square_sum: Fraction
    rho: Fraction
    times: tuple[Fraction, ...]
    q_append: Fraction | None  # weight on the append-last branch building this state


@dataclass(frozen=True)
class StarRecursiveResult:
    states: tuple[StarState, ...]
    rho: Fraction
    vertex_ids: tuple[int, ...]
    mixed: MixedSearch | None


def game_value_V(k: int, d_over_mu) -> Fraction:
    """Closed-form value of the uniform-bound star step game.

    Valid for 1/k <= d_over_mu <= 2/k (the mixed-equilibrium regime of the
    bounding game whose entries replace rho_k by (k+1)/2 and the square sum
    by mu^2/k).
    """
    r = as_rational(d_over_mu)
    if k < 1:
        raise OutOfRegimeError("k must be >= 1")
    if not (Fraction(1, k) <= r <= Fraction(2, k)):
        raise OutOfRegimeError(
            f"d/mu = {r} outside [{Fraction(1, k)}, {Fraction(2, k)}]")
    return Fraction(k, 2) + 1 - (Fraction(k, 2) * (r - Fraction(1, k)) ** 2
                                 / (r * r + Fraction(1, k)))


def star_recursive_strategy(star, materialize: bool | None = None
                            ) -> StarRecursiveResult:
    """Build the two-branch recursive star strategy s_1, s_2, ..., s_n.

    `star` is a star RootedGraph or a sequence of edge lengths.  Each step
    mixes appending the new edge last against inserting it at a
    length-proportional random position, with the weight solving the
    associated 2x2 game; the per-vertex expected times follow the same
    recurrences exactly.  The explicit mixed search (materialize, default
    for n <= 7) realizes insertion positions independently per support
    order, preserving all expectations.
    """
    if isinstance(star, RootedGraph):
        if not star.is_star:
            raise UnsupportedGraphClassError("expected a star graph")
        G = star
        leaves = sorted(G.non_root_vertices(),
                        key=lambda v: (shortest_distances(G).dist[v], v))
        c = [shortest_distances(G).dist[v] for v in leaves]
    else:
        c = sorted(as_rational(x) for x in star)
        G = None
        leaves = list(range(1, len(c) + 1))
    n = len(c)
    if n == 0:
        raise ValueError("star needs at least one edge")
    if materialize is None:
        materialize = n <= 7
    if materialize and G is None:
        G = build_graph(n + 1, [(0, i + 1, c[i]) for i in range(n)])

    support = {(leaves[0],): Fraction(1)} if materialize else None
    length_of = dict(zip(leaves, c))
    times = [c[0]]
    mu, sq = c[0], c[0] * c[0]
    rho = Fraction(1)
    states = [StarState(1, (c[0],), mu, sq, rho, (c[0],), None)]
    for k in range(1, n):
        dk = c[k]
        row_plus = (rho, mu / dk + 1)
        row_ins = (rho * (1 + dk / mu),
                   mu / (2 * dk) + 1 - sq / (2 * mu * dk))
        value, q = _solve_2x2(row_plus[0], row_plus[1], row_ins[0], row_ins[1])
        stretch = 1 + (1 - q) * dk / mu
        times = [t * stretch for t in times]
        times.append(q * (mu + dk) + (1 - q) * (mu / 2 + dk - sq / (2 * mu)))
        rho_new = max(t / ci for t, ci in zip(times, c[:k + 1]))
        if rho_new != value:
            raise AssertionError("star recursion drifted from its game value")
        if materialize:
            new_support: dict[tuple[int, ...], Fraction] = {}
            v_new = leaves[k]
            for order, pr in support.items():
                if q > 0:
                    key = order + (v_new,)
                    new_support[key] = new_support.get(key, ZERO) + pr * q
                if q < 1:
                    for pos, v_at in enumerate(order):
                        w = pr * (1 - q) * length_of[v_at] / mu
                        key = order[:pos] + (v_new,) + order[pos:]
                        new_support[key] = new_support.get(key, ZERO) + w
            support = new_support
        mu += dk
        sq += dk * dk
        rho = rho_new
        states.append(StarState(k + 1, tuple(c[:k + 1]), mu, sq, rho,
                                tuple(times), q))
    mixed = None
    if materialize:
        root = G.root
        pairs = []
        for order, pr in support.items():
            seq = [G.edge_between(root, v) for v in order]
            pairs.append((validate_search(G, seq), pr))
        mixed = MixedSearch(pairs)
    return StarRecursiveResult(tuple(states), rho, tuple(leaves), mixed)


# -- unweighted inductive strategy ----------------------------------------------


def unweighted_inductive_strategy(G: RootedGraph) -> MixedSearch:
    """Recursive mixture achieving rho <= (n+1)/2 on unweighted graphs.

    Peels a farthest vertex (largest id on ties), recursively searches the
    remainder, then mixes "shortest path to the peeled vertex first" with
    probability 1/(2 d) against "peeled vertex last".
    """
    if not G.is_unweighted:
        raise UnsupportedGraphClassError("inductive strategy needs unit lengths")
    dmap = shortest_distances(G)
    d = dmap.dist
    remaining = set(G.non_root_vertices())
    peel = []
    while len(remaining) > 1:
        v = max(remaining, key=lambda u: (d[u], u))
        peel.append(v)
        remaining.remove(v)
    base = remaining.pop()
    base_edge = G.edge_between(G.root, base)
    if base_edge is None:
        raise AssertionError("closest vertex must neighbour the root")
    covered = {G.root, base}
    support: dict[tuple[int, ...], Fraction] = {(base_edge,): Fraction(1)}
    for v_star in reversed(peel):
        p_star = Fraction(1, 2 * d[v_star])
        # canonical connecting edge and root path for v_star
        conn = min(idx for idx, w in G.adjacency(v_star) if w in covered)
        path = []
        w = v_star
        while w != G.root:
            path.append(dmap.parent_edge[w])
            w = dmap.parent[w]
        path.reverse()
        new_support: dict[tuple[int, ...], Fraction] = {}

        def put(key, pr):
            new_support[key] = new_support.get(key, ZERO) + pr

        for seq, pr in support.items():
            put(seq + (conn,), pr * (1 - p_star))
            lifted = list(path)
            reached = {G.root}
            for idx in path:
                e = G.edges[idx]
                reached.add(e.u)
                reached.add(e.v)
            for idx in seq:
                e = G.edges[idx]
                iu, iv = e.u in reached, e.v in reached
                if iu and iv:
                    continue
                lifted.append(idx)
                reached.add(e.v if iu else e.u)
            put(tuple(lifted), pr * p_star)
        support = new_support
        covered.add(v_star)
    return MixedSearch([(validate_search(G, seq), pr)
                        for seq, pr in support.items()])


# -- lifting star strategies -----------------------------------------------------


def _path_from_region(G: RootedGraph, region: set[int], target: int) -> list[int]:
    """Edge indices of a deterministic shortest path from a vertex set."""
    n = G.vertex_count
    dist = [None] * n
    heap = []
    for v in region:
        dist[v] = ZERO
        heap.append((ZERO, v))
    heapq.heapify(heap)
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
    path = []
    v = target
    while v not in region:
        for idx, u in G.adjacency(v):  # sorted by neighbour id
            if dist[u] + G.edges[idx].length == dist[v]:
                path.append(idx)
                v = u
                break
        else:
            raise AssertionError("no predecessor found on shortest path")
    path.reverse()
    return path


def lift_star_strategy(G: RootedGraph, star_mixed: MixedSearch) -> MixedSearch:
    """Replay a star-closure strategy on G by greedy shortest-path extension.

    Every support order visits its vertices through shortest paths from the
    already-searched region, so each vertex's search time on G is at most
    its search time on the star.
    """
    star = star_mixed.graph
    dmap = shortest_distances(G)
    if (not star.is_star or star.vertex_count != G.vertex_count
            or star.root != G.root):
        raise ValueError("mixed strategy is not defined on the star closure of G")
    star_d = shortest_distances(star).dist
    for v in G.non_root_vertices():
        if star_d[v] != dmap.dist[v]:
            raise ValueError("star edge lengths must equal distances in G")
    pairs = []
    for order_search, pr in star_mixed:
        reached = {G.root}
        seq = []
        for v in order_search.vertex_order:
            if v in reached:
                continue
            for idx in _path_from_region(G, reached, v):
                e = G.edges[idx]
                seq.append(idx)
                reached.add(e.u)
                reached.add(e.v)
        pairs.append((validate_search(G, seq), pr))
    return MixedSearch(pairs)
