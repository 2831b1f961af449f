"""Exact randomized search ratio on small instances.

The Searcher-Hider game is finite once searches are enumerated: rows are
expanding searches (restricted, without loss, to searches that connect each
new vertex by a minimum-length available edge), columns are non-root
vertices, and entries are exact rational normalized search times.

The matrix game is solved by linear programming (HiGHS) and the solution is
then *repaired* into exact rational mixtures from the LP supports and
re-verified against the full matrix in rational arithmetic.  When the
repair succeeds the duality-gap certificate is exactly zero; otherwise the
float mixtures are kept and their exact gap is reported, which must stay
within the requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .errors import CapExceededError, NumericalFailureError
from .graphs import RootedGraph, ZERO, shortest_distances
from .search import ExpandingSearch, HiderDistribution, MixedSearch

DEFAULT_CAP = 10**7
_PRUNE_LIMIT = 1500
_SUPPORT_TOL = 1e-9


# -- enumeration -------------------------------------------------------------


def _iter_search_rows(G: RootedGraph):
    """Yield (edge_indices, vertex_order, times) for every canonical search.

    Canonical: vertex orders consistent with connectivity, each new vertex
    attached by its minimum-(length, edge id) edge into the searched tree.
    Orders are produced lexicographically by vertex id.
    """
    n = G.vertex_count
    edges = G.edges
    reached = [False] * n
    reached[G.root] = True
    seq: list[int] = []
    order: list[int] = []
    times: list[Fraction] = []

    def candidates():
        found = []
        for v in range(n):
            if reached[v]:
                continue
            best = None
            for idx, w in G.adjacency(v):
                if reached[w]:
                    key = (edges[idx].length, idx)
                    if best is None or key < best:
                        best = key
            if best is not None:
                found.append((v, best[1]))
        return found

    def rec(t: Fraction):
        cand = candidates()
        if not cand:
            yield tuple(seq), tuple(order), tuple(times)
            return
        for v, idx in cand:
            reached[v] = True
            seq.append(idx)
            order.append(v)
            times.append(t + edges[idx].length)
            yield from rec(times[-1])
            reached[v] = False
            seq.pop()
            order.pop()
            times.pop()

    yield from rec(ZERO)


def count_searches(G: RootedGraph, cap: int = DEFAULT_CAP) -> int:
    """Number of canonical expanding searches; raises above the cap."""
    n = G.vertex_count
    reached = [False] * n
    reached[G.root] = True
    count = 0

    def rec(depth):
        nonlocal count
        if depth == n - 1:
            count += 1
            if count > cap:
                raise CapExceededError(
                    f"more than {cap} expanding searches (cap exceeded)")
            return
        for v in range(n):
            if reached[v]:
                continue
            if any(reached[w] for _, w in G.adjacency(v)):
                reached[v] = True
                rec(depth + 1)
                reached[v] = False

    rec(0)
    return count


def enumerate_searches(G: RootedGraph, cap: int = DEFAULT_CAP) -> list[ExpandingSearch]:
    """All canonical expanding searches (see module docstring), under a cap."""
    count_searches(G, cap)
    out = []
    for seq, order, times in _iter_search_rows(G):
        out.append(ExpandingSearch(G, seq, order, dict(zip(order, times)),
                                   _trusted=True))
    return out


# -- payoff matrix -----------------------------------------------------------


@dataclass(frozen=True)
class PayoffMatrix:
    """Rows: searches; columns: non-root vertices; entries: exact T-hat."""

    vertices: tuple[int, ...]
    entries: tuple[tuple[Fraction, ...], ...]
    searches: tuple[ExpandingSearch, ...] | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.vertices)


def payoff_matrix(G: RootedGraph, searches) -> PayoffMatrix:
    d = shortest_distances(G).dist
    vertices = G.non_root_vertices()
    unit = [d[v] == 1 for v in vertices]
    rows = []
    for s in searches:
        row = tuple(s.times[v] if u else s.times[v] / d[v]
                    for v, u in zip(vertices, unit))
        rows.append(row)
    for row in rows:
        for x in row:
            if x < 1:
                raise NumericalFailureError("payoff entry below 1; invalid search")
    return PayoffMatrix(vertices, tuple(rows), tuple(searches))


# -- matrix game solving -----------------------------------------------------


@dataclass
class GameSolution:
    """Value and optimal mixtures, with a duality-gap certificate.

    When `exact` is true the mixtures are rational, verified against every
    row and column of the matrix, and certificate_gap is exactly 0.
    """

    value: Fraction
    row_probs: tuple[Fraction, ...]
    col_probs: tuple[Fraction, ...]
    certificate_gap: Fraction
    exact: bool
    row_mix: MixedSearch | None = None
    col_mix: HiderDistribution | None = None
    vertices: tuple[int, ...] | None = None
    sigma: Fraction | None = None
    sigma_index: int | None = None
    search_count: int | None = None


def _solve_lp(Mf: np.ndarray):
    R, C = Mf.shape
    A_ub = np.hstack([-Mf, np.ones((R, 1))])
    res = linprog(c=[0.0] * C + [-1.0], A_ub=A_ub, b_ub=np.zeros(R),
                  A_eq=[[1.0] * C + [0.0]], b_eq=[1.0],
                  bounds=[(0, None)] * C + [(None, None)], method="highs")
    if not res.success:
        raise NumericalFailureError(f"LP solver failed: {res.message}")
    h = np.clip(res.x[:C], 0.0, None)
    value = float(res.x[C])
    p = np.clip(-np.asarray(res.ineqlin.marginals), 0.0, None)
    total = p.sum()
    if total <= 0:
        p = np.full(R, 1.0 / R)
    else:
        p = p / total
    return value, h, p


def _prune_dominated(Mf: np.ndarray) -> list[int]:
    """Indices of rows not strictly dominated (float comparison with margin)."""
    R = Mf.shape[0]
    keep = np.ones(R, dtype=bool)
    for r in range(R):
        if not keep[r]:
            continue
        worse = ((Mf >= Mf[r] - 1e-12).all(axis=1)
                 & (Mf > Mf[r] + 1e-12).any(axis=1) & keep)
        worse[r] = False
        keep[worse] = False
    return [int(i) for i in np.nonzero(keep)[0]]


def _solve_linear_exact(rows, rhs, nvars):
    """Particular rational solution of possibly overdetermined A x = b.

    Free variables are pinned to zero.  Returns None when inconsistent.
    """
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(nvars):
        pr = next((i for i in range(r, len(aug)) if aug[i][col] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    x = [ZERO] * nvars
    for i, col in enumerate(pivots):
        x[col] = aug[i][nvars]
    # residual re-check against the original system covers inconsistency
    # and any free variables the zero-pinning choice cannot satisfy
    for row, b in zip(rows, rhs):
        if sum((a * xi for a, xi in zip(row, x)), ZERO) != b:
            return None
    return x


def _verify_hider_side(entries, Mf, h_full, value) -> bool:
    """Exact check that every row pays at least `value` against h.

    Rows clearly above value in floating point (with a generous margin
    covering accumulated rounding) are accepted without exact arithmetic;
    the rest are checked with gcd-free integer accumulation, which is much
    faster than Fraction sums when many rows are tight.
    """
    C = len(entries[0])
    h_f = np.array([float(x) for x in h_full])
    sums = Mf @ h_f
    margin = max(1e-6, float(np.max(np.abs(Mf))) * C * 1e-12)
    suspects = np.nonzero(sums < float(value) + margin)[0]
    h_items = [(c, x.numerator, x.denominator)
               for c, x in enumerate(h_full) if x != 0]
    vn, vd = value.numerator, value.denominator
    for r in suspects:
        row = entries[r]
        num, den = 0, 1
        for c, hn, hd in h_items:
            x = row[c]
            n2 = x.numerator * hn
            d2 = x.denominator * hd
            num = num * d2 + n2 * den
            den *= d2
        if num * vd < vn * den:
            return False
    return True


def _repair_hider(entries, Mf, equality_rows, col_support):
    """Exact optimal Hider mix from equality rows; (value, h) or None.

    The candidate is verified against every row of the full matrix.
    """
    C = len(entries[0])
    rows = []
    rhs = []
    for r in equality_rows:
        rows.append([entries[r][c] for c in col_support] + [Fraction(-1)])
        rhs.append(ZERO)
    rows.append([Fraction(1)] * len(col_support) + [ZERO])
    rhs.append(Fraction(1))
    sol = _solve_linear_exact(rows, rhs, len(col_support) + 1)
    if sol is None:
        return None
    h_vals, value = sol[:-1], sol[-1]
    if any(x < 0 for x in h_vals):
        return None
    h_full = [ZERO] * C
    for c, x in zip(col_support, h_vals):
        h_full[c] = x
    if not _verify_hider_side(entries, Mf, h_full, value):
        return None
    return value, tuple(h_full)


def _repair_searcher(entries, row_support, equality_cols, value):
    """Exact Searcher mix hitting `value`: supported rows, tight columns.

    Verified exactly against every column; returns p or None.
    """
    R = len(entries)
    C = len(entries[0])
    rows = []
    rhs = []
    for c in equality_cols:
        rows.append([entries[r][c] for r in row_support])
        rhs.append(value)
    rows.append([Fraction(1)] * len(row_support))
    rhs.append(Fraction(1))
    sol = _solve_linear_exact(rows, rhs, len(row_support))
    if sol is None or any(x < 0 for x in sol):
        return None
    p_full = [ZERO] * R
    for r, x in zip(row_support, sol):
        p_full[r] = x
    for c in range(C):
        paid = sum((p_full[r] * entries[r][c] for r in row_support), ZERO)
        if paid > value:
            return None
    return tuple(p_full)


def _solve_lp_searcher(Mf: np.ndarray):
    """Direct Searcher-side LP: a vertex mixture minimizing the max column."""
    R, C = Mf.shape
    A_ub = np.hstack([Mf.T, -np.ones((C, 1))])
    res = linprog(c=[0.0] * R + [1.0], A_ub=A_ub, b_ub=np.zeros(C),
                  A_eq=[[1.0] * R + [0.0]], b_eq=[1.0],
                  bounds=[(0, None)] * R + [(None, None)], method="highs")
    if not res.success:
        raise NumericalFailureError(f"LP solver failed: {res.message}")
    p = np.clip(res.x[:R], 0.0, None)
    total = p.sum()
    return float(res.x[R]), (p / total if total > 0 else np.full(R, 1.0 / R))


def solve_matrix_game(entries, tolerance: float = 1e-9) -> GameSolution:
    """Solve a zero-sum matrix game (rows minimize) with a gap certificate."""
    entries = tuple(tuple(Fraction(x) for x in row) for row in entries)
    R = len(entries)
    C = len(entries[0])
    Mf = np.array([[float(x) for x in row] for row in entries])

    def attempt(row_subset):
        sub = Mf[row_subset]
        value_f, h_f, p_sub = _solve_lp(sub)
        col_support = [c for c in range(C) if h_f[c] > _SUPPORT_TOL]
        # Hider side: equality rows from the duals, else from float tightness
        candidates = [
            [row_subset[i] for i in range(len(row_subset))
             if p_sub[i] > _SUPPORT_TOL],
            [row_subset[i] for i in range(len(row_subset))
             if sub[i] @ h_f < value_f + 1e-7],
        ]
        hider = None
        for equality_rows in candidates:
            if not equality_rows:
                continue
            # any subset of truly-tight rows yields a consistent system
            hider = _repair_hider(entries, Mf, equality_rows[:2000], col_support)
            if hider is not None:
                break
        if hider is None:
            p_full = np.zeros(R)
            p_full[row_subset] = p_sub
            return None, (value_f, h_f, p_full)
        value, h_full = hider
        # Searcher side: try the duals' support, then a dedicated LP vertex
        row_support = [row_subset[i] for i in range(len(row_subset))
                       if p_sub[i] > _SUPPORT_TOL]
        p_exact = None
        if 0 < len(row_support) <= 200:
            p_exact = _repair_searcher(entries, row_support, col_support, value)
        if p_exact is None:
            u_f, p_direct = _solve_lp_searcher(sub)
            support = [row_subset[i] for i in range(len(row_subset))
                       if p_direct[i] > _SUPPORT_TOL]
            cols = p_direct @ sub
            tight_cols = [c for c in range(C) if cols[c] > u_f - 1e-7]
            if 0 < len(support) <= 200:
                p_exact = _repair_searcher(entries, support, tight_cols, value)
        if p_exact is None:
            p_full = np.zeros(R)
            p_full[row_subset] = p_sub
            return None, (value_f, h_f, p_full)
        return (value, p_exact, h_full), None

    row_subset = (_prune_dominated(Mf) if R <= _PRUNE_LIMIT else list(range(R)))
    repaired, fallback = attempt(row_subset)
    if repaired is None and len(row_subset) < R:
        repaired, fallback = attempt(list(range(R)))
    if repaired is not None:
        value, p, h = repaired
        return GameSolution(value=value, row_probs=p, col_probs=h,
                            certificate_gap=ZERO, exact=True)

    value_f, h_f, p_f = fallback
    h = [Fraction(x) for x in np.clip(h_f, 0, None)]
    hs = sum(h, ZERO)
    h = [x / hs for x in h]
    p = [Fraction(x) for x in np.clip(p_f, 0, None)]
    ps = sum(p, ZERO)
    p = [x / ps for x in p]
    lower = min(sum((row[c] * h[c] for c in range(C)), ZERO) for row in entries)
    upper = max(sum((p[r] * entries[r][c] for r in range(R)), ZERO)
                for c in range(C))
    gap = upper - lower
    if float(gap) > tolerance:
        raise NumericalFailureError(
            f"duality gap {float(gap):.3e} exceeds tolerance {tolerance:.1e}")
    return GameSolution(value=(upper + lower) / 2, row_probs=tuple(p),
                        col_probs=tuple(h), certificate_gap=gap, exact=False)


def solve_zero_sum(matrix: PayoffMatrix, tolerance: float = 1e-9) -> GameSolution:
    """Solve the search game for a payoff matrix built by payoff_matrix()."""
    sol = solve_matrix_game(matrix.entries, tolerance)
    sol.vertices = matrix.vertices
    sol.col_mix = HiderDistribution(
        {v: q for v, q in zip(matrix.vertices, sol.col_probs) if q > 0})
    if matrix.searches is not None:
        sol.row_mix = MixedSearch(
            [(s, q) for s, q in zip(matrix.searches, sol.row_probs) if q > 0])
    return sol


def exact_rho(G: RootedGraph, cap: int = DEFAULT_CAP,
              tolerance: float = 1e-9) -> GameSolution:
    """Exact rho(G).  Also reports sigma over the enumerated searches.

    On trees and unweighted graphs the returned value provably satisfies
    sigma/2 <= rho <= sigma; the caller can re-check via .sigma.
    """
    searches = enumerate_searches(G, cap)
    matrix = payoff_matrix(G, searches)
    sol = solve_zero_sum(matrix, tolerance)
    sigma = None
    sigma_index = None
    for i, row in enumerate(matrix.entries):
        m = max(row)
        if sigma is None or m < sigma:
            sigma, sigma_index = m, i
    sol.sigma = sigma
    sol.sigma_index = sigma_index
    sol.search_count = len(searches)
    if sol.exact:
        if sol.value > sigma:
            raise NumericalFailureError("game value exceeded sigma; oracle bug")
        if (G.is_tree or G.is_unweighted) and 2 * sol.value < sigma:
            raise NumericalFailureError("game value below sigma/2; oracle bug")
    return sol
