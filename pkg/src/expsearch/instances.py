"""Instance generators and the 3-SAT hardness reduction.

Generated lengths are rationals with two decimal places so that file
round-trips are bit-exact.  All families are reproducible from a seed.

The reduction builds, for a 3-CNF formula with n variables and m >= n
clauses, a rooted graph whose deterministic search ratio is at most
R = 1 + (2/3)(n + m) exactly when the formula is satisfiable.  A witness
tree for any satisfying assignment turns into an explicit search meeting
the threshold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParamsError, PreconditionViolatedError
from .graphs import RootedGraph, build_graph
from .search import ExpandingSearch, search_ratio, validate_search


def fig1_graph() -> RootedGraph:
    """The running 5-vertex example: edges OA=3, OB=2, BC=2, BD=1."""
    return build_graph(5, [(0, 1, 3), (0, 2, 2), (2, 3, 2), (2, 4, 1)],
                       labels=("O", "A", "B", "C", "D"))


def _rand_length(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    lo_c = int(lo * 100)
    hi_c = int(hi * 100)
    return Fraction(rng.randint(lo_c, hi_c), 100)


def _check_range(lo, hi):
    lo, hi = Fraction(lo), Fraction(hi)
    if lo < 1 or hi < lo:
        raise InvalidParamsError(f"length range [{lo}, {hi}] must sit inside [1, inf)")
    return lo, hi


def gen_instance(family: str, seed: int = 0, **params) -> RootedGraph:
    """Reproducible instance families.

    - uniform-star: n, length=1
    - random-star:  n, lo=1, hi=10
    - random-tree:  n, lo=1, hi=5
    - random-unweighted: n, p=0.5 (edge probability; resampled until connected)
    - fig1 (ignores seed)
    """
    rng = random.Random(seed)
    if family == "fig1":
        return fig1_graph()
    n = params.get("n")
    if n is None or n < 1:
        raise InvalidParamsError(f"family {family!r} needs n >= 1")
    if family == "uniform-star":
        length = Fraction(params.get("length", 1))
        if length < 1:
            raise InvalidParamsError("uniform-star length must be >= 1")
        return build_graph(n + 1, [(0, v, length) for v in range(1, n + 1)])
    if family == "random-star":
        lo, hi = _check_range(params.get("lo", 1), params.get("hi", 10))
        return build_graph(n + 1, [(0, v, _rand_length(rng, lo, hi))
                                   for v in range(1, n + 1)])
    if family == "random-tree":
        lo, hi = _check_range(params.get("lo", 1), params.get("hi", 5))
        edges = [(rng.randrange(0, v), v, _rand_length(rng, lo, hi))
                 for v in range(1, n + 1)]
        return build_graph(n + 1, edges)
    if family == "random-unweighted":
        p = float(params.get("p", 0.5))
        if not (0 <= p <= 1):
            raise InvalidParamsError("edge probability must lie in [0, 1]")
        while True:  # resample until connected; deterministic given the seed
            edges = [(u, v, 1) for u in range(n + 1) for v in range(u + 1, n + 1)
                     if rng.random() < p]
            present = {w for e in edges for w in e[:2]}
            if len(present) < n + 1:
                continue
            try:
                return build_graph(n + 1, edges)
            except Exception:
                continue
    if family == "random-weighted":
        lo, hi = _check_range(params.get("lo", 1), params.get("hi", 10))
        p = float(params.get("p", 0.5))
        while True:
            edges = [(u, v, _rand_length(rng, lo, hi))
                     for u in range(n + 1) for v in range(u + 1, n + 1)
                     if rng.random() < p]
            present = {w for e in edges for w in e[:2]}
            if len(present) < n + 1:
                continue
            try:
                return build_graph(n + 1, edges)
            except Exception:
                continue
    raise InvalidParamsError(f"unknown instance family {family!r}")


# -- 3-SAT reduction ------------------------------------------------------------


@dataclass(frozen=True)
class SatInstance:
    """3-CNF formula: literals are +-(1-based variable index), 3 per clause."""

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise InvalidParamsError("formula needs at least one variable")
        for clause in self.clauses:
            if len(clause) != 3:
                raise InvalidParamsError("every clause must have exactly 3 literal slots")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise InvalidParamsError(f"literal {lit} out of range")

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment) -> bool:
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause)
                   for clause in self.clauses)


@dataclass(frozen=True)
class ReductionOutput:
    """Reduced graph plus the decision threshold R = 1 + (2/3)(n+m)."""

    formula: SatInstance
    graph: RootedGraph
    threshold: Fraction
    roles: dict[int, str]
    hub: int
    clause_vertices: tuple[int, ...]
    variable_vertices: tuple[int, ...]
    literal_vertices: dict[tuple[int, int], int]   # (variable index, polarity)
    degenerate_clauses: tuple[int, ...]            # clauses with repeated literals


def sat_reduce(formula: SatInstance) -> ReductionOutput:
    """Build the hardness gadget graph for a 3-CNF formula with m >= n.

    Unit edges pair each variable vertex and the hub P with both literal
    vertices; clause vertices attach to their literals by length-2 edges
    (one per distinct literal); the root links to P, clauses, and variables
    by length-3 edges.  Vertex distances then partition into 3 (P, clause,
    variable vertices) and 4 (literal vertices).
    """
    n, m = formula.n_vars, formula.n_clauses
    if m < n:
        raise PreconditionViolatedError(
            f"the reduction needs at least as many clauses as variables (m={m} < n={n})")
    labels = ["O", "P"]
    clause_vertices = []
    for j in range(1, m + 1):
        clause_vertices.append(len(labels))
        labels.append(f"C{j}")
    variable_vertices = []
    for i in range(1, n + 1):
        variable_vertices.append(len(labels))
        labels.append(f"X{i}")
    literal_vertices = {}
    for i in range(1, n + 1):
        for b in (0, 1):
            literal_vertices[(i, b)] = len(labels)
            labels.append(f"X{i}^{b}")

    P = 1
    edges = []
    for i in range(1, n + 1):
        xi = variable_vertices[i - 1]
        for b in (0, 1):
            edges.append((xi, literal_vertices[(i, b)], 1))
        for b in (0, 1):
            edges.append((P, literal_vertices[(i, b)], 1))
    degenerate = []
    for j, clause in enumerate(formula.clauses, start=1):
        targets = []
        for lit in clause:
            i, b = abs(lit), 1 if lit > 0 else 0
            targets.append(literal_vertices[(i, b)])
        if len(set(targets)) < 3:
            degenerate.append(j)
        for v in sorted(set(targets)):
            edges.append((clause_vertices[j - 1], v, 2))
    for j in range(m):
        edges.append((0, clause_vertices[j], 3))
    for i in range(n):
        edges.append((0, variable_vertices[i], 3))
    edges.append((0, P, 3))

    graph = build_graph(len(labels), edges, labels=labels)
    roles = {0: "root", P: "hub"}
    roles.update({v: "clause" for v in clause_vertices})
    roles.update({v: "variable" for v in variable_vertices})
    roles.update({v: "literal" for v in literal_vertices.values()})
    return ReductionOutput(formula, graph, 1 + Fraction(2, 3) * (n + m), roles,
                           P, tuple(clause_vertices), tuple(variable_vertices),
                           literal_vertices, tuple(degenerate))


@dataclass(frozen=True)
class WitnessSearch:
    search: ExpandingSearch
    sigma: Fraction
    satisfied: bool
    unsatisfied_clauses: tuple[int, ...]


def sat_witness_search(reduction: ReductionOutput, assignment) -> WitnessSearch:
    """Turn a boolean assignment into the witness-tree search.

    For a satisfying assignment the resulting search ratio is at most the
    threshold R.  Clauses the assignment misses fall back to their direct
    root edge and are reported.
    """
    formula = reduction.formula
    n = formula.n_vars
    if len(assignment) != n:
        raise PreconditionViolatedError(f"assignment must have {n} bits")
    bits = [1 if b else 0 for b in assignment]
    G = reduction.graph
    P = reduction.hub
    seq = [(0, P)]
    for i in range(1, n + 1):
        seq.append((P, reduction.literal_vertices[(i, bits[i - 1])]))
    unsatisfied = []
    for j, clause in enumerate(formula.clauses, start=1):
        chosen = None
        for lit in clause:
            i, b = abs(lit), 1 if lit > 0 else 0
            if bits[i - 1] == b:
                chosen = reduction.literal_vertices[(i, b)]
                break
        if chosen is None:
            unsatisfied.append(j)
            seq.append((0, reduction.clause_vertices[j - 1]))
        else:
            seq.append((chosen, reduction.clause_vertices[j - 1]))
    for i in range(1, n + 1):
        seq.append((reduction.literal_vertices[(i, bits[i - 1])],
                    reduction.variable_vertices[i - 1]))
    for i in range(1, n + 1):
        seq.append((P, reduction.literal_vertices[(i, 1 - bits[i - 1])]))
    search = validate_search(G, seq)
    sigma, _ = search_ratio(search)
    return WitnessSearch(search, sigma, not unsatisfied, tuple(unsatisfied))
