"""Text formats: rooted graphs, DIMACS CNF, and CSV report rows.

Graph format, line oriented with `#` comments:

    root O
    edge O A 3
    edge O B 2.5

Labels map to dense vertex ids in first-appearance order.  Lengths are
decimal strings (or p/q for non-terminating rationals) and parse back
bit-exactly.

The CNF reader accepts the standard DIMACS subset with at most 3 literals
per clause; shorter clauses are padded by repeating their first literal,
which preserves satisfiability and the reduction's clause structure.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import FormatError
from .graphs import RootedGraph, build_graph
from .instances import SatInstance
from .rational import as_rational, format_rational


def write_graph_text(G: RootedGraph) -> str:
    lines = [f"root {G.label_of(G.root)}"]
    for e in G.edges:
        lines.append(f"edge {G.label_of(e.u)} {G.label_of(e.v)} "
                     f"{format_rational(e.length)}")
    return "\n".join(lines) + "\n"


def read_graph_text(text: str) -> RootedGraph:
    ids: dict[str, int] = {}

    def vertex(label: str) -> int:
        if label not in ids:
            ids[label] = len(ids)
        return ids[label]

    root = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "root":
            if len(parts) != 2:
                raise FormatError(f"line {lineno}: root takes one label")
            if root is not None:
                raise FormatError(f"line {lineno}: duplicate root line")
            root = vertex(parts[1])
        elif parts[0] == "edge":
            if len(parts) != 4:
                raise FormatError(f"line {lineno}: edge takes two labels and a length")
            edges.append((vertex(parts[1]), vertex(parts[2]),
                          as_rational(parts[3])))
        else:
            raise FormatError(f"line {lineno}: unknown directive {parts[0]!r}")
    if root is None:
        raise FormatError("missing root line")
    labels = [None] * len(ids)
    for label, idx in ids.items():
        labels[idx] = label
    return build_graph(len(ids), edges, root=root, labels=labels)


def read_dimacs(text: str) -> SatInstance:
    n_vars = None
    n_clauses = None
    clauses = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: malformed problem line")
            n_vars, n_clauses = int(parts[2]), int(parts[3])
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                if not pending:
                    raise FormatError(f"line {lineno}: empty clause")
                if len(pending) > 3:
                    raise FormatError(
                        f"line {lineno}: clause with {len(pending)} literals; "
                        "only 3-CNF is supported")
                while len(pending) < 3:
                    pending.append(pending[0])
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if pending:
        raise FormatError("unterminated clause at end of input")
    if n_vars is None:
        raise FormatError("missing DIMACS problem line")
    if n_clauses is not None and n_clauses != len(clauses):
        raise FormatError(f"problem line promises {n_clauses} clauses, "
                          f"got {len(clauses)}")
    return SatInstance(n_vars, tuple(clauses))


REPORT_COLUMNS = ("instance", "family", "n", "method", "ratio",
                  "certified_bound", "oracle_value", "seconds")


@dataclass
class ReportRow:
    """One CSV row of an experiment report."""

    instance: str
    family: str
    n: int
    method: str
    ratio: object = None
    certified_bound: object = None
    oracle_value: object = None
    seconds: float = 0.0

    def as_record(self) -> list[str]:
        def num(x):
            if x is None:
                return ""
            return f"{float(x):.12g}"

        return [self.instance, self.family, str(self.n), self.method,
                num(self.ratio), num(self.certified_bound),
                num(self.oracle_value), f"{self.seconds:.6f}"]


def rows_to_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        writer.writerow(row.as_record())
    return out.getvalue()
