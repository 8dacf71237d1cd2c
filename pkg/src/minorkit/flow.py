"""Gain-matrix assembly, exact flows, and differential state recovery.

A flow graph's t-by-n gain matrix stacks one row per vertex (net flow) on top
of one row per edge (through flow).  Edge rows carry +gain at the smaller
endpoint and -gain at the larger; vertex rows carry the gain sums.  Every row
sums to zero, so constant states produce zero flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exceptions import (
    DimensionMismatch,
    Disconnected,
    Inconsistent,
    MissingGain,
    ParseError,
)
from .graph import Edge, Graph, is_connected
from .ratio import fmt_ratio, parse_ratio

F = Fraction


@dataclass(frozen=True, eq=False)
class GainMatrix:
    n: int
    t: int
    rows: tuple[tuple[Fraction, ...], ...]  # rows 1..n: vertices; rows n+1..t: edges
    edges: tuple[Edge, ...]  # edge order mirrors the flow indices

    def row(self, index: int) -> tuple[Fraction, ...]:
        """Row by 1-based flow index."""
        if not (1 <= index <= self.t):
            raise ValueError(f"row index {index} outside 1..{self.t}")
        return self.rows[index - 1]

    def multiply(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(x) != self.n:
            raise DimensionMismatch(f"state has length {len(x)}, expected {self.n}")
        return tuple(sum(c * xi for c, xi in zip(row, x)) for row in self.rows)

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row) for row in self.rows)


def assemble_gain_matrix(g: Graph) -> GainMatrix:
    """Build the gain matrix from a graph whose every edge carries a gain."""
    if g.gains is None:
        raise MissingGain("graph carries no gains")
    for pos in range(len(g.edges)):
        if g.n + 1 + pos not in g.gains:
            raise MissingGain(f"edge {g.edges[pos]} has no gain")
    rows: list[tuple[Fraction, ...]] = []
    zero = F(0)
    for i in g.vertices():
        row = [zero] * g.n
        total = zero
        for j in g.neighbors(i):
            b = g.gain(i, j)
            row[j - 1] = -b
            total += b
        row[i - 1] = total
        rows.append(tuple(row))
    for pos, (u, v) in enumerate(g.edges):
        b = g.gains[g.n + 1 + pos]
        row = [zero] * g.n
        row[u - 1] = b
        row[v - 1] = -b
        rows.append(tuple(row))
    return GainMatrix(n=g.n, t=g.t, rows=tuple(rows), edges=g.edges)


def flows(h: GainMatrix, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Exact flow vector H*x."""
    return h.multiply(tuple(parse_ratio(v) for v in x))


def recover_states(
    h: GainMatrix, z: Sequence[Fraction], g: Graph, x1_ref: Fraction | str | int = 0
) -> tuple[Fraction, ...]:
    """Recover the full state from a flow vector and the reference state at vertex 1.

    Edge rows give the exact state difference across each edge; a breadth-first
    walk from vertex 1 propagates them, and every edge (tree or not) is then
    re-checked exactly.  Vertex rows are not consulted: the differential
    procedure needs only the through flows.
    """
    if not is_connected(g):
        raise Disconnected("state recovery needs a connected graph")
    if g.n != h.n or g.t != h.t or g.edges != h.edges:
        raise DimensionMismatch("gain matrix does not match the graph")
    z = tuple(parse_ratio(v) for v in z)
    if len(z) != h.t:
        raise DimensionMismatch(f"flow vector has length {len(z)}, expected {h.t}")

    diffs: dict[Edge, Fraction] = {}
    for pos, (u, v) in enumerate(h.edges):
        gain = h.rows[g.n + pos][u - 1]  # +B at the smaller endpoint
        diffs[(u, v)] = z[g.n + pos] / gain  # x_u - x_v

    x: dict[int, Fraction] = {1: parse_ratio(x1_ref)}
    queue = [1]
    while queue:
        a = queue.pop(0)
        for b in g.neighbors(a):
            if b in x:
                continue
            if a < b:
                x[b] = x[a] - diffs[(a, b)]
            else:
                x[b] = x[a] + diffs[(b, a)]
            queue.append(b)

    for (u, v), d in diffs.items():
        if x[u] - x[v] != d:
            raise Inconsistent(f"edge ({u},{v}) implies a conflicting state difference")
    return tuple(x[v] for v in g.vertices())


# -- JSON -----------------------------------------------------------------------


def matrix_to_json(h: GainMatrix) -> dict:
    return {
        "n": h.n,
        "t": h.t,
        "edges": [[u, v] for u, v in h.edges],
        "rows": [[fmt_ratio(c) for c in row] for row in h.rows],
    }


def vector_to_json(vec: Sequence[Fraction]) -> dict:
    return {"values": [fmt_ratio(v) for v in vec]}


def vector_from_json(obj) -> tuple[Fraction, ...]:
    try:
        return tuple(parse_ratio(v) for v in obj["values"])
    except ParseError:
        raise
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad vector object: {exc}") from exc
