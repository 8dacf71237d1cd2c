"""Shared generators and independent oracles for the test suite.

The sampling oracle here deliberately reimplements boundary coverage by dense
point probing, so it shares no code path with the exact facet sweep it checks.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from minorkit import Box, Graph, Representation

F = Fraction


# -- random structures ------------------------------------------------------------


def random_tree(n: int, rng: random.Random) -> Graph:
    edges = [(rng.randrange(1, v), v) for v in range(2, n + 1)]
    return Graph(n, edges)


def random_connected(n: int, m: int, rng: random.Random, gains: bool = False) -> Graph:
    """Connected graph with exactly m >= n-1 edges (requires enough room)."""
    assert n - 1 <= m <= n * (n - 1) // 2
    edges = {(rng.randrange(1, v), v) for v in range(2, n + 1)}
    pool = [
        (u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if (u, v) not in edges
    ]
    rng.shuffle(pool)
    edges |= set(pool[: m - len(edges)])
    edge_list = sorted(edges)
    g = Graph(n, edge_list)
    if not gains:
        return g
    gain_map = {g.n + 1 + i: random_gain(rng) for i in range(len(edge_list))}
    return Graph(n, edge_list, gains=gain_map)


def random_gain(rng: random.Random) -> Fraction:
    return F(rng.randrange(1, 13), rng.randrange(1, 7))


def random_cut_targets(g: Graph, rng: random.Random) -> list[tuple[int, int]]:
    """Edges crossing a random proper vertex split: always stealth-feasible."""
    while True:
        side = {v for v in g.vertices() if rng.random() < 0.5}
        if 0 < len(side) < g.n:
            cut = [(u, v) for u, v in g.edges if (u in side) != (v in side)]
            if cut:
                return cut


def random_rep(rng: random.Random, dim: int, count: int, span: int = 6) -> Representation:
    boxes = {}
    for v in range(1, count + 1):
        ivs = []
        for _ in range(dim):
            a = rng.randrange(-span, span)
            b = rng.randrange(-span, span)
            while a == b:
                b = rng.randrange(-span, span)
            ivs.append((F(min(a, b)), F(max(a, b))))
        boxes[v] = Box(tuple(ivs))
    return Representation(boxes)


# -- independent sampling oracle for boundary coverage ---------------------------------


def sampled_uncovered_point(rep: Representation, v: int, density: int = 3):
    """A facet sample point of v's box lying in no other box, or None.

    Samples a (density+2)-point grid per free axis on every facet, endpoints
    included, so corners and touching configurations are probed.
    """
    box = rep.boxes[v]
    others = [b for u, b in rep.boxes.items() if u != v]
    for axis in range(box.dim):
        for side in (0, 1):
            c = box.intervals[axis][side]
            grids = []
            for j, (lo, hi) in enumerate(box.intervals):
                if j == axis:
                    continue
                grids.append([lo + (hi - lo) * F(t, density + 1) for t in range(density + 2)])
            for combo in product(*grids):
                p = combo[:axis] + (c,) + combo[axis:]
                if not any(b.contains(p) for b in others):
                    return p
    return None
