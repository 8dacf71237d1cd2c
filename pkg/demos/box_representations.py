"""Walkthrough: building and verifying strong box representations.

A strong representation assigns every vertex a closed axis-aligned box so that
boxes intersect exactly for edges, and every box keeps a boundary point (plus a
little cube around it) that no other box touches.  Trees and threshold graphs
fit in the plane; anything else is reached by lifting a planar base back up an
edit sequence, paying one dimension per re-added vertex or edge and two per
split contraction.

Run:  python3 demos/box_representations.py
"""

from minorkit import (
    Box,
    Graph,
    Representation,
    boundary_covered,
    brute_force_strong_boxicity,
    build_threshold_rep,
    build_tree_rep,
    threshold_graph,
    tree_pipeline,
    verify_c1,
    verify_c2,
)


def show(title):
    print(f"\n=== {title} ===")


# 1. Why plain interval representations are not enough ------------------------------

show("intervals satisfy the intersection pattern but bury the middle vertex")
path = Graph(3, [(1, 2), (2, 3)])
intervals = Representation({1: Box.make((0, 2)), 2: Box.make((1, 4)), 3: Box.make(("9/4", 5))})
print("intersection pattern ok:", verify_c1(path, intervals).ok)
print("vertex 2 boundary fully covered by the others:", boundary_covered(2, intervals))
print("-> the line is too small; vertex 2 has no exclusive boundary point")

# 2. Trees live in the plane --------------------------------------------------------

show("a tree gets a planar representation with stored witnesses")
tree = Graph(7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (6, 7)])
rep = build_tree_rep(tree)
c2 = verify_c2(tree, rep)
print("dimension:", rep.dim, "| conditions:", verify_c1(tree, rep).ok, c2.ok)
w = c2.witnesses[2]
print(f"vertex 2 keeps the exclusive point {tuple(map(str, w.point))} (cube side {w.radius})")

# 3. Threshold graphs too -----------------------------------------------------------

show("threshold graph: nested clique rectangles plus stable bars")
g = threshold_graph(4, (3, 2))
rep = build_threshold_rep(4, (3, 2))
print("stable vertex 5 meets:", [v for v in g.vertices() if v != 5 and rep.boxes[5].intersects(rep.boxes[v])])
print("stable vertex 6 meets:", [v for v in g.vertices() if v != 6 and rep.boxes[6].intersects(rep.boxes[v])])
print("verified:", verify_c1(g, rep).ok and verify_c2(g, rep).ok)

# 4. General connected graphs via the spanning-tree pipeline -------------------------

show("lift a spanning tree back to the full graph, one dimension per extra edge")
g = Graph(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (2, 5), (3, 6)])
extra = len(g.edges) - (g.n - 1)  # edges beyond any spanning tree
seq, trace = tree_pipeline(g)
print(f"{len(seq.ops)} edge deletions reduced the graph to a tree (edges beyond a tree: {extra})")
print("final dimension:", trace.final.dim, "= 2 +", len(seq.ops))
print("verified:", verify_c1(g, trace.final).ok and verify_c2(g, trace.final).ok)

# 5. Exact answers for tiny graphs ---------------------------------------------------

show("brute-force oracle pins tiny instances exactly")
for name, graph in [
    ("single edge", Graph(2, [(1, 2)])),
    ("path on 3", Graph(3, [(1, 2), (2, 3)])),
    ("triangle", Graph(3, [(1, 2), (2, 3), (1, 3)])),
]:
    print(f"{name}: smallest working dimension = {brute_force_strong_boxicity(graph).dim}")
