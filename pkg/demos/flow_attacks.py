"""Walkthrough: stealthy false-data injection on a flow graph.

States live on vertices; each edge carries a positive gain and the flow across
it is gain * (state difference).  An attacker corrupting the flow vector stays
invisible to differential state recovery exactly when the corruption is itself
a flow vector.  Which edge sets allow that, how unevenly the attacked edges are
hit, and what survives when gains are only known within bounds - all below.

Run:  python3 demos/flow_attacks.py
"""

import random
from fractions import Fraction as F

from minorkit import (
    Graph,
    assemble_gain_matrix,
    build_robust_stealth,
    build_stealth,
    color_assignment,
    component_graph,
    feasibility,
    flows,
    recover_states,
    robust_attack_audit,
    theta_bounds,
    variation_limit_schedule,
    variation_ratio,
)
from minorkit.stealth import Infeasibility


def show(title):
    print(f"\n=== {title} ===")


# A ring of six stations with a chord: gains are exact rationals.
g = Graph(
    6,
    [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (2, 5)],
    gains={7: F(1), 8: F(3, 2), 9: F(2), 10: F(1), 11: F(5, 4), 12: F(2), 13: F(1)},
)
h = assemble_gain_matrix(g)
print("flow graph on 6 vertices,", len(g.edges), "edges; every matrix row sums to 0:",
      all(s == 0 for s in h.row_sums()))

# 1. Single edges are attackable only when cutting them splits the graph -------------

show("one edge inside a cycle cannot be attacked stealthily")
outcome = feasibility(g, [(1, 2)])
assert isinstance(outcome, Infeasibility)
print("witness cycle through the target:", outcome.cycle_vertices)

# 2. A feasible cut, and what the operator recovers -----------------------------------

show("attacking a full cut is stealthy, and recovery shifts exactly the cut edges")
cut = [(2, 3), (2, 5), (1, 6)]  # separates {1,2} from {3,4,5,6}
spec = feasibility(g, cut)
sv, av = build_stealth(spec, h)
print("components after removing the cut:", [list(c) for c in spec.comps])
print("attack support (flow indices):", sorted(av.support))

x = (F(10), F(8), F(5), F(4), F(6), F(9))  # true states
clean = flows(h, x)
corrupted = tuple(z + a for z, a in zip(clean, av.values))
xb = recover_states(h, corrupted, g, x[0])  # no inconsistency raised: stealthy
print("recovered state shifts:", [str(b - a) for a, b in zip(x, xb)])
jumps = {f"{u}-{v}": str((xb[u-1]-xb[v-1]) - (x[u-1]-x[v-1])) for u, v in g.edges}
print("per-edge jumps (nonzero exactly on the cut):", jumps)

# 3. Evening out the damage across the attacked edges ---------------------------------

show("edge variation factor: how unevenly the attacked edges get hit")
ring = Graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)],
             gains={5: F(1), 6: F(2), 7: F(1), 8: F(3, 2)})
ring_spec = feasibility(ring, ring.edges)
ring_h = assemble_gain_matrix(ring)
sv0, _ = build_stealth(ring_spec, ring_h)
print("one-shot construction ratio:", variation_ratio(sv0))
sv1, ratio = variation_limit_schedule(ring_spec, ring_h, F(1, 100))
print(f"pushing lambda to {sv1.lam}: ratio {ratio} (~{float(ratio):.3f}), limit k-1 = 3")
colors, chi, _ = color_assignment(component_graph(ring_spec))
sv2, ratio2 = variation_limit_schedule(ring_spec, ring_h, F(1, 100), colors=colors)
print(f"colouring the component 4-cycle with {chi} colours flattens the ratio to {ratio2}")
print("full bracket:", {k: str(v) for k, v in theta_bounds(ring_spec, ring_h).items()})

# 4. Robustness when gains are only known within bounds --------------------------------

show("partial knowledge: gains only known to lie in [1, 2]")
sv_r, threshold = build_robust_stealth(ring_spec, ring, 1, 2)
print("closed-form lambda threshold:", threshold, "| lambda used:", sv_r.lam)
worst = robust_attack_audit(ring_spec, sv_r, 1, 2, samples=200, seed=random.Random(0).randrange(99))
print(f"over 200 sampled gain matrices the smallest boundary entry is {worst} (floor 1/2)")
