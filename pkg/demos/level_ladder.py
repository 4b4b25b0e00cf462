"""
The level ladder and skipped scalarizations
===========================================

Y_N(r) keeps the images that nothing beats on the first r objectives.
Computing the levels in turn lets each level rule out infeasible problems
before a backend ever sees them, and hands the backend a feasible starting
solution for the rest.
"""

from sciontree import ExplicitSet, run, run_cascade
from sciontree.io import generate_instance

points = [(5, 4, 2), (2, 6, 3), (6, 2, 4), (3, 3, 5), (2, 5, 5), (5, 2, 6)]
casc = run_cascade(ExplicitSet.from_points(points), verify=True)

for r, level in enumerate(casc.ladder.levels, start=1):
    print(f"Y_N({r}) =", sorted(im.coords for im in level))

print()
print(f"{'r':>2} {'solved':>7} {'backend':>8} {'skipped':>8} {'verified':>9}")
for s in casc.levels:
    print(f"{s.r:>2} {s.scalarizations:>7} {s.backend_calls:>8} {s.skipped_infeasible:>8} {s.verified_skips:>9}")

# the top level skips every infeasible problem; the lower levels are the price
for k in (3, 4):
    kp = generate_instance("kp", k, 14, 1)
    plain = run(kp)
    c = run_cascade(kp)
    top = c.levels[-1]
    print(f"knapsack k={k}: plain run {plain.backend_calls} calls ({plain.infeasible_count} infeasible);"
          f" cascade top level {top.backend_calls} calls, lower levels {c.backend_calls - top.backend_calls}")
