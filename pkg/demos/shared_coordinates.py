"""
Images that share coordinate values
===================================

When two nondominated images agree in some objective the tree still stores
every image once.  The brute-force oracle explains which nodes get
explored: it perturbs the set into general position with exact rationals
and runs the tree there.
"""

from fractions import Fraction

from sciontree import ExplicitSet, EngineConfig, run
from sciontree.oracle import enumerate_true_combinations, in_general_position, phi_perturb

points = [(4, 3, 2), (4, 2, 3), (2, 3, 4)]
images = ExplicitSet.from_points(points).images
ordered = sorted(images, key=lambda im: im.coords[::-1])

print("general position?", in_general_position(points))

for delta in (Fraction(1), Fraction(1, 2)):
    shifted = phi_perturb(ordered, delta)
    print(f"delta={delta}:", [tuple(str(v) for v in p) for p in shifted],
          "general position:", in_general_position(shifted))

truth = enumerate_true_combinations(images)
report = run(ExplicitSet.from_points(points), config=EngineConfig(instrument=True))
explored = {comb for comb, _, _ in report.provenance}

print("true combinations:", len(truth))
print("explored nodes:   ", report.scalarizations_solved, "same set:", explored == truth)
print("stored images:    ", report.store_events)
