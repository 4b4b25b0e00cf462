"""
Walking the scion tree on a four-objective example
===================================================

Three images, four objectives.  Every node of the tree is one
lexicographic epsilon-constraint problem; we print each node, its optimum
and whether that node is the one that stores the optimum.
"""

from sciontree import EngineConfig, ExplicitSet, run
from sciontree.engine import storage_rule

points = [(4, 1, 2, 1), (2, 4, 3, 2), (1, 3, 4, 3)]
names = {p: f"y{i}" for i, p in enumerate(points, start=1)}


def show(image):
    if image is None:
        return "infeasible"
    if image.is_dummy:
        return f"d{image.dummy_index + 1}"
    return names[image.coords]


report = run(ExplicitSet.from_points(points), config=EngineConfig(instrument=True))

# provenance is in discovery order; depth follows from the parent links
depth = {}
for comb, parent, _ in report.provenance:
    depth[comb] = 0 if parent is None else depth[parent] + 1

optimum = dict(report.solved)
for comb, parent, pos in report.provenance:
    y = optimum[comb]
    label = "(" + ", ".join(show(m) for m in comb) + ")"
    stored = " stored" if y is not None and storage_rule(comb, y) else ""
    print("  " * depth[comb] + f"{label} -> {show(y)}{stored}")

print()
print("scalarizations:", report.scalarizations_solved)
print("infeasible:    ", report.infeasible_count)
print("nondominated:  ", [im.coords for im in report.nondominated])

# the same run on four threads explores the same nodes
parallel = run(ExplicitSet.from_points(points), thread_budget=4)
print("4 threads:     ", parallel.scalarizations_solved, "scalarizations")
