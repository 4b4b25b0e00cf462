"""Hand-checked data for the small fixture sets, shared by several test modules."""

from sciontree import Combination, Image

EX21 = [(4, 1, 2, 1), (2, 4, 3, 2), (1, 3, 4, 3)]
EX43 = [(4, 3, 2), (4, 2, 3), (2, 3, 4)]
EX54 = [(5, 4, 2), (2, 6, 3), (6, 2, 4), (3, 3, 5), (2, 5, 5), (5, 2, 6)]
FINDING_VC = [(5, 4, 1), (2, 6, 2), (6, 2, 4), (3, 3, 5)]

# Scion tree of EX21 as (child, parent); labels are 1-based, "d2" = dummy of objective 2.
EX21_TREE = [
    ("d1 d2 d3", None),
    ("y1 d2 d3", "d1 d2 d3"),
    ("d1 y1 d3", "d1 d2 d3"),
    ("d1 d2 y1", "d1 d2 d3"),
    ("y2 d2 d3", "y1 d2 d3"),
    ("y1 y2 d3", "y1 d2 d3"),
    ("y1 d2 y2", "y1 d2 d3"),
    ("y3 d2 d3", "y2 d2 d3"),
    ("y2 d2 y3", "y2 d2 d3"),
    ("y1 y3 d3", "y1 y2 d3"),
    ("y1 y2 y3", "y1 y2 d3"),
]


def label(text, points):
    """Decode ``"y1 d2 d3"`` into a :class:`Combination` over ``points``."""
    k = len(points[0])
    members = []
    for tok in text.split():
        idx = int(tok[1:]) - 1
        members.append(Image.dummy(idx, k) if tok[0] == "d" else Image(points[idx]))
    return Combination(tuple(members))


def ex21_tree():
    return {label(c, EX21): (label(p, EX21) if p else None) for c, p in EX21_TREE}
