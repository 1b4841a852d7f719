"""Reference diagrams for the worked alpha example (16 columns).

Each entry lists (x, color) sites per row as drawn, with x = 0..L-1; the
helper maps drawing position x to column x, except x = 0 which becomes the
last column.
"""

from weyltasep.diagrams import Diagram


def drawn(length, top, bottom):
    def col(x):
        return length if x == 0 else x
    return Diagram.from_sites(length, {col(x): c for x, c in top}, {col(x): c for x, c in bottom})


def sites(spec):
    out = []
    for part in spec.split():
        color, xs = part[0], part[1:]
        if "-" in xs:
            a, b = map(int, xs.split("-"))
            out.extend((x, color) for x in range(a, b + 1))
        else:
            out.extend((int(x), color) for x in xs.split(","))
    return out


ALPHA_STEPS = [
    drawn(16, sites("W2,3 B4-8 W10 B12 W13 B14 W15"), sites("B1-3 W6-8 B9-11 W12,13")),
    drawn(14, sites("W2,3 B4-7 W9,11 B12 W13"), sites("B1,2 W5-7 B8,9 W10,11")),
    drawn(10, sites("W2 B3,4 W7 B8 W9"), sites("B1 W4 B5 W6,7")),
    drawn(9, sites("W2 B3,4 W7,8"), sites("B1 W4 B5 W6")),
    drawn(9, sites("B1 W2 B3 W7"), sites("W3 B4,5 W6 W8")),
    drawn(10, sites("B2 W3 B4 W8 B9"), sites("W4 B5,6 W7,8 W10")),
    drawn(14, sites("B1,2 W3 B4 W6,7,9,11 B12"), sites("W1,4 B5-9 W10,11,13")),
    drawn(16, sites("B1,2 W3 B4,5 W7,8,10 B12 W13 B14"), sites("W1 B3 W5 B6-11 W12,13,15")),
]

# drawn trajectories of the first diagram: (x top, x middle, x bottom)
ALPHA_SOURCE_PATHS = [(0, 0, 3), (1, 1, 0), (2, 2, 1), (3, 8, 11), (4, 3, 2), (5, 4, 4),
                      (6, 5, 5), (7, 6, 6), (8, 7, 7), (9, 9, 8), (10, 10, 9), (11, 12, 12),
                      (12, 11, 10), (13, 14, 14), (14, 13, 13), (15, 15, 15)]

ALPHA_LABELS_BEFORE = "L T U U L L U U"
ALPHA_LABELS_AFTER = "U T U L L L U L"

# six-column example and its partner: C(D) = {u2 largest, u4 < u3 < u5}
SIX_A = drawn(6, sites("W2 B3-5"), sites("B3 W4 B6"))
SIX_B = drawn(6, sites("W2 B4 W5"), sites("B3-6"))
SIX_A_PATHS = [(1, 1, 1), (2, 5, 6), (3, 2, 3), (4, 3, 2), (5, 4, 4), (6, 6, 5)]
