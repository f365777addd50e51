"""Reference designs shipped with the package (used by ``selftest`` and the tests)."""

from __future__ import annotations

from .core import PrefixCoveringDesign
from .covering import CoveringDesign, MultiMatching

THM_D4 = PrefixCoveringDesign(4, 40, 21, [
    (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 40, 19, 28, 37, 26),
    (11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 30, 9, 38, 27, 36),
    (21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 20, 39, 8, 7, 37),
    (31, 32, 33, 34, 35, 36, 37, 38, 39, 40, 10, 29, 18, 17, 27),
])

THM_D5 = PrefixCoveringDesign(5, 40, 18, [
    (1, 2, 3, 4, 5, 6, 7, 8, 24, 31, 38, 30, 14),
    (9, 10, 11, 12, 13, 14, 15, 16, 32, 40, 6, 31, 22),
    (17, 18, 19, 20, 21, 22, 23, 24, 8, 7, 39, 15, 30),
    (25, 26, 27, 28, 29, 30, 31, 32, 40, 16, 23, 39, 6),
    (33, 34, 35, 36, 37, 38, 39, 40, 16, 32, 15, 23),
])

# Fano plane as a (7,3,2) covering design in the canonical line order.
FANO = CoveringDesign(7, 3, [
    (1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6),
])

# Block orders (matched element first) that reproduce the two worked figures.
FANO_FIG1 = CoveringDesign(7, 3, [
    (1, 2, 3), (4, 1, 5), (7, 1, 6), (6, 2, 4), (2, 5, 7), (3, 4, 7), (5, 3, 6),
])
FANO_FIG2 = CoveringDesign(7, 3, [
    (1, 5, 6), (2, 1, 7), (3, 1, 4), (4, 5, 2), (5, 7, 3), (6, 2, 3), (7, 6, 4),
])


def first_element_matching(cd: CoveringDesign) -> MultiMatching:
    return MultiMatching(tuple((b[0],) for b in cd.blocks))


FIG1_SEQUENCES = (
    (8, 9, 10, 1, 2, 3),
    (11, 12, 13, 4, 1, 5),
    (14, 15, 16, 7, 1, 6),
    (17, 18, 19, 6, 2, 4),
    (20, 21, 22, 2, 5, 7),
    (23, 24, 25, 3, 4, 7),
    (26, 27, 28, 5, 3, 6),
)

FIG2_SEQUENCES = (
    (22, 23, 24, 25, 26, 27, 28, 1, 8, 15, 19, 20, 12, 13, 5, 6),
    (29, 30, 31, 32, 33, 34, 35, 2, 9, 16, 15, 21, 8, 14, 1, 7),
    (36, 37, 38, 39, 40, 41, 42, 3, 10, 17, 15, 18, 8, 11, 1, 4),
    (43, 44, 45, 46, 47, 48, 49, 4, 11, 18, 19, 16, 12, 9, 5, 2),
    (50, 51, 52, 53, 54, 55, 56, 5, 12, 19, 21, 17, 14, 10, 7, 3),
    (57, 58, 59, 60, 61, 62, 63, 6, 13, 20, 16, 17, 9, 10, 2, 3),
    (64, 65, 66, 67, 68, 69, 70, 7, 14, 21, 20, 18, 13, 11, 6, 4),
)

# (5,3,2) design with 4 blocks; scaling by 4 gives the (20,12) design behind d = 4.
SMALL_5_3 = CoveringDesign(5, 3, [(1, 2, 3), (1, 4, 5), (2, 4, 5), (3, 4, 5)])

# Designs behind the covering-design bound column that are generated in-package.
TABLE_SOURCES = {3: "pairs", 4: "scaled:4", 7: "plane:2", 13: "plane:3"}
