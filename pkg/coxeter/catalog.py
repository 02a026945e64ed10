"""Bourbaki labellings of the irreducible spherical and affine Coxeter diagrams.

Edges are (i, j, m) triples over integer labels; pairs that are not listed
commute. H3 and H4 carry the 5-bond at the high end, I2(m) is the single
bond 1-2.
"""

import math
from math import factorial

INF = math.inf

Edge = tuple[int, int, int | float]

SPHERICAL_FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "H")
AFFINE_FAMILIES = ("~A", "~B", "~C", "~D", "~E", "~F", "~G")

# Inclusive rank ranges; None means unbounded above.
RANK_RANGES: dict[str, tuple[int, int | None]] = {
    "A": (1, None),
    "B": (2, None),
    "C": (2, None),
    "D": (4, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
    "H": (3, 4),
    "~A": (1, None),
    "~B": (3, None),
    "~C": (2, None),
    "~D": (4, None),
    "~E": (6, 8),
    "~F": (4, 4),
    "~G": (2, 2),
}

EXCEPTIONAL_ORDERS = {
    ("E", 6): 51_840,
    ("E", 7): 2_903_040,
    ("E", 8): 696_729_600,
    ("F", 4): 1_152,
    ("H", 3): 120,
    ("H", 4): 14_400,
}


def rank_in_range(family: str, rank: int) -> bool:
    low, high = RANK_RANGES[family]
    return rank >= low and (high is None or rank <= high)


def _path(first: int, last: int) -> list[Edge]:
    return [(i, i + 1, 3) for i in range(first, last)]


def spherical_edges(family: str, rank: int) -> list[Edge]:
    n = rank
    if family == "A":
        return _path(1, n)
    if family in ("B", "C"):
        return _path(1, n - 1) + [(n - 1, n, 4)]
    if family == "D":
        return _path(1, n - 1) + [(n - 2, n, 3)]
    if family == "E":
        return [(1, 3, 3), (2, 4, 3)] + _path(3, n)
    if family == "F":
        return [(1, 2, 3), (2, 3, 4), (3, 4, 3)]
    if family == "G":
        return [(1, 2, 6)]
    if family == "H":
        return _path(1, n - 1) + [(n - 1, n, 5)]
    raise KeyError(family)


def dihedral_edges(m: int) -> list[Edge]:
    return [(1, 2, m)]


def affine_edges(family: str, rank: int) -> list[Edge]:
    n = rank
    if family == "~A":
        if n == 1:
            return [(0, 1, INF)]
        return [(0, 1, 3), (0, n, 3)] + _path(1, n)
    if family == "~B":
        return spherical_edges("B", n) + [(0, 2, 3)]
    if family == "~C":
        return [(0, 1, 4)] + _path(1, n - 1) + [(n - 1, n, 4)]
    if family == "~D":
        return spherical_edges("D", n) + [(0, 2, 3)]
    if family == "~E":
        attach = {6: 2, 7: 1, 8: 8}[n]
        return spherical_edges("E", n) + [(0, attach, 3)]
    if family == "~F":
        return spherical_edges("F", 4) + [(0, 1, 3)]
    if family == "~G":
        return spherical_edges("G", 2) + [(0, 2, 3)]
    raise KeyError(family)


def catalog_order(family: str, rank: int, m: int | None = None) -> int:
    """Order of an irreducible finite Coxeter group given by its catalog name."""
    if family == "A":
        return factorial(rank + 1)
    if family in ("B", "C"):
        return 2**rank * factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * factorial(rank)
    if family == "I2":
        assert m is not None
        return 2 * m
    if family in ("E6", "E7", "E8", "F4", "H3", "H4"):
        return EXCEPTIONAL_ORDERS[(family[0], int(family[1]))]
    return EXCEPTIONAL_ORDERS[(family, rank)]


# Expected special vertices per affine family, used as a cross-check on the
# orbit computation.
def expected_special_vertices(family: str, rank: int) -> set[int]:
    n = rank
    if family == "~A":
        return set(range(n + 1))
    if family == "~B":
        return {0, 1}
    if family == "~C":
        return {0, n}
    if family == "~D":
        return {0, 1, n - 1, n}
    if family == "~E":
        return {6: {0, 1, 6}, 7: {0, 7}, 8: {0}}[n]
    return {0}
