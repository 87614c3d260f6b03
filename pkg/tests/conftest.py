from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, List, Tuple

import pytest

from laws.level_density import LawSpec


def set_partitions(elements: List[int]) -> Iterator[List[List[int]]]:
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def is_noncrossing(partition: List[List[int]]) -> bool:
    owner = {element: index for index, block in enumerate(partition) for element in block}
    for a, b, c, d in combinations(sorted(owner), 4):
        if owner[a] == owner[c] != owner[b] == owner[d]:
            return False
    return True


@lru_cache(maxsize=None)
def noncrossing_partitions(n: int) -> Tuple[List[List[int]], ...]:
    return tuple(p for p in set_partitions(list(range(1, n + 1))) if is_noncrossing(p))


def moment_from_cumulants(n: int, cumulant) -> Fraction:
    """Free moment-cumulant formula: sum over non-crossing partitions of products of cumulants"""
    total = Fraction(0)
    for partition in noncrossing_partitions(n):
        term = Fraction(1)
        for block in partition:
            term *= cumulant(len(block))
        total += term
    return total


LAW_GRID = [
    LawSpec.wigner(),
    LawSpec.marchenko_pastur(1),
    LawSpec.marchenko_pastur(2),
    LawSpec.marchenko_pastur(4),
    LawSpec.kesten_mckay(2),
    LawSpec.kesten_mckay(3),
    LawSpec.kesten_mckay(5),
    LawSpec.wachter(1, 1),
    LawSpec.wachter(2, 3),
]

RATIONAL_LAWS = [
    LawSpec.wigner(),
    LawSpec.marchenko_pastur(2),
    LawSpec.marchenko_pastur(Fraction(7, 2)),
    LawSpec.kesten_mckay(3),
    LawSpec.kesten_mckay(Fraction(9, 4)),
    LawSpec.wachter(1, 1),
    LawSpec.wachter(2, 3),
    LawSpec.wachter(Fraction(5, 2), Fraction(4, 3)),
]


@pytest.fixture(params=LAW_GRID, ids=lambda law: law.label)
def law(request) -> LawSpec:
    return request.param


@pytest.fixture(params=RATIONAL_LAWS, ids=lambda law: law.label)
def rational_law(request) -> LawSpec:
    return request.param
