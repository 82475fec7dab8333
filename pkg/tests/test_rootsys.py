import numpy as np
import pytest

from todahess.errors import ConfigurationError
from todahess.rootsys import DIMENSION, build_root_system, height_spaces


def brute_force_a_roots(rank):
    """Oracle: A-type roots as integer coordinate vectors, enumerated from
    the epsilon_i - epsilon_j description (coords are a consecutive run)."""
    coords = []
    for i in range(rank + 1):
        for j in range(rank + 1):
            if i == j:
                continue
            row = np.zeros(rank, dtype=int)
            lo, hi = min(i, j), max(i, j)
            row[lo:hi] = 1 if i < j else -1
            coords.append(tuple(row))
    return set(coords)


def test_a1_is_a_plus_minus_pair():
    rs = build_root_system("A", 1)
    assert rs.n_roots == 2
    assert sorted(rs.heights.tolist()) == [-1, 1]


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_a_type_matches_brute_force(rank):
    rs = build_root_system("A", rank)
    got = {tuple(int(c) for c in row) for row in rs.coords}
    assert got == brute_force_a_roots(rank)


def test_a2_height_multiset():
    rs = build_root_system("A", 2)
    assert rs.n_roots == 6
    assert sorted(rs.heights.tolist()) == [-2, -1, -1, 1, 1, 2]


def test_a3_counts_and_max_height():
    rs = build_root_system("A", 3)
    assert rs.n_roots == 12
    assert rs.highest_height == 3


@pytest.mark.parametrize("series,rank", [("A", 2), ("A", 3), ("B", 2), ("B", 3),
                                         ("C", 2), ("C", 3), ("D", 3), ("D", 4)])
def test_counting_and_negation(series, rank):
    rs = build_root_system(series, rank)
    assert rs.n_positive == (DIMENSION[series](rank) - rank) // 2
    for k in range(rs.n_roots):
        nk = rs.negative(k)
        assert np.array_equal(rs.coords[nk], -rs.coords[k])
        assert rs.heights[nk] == -rs.heights[k]
        assert rs.negative(nk) == k


@pytest.mark.parametrize("series,rank", [("A", 3), ("B", 3), ("C", 3), ("D", 4)])
def test_simple_roots_lead(series, rank):
    rs = build_root_system(series, rank)
    assert len(rs.simple) == rank
    for i in rs.simple:
        expected = np.zeros(rank, dtype=int)
        expected[i] = 1
        assert np.array_equal(rs.coords[i], expected)
        assert rs.heights[i] == 1


def test_heights_are_coordinate_sums():
    rs = build_root_system("C", 3)
    assert np.array_equal(rs.heights, rs.coords.sum(axis=1))


def test_height_spaces_partition():
    for series, rank in [("A", 2), ("A", 3), ("B", 2)]:
        rs = build_root_system(series, rank)
        levels = height_spaces(rs)
        assert 0 not in levels
        assert sum(len(v) for v in levels.values()) == rs.n_roots


def test_a2_level_two_is_a_single_root():
    rs = build_root_system("A", 2)
    levels = height_spaces(rs)
    assert len(levels[2]) == 1
    assert len(levels[1]) == 2
    assert len(levels[-1]) == 2


def test_a_height_range_is_rank():
    # the highest root of sl_n has height n - 1 (brute force over the oracle)
    for rank in (1, 2, 3):
        heights = [sum(c) for c in brute_force_a_roots(rank)]
        assert max(heights) == rank
        rs = build_root_system("A", rank)
        assert rs.highest_height == rank


def test_bad_configurations_rejected():
    with pytest.raises(ConfigurationError):
        build_root_system("E", 6)
    with pytest.raises(ConfigurationError):
        build_root_system("A", 0)
    with pytest.raises(ConfigurationError):
        build_root_system("D", 2)


def test_root_id_lookup():
    rs = build_root_system("A", 2)
    assert rs.root_id([1, 0]) == 0
    assert rs.root_id([1, 1]) == rs.rank  # the single height-2 root comes next
