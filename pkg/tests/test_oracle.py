import random

import pytest

from colorsieve.kirchhoff_poly import count_out_branchings
from colorsieve.oracle import (
    OracleGuardError,
    all_out_branchings,
    colorful_pm_answer,
    enum_out_branchings,
    enum_perfect_matchings,
    max_colors,
    max_internal,
    max_matching_colors,
    verify_splitter,
)
from colorsieve.splitters import interval_splitter

from gen import bidirected, cycle_graph, digraph, grid_graph, path, random_digraph, single_edge


class TestBranchings:
    def test_path(self):
        assert len(list(enum_out_branchings(path(3), 1))) == 1

    def test_triangle(self):
        assert len(list(enum_out_branchings(bidirected(3), 1))) == 3

    def test_no_branching_from_sink(self):
        assert list(enum_out_branchings(path(3), 3)) == []

    def test_duplicate_free_and_valid(self):
        rng = random.Random(1)
        for _ in range(60):
            d = random_digraph(rng, rng.randint(1, 6), multi=True)
            for r in d.vertices():
                bs = list(enum_out_branchings(d, r))
                assert len(set(bs)) == len(bs)
                assert all(b.is_valid(d) and b.root == r for b in bs)
                assert len(bs) == count_out_branchings(d, r)

    def test_guard(self):
        with pytest.raises(OracleGuardError):
            list(enum_out_branchings(path(11), 1))


class TestMaxima:
    def test_path(self):
        assert max_internal(path(3)) == 2

    def test_bidirected_k4(self):
        assert max_internal(bidirected(4)) == 3

    def test_single_vertex(self):
        assert max_internal(digraph(1, [])) == 0

    def test_none(self):
        assert max_internal(digraph(2, [])) is None
        assert max_colors(digraph(2, [], [])) is None

    def test_colors(self):
        assert max_colors(path(3, [1, 2])) == 2
        assert max_colors(path(3, [1, 1])) == 1

    def test_all_roots(self):
        assert len(list(all_out_branchings(bidirected(3)))) == 9


class TestMatchings:
    def test_c4(self):
        assert len(list(enum_perfect_matchings(cycle_graph(4)))) == 2

    def test_p2(self):
        assert len(list(enum_perfect_matchings(single_edge()))) == 1

    def test_grid_3x2(self):
        assert len(list(enum_perfect_matchings(grid_graph(3, 2)))) == 3

    def test_odd(self):
        assert list(enum_perfect_matchings(cycle_graph(5))) == []

    def test_colors(self):
        assert max_matching_colors(cycle_graph(4, [1, 2, 1, 2])) == 1
        assert colorful_pm_answer(cycle_graph(4, [1, 2, 2, 2]), 2)

    def test_guard(self):
        with pytest.raises(OracleGuardError):
            list(enum_perfect_matchings(cycle_graph(18)))


class TestVerifySplitter:
    def test_interval(self):
        assert verify_splitter(interval_splitter(4, 2, 2), 4, 2, 2) == (True, None)

    def test_missing_vector(self):
        fam = list(interval_splitter(4, 2, 2))
        fam.remove((1, 1, 2, 2))
        # only the removed vector separates 2 from 3
        ok, missing = verify_splitter(fam, 4, 2, 2)
        assert not ok and missing == (2, 3)

    def test_k_one(self):
        assert verify_splitter([(1, 1, 1)], 3, 1, 1) == (True, None)
        assert verify_splitter([(2, 1, 3)], 3, 1, 3) == (True, None)

    def test_empty_family(self):
        assert verify_splitter([], 3, 2, 2) == (False, (1, 2))

    def test_guard(self):
        with pytest.raises(OracleGuardError):
            verify_splitter([], 200, 5, 5)
