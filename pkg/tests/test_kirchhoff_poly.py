import random

import pytest

from colorsieve.graph_core import GraphError
from colorsieve.kirchhoff_poly import (
    ColorPartition,
    build_color_evaluator,
    build_kirchhoff_evaluator,
    count_out_branchings,
    evaluate_zeroed,
    values_for,
)
from colorsieve.oracle import enum_out_branchings

from gen import bidirected, digraph, path, random_digraph


def single_class(d):
    return ColorPartition(1, {v: 1 for v in d.vertices()})


class TestKirchhoff:
    def test_path_all_ones(self):
        d = path(3)
        assert build_kirchhoff_evaluator(d, 1, single_class(d)).evaluate([1]) == 1

    def test_bidirected_triangle(self):
        d = bidirected(3)
        ev = build_kirchhoff_evaluator(d, 1, single_class(d))
        assert ev.evaluate([1]) == 3
        assert evaluate_zeroed(ev, []) == 3

    def test_all_zeroed(self):
        d = bidirected(4)
        ev = build_kirchhoff_evaluator(d, 2, ColorPartition.identity(d.vertices()))
        assert ev.evaluate_zeroed(range(1, 5)) == 0

    def test_root_class_zeroed_on_path(self):
        d = path(3)
        ev = build_kirchhoff_evaluator(d, 1, ColorPartition.identity(d.vertices()))
        assert ev.evaluate_zeroed([1]) == 0
        assert ev.evaluate_zeroed([3]) == 1  # vertex 3 is a leaf

    def test_cut_vertex_zeroed(self):
        # every branching from 1 passes through 2
        d = digraph(4, [(1, 2), (2, 3), (2, 4), (3, 4), (4, 3)])
        part = ColorPartition(2, {1: 1, 2: 2, 3: 1, 4: 1})
        ev = build_kirchhoff_evaluator(d, 1, part)
        assert ev.evaluate_zeroed([2]) == 0
        assert ev.evaluate_zeroed([]) == count_out_branchings(d, 1) == 3

    def test_single_vertex(self):
        d = digraph(1, [])
        assert count_out_branchings(d, 1) == 1

    def test_monomial_weights(self):
        # value of the polynomial at integer points: sum over branchings of
        # products of tail values
        rng = random.Random(4)
        for _ in range(40):
            d = random_digraph(rng, rng.randint(2, 5), multi=True)
            k = rng.randint(1, 3)
            part = ColorPartition(k, {v: rng.randint(1, k) for v in d.vertices()})
            vals = [rng.randint(-3, 4) for _ in range(k)]
            r = rng.randint(1, d.n)
            expect = 0
            for b in enum_out_branchings(d, r):
                term = 1
                for a in b.arc_indices():
                    term *= vals[part.class_of[d.arcs[a].tail] - 1]
                expect += term
            assert build_kirchhoff_evaluator(d, r, part).evaluate(vals) == expect

    def test_pinned_variables(self):
        d = bidirected(3)
        part = ColorPartition(1, {1: 1, 2: None, 3: None})
        ev = build_kirchhoff_evaluator(d, 1, part)
        # root 1 is internal in all 3 branchings
        assert ev.evaluate_zeroed([1]) == 0
        assert ev.evaluate_zeroed([]) == 3

    def test_errors(self):
        d = path(3)
        with pytest.raises(GraphError):
            build_kirchhoff_evaluator(d, 4, single_class(d))
        with pytest.raises(ValueError):
            build_kirchhoff_evaluator(d, 1, ColorPartition(1, {1: 1}))
        with pytest.raises(ValueError):
            build_kirchhoff_evaluator(d, 1, single_class(d)).evaluate([1, 1])
        with pytest.raises(ValueError):
            values_for(2, [3])


class TestColorEvaluator:
    def test_path_one_color(self):
        d = path(3, [1, 1])
        ev = build_color_evaluator(d, 1, ColorPartition.identity([1]))
        assert ev.evaluate_zeroed([]) == 1
        assert ev.evaluate_zeroed([1]) == 0

    def test_triangle_three_colors(self):
        d = digraph(3, [(1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)], [1, 1, 2, 2, 3, 3])
        ev = build_color_evaluator(d, 1, ColorPartition.identity([1, 2, 3]))
        assert ev.evaluate_zeroed([]) == 3

    def test_uncolored_rejected(self):
        with pytest.raises(GraphError):
            build_color_evaluator(path(3), 1, ColorPartition.identity([1]))

    def test_partition_must_cover_colors(self):
        with pytest.raises(ValueError):
            build_color_evaluator(path(3, [1, 2]), 1, ColorPartition.identity([1]))


class TestPartition:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            ColorPartition(2, {1: 3})

    def test_provenance_length(self):
        with pytest.raises(ValueError):
            ColorPartition(2, {1: 1, 2: 2}, ("guide",))

    def test_surjective(self):
        assert ColorPartition(2, {1: 1, 2: 2, 3: None}).is_surjective()
        assert not ColorPartition(2, {1: 1, 2: 1}).is_surjective()
        assert ColorPartition(2, {1: 1, 2: 2, 3: 1}).members(1) == [1, 3]
