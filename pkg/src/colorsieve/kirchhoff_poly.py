"""Kirchhoff-matrix evaluators for out-branching polynomials.

The determinant of the root-deleted Kirchhoff minor is the generating
polynomial of out-branchings rooted at ``r`` (one monomial per branching,
the product of its arc variables).  After identifying variables into color
classes, the polynomial is never expanded: it is evaluated as a black box at
0/1 class assignments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Protocol, Sequence

from .exact_algebra import bareiss_det
from .graph_core import ArcColoredDigraph, GraphError

GUIDE = "guide"
HASH = "hash"


class SievedEvaluator(Protocol):
    """Integer-valued black-box polynomial over ``k`` class variables."""

    k: int

    def evaluate(self, values: Sequence[int]) -> int: ...

    def evaluate_zeroed(self, zeroed: Iterable[int]) -> int: ...


@dataclass(frozen=True)
class ColorPartition:
    """Assignment of variables to classes ``1..k``.

    A variable mapped to ``None`` belongs to no class and is pinned to 1 in
    every evaluation.  Empty classes are allowed; they make every sieve
    value zero.
    """

    k: int
    class_of: Mapping[Hashable, Optional[int]]
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("class count must be nonnegative")
        for var, c in self.class_of.items():
            if c is not None and not 1 <= c <= self.k:
                raise ValueError(f"variable {var!r} mapped to class {c} outside 1..{self.k}")
        if self.provenance and len(self.provenance) != self.k:
            raise ValueError("provenance must list one entry per class")

    @classmethod
    def identity(cls, variables: Iterable[Hashable]) -> "ColorPartition":
        variables = list(variables)
        return cls(len(variables), {v: i for i, v in enumerate(variables, start=1)})

    def members(self, c: int) -> list:
        return [v for v, cc in self.class_of.items() if cc == c]

    def is_surjective(self) -> bool:
        return set(self.class_of.values()) - {None} == set(range(1, self.k + 1))


def values_for(k: int, zeroed: Iterable[int]) -> list[int]:
    """The 0/1 assignment with the classes in ``zeroed`` set to 0."""
    values = [1] * k
    for c in zeroed:
        if not 1 <= c <= k:
            raise ValueError(f"class index {c} outside 1..{k}")
        values[c - 1] = 0
    return values


def evaluate_zeroed(evaluator: SievedEvaluator, zeroed: Iterable[int]) -> int:
    return evaluator.evaluate_zeroed(zeroed)


@dataclass(frozen=True)
class KirchhoffEvaluator:
    """Root-deleted Kirchhoff minor with arc variables replaced by class values.

    ``arc_class[a]`` is the class of arc ``a``'s variable (or None for a
    variable pinned to 1).  Evaluations are recomputed on every call.
    """

    digraph: ArcColoredDigraph
    root: int
    partition: ColorPartition
    arc_class: tuple[Optional[int], ...] = field(repr=False)

    @property
    def k(self) -> int:
        return self.partition.k

    def matrix(self, values: Sequence[int]) -> list[list[int]]:
        d, r = self.digraph, self.root
        pos = [0] * (d.n + 1)
        idx = 0
        for v in d.vertices():
            if v != r:
                pos[v] = idx
                idx += 1
        size = d.n - 1
        mat = [[0] * size for _ in range(size)]
        for a, c in zip(d.arcs, self.arc_class):
            w = 1 if c is None else values[c - 1]
            if not w:
                continue
            if a.head != r:
                h = pos[a.head]
                mat[h][h] += w
                if a.tail != r:
                    mat[pos[a.tail]][h] -= w
        return mat

    def evaluate(self, values: Sequence[int]) -> int:
        if len(values) != self.k:
            raise ValueError(f"expected {self.k} class values, got {len(values)}")
        return bareiss_det(self.matrix(values))

    def evaluate_zeroed(self, zeroed: Iterable[int]) -> int:
        return self.evaluate(values_for(self.k, zeroed))


def _check_root(d: ArcColoredDigraph, root: int) -> None:
    if not 1 <= root <= d.n:
        raise GraphError(f"root {root} outside 1..{d.n}")


def build_kirchhoff_evaluator(
    d: ArcColoredDigraph, root: int, partition: ColorPartition
) -> KirchhoffEvaluator:
    """Vertex-variable evaluator: arc ``ij`` carries the class value of its tail ``i``.

    A branching's monomial then contains exactly its internal vertices.
    """
    _check_root(d, root)
    missing = [v for v in d.vertices() if v not in partition.class_of]
    if missing:
        raise ValueError(f"partition does not cover vertices {missing}")
    arc_class = tuple(partition.class_of[a.tail] for a in d.arcs)
    return KirchhoffEvaluator(d, root, partition, arc_class)


def build_color_evaluator(
    d: ArcColoredDigraph, root: int, partition: ColorPartition
) -> KirchhoffEvaluator:
    """Color-variable evaluator: arc ``a`` carries the class value of its color."""
    _check_root(d, root)
    if d.arcs and not d.colored:
        raise GraphError("color evaluator needs a colored digraph")
    missing = [c for c in range(1, d.num_colors + 1) if c not in partition.class_of]
    if missing:
        raise ValueError(f"partition does not cover colors {missing}")
    arc_class = tuple(partition.class_of[a.color] for a in d.arcs)
    return KirchhoffEvaluator(d, root, partition, arc_class)


def count_out_branchings(d: ArcColoredDigraph, root: int) -> int:
    """Number of out-branchings rooted at ``root`` (all variables set to 1)."""
    ev = build_kirchhoff_evaluator(d, root, ColorPartition(0, {v: None for v in d.vertices()}))
    return ev.evaluate([])
