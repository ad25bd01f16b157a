"""Brute-force ground truth.  Slow on purpose, and guarded by hard size limits."""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Optional, Sequence

from .graph_core import ArcColoredDigraph, OutBranching
from .planar_pfaffian import PlanarEmbeddedGraph

MAX_BRANCHING_VERTICES = 10
MAX_MATCHING_VERTICES = 16
MAX_SPLITTER_SUBSETS = 2_000_000


class OracleGuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


def _guard(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise OracleGuardError(f"{what} {size} exceeds oracle limit {limit}")


def enum_out_branchings(d: ArcColoredDigraph, root: int) -> Iterator[OutBranching]:
    """Every out-branching rooted at ``root``, once each.

    Tries every choice of entering arc per non-root vertex (lexicographic in
    vertex order, arc order within) and keeps the choices in which every
    vertex reaches the root.
    """
    _guard(d.n, MAX_BRANCHING_VERTICES, "vertex count")
    ins = d.in_arcs()
    others = [v for v in d.vertices() if v != root]
    for choice in product(*(ins[v] for v in others)):
        parent = {v: d.arcs[a].tail for v, a in zip(others, choice)}
        ok = True
        for v in others:
            seen = set()
            while v != root:
                if v in seen:
                    ok = False
                    break
                seen.add(v)
                v = parent[v]
            if not ok:
                break
        if ok:
            arcs: list[Optional[int]] = [None] * d.n
            for v, a in zip(others, choice):
                arcs[v - 1] = a
            yield OutBranching(root, tuple(arcs))


def all_out_branchings(d: ArcColoredDigraph) -> Iterator[OutBranching]:
    for r in d.vertices():
        yield from enum_out_branchings(d, r)


def max_internal(d: ArcColoredDigraph) -> Optional[int]:
    """Largest internal-vertex count of any out-branching; None if there is none."""
    best = None
    for b in all_out_branchings(d):
        c = len(b.internal_vertices(d))
        if best is None or c > best:
            best = c
    return best


def max_colors(d: ArcColoredDigraph) -> Optional[int]:
    """Largest number of distinct arc colors on any out-branching; None if there is none."""
    best = None
    for b in all_out_branchings(d):
        c = len(b.colors(d))
        if best is None or c > best:
            best = c
    return best


def kiob_answer(d: ArcColoredDigraph, k: int) -> bool:
    best = max_internal(d)
    return best is not None and best >= k


def colorful_ob_answer(d: ArcColoredDigraph, k: int) -> bool:
    best = max_colors(d)
    return best is not None and best >= k


def count_covering_branchings(d: ArcColoredDigraph, root: int, class_of: dict, k: int, by: str = "tail") -> int:
    """Branchings rooted at ``root`` whose variables hit all classes ``1..k``.

    ``by="tail"``: an arc's variable is its tail vertex; ``by="color"``: its color.
    """
    want = set(range(1, k + 1))
    count = 0
    for b in enum_out_branchings(d, root):
        hit = set()
        for a in b.arc_indices():
            var = d.arcs[a].tail if by == "tail" else d.arcs[a].color
            hit.add(class_of.get(var))
        if want <= hit:
            count += 1
    return count


def enum_perfect_matchings(g: PlanarEmbeddedGraph) -> Iterator[frozenset[int]]:
    """Every perfect matching (as a set of edge ids), once each."""
    _guard(g.n, MAX_MATCHING_VERTICES, "vertex count")
    incident: list[list[int]] = [[] for _ in range(g.n + 1)]
    for eid, (u, v, _) in enumerate(g.edges):
        incident[u].append(eid)
        incident[v].append(eid)

    def rec(free: frozenset[int], chosen: list[int]):
        if not free:
            yield frozenset(chosen)
            return
        v = min(free)
        for eid in incident[v]:
            w = g.other(eid, v)
            if w in free:
                chosen.append(eid)
                yield from rec(free - {v, w}, chosen)
                chosen.pop()

    if g.n % 2 == 0:
        yield from rec(frozenset(range(1, g.n + 1)), [])


def max_matching_colors(g: PlanarEmbeddedGraph) -> Optional[int]:
    best = None
    for m in enum_perfect_matchings(g):
        c = len({g.edges[e][2] for e in m})
        if best is None or c > best:
            best = c
    return best


def colorful_pm_answer(g: PlanarEmbeddedGraph, k: int) -> bool:
    best = max_matching_colors(g)
    return best is not None and best >= k


def max_matching_size_bruteforce(edges: Sequence[tuple[int, int]]) -> int:
    """Largest vertex-disjoint edge subset, by trying subsets largest first."""
    _guard(len(edges), 24, "edge count")
    for size in range(len(edges), 0, -1):
        for sub in combinations(edges, size):
            ends = [v for e in sub for v in e]
            if len(set(ends)) == len(ends):
                return size
    return 0


def almost_equal(values: Sequence[int], t: int) -> bool:
    counts = [0] * (t + 1)
    for v in values:
        counts[v] += 1
    counts = counts[1:]
    return max(counts) - min(counts) <= 1


def verify_splitter(family: Iterable[Sequence[int]], n: int, k: int, t: int) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Exhaustive coverage check over one pass of the stream.

    Returns ``(True, None)`` when every k-subset of ``1..n`` is split almost
    equally by some member, else ``(False, first uncovered subset)`` with the
    subset lexicographically first.
    """
    from math import comb

    _guard(comb(n, k), MAX_SPLITTER_SUBSETS, "subset count")
    uncovered = list(combinations(range(1, n + 1), k))
    for vec in family:
        if len(vec) != n:
            raise ValueError(f"vector of length {len(vec)} in a family over {n} points")
        uncovered = [s for s in uncovered if not almost_equal([vec[i - 1] for i in s], t)]
        if not uncovered:
            return True, None
    if uncovered:
        return False, uncovered[0]
    return True, None
