"""Instance generators shared by the tests."""

from __future__ import annotations

import itertools
import math

from colorsieve.graph_core import ArcColoredDigraph, normalize_colors
from colorsieve.planar_pfaffian import PlanarEmbeddedGraph, from_coordinates


def digraph(n, arcs, colors=None):
    if colors is None:
        return ArcColoredDigraph(n, tuple(arcs))
    return normalize_colors(n, [(a, b, c) for (a, b), c in zip(arcs, colors)])


def path(n, colors=None):
    return digraph(n, [(i, i + 1) for i in range(1, n)], colors)


def bidirected(n, edges=None):
    if edges is None:
        edges = itertools.combinations(range(1, n + 1), 2)
    arcs = []
    for u, v in edges:
        arcs += [(u, v), (v, u)]
    return digraph(n, arcs)


def all_simple_digraphs(n):
    """Every simple digraph on vertices 1..n (labelled)."""
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    for mask in range(1 << len(pairs)):
        yield digraph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


def random_digraph(rng, n, max_arcs=None, multi=False, colors=0):
    """Random digraph; ``multi`` allows parallel arcs, ``colors`` > 0 colors arcs from 1..colors."""
    if n == 1:
        return digraph(1, [], [] if colors else None)
    max_arcs = 3 * n if max_arcs is None else max_arcs
    arcs = []
    for _ in range(rng.randint(0, max_arcs)):
        a = tuple(rng.sample(range(1, n + 1), 2))
        if multi or a not in arcs:
            arcs.append(a)
    if colors:
        return digraph(n, arcs, [rng.randint(1, colors) for _ in arcs])
    return digraph(n, arcs)


def random_reachable_digraph(rng, n, extra=None, colors=0):
    """Random digraph that has an out-branching rooted at a random vertex."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    arcs = set()
    for i in range(1, n):
        arcs.add((order[rng.randrange(i)], order[i]))
    extra = rng.randint(0, 2 * n) if extra is None else extra
    for _ in range(extra):
        if n > 1:
            arcs.add(tuple(rng.sample(range(1, n + 1), 2)))
    arcs = sorted(arcs)
    rng.shuffle(arcs)
    if colors:
        return digraph(n, arcs, [rng.randint(1, colors) for _ in arcs])
    return digraph(n, arcs)


def random_out_tree(rng, n):
    """Random rooted tree on 1..n as a digraph whose arcs point away from the root."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    arcs = [(order[rng.randrange(i)], order[i]) for i in range(1, n)]
    return digraph(n, arcs)


# planar ------------------------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _segments_cross(p1, p2, q1, q2):
    d1, d2 = _cross(q1, q2, p1), _cross(q1, q2, p2)
    d3, d4 = _cross(p1, p2, q1), _cross(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


def random_planar(rng, n, density=0.6, colors=1, connected=False):
    """Straight-line drawing of random points with non-crossing random edges."""
    coords = [(rng.random(), rng.random()) for _ in range(n)]
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    rng.shuffle(pairs)
    edges = []
    for u, v in pairs:
        ok = all(
            not _segments_cross(coords[u - 1], coords[v - 1], coords[a - 1], coords[b - 1])
            for a, b in edges
            if len({u, v, a, b}) == 4
        )
        if ok and (rng.random() < density or connected and _joins(edges, n, u, v)):
            edges.append((u, v))
    return from_coordinates(coords, edges, [rng.randint(1, colors) for _ in edges])


def _joins(edges, n, u, v):
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return find(u) != find(v)


def cycle_graph(n, colors=None):
    coords = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]
    edges = [(i, i % n + 1) for i in range(1, n + 1)]
    return from_coordinates(coords, edges, colors)


def grid_graph(rows, cols, colors=None):
    def vid(r, c):
        return r * cols + c + 1

    coords = [(c, r) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    if callable(colors):
        colors = [colors() for _ in edges]
    return from_coordinates(coords, edges, colors)


def k4():
    coords = [(0.0, 0.0), (4.0, 0.0), (2.0, 3.0), (2.0, 1.0)]
    edges = list(itertools.combinations(range(1, 5), 2))
    return from_coordinates(coords, edges)


def single_edge():
    return from_coordinates([(0.0, 0.0), (1.0, 0.0)], [(1, 2)])


def normalized(g: PlanarEmbeddedGraph) -> PlanarEmbeddedGraph:
    """Remap edge colors to 1..t in first-occurrence order."""
    remap = {}
    edges = []
    for u, v, c in g.edges:
        remap.setdefault(c, len(remap) + 1)
        edges.append((u, v, remap[c]))
    return PlanarEmbeddedGraph(g.n, tuple(edges), g.rotation)
