"""Digraph representation, parsing, and the structural subroutines used by
the solvers: out-branching existence, maximum matching on the underlying
undirected graph, and the leaf-exchange procedure for matchings.

Vertices are 1-based throughout (``1..n``).  Arcs are addressed by their
0-based position in :attr:`ArcColoredDigraph.arcs`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional


class GraphError(ValueError):
    """Raised for malformed graphs or violated preconditions."""


class ParseError(GraphError):
    """Raised when a graph file cannot be parsed.  Carries the line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class NoOutBranchingError(GraphError):
    pass


class Arc(NamedTuple):
    tail: int
    head: int
    color: Optional[int] = None


@dataclass(frozen=True)
class ArcColoredDigraph:
    """Directed multigraph on vertices ``1..n`` with optional arc colors.

    Either every arc is colored or none is.  Colors must form the contiguous
    range ``1..t``; use :func:`normalize_colors` to remap arbitrary labels.
    """

    n: int
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a digraph needs at least one vertex")
        arcs = tuple(Arc(*a) for a in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        colored = [a.color is not None for a in arcs]
        if any(colored) and not all(colored):
            raise GraphError("either all arcs carry a color or none does")
        for a in arcs:
            if not (1 <= a.tail <= self.n and 1 <= a.head <= self.n):
                raise GraphError(f"arc {a.tail}->{a.head} leaves vertex range 1..{self.n}")
            if a.tail == a.head:
                raise GraphError(f"self-loop at vertex {a.tail}")
        if arcs and all(colored):
            used = {a.color for a in arcs}
            if used != set(range(1, len(used) + 1)):
                raise GraphError("colors must form a contiguous range 1..t")

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def colored(self) -> bool:
        return bool(self.arcs) and self.arcs[0].color is not None

    @property
    def num_colors(self) -> int:
        if not self.colored:
            return 0
        return max(a.color for a in self.arcs)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def out_neighbors(self) -> list[list[int]]:
        """Adjacency lists indexed by vertex (index 0 unused)."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for a in self.arcs:
            adj[a.tail].append(a.head)
        return adj

    def in_arcs(self) -> list[list[int]]:
        """Arc indices entering each vertex, in arc order (index 0 unused)."""
        ins: list[list[int]] = [[] for _ in range(self.n + 1)]
        for idx, a in enumerate(self.arcs):
            ins[a.head].append(idx)
        return ins

    def without_arc(self, index: int) -> "ArcColoredDigraph":
        arcs = self.arcs[:index] + self.arcs[index + 1:]
        if self.colored:
            return normalize_colors(self.n, arcs)
        return ArcColoredDigraph(self.n, arcs)


def normalize_colors(n: int, arcs: Iterable) -> ArcColoredDigraph:
    """Build a digraph, remapping color labels to ``1..t`` in first-occurrence order."""
    arcs = [Arc(*a) for a in arcs]
    remap: dict[int, int] = {}
    out = []
    for a in arcs:
        if a.color is None:
            out.append(a)
            continue
        if a.color not in remap:
            remap[a.color] = len(remap) + 1
        out.append(Arc(a.tail, a.head, remap[a.color]))
    return ArcColoredDigraph(n, tuple(out))


def parse_digraph(text: str | bytes) -> ArcColoredDigraph:
    """Parse the line-oriented digraph format.

    ::

        p digraph <n> <m>
        a <tail> <head> [<color>]

    ``#`` starts a comment.  Colors are remapped to a contiguous range in
    order of first occurrence.
    """
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    arcs: list[Arc] = []
    arc_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "p":
            if header is not None:
                raise ParseError(lineno, "duplicate header")
            if len(fields) != 4 or fields[1] != "digraph":
                raise ParseError(lineno, "expected 'p digraph <n> <m>'")
            header = (_int(fields[2], lineno), _int(fields[3], lineno))
            if header[0] < 1 or header[1] < 0:
                raise ParseError(lineno, "bad vertex or arc count")
        elif fields[0] == "a":
            if header is None:
                raise ParseError(lineno, "arc before header")
            if len(fields) not in (3, 4):
                raise ParseError(lineno, "expected 'a <tail> <head> [<color>]'")
            tail, head = _int(fields[1], lineno), _int(fields[2], lineno)
            n = header[0]
            if not (1 <= tail <= n and 1 <= head <= n):
                raise ParseError(lineno, f"vertex id out of range 1..{n}")
            if tail == head:
                raise ParseError(lineno, f"self-loop at vertex {tail}")
            color = None
            if len(fields) == 4:
                color = _int(fields[3], lineno)
                if color < 1:
                    raise ParseError(lineno, "colors must be positive integers")
            if arcs and (arcs[0].color is None) != (color is None):
                raise ParseError(lineno, "mixed colored and uncolored arcs")
            arcs.append(Arc(tail, head, color))
            arc_lines.append(lineno)
        else:
            raise ParseError(lineno, f"unknown line type {fields[0]!r}")
    if header is None:
        raise ParseError(0, "missing 'p digraph' header")
    if len(arcs) != header[1]:
        raise ParseError(0, f"header declares {header[1]} arcs, found {len(arcs)}")
    return normalize_colors(header[0], arcs)


def format_digraph(d: ArcColoredDigraph) -> str:
    lines = [f"p digraph {d.n} {d.m}"]
    for a in d.arcs:
        if a.color is None:
            lines.append(f"a {a.tail} {a.head}")
        else:
            lines.append(f"a {a.tail} {a.head} {a.color}")
    return "\n".join(lines) + "\n"


def _int(field: str, lineno: int) -> int:
    try:
        return int(field)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {field!r}") from None


# --------------------------------------------------------------------------
# Out-branchings


def strongly_connected_components(d: ArcColoredDigraph) -> list[list[int]]:
    """Kosaraju, iterative.  Components are returned with sorted members."""
    adj = d.out_neighbors()
    radj: list[list[int]] = [[] for _ in range(d.n + 1)]
    for a in d.arcs:
        radj[a.head].append(a.tail)

    order: list[int] = []
    seen = [False] * (d.n + 1)
    for s in d.vertices():
        if seen[s]:
            continue
        seen[s] = True
        stack = [(s, iter(adj[s]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, iter(adj[w])))
                    break
            else:
                stack.pop()
                order.append(v)

    comp = [0] * (d.n + 1)
    comps: list[list[int]] = []
    for s in reversed(order):
        if comp[s]:
            continue
        comps.append([])
        cid = len(comps)
        comp[s] = cid
        stack = [s]
        while stack:
            v = stack.pop()
            comps[-1].append(v)
            for w in radj[v]:
                if not comp[w]:
                    comp[w] = cid
                    stack.append(w)
    return [sorted(c) for c in comps]


def has_out_branching(d: ArcColoredDigraph) -> frozenset[int]:
    """Return the members of the unique source strongly connected component,
    or the empty set when ``d`` has no out-branching.

    Any returned vertex can serve as the root of an out-branching.
    """
    comps = strongly_connected_components(d)
    cid = {}
    for i, c in enumerate(comps):
        for v in c:
            cid[v] = i
    has_incoming = [False] * len(comps)
    for a in d.arcs:
        if cid[a.tail] != cid[a.head]:
            has_incoming[cid[a.head]] = True
    sources = [i for i, flag in enumerate(has_incoming) if not flag]
    if len(sources) != 1:
        return frozenset()
    return frozenset(comps[sources[0]])


@dataclass(frozen=True)
class OutBranching:
    """Spanning out-tree given by the entering arc of every non-root vertex.

    ``parent_arc[v - 1]`` is the index of the arc entering ``v``, or None for
    the root.
    """

    root: int
    parent_arc: tuple[Optional[int], ...]

    def arc_indices(self) -> list[int]:
        return sorted(a for a in self.parent_arc if a is not None)

    def parents(self, d: ArcColoredDigraph) -> dict[int, int]:
        return {d.arcs[a].head: d.arcs[a].tail for a in self.parent_arc if a is not None}

    def internal_vertices(self, d: ArcColoredDigraph) -> frozenset[int]:
        return frozenset(d.arcs[a].tail for a in self.parent_arc if a is not None)

    def leaves(self, d: ArcColoredDigraph) -> frozenset[int]:
        return frozenset(d.vertices()) - self.internal_vertices(d)

    def colors(self, d: ArcColoredDigraph) -> frozenset[int]:
        return frozenset(d.arcs[a].color for a in self.parent_arc if a is not None)

    def is_valid(self, d: ArcColoredDigraph) -> bool:
        if len(self.parent_arc) != d.n or not 1 <= self.root <= d.n:
            return False
        for v in d.vertices():
            a = self.parent_arc[v - 1]
            if v == self.root:
                if a is not None:
                    return False
            elif a is None or not 0 <= a < d.m or d.arcs[a].head != v:
                return False
        # every vertex must reach the root by following parents
        parent = self.parents(d)
        for v in d.vertices():
            steps = 0
            while v != self.root:
                v = parent[v]
                steps += 1
                if steps > d.n:
                    return False
        return True


def any_out_branching(d: ArcColoredDigraph, root: Optional[int] = None) -> OutBranching:
    """BFS out-branching from ``root`` (default: smallest source-SCC vertex).

    Arcs are scanned in arc order, so the result is deterministic.
    """
    if root is None:
        roots = has_out_branching(d)
        if not roots:
            raise NoOutBranchingError("digraph has no out-branching")
        root = min(roots)
    out_arcs: list[list[int]] = [[] for _ in range(d.n + 1)]
    for idx, a in enumerate(d.arcs):
        out_arcs[a.tail].append(idx)
    parent: list[Optional[int]] = [None] * d.n
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for idx in out_arcs[v]:
            w = d.arcs[idx].head
            if w not in seen:
                seen.add(w)
                parent[w - 1] = idx
                queue.append(w)
    if len(seen) != d.n:
        raise NoOutBranchingError(f"vertex {root} does not reach every vertex")
    return OutBranching(root, tuple(parent))


# --------------------------------------------------------------------------
# Matchings


@dataclass(frozen=True)
class ArcMatching:
    arcs: frozenset[int]

    def __len__(self) -> int:
        return len(self.arcs)

    def vertices(self, d: ArcColoredDigraph) -> frozenset[int]:
        return frozenset(v for i in self.arcs for v in d.arcs[i][:2])

    def is_valid(self, d: ArcColoredDigraph) -> bool:
        seen: set[int] = set()
        for i in self.arcs:
            a = d.arcs[i]
            if a.tail in seen or a.head in seen:
                return False
            seen.update((a.tail, a.head))
        return True


def _blossom_matching(n: int, adj: list[list[int]]) -> list[int]:
    """Edmonds' maximum-cardinality matching.  Vertices 0..n-1.

    Returns ``mate`` with ``mate[v] == -1`` for exposed vertices.
    """
    mate = [-1] * n
    for root in range(n):
        if mate[root] != -1:
            continue
        # augmenting-path search with blossom contraction
        parent = [-1] * n
        base = list(range(n))
        used = [False] * n
        used[root] = True
        queue = deque([root])
        found = -1
        while queue and found < 0:
            v = queue.popleft()
            for u in adj[v]:
                if base[v] == base[u] or mate[v] == u:
                    continue
                if u == root or (mate[u] != -1 and parent[mate[u]] != -1):
                    cur = _lca(v, u, base, mate, parent)
                    in_blossom = [False] * n
                    _mark_path(v, cur, u, base, mate, parent, in_blossom)
                    _mark_path(u, cur, v, base, mate, parent, in_blossom)
                    for w in range(n):
                        if in_blossom[base[w]]:
                            base[w] = cur
                            if not used[w]:
                                used[w] = True
                                queue.append(w)
                elif parent[u] == -1:
                    parent[u] = v
                    if mate[u] == -1:
                        found = u
                        break
                    used[mate[u]] = True
                    queue.append(mate[u])
        v = found
        while v != -1:
            pv = parent[v]
            nv = mate[pv]
            mate[v] = pv
            mate[pv] = v
            v = nv
    return mate


def _lca(a, b, base, mate, parent):
    seen = set()
    while True:
        a = base[a]
        seen.add(a)
        if mate[a] == -1:
            break
        a = parent[mate[a]]
    while True:
        b = base[b]
        if b in seen:
            return b
        b = parent[mate[b]]


def _mark_path(v, b, child, base, mate, parent, in_blossom):
    while base[v] != b:
        in_blossom[base[v]] = True
        in_blossom[base[mate[v]]] = True
        parent[v] = child
        child = mate[v]
        v = parent[mate[v]]


def maximum_matching(d: ArcColoredDigraph) -> ArcMatching:
    """Maximum matching of the underlying undirected simple graph, mapped back
    to arcs.  Each matched edge is represented by the smallest arc index
    joining its endpoints (in either direction).
    """
    rep: dict[tuple[int, int], int] = {}
    for idx, a in enumerate(d.arcs):
        key = (min(a.tail, a.head), max(a.tail, a.head))
        rep.setdefault(key, idx)
    adj: list[list[int]] = [[] for _ in range(d.n)]
    for u, v in sorted(rep):
        adj[u - 1].append(v - 1)
        adj[v - 1].append(u - 1)
    mate = _blossom_matching(d.n, adj)
    chosen = frozenset(
        rep[(u + 1, mate[u] + 1)] for u in range(d.n) if mate[u] > u
    )
    return ArcMatching(chosen)


def exchange_out_branching(d: ArcColoredDigraph, matching: ArcMatching) -> OutBranching:
    """Out-branching in which no arc of ``matching`` has two leaf endpoints.

    Starts from :func:`any_out_branching` and repeatedly swaps in a matching
    arc ``xy`` whose endpoints are both leaves, replacing the arc entering
    ``y``.  Every swap adds one matching arc to the branching, so at most
    ``len(matching)`` swaps happen.
    """
    if not matching.is_valid(d):
        raise GraphError("arc set is not a matching")
    branching = any_out_branching(d)
    parent = list(branching.parent_arc)
    outdeg = [0] * (d.n + 1)
    for a in parent:
        if a is not None:
            outdeg[d.arcs[a].tail] += 1
    order = sorted(matching.arcs)
    swaps = 0
    changed = True
    while changed:
        changed = False
        for idx in order:
            x, y = d.arcs[idx].tail, d.arcs[idx].head
            if outdeg[x] == 0 and outdeg[y] == 0:
                old = parent[y - 1]
                # y is a leaf of a tree with >= 2 vertices, so it is not the root
                outdeg[d.arcs[old].tail] -= 1
                parent[y - 1] = idx
                outdeg[x] += 1
                swaps += 1
                changed = True
                break
    assert swaps <= len(matching)
    return OutBranching(branching.root, tuple(parent))
