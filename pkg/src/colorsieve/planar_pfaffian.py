"""Embedded planar graphs, Kasteleyn orientations and Pfaffian matching evaluators.

An embedding is a rotation system: for each vertex the cyclic order of its
incident edges.  Faces are traced by the rule "arrive at ``v`` along edge
``e``, leave along the edge after ``e`` in the rotation of ``v``".  All faces
are traced in the same rotational sense, which is all the Kasteleyn parity
argument needs; an edge counts as *clockwise* for a face when its
orientation agrees with the traversal.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .exact_algebra import bareiss_det, signed_pfaffian
from .graph_core import ParseError
from .kirchhoff_poly import ColorPartition, values_for


class EmbeddingError(ValueError):
    pass


class NotPlanarError(EmbeddingError):
    pass


HalfEdge = tuple[int, int, int]  # (edge id, from, to)


@dataclass(frozen=True)
class PlanarEmbeddedGraph:
    """Simple undirected edge-colored graph with a rotation system.

    Vertices are ``1..n``, edges are 0-based ids into ``edges``.
    ``rotation[v - 1]`` lists the edge ids incident to ``v`` in cyclic order.
    """

    n: int
    edges: tuple[tuple[int, int, Optional[int]], ...]
    rotation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "rotation", tuple(tuple(r) for r in self.rotation))
        if len(self.rotation) != self.n:
            raise EmbeddingError("rotation must list every vertex")
        seen_pairs = set()
        incident: list[list[int]] = [[] for _ in range(self.n + 1)]
        for eid, (u, v, _c) in enumerate(self.edges):
            if not (1 <= u <= self.n and 1 <= v <= self.n) or u == v:
                raise EmbeddingError(f"edge {eid} has bad endpoints ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen_pairs:
                raise EmbeddingError(f"parallel edge {key}")
            seen_pairs.add(key)
            incident[u].append(eid)
            incident[v].append(eid)
        for v in range(1, self.n + 1):
            rot = self.rotation[v - 1]
            if sorted(rot) != sorted(incident[v]):
                raise EmbeddingError(f"rotation at vertex {v} does not match its incident edges")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def num_colors(self) -> int:
        colors = [c for _u, _v, c in self.edges if c is not None]
        return max(colors, default=0)

    def other(self, eid: int, v: int) -> int:
        u, w, _ = self.edges[eid]
        return w if u == v else u

    def components(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        comp = [0] * (self.n + 1)
        out = []
        for s in range(1, self.n + 1):
            if comp[s]:
                continue
            comp[s] = len(out) + 1
            members = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if not comp[y]:
                        comp[y] = comp[s]
                        members.append(y)
                        stack.append(y)
            out.append(sorted(members))
        return out

    def faces(self) -> list[list[HalfEdge]]:
        """Trace all faces.  Each face is its boundary walk of half-edges."""
        nxt_pos = {}
        for v in range(1, self.n + 1):
            rot = self.rotation[v - 1]
            for i, eid in enumerate(rot):
                nxt_pos[(v, eid)] = rot[(i + 1) % len(rot)]
        used = set()
        faces = []
        for eid, (u, v, _) in enumerate(self.edges):
            for start in ((eid, u, v), (eid, v, u)):
                if start in used:
                    continue
                face = []
                he = start
                while he not in used:
                    used.add(he)
                    face.append(he)
                    e, _a, b = he
                    e2 = nxt_pos[(b, e)]
                    he = (e2, b, self.other(e2, b))
                faces.append(face)
        return faces

    def faces_by_component(self) -> list[tuple[list[int], list[list[HalfEdge]]]]:
        comp_of = {}
        comps = self.components()
        for i, c in enumerate(comps):
            for v in c:
                comp_of[v] = i
        grouped: list[list[list[HalfEdge]]] = [[] for _ in comps]
        for f in self.faces():
            grouped[comp_of[f[0][1]]].append(f)
        return list(zip(comps, grouped))


def check_euler(g: PlanarEmbeddedGraph) -> None:
    """Raise :class:`NotPlanarError` unless every component satisfies V - E + F = 2."""
    for verts, faces in g.faces_by_component():
        vs = set(verts)
        m = sum(1 for u, _v, _c in g.edges if u in vs)
        f = len(faces) if m else 1
        if len(verts) - m + f != 2:
            raise NotPlanarError(
                f"not a planar embedding: component with V={len(verts)}, E={m}, F={f}"
            )


def parse_planar(text: str | bytes) -> PlanarEmbeddedGraph:
    """Parse the planar embedding format::

        p planar <n> <m>
        e <u> <v> <color>          (m lines; edge ids are 1-based in file order)
        r <v> <deg> <edge ids>     (n lines; cyclic order)
    """
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    edges: list[tuple[int, int, int]] = []
    rotation: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            nums = [int(x) for x in fields[1:] if x != "planar"]
        except ValueError:
            raise ParseError(lineno, "expected integers") from None
        kind = fields[0]
        if kind == "p":
            if header is not None or len(fields) != 4 or fields[1] != "planar":
                raise ParseError(lineno, "expected a single 'p planar <n> <m>' header")
            header = (nums[0], nums[1])
        elif header is None:
            raise ParseError(lineno, "content before header")
        elif kind == "e":
            if len(nums) != 3:
                raise ParseError(lineno, "expected 'e <u> <v> <color>'")
            u, v, c = nums
            if not (1 <= u <= header[0] and 1 <= v <= header[0]):
                raise ParseError(lineno, "vertex id out of range")
            if u == v:
                raise ParseError(lineno, f"self-loop at vertex {u}")
            if c < 1:
                raise ParseError(lineno, "colors must be positive integers")
            edges.append((u, v, c))
        elif kind == "r":
            if len(nums) < 2 or len(nums) != 2 + nums[1]:
                raise ParseError(lineno, "expected 'r <v> <deg> <edge ids>'")
            v, ids = nums[0], nums[2:]
            if not 1 <= v <= header[0]:
                raise ParseError(lineno, "vertex id out of range")
            if v in rotation:
                raise ParseError(lineno, f"duplicate rotation for vertex {v}")
            if len(set(ids)) != len(ids):
                raise ParseError(lineno, "duplicate edge id in rotation")
            rotation[v] = tuple(i - 1 for i in ids)
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if header is None:
        raise ParseError(0, "missing 'p planar' header")
    n, m = header
    if len(edges) != m:
        raise ParseError(0, f"header declares {m} edges, found {len(edges)}")
    if len(rotation) != n:
        missing = sorted(set(range(1, n + 1)) - set(rotation))
        raise ParseError(0, f"missing rotation lines for vertices {missing}")
    for v, ids in rotation.items():
        if any(not 0 <= i < m for i in ids):
            raise ParseError(0, f"rotation of vertex {v} names an unknown edge")
    colors = {}
    norm = []
    for u, v, c in edges:
        colors.setdefault(c, len(colors) + 1)
        norm.append((u, v, colors[c]))
    try:
        g = PlanarEmbeddedGraph(n, tuple(norm), tuple(rotation[v] for v in range(1, n + 1)))
    except EmbeddingError as exc:
        raise ParseError(0, str(exc)) from None
    check_euler(g)
    return g


def format_planar(g: PlanarEmbeddedGraph) -> str:
    lines = [f"p planar {g.n} {g.m}"]
    lines += [f"e {u} {v} {c}" for u, v, c in g.edges]
    for v in range(1, g.n + 1):
        rot = g.rotation[v - 1]
        lines.append(f"r {v} {len(rot)} " + " ".join(str(e + 1) for e in rot))
    return "\n".join(lines) + "\n"


def from_coordinates(
    coords: Sequence[tuple[float, float]],
    edges: Iterable[tuple[int, int]],
    colors: Optional[Sequence[int]] = None,
) -> PlanarEmbeddedGraph:
    """Rotation system of a straight-line drawing (neighbors sorted by angle).

    ``coords[v - 1]`` is the position of vertex ``v``.  The caller is
    responsible for the drawing being crossing-free.
    """
    edges = list(edges)
    if colors is None:
        colors = [1] * len(edges)
    n = len(coords)
    incident: list[list[int]] = [[] for _ in range(n + 1)]
    for eid, (u, v) in enumerate(edges):
        incident[u].append(eid)
        incident[v].append(eid)
    rotation = []
    for v in range(1, n + 1):
        x0, y0 = coords[v - 1]

        def angle(eid, v=v, x0=x0, y0=y0):
            u, w = edges[eid]
            x, y = coords[(w if u == v else u) - 1]
            return math.atan2(y - y0, x - x0)

        rotation.append(tuple(sorted(incident[v], key=angle)))
    return PlanarEmbeddedGraph(n, tuple((u, v, c) for (u, v), c in zip(edges, colors)), tuple(rotation))


# --------------------------------------------------------------------------
# Kasteleyn orientation


@dataclass(frozen=True)
class KasteleynOrientation:
    """``direction[e] == (a, b)`` orients edge ``e`` from ``a`` to ``b``."""

    direction: tuple[tuple[int, int], ...]
    outer_faces: tuple[int, ...] = ()


def outer_face_index(faces: Sequence[Sequence[HalfEdge]]) -> int:
    """Longest boundary; ties go to the face containing the smallest vertex id,
    then to the earliest traced face."""
    def key(i):
        f = faces[i]
        return (-len(f), min(he[1] for he in f), i)
    return min(range(len(faces)), key=key)


def clockwise_count(face: Sequence[HalfEdge], orientation: KasteleynOrientation) -> int:
    return sum(1 for e, a, b in face if orientation.direction[e] == (a, b))


def kasteleyn_orient(g: PlanarEmbeddedGraph, allow_disconnected: bool = False) -> KasteleynOrientation:
    """Orientation with an odd number of clockwise edges on every inner face.

    Spanning-tree edges are oriented from smaller to larger vertex id.  The
    remaining edges form a spanning tree of the dual rooted at the outer
    face; they are fixed leaf-to-root, each one closing the parity of the
    face below it.  With ``allow_disconnected`` every component is handled
    separately with its own outer face.
    """
    comps = g.faces_by_component()
    if len(comps) > 1 and not allow_disconnected:
        raise EmbeddingError("kasteleyn_orient needs a connected graph")
    direction: list[Optional[tuple[int, int]]] = [None] * g.m

    adj: list[list[int]] = [[] for _ in range(g.n + 1)]
    for eid, (u, v, _) in enumerate(g.edges):
        adj[u].append(eid)
        adj[v].append(eid)

    outer_ids = []
    for verts, faces in comps:
        if not faces:
            continue
        # spanning tree by BFS from the smallest vertex
        seen = {verts[0]}
        queue = deque([verts[0]])
        while queue:
            x = queue.popleft()
            for eid in adj[x]:
                y = g.other(eid, x)
                if y not in seen:
                    seen.add(y)
                    u, v, _ = g.edges[eid]
                    direction[eid] = (min(u, v), max(u, v))
                    queue.append(y)

        face_of: dict[tuple[int, int, int], int] = {}
        for fi, f in enumerate(faces):
            for he in f:
                face_of[he] = fi
        outer = outer_face_index(faces)
        outer_ids.append(outer)

        # dual tree over non-tree edges
        dual: list[list[tuple[int, int]]] = [[] for _ in faces]
        for eid, (u, v, _) in enumerate(g.edges):
            if direction[eid] is not None or u not in seen:
                continue
            f1, f2 = face_of[(eid, u, v)], face_of[(eid, v, u)]
            dual[f1].append((f2, eid))
            dual[f2].append((f1, eid))
        parent_edge: list[Optional[int]] = [None] * len(faces)
        order = []
        visited = [False] * len(faces)
        visited[outer] = True
        stack = [outer]
        while stack:
            f = stack.pop()
            order.append(f)
            for h, eid in dual[f]:
                if not visited[h]:
                    visited[h] = True
                    parent_edge[h] = eid
                    stack.append(h)
        if not all(visited):
            raise EmbeddingError("dual of non-tree edges is not connected; embedding is inconsistent")

        for f in reversed(order):
            eid = parent_edge[f]
            if eid is None:
                continue
            cw = 0
            for e, a, b in faces[f]:
                if e != eid and direction[e] == (a, b):
                    cw += 1
            (_, a, b), = [he for he in faces[f] if he[0] == eid]
            direction[eid] = (a, b) if cw % 2 == 0 else (b, a)

    assert all(d is not None for d in direction)
    return KasteleynOrientation(tuple(direction), tuple(outer_ids))


def inner_faces_odd(g: PlanarEmbeddedGraph, orientation: KasteleynOrientation) -> bool:
    """Audit: every non-outer face has odd clockwise count."""
    for verts, faces in g.faces_by_component():
        if not faces:
            continue
        outer = outer_face_index(faces)
        for i, f in enumerate(faces):
            if i != outer and clockwise_count(f, orientation) % 2 == 0:
                return False
    return True


# --------------------------------------------------------------------------
# Matching evaluator


@dataclass(frozen=True)
class MatchingEvaluator:
    """Kasteleyn matrix with edge variables replaced by class values of edge colors.

    The signed Pfaffian equals ``s`` times the number of perfect matchings
    surviving the assignment, with one fixed sign ``s`` per instance.
    """

    graph: PlanarEmbeddedGraph
    orientation: KasteleynOrientation
    partition: ColorPartition

    @property
    def k(self) -> int:
        return self.partition.k

    def matrix(self, values: Sequence[int]) -> list[list[int]]:
        n = self.graph.n
        mat = [[0] * n for _ in range(n)]
        for eid, (_u, _v, color) in enumerate(self.graph.edges):
            c = self.partition.class_of[color]
            w = 1 if c is None else values[c - 1]
            a, b = self.orientation.direction[eid]
            mat[a - 1][b - 1] += w
            mat[b - 1][a - 1] -= w
        return mat

    def evaluate(self, values: Sequence[int]) -> int:
        if self.graph.n % 2:
            return 0
        return signed_pfaffian(self.matrix(values))

    def evaluate_zeroed(self, zeroed: Iterable[int]) -> int:
        return self.evaluate(values_for(self.k, zeroed))

    def determinant(self, values: Sequence[int]) -> int:
        return bareiss_det(self.matrix(values))


def build_matching_evaluator(
    g: PlanarEmbeddedGraph, orientation: KasteleynOrientation, partition: ColorPartition
) -> MatchingEvaluator:
    missing = sorted({c for _u, _v, c in g.edges} - set(partition.class_of))
    if missing:
        raise ValueError(f"partition does not cover edge colors {missing}")
    return MatchingEvaluator(g, orientation, partition)
