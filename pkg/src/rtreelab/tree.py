"""Finite metric trees: distances, centers, segments, extremal points.

A ``MetricTree`` is a finite combinatorial tree with strictly positive edge
lengths.  Points are addressed by name (vertex names and designated point
names share one namespace) or by an explicit :class:`Location` inside an
edge.  Edge lengths and offsets should be exact numbers (``Fraction``/``int``)
unless the caller deliberately works in floats; every operation is a pure
function of the immutable tree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Num = Union[int, Fraction, float]


class TreeStructureError(ValueError):
    pass


class UnknownPointError(KeyError):
    pass


def _exactify(x: Num) -> Num:
    # ints become Fractions so that division stays exact by default
    return Fraction(x) if isinstance(x, int) else x


def canonical_edge(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Location:
    """A point strictly inside an edge, at ``offset`` from the smaller-named
    endpoint of ``edge``."""

    edge: tuple[str, str]
    offset: Num

    def __repr__(self) -> str:
        u, v = self.edge
        return f"{u}-{v}@{self.offset}"


Point = Union[str, Location]


@dataclass(frozen=True)
class SegmentPiece:
    """One edge sub-interval of a segment, traversed from ``start`` to
    ``end`` (offsets from the canonical edge orientation)."""

    edge: tuple[str, str]
    start: Num
    end: Num

    @property
    def length(self) -> Num:
        return abs(self.end - self.start)


class MetricTree:
    """Immutable finite tree with positive edge lengths and named points.

    Parameters
    ----------
    edges:
        iterable of ``(u, v, length)``.
    points:
        iterable of ``(name, u, v, offset)`` placing a designated point at
        ``offset`` from ``u`` along edge ``(u, v)``, or ``(name, vertex)``
        placing it at a vertex.
    vertices:
        extra isolated vertices (only useful for the single-vertex tree).
    open_ends:
        vertices flagged as removed boundary (half-open ends); produced by
        :meth:`interior_tree`.
    """

    def __init__(
        self,
        edges: Iterable[tuple[str, str, Num]],
        points: Iterable[tuple] = (),
        *,
        vertices: Iterable[str] = (),
        open_ends: Iterable[str] = (),
    ):
        self._lengths: dict[tuple[str, str], Num] = {}
        adj: dict[str, list[tuple[str, Num]]] = {}
        for v in vertices:
            adj.setdefault(v, [])
        for u, v, raw in edges:
            if u == v:
                raise TreeStructureError(f"loop edge at {u!r}")
            length = _exactify(raw)
            if not length > 0:
                raise TreeStructureError(f"edge {u}-{v} has nonpositive length {raw}")
            e = canonical_edge(u, v)
            if e in self._lengths:
                raise TreeStructureError(f"duplicate edge {u}-{v}")
            self._lengths[e] = length
            adj.setdefault(u, []).append((v, length))
            adj.setdefault(v, []).append((u, length))
        if not adj:
            raise TreeStructureError("tree needs at least one vertex")
        for v in adj:
            adj[v].sort()
        self._adj = adj
        self._check_connected_acyclic()

        self._points: dict[str, Point] = {}
        for entry in points:
            if len(entry) == 2:
                name, vertex = entry
                if vertex not in adj:
                    raise UnknownPointError(vertex)
                loc: Point = vertex
            else:
                name, u, v, off = entry
                loc = self._normalize_edge_point(u, v, _exactify(off))
            if name in adj or name in self._points:
                raise TreeStructureError(f"point name {name!r} already in use")
            self._points[name] = loc
        self.open_ends = frozenset(open_ends)
        for v in self.open_ends:
            if v not in adj:
                raise UnknownPointError(v)
        self._vdist = self._all_pairs()

    # -- construction helpers -------------------------------------------------

    def _check_connected_acyclic(self) -> None:
        n_edges = len(self._lengths)
        if n_edges != len(self._adj) - 1:
            raise TreeStructureError(
                f"{len(self._adj)} vertices and {n_edges} edges cannot form a tree"
            )
        seen = set()
        stack = [next(iter(sorted(self._adj)))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(w for w, _ in self._adj[v] if w not in seen)
        if len(seen) != len(self._adj):
            raise TreeStructureError("edge graph is not connected")

    def _normalize_edge_point(self, u: str, v: str, off: Num) -> Point:
        e = canonical_edge(u, v)
        if e not in self._lengths:
            raise UnknownPointError(f"no edge {u}-{v}")
        length = self._lengths[e]
        if u != e[0]:
            off = length - off
        if off < 0 or off > length:
            raise TreeStructureError(f"offset {off} outside edge {e} of length {length}")
        if off == 0:
            return e[0]
        if off == length:
            return e[1]
        return Location(e, off)

    def _all_pairs(self) -> dict[str, dict[str, Num]]:
        table = {}
        for src in self._adj:
            dist = {src: Fraction(0)}
            stack = [src]
            while stack:
                x = stack.pop()
                for y, length in self._adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + length
                        stack.append(y)
            table[src] = dist
        return table

    # -- introspection ---------------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self._adj))

    @property
    def edges(self) -> tuple[tuple[str, str, Num], ...]:
        return tuple((u, v, self._lengths[(u, v)]) for u, v in sorted(self._lengths))

    @property
    def point_names(self) -> tuple[str, ...]:
        """Designated point names and vertex names, sorted."""
        return tuple(sorted(self._adj)) + tuple(sorted(self._points))

    @property
    def designated(self) -> dict[str, Point]:
        return dict(self._points)

    def edge_length(self, u: str, v: str) -> Num:
        e = canonical_edge(u, v)
        if e not in self._lengths:
            raise UnknownPointError(f"no edge {u}-{v}")
        return self._lengths[e]

    def degree(self, vertex: str) -> int:
        if vertex not in self._adj:
            raise UnknownPointError(vertex)
        return len(self._adj[vertex])

    def resolve(self, p: Point) -> Point:
        """Normalize a point reference: vertex name, or interior Location."""
        if isinstance(p, str):
            if p in self._adj:
                return p
            if p in self._points:
                return self._points[p]
            raise UnknownPointError(p)
        return self._normalize_edge_point(p.edge[0], p.edge[1], _exactify(p.offset))

    def name_of(self, p: Point) -> str | None:
        """Name addressing this location, if any (vertex name wins)."""
        loc = self.resolve(p)
        if isinstance(loc, str):
            return loc
        for name in sorted(self._points):
            if self._points[name] == loc:
                return name
        return None

    def same_point(self, p: Point, q: Point) -> bool:
        return self.resolve(p) == self.resolve(q)

    def contains(self, p: Point) -> bool:
        """Membership, honoring half-open ends of an interior tree."""
        loc = self.resolve(p)
        if isinstance(loc, str):
            return loc not in self.open_ends
        return True

    # -- metric ----------------------------------------------------------------

    def distance(self, p: Point, q: Point) -> Num:
        a, b = self.resolve(p), self.resolve(q)
        if isinstance(a, str) and isinstance(b, str):
            return self._vdist[a][b]
        if isinstance(a, str):
            a, b = b, a
        # a is a Location
        (u, v), off = a.edge, a.offset
        length = self._lengths[a.edge]
        if isinstance(b, Location):
            if b.edge == a.edge:
                return abs(off - b.offset)
            (x, y), boff = b.edge, b.offset
            blen = self._lengths[b.edge]
            return min(
                off + self._vdist[u][x] + boff,
                off + self._vdist[u][y] + (blen - boff),
                (length - off) + self._vdist[v][x] + boff,
                (length - off) + self._vdist[v][y] + (blen - boff),
            )
        return min(off + self._vdist[u][b], (length - off) + self._vdist[v][b])

    def _vertex_path(self, a: str, b: str) -> list[str]:
        if a == b:
            return [a]
        parent = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            if x == b:
                break
            for y, _ in self._adj[x]:
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        path = [b]
        while path[-1] != a:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def _exit_vertex(self, loc: Location, target_vertex: str) -> tuple[str, Num]:
        """Endpoint through which the path from loc to the target leaves
        loc's edge, with the distance from loc to that endpoint."""
        (u, v), off = loc.edge, loc.offset
        length = self._lengths[loc.edge]
        via_u = off + self._vdist[u][target_vertex]
        via_v = (length - off) + self._vdist[v][target_vertex]
        return (u, off) if via_u <= via_v else (v, length - off)

    def segment(self, p: Point, q: Point) -> list[SegmentPiece]:
        """The unique arc from p to q as ordered edge sub-intervals."""
        a, b = self.resolve(p), self.resolve(q)
        if a == b:
            return []
        if isinstance(a, Location) and isinstance(b, Location) and a.edge == b.edge:
            return [SegmentPiece(a.edge, a.offset, b.offset)]
        if isinstance(a, Location) and isinstance(b, str) and b in a.edge:
            u, v = a.edge
            return [SegmentPiece(a.edge, a.offset, 0 if b == u else self._lengths[a.edge])]
        if isinstance(a, str) and isinstance(b, Location) and a in b.edge:
            u, v = b.edge
            return [SegmentPiece(b.edge, 0 if a == u else self._lengths[b.edge], b.offset)]

        pieces: list[SegmentPiece] = []
        if isinstance(a, str):
            start_vertex = a
        else:
            start_vertex, _ = self._exit_vertex(a, self._side_vertex(b))
            u, v = a.edge
            pieces.append(
                SegmentPiece(a.edge, a.offset, 0 if start_vertex == u else self._lengths[a.edge])
            )
        if isinstance(b, str):
            end_vertex = b
        else:
            end_vertex, _ = self._exit_vertex(b, self._side_vertex(a))

        path = self._vertex_path(start_vertex, end_vertex)
        for x, y in zip(path, path[1:]):
            e = canonical_edge(x, y)
            length = self._lengths[e]
            if x == e[0]:
                pieces.append(SegmentPiece(e, 0, length))
            else:
                pieces.append(SegmentPiece(e, length, 0))
        if isinstance(b, Location):
            u, v = b.edge
            pieces.append(
                SegmentPiece(b.edge, 0 if end_vertex == u else self._lengths[b.edge], b.offset)
            )
        return pieces

    def _side_vertex(self, p: Point) -> str:
        return p if isinstance(p, str) else p.edge[0]

    def point_along(self, p: Point, q: Point, t: Num) -> Point:
        """The point of [p, q] at distance t from p."""
        t = _exactify(t)
        total = self.distance(p, q)
        if t < 0 or t > total:
            raise ValueError(f"t={t} outside [0, {total}]")
        if t == 0:
            return self.resolve(p)
        remaining = t
        for piece in self.segment(p, q):
            if remaining <= piece.length:
                if piece.end >= piece.start:
                    off = piece.start + remaining
                else:
                    off = piece.start - remaining
                return self._normalize_edge_point(piece.edge[0], piece.edge[1], off)
            remaining -= piece.length
        return self.resolve(q)

    def midpoint(self, p: Point, q: Point) -> Point:
        return self.point_along(p, q, self.distance(p, q) / 2)

    # -- centers ---------------------------------------------------------------

    def center(self, p1: Point, p2: Point, p3: Point) -> Point:
        """The unique point Z with d(Pi,Pj) = d(Pi,Z) + d(Z,Pj) for all pairs."""
        d12 = self.distance(p1, p2)
        d13 = self.distance(p1, p3)
        d23 = self.distance(p2, p3)
        t = (d12 + d13 - d23) / 2  # distance from p1 to the center, along [p1,p2]
        return self.point_along(p1, p2, t)

    def gromov_product(self, x: Point, z: Point, w: Point) -> Num:
        return (self.distance(w, x) + self.distance(w, z) - self.distance(x, z)) / 2

    def center_condition(self, w: Point, p: Point, q: Point, r: Point) -> bool:
        """Whether the center of (p, q, r) is also the center of (w, p, q):
        the inequality (p,q)_w >= max{(p,r)_w, (q,r)_w}, verbatim."""
        return self.gromov_product(p, q, w) >= max(
            self.gromov_product(p, r, w), self.gromov_product(q, r, w)
        )

    def point_on_segment(self, r: Point, p: Point, q: Point) -> bool:
        return self.same_point(self.center(p, q, r), r)

    # -- extremal structure ------------------------------------------------------

    def is_extremal(self, p: Point) -> bool:
        """Whether removing p leaves the tree connected (leaves and the
        single-vertex case; interior edge points never qualify)."""
        loc = self.resolve(p)
        if isinstance(loc, Location):
            return False
        return len(self._adj[loc]) <= 1

    def interior_tree(self) -> "MetricTree":
        """The tree without its extremal points; removed leaf vertices are
        flagged as half-open ends rather than deleted."""
        if not self._lengths:
            raise TreeStructureError("a single-point tree has no interior")
        leaves = {v for v in self._adj if len(self._adj[v]) <= 1}
        kept_points = [
            (name, loc) if isinstance(loc, str) else (name, *loc.edge, loc.offset)
            for name, loc in self._points.items()
            if not (isinstance(loc, str) and loc in leaves)
        ]
        return MetricTree(
            ((u, v, self._lengths[(u, v)]) for u, v in sorted(self._lengths)),
            kept_points,
            open_ends=self.open_ends | leaves,
        )

    # -- misc --------------------------------------------------------------------

    def with_point(self, name: str, p: Point) -> "MetricTree":
        """A copy with one more designated point at an existing location."""
        loc = self.resolve(p)
        entry = (name, loc) if isinstance(loc, str) else (name, *loc.edge, loc.offset)
        pts = [
            (n, l) if isinstance(l, str) else (n, *l.edge, l.offset)
            for n, l in self._points.items()
        ]
        pts.append(entry)
        return MetricTree(
            ((u, v, self._lengths[(u, v)]) for u, v in sorted(self._lengths)),
            pts,
            open_ends=self.open_ends,
        )

    def __repr__(self) -> str:
        return (
            f"MetricTree({len(self._adj)} vertices, {len(self._lengths)} edges, "
            f"{len(self._points)} designated points)"
        )


def path_tree(lengths: Iterable[Num], names: Iterable[str] | None = None) -> MetricTree:
    """A path v0 - v1 - ... with the given edge lengths."""
    lengths = list(lengths)
    names = list(names) if names is not None else [f"v{i}" for i in range(len(lengths) + 1)]
    if len(names) != len(lengths) + 1:
        raise ValueError("need one more name than edge lengths")
    return MetricTree((names[i], names[i + 1], l) for i, l in enumerate(lengths))


def star_tree(legs: Mapping[str, Num], hub: str = "hub") -> MetricTree:
    """A star with the given leaf -> leg-length map."""
    return MetricTree((hub, leaf, l) for leaf, l in sorted(legs.items()))
