"""Metric tables, Gromov products, four-point hyperbolicity certification,
and realization of 0-hyperbolic tables as metric trees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping

from .tree import Location, MetricTree, Num, UnknownPointError, _exactify


class InvalidTableError(ValueError):
    pass


class NotZeroHyperbolicError(ValueError):
    def __init__(self, witness: "FourPointWitness"):
        super().__init__(f"metric is not 0-hyperbolic: {witness}")
        self.witness = witness


@dataclass(frozen=True)
class FourPointWitness:
    """An ordered quadruple (x, y, z, w) violating
    (x,z)_w >= min{(x,y)_w, (y,z)_w} - delta, with the violation margin."""

    quadruple: tuple[str, str, str, str]
    margin: Num

    def __str__(self) -> str:
        x, y, z, w = self.quadruple
        return f"({x},{y},{z};{w}) violates the four-point inequality by {self.margin}"


@dataclass(frozen=True)
class HyperbolicityVerdict:
    passes: bool
    delta: Num
    witness: FourPointWitness | None = None


class MetricTable:
    """Finite symmetric metric (zero diagonal, triangle inequality checked)."""

    def __init__(self, distances: Mapping[tuple[str, str], Num]):
        pts: set[str] = set()
        self._d: dict[tuple[str, str], Num] = {}
        for (x, y), raw in distances.items():
            pts.update((x, y))
            val = _exactify(raw)
            key = (x, y) if x <= y else (y, x)
            if key in self._d and self._d[key] != val:
                raise InvalidTableError(f"conflicting distances for {x},{y}")
            self._d[key] = val
        self.points = tuple(sorted(pts))
        self._validate()

    @classmethod
    def from_tree(cls, tree: MetricTree, points=None) -> "MetricTable":
        names = list(points) if points is not None else list(tree.point_names)
        return cls(
            {(a, b): tree.distance(a, b) for a, b in combinations(names, 2)}
            | {(n, n): 0 for n in names}
        )

    def _validate(self) -> None:
        for x, y in combinations(self.points, 2):
            if (x, y) not in self._d:
                raise InvalidTableError(f"missing distance {x},{y}")
            if not self._d[(x, y)] > 0:
                raise InvalidTableError(f"d({x},{y}) must be positive")
        for x in self.points:
            if self._d.get((x, x), 0) != 0:
                raise InvalidTableError(f"d({x},{x}) must be zero")
        for x, y, z in combinations(self.points, 3):
            dxy, dxz, dyz = self.distance(x, y), self.distance(x, z), self.distance(y, z)
            if dxy > dxz + dyz or dxz > dxy + dyz or dyz > dxy + dxz:
                raise InvalidTableError(f"triangle inequality fails on ({x},{y},{z})")

    def distance(self, x: str, y: str) -> Num:
        if x == y:
            if x not in self.points:
                raise UnknownPointError(x)
            return Fraction(0)
        key = (x, y) if x <= y else (y, x)
        if key not in self._d:
            raise UnknownPointError(f"{x} or {y}")
        return self._d[key]

    def gromov_product(self, x: str, z: str, w: str) -> Num:
        return (self.distance(w, x) + self.distance(w, z) - self.distance(x, z)) / 2

    def _scaled_int_matrix(self) -> tuple[dict[tuple[str, str], int], int] | None:
        """Distances as integers on a common denominator; None in float mode."""
        denoms = []
        for v in self._d.values():
            if isinstance(v, Fraction):
                denoms.append(v.denominator)
            elif isinstance(v, int):
                denoms.append(1)
            else:
                return None
        scale = math.lcm(*denoms) if denoms else 1
        return {k: int(v * scale) for k, v in self._d.items()}, scale

    def __repr__(self) -> str:
        return f"MetricTable({len(self.points)} points)"


def gromov_product(space: MetricTable, x: str, z: str, w: str) -> Num:
    return space.gromov_product(x, z, w)


def _pairing_sums(d, q):
    x, y, z, w = q
    return (
        d(x, y) + d(z, w),  # pairing xy|zw
        d(x, z) + d(y, w),  # pairing xz|yw
        d(x, w) + d(y, z),  # pairing xw|yz
    )


def max_four_point_defect(space: MetricTable) -> Num:
    """The least delta for which check_hyperbolic passes: half the maximal
    gap between the largest and second-largest pairing sums over 4-subsets."""
    worst = Fraction(0)
    for quad in combinations(space.points, 4):
        s = sorted(_pairing_sums(space.distance, quad))
        gap = (s[2] - s[1]) / 2
        if gap > worst:
            worst = gap
    return worst


def check_hyperbolic(space: MetricTable, delta: Num = 0) -> HyperbolicityVerdict:
    """Whether (x,z)_w >= min{(x,y)_w, (y,z)_w} - delta for every ordered
    quadruple of table points.

    Quadruples with a repeated point satisfy the inequality automatically
    (triangle inequality, validated at table construction), so the decision
    scans 4-subsets; a failing table is rescanned in lexicographic order of
    ordered quadruples so the reported witness is the first one.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    delta = _exactify(delta)
    scaled = space._scaled_int_matrix()
    if scaled is not None and isinstance(delta, Fraction):
        ints, scale = scaled
        two_delta = 2 * delta * scale

        def d(x, y):
            if x == y:
                return 0
            return ints[(x, y) if x <= y else (y, x)]

        failed = False
        for quad in combinations(space.points, 4):
            s = sorted(_pairing_sums(d, quad))
            if s[2] - s[1] > two_delta:
                failed = True
                break
        if not failed:
            return HyperbolicityVerdict(True, delta)
    else:
        if max_four_point_defect(space) <= delta:
            return HyperbolicityVerdict(True, delta)

    witness = first_violation(space, delta)
    assert witness is not None
    return HyperbolicityVerdict(False, delta, witness)


def first_violation(space: MetricTable, delta: Num = 0) -> FourPointWitness | None:
    """First ordered quadruple (lexicographic in point names) violating the
    four-point inequality, with its margin."""
    gp = space.gromov_product
    for x, y, z, w in product(space.points, repeat=4):
        margin = min(gp(x, y, w), gp(y, z, w)) - gp(x, z, w) - delta
        if margin > 0:
            return FourPointWitness((x, y, z, w), margin)
    return None


def verify_witness(space: MetricTable, witness: FourPointWitness, delta: Num = 0) -> bool:
    """Re-evaluate a witness from the table: does it violate by exactly the
    reported margin?"""
    x, y, z, w = witness.quadruple
    gp = space.gromov_product
    margin = min(gp(x, y, w), gp(y, z, w)) - gp(x, z, w) - delta
    return margin == witness.margin and margin > 0


def reconstruct_tree(space: MetricTable) -> MetricTree:
    """Realize a 0-hyperbolic table as a MetricTree whose named points
    reproduce the table distances exactly.

    Points are inserted in sorted name order.  Each new point attaches at
    the location nearest to it on the current tree (found via Gromov
    products against already-placed pairs), splitting an edge with a fresh
    Steiner vertex (".s1", ".s2", ...) if needed.
    """
    verdict = check_hyperbolic(space, 0)
    if not verdict.passes:
        raise NotZeroHyperbolicError(verdict.witness)

    names = list(space.points)
    if len(names) == 1:
        return MetricTree((), vertices=(names[0],))

    # mutable builder state
    counter = 0
    edges: dict[tuple[str, str], Num] = {}
    placed: dict[str, object] = {}  # table name -> vertex name or Location

    def fresh_steiner() -> str:
        nonlocal counter
        counter += 1
        return f".s{counter}"

    def build() -> MetricTree:
        pts = [
            (n, loc) if isinstance(loc, str) else (n, *loc.edge, loc.offset)
            for n, loc in placed.items()
            if not isinstance(loc, str) or n != loc
        ]
        return MetricTree(
            ((u, v, l) for (u, v), l in edges.items()),
            pts,
            vertices=[loc for loc in placed.values() if isinstance(loc, str)],
        )

    def split_edge(e: tuple[str, str], off: Num) -> str:
        length = edges.pop(e)
        s = fresh_steiner()
        u, v = e
        ck1 = (u, s) if u <= s else (s, u)
        ck2 = (s, v) if s <= v else (v, s)
        edges[ck1] = off
        edges[ck2] = length - off
        for n, loc in list(placed.items()):
            if isinstance(loc, Location) and loc.edge == e:
                if loc.offset < off:
                    placed[n] = _relocate(ck1, u, loc.offset)
                elif loc.offset > off:
                    placed[n] = _relocate(ck2, s, loc.offset - off)
                else:
                    placed[n] = s
        return s

    def _relocate(canon: tuple[str, str], from_vertex: str, off: Num):
        length = edges[canon]
        if canon[0] != from_vertex:
            off = length - off
        if off == 0:
            return canon[0]
        if off == length:
            return canon[1]
        return Location(canon, off)

    def as_vertex(loc) -> str:
        if isinstance(loc, str):
            return loc
        return split_edge(loc.edge, loc.offset)

    a, b = names[0], names[1]
    edges[(a, b) if a <= b else (b, a)] = space.distance(a, b)
    placed[a], placed[b] = a, b

    for x in names[2:]:
        tree = build()
        done = sorted(placed)
        best = None
        for p, q in combinations(done, 2):
            gp_x = (space.distance(x, p) + space.distance(x, q) - space.distance(p, q)) / 2
            if best is None or gp_x < best[0]:
                best = (gp_x, p, q)
        gp_x, p, q = best
        from_p = space.distance(x, p) - gp_x  # = (q,x)_p, distance from p to attachment
        attach_loc = tree.point_along(placed[p], placed[q], from_p)
        if gp_x == 0:
            placed[x] = attach_loc
        else:
            attach_vertex = as_vertex(attach_loc)
            key = (attach_vertex, x) if attach_vertex <= x else (x, attach_vertex)
            edges[key] = gp_x
            placed[x] = x

    return build()
