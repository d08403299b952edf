"""Directions, the observers' topology, and convergence machinery.

The topology in play is generated by *directions*: for a point ``P`` and a
second point ``Q``, the direction of ``Q`` at ``P`` is the connected
component of the tree-minus-``P`` containing ``Q``.  Membership reduces to
a center query (R lies in the direction of Q at P iff the center of
(P, Q, R) is not P), so everything here runs over any
:class:`~rtreelab.oracles.TreeOracle`, finite or lazy-infinite.

Convergence statements about infinite sequences are finitely probed:
verdicts are explicitly relative to a probe family and a truncation depth,
and carry stabilization certificates instead of unconditional claims.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence, Union

from .oracles import TreeOracle
from .tree import MetricTree, Num


class EmptySequenceError(ValueError):
    pass


class DegenerateSampleError(ValueError):
    pass


class ShapeMapError(ValueError):
    pass


@dataclass(frozen=True)
class Direction:
    """The component of the tree minus ``base`` containing ``representative``."""

    base: object
    representative: object

    def __repr__(self) -> str:
        return f"dir_{self.base}({self.representative})"


def direction_of(oracle: TreeOracle, p, q) -> Direction:
    if oracle.points_equal(p, q):
        raise ValueError("a direction needs a representative distinct from its base")
    return Direction(p, q)


def in_direction(oracle: TreeOracle, d: Direction, r) -> bool:
    """Whether r lies in d: the center of (base, representative, r) is not
    the base exactly when base does not separate r from the representative."""
    if oracle.points_equal(r, d.base):
        raise ValueError("the base of a direction is not a member of it")
    z = oracle.center(d.base, d.representative, r)
    return not oracle.points_equal(z, d.base)


def _contains(oracle: TreeOracle, d: Direction, r) -> bool:
    # membership with the base itself counted as outside
    if oracle.points_equal(r, d.base):
        return False
    return in_direction(oracle, d, r)


def same_direction(oracle: TreeOracle, d1: Direction, d2: Direction) -> bool:
    """Same base point and same component."""
    return oracle.points_equal(d1.base, d2.base) and _contains(oracle, d1, d2.representative)


class PointSequence:
    """An indexed stream of oracle points, optionally of finite length."""

    def __init__(self, source: Union[Sequence, Callable[[int], object]], length: int | None = None):
        if callable(source):
            self._fn = source
            self.length = length
        else:
            items = list(source)
            self._fn = items.__getitem__
            self.length = len(items) if length is None else min(length, len(items))

    def point(self, i: int):
        if self.length is not None and i >= self.length:
            raise IndexError(i)
        return self._fn(i)

    def take(self, n: int) -> list:
        stop = n if self.length is None else min(n, self.length)
        return [self._fn(i) for i in range(stop)]

    def __iter__(self):
        i = 0
        while self.length is None or i < self.length:
            yield self._fn(i)
            i += 1


@dataclass(frozen=True)
class LiminfResult:
    """Endpoint estimate of the nested segment intersections from a basepoint.

    ``point`` is the endpoint of the intersection of the segments
    [basepoint, P_n] over the tail n = head..terms_used-1; ``certificate``
    is the distance between the endpoints for head-1 and head (0 means the
    estimate did not move when the last prefix term was dropped).
    """

    point: object
    certificate: Num
    terms_used: int
    head: int

    def stabilized(self, tol: Num = 0) -> bool:
        return self.certificate <= tol


def liminf_from(
    oracle: TreeOracle,
    basepoint,
    seq: PointSequence,
    depth: int,
    head: int | None = None,
) -> LiminfResult:
    """Inferior limit from a basepoint, truncated at ``depth`` sequence terms.

    The endpoint R_m of the intersection of [Q, P_n] over n = m..depth-1 is
    computed for every m by one backward center fold (the intersection of
    [Q, R] and [Q, P] is [Q, center(R, P, Q)]).  The reported point is R_m
    at m = ``head`` (default depth // 2: half the window is spent
    discarding the prefix, half certifying the tail), with the movement
    between the last two m values as certificate.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if oracle.is_boundary(basepoint):
        raise ValueError("basepoint must not be a boundary point")
    terms = seq.take(depth)
    n = len(terms)
    if n == 0:
        raise EmptySequenceError("cannot take a limit of an empty sequence")
    suffix = [None] * n
    suffix[n - 1] = terms[n - 1]
    for i in range(n - 2, -1, -1):
        suffix[i] = oracle.center(terms[i], suffix[i + 1], basepoint)
    h = n // 2 if head is None else head
    h = max(0, min(h, n - 1))
    cert = oracle.distance(suffix[h - 1], suffix[h]) if h >= 1 else 0
    return LiminfResult(suffix[h], cert, n, h)


@dataclass(frozen=True)
class ProbeReport:
    direction: Direction
    contains_limit: bool
    last_outside: int  # -1 when every term lies inside


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Consistency of a truncated sequence with convergence to a point,
    relative to a probe family: every probe direction containing the point
    must contain a nonempty tail of the sequence."""

    consistent: bool
    limit: object
    depth: int
    refuting: ProbeReport | None
    reports: tuple[ProbeReport, ...] = field(repr=False, default=())


def converges_obs(
    oracle: TreeOracle,
    seq: PointSequence,
    limit,
    probes: Iterable[Direction],
    depth: int,
) -> ConvergenceVerdict:
    probes = list(probes)
    if not probes:
        raise ValueError("need a nonempty probe family")
    terms = seq.take(depth)
    if not terms:
        raise EmptySequenceError("empty sequence")
    reports = []
    refuting = None
    for d in probes:
        if not _contains(oracle, d, limit):
            reports.append(ProbeReport(d, False, -1))
            continue
        last_out = -1
        for i, t in enumerate(terms):
            if not _contains(oracle, d, t):
                last_out = i
        report = ProbeReport(d, True, last_out)
        reports.append(report)
        if last_out == len(terms) - 1 and refuting is None:
            refuting = report
    return ConvergenceVerdict(refuting is None, limit, len(terms), refuting, tuple(reports))


def subbasis_from_sample(oracle: TreeOracle, sample, k: int) -> list[Direction]:
    """Directions based at all pairwise midpoints of the first k distinct
    sample points, toward each sample point; duplicates (same base, same
    component) are dropped.  A countable neighborhood-basis approximation.
    """
    if k < 2:
        raise DegenerateSampleError("need k >= 2 sample points")
    pts: list = []
    budget = max(1000, 50 * k)  # guard against low-diversity infinite streams
    for p in sample:
        budget -= 1
        if not oracle.is_boundary(p) and not any(oracle.points_equal(p, q) for q in pts):
            pts.append(p)
        if len(pts) == k or budget == 0:
            break
    if len(pts) < 2:
        raise DegenerateSampleError("sample yields fewer than 2 distinct points")
    mids: list = []
    for a, b in combinations(pts, 2):
        m = oracle.midpoint(a, b)
        if not any(oracle.points_equal(m, m2) for m2 in mids):
            mids.append(m)
    out: list[Direction] = []
    for m in mids:
        for q in pts:
            if oracle.points_equal(q, m):
                continue
            d = Direction(m, q)
            if not any(same_direction(oracle, d, d2) for d2 in out):
                out.append(d)
    return out


@dataclass(frozen=True)
class ExtractionResult:
    indices: tuple[int, ...]
    limit: LiminfResult
    exhausted_at: int | None  # index into dirs where extraction ran dry


def extract_convergent_subsequence(
    oracle: TreeOracle,
    seq: PointSequence,
    dirs: Sequence[Direction],
    depth: int,
    basepoint=None,
) -> ExtractionResult:
    """Greedy diagonal extraction: for each direction in order, keep the
    majority side of the current index window (ties go to the side holding
    the latest index, the finite-depth proxy for the infinite side)."""
    terms = seq.take(depth)
    if not terms:
        raise EmptySequenceError("empty sequence")
    indices = list(range(len(terms)))
    exhausted_at = None
    for j, d in enumerate(dirs):
        inside = [i for i in indices if _contains(oracle, d, terms[i])]
        outside = [i for i in indices if i not in set(inside)]
        if len(inside) > len(outside):
            chosen = inside
        elif len(outside) > len(inside):
            chosen = outside
        else:
            chosen = inside if (inside and indices[-1] == inside[-1]) else outside
        if len(chosen) < 2:
            exhausted_at = j
            break
        indices = chosen
    if basepoint is None:
        basepoint = terms[indices[0]]
    sub = PointSequence([terms[i] for i in indices])
    limit = liminf_from(oracle, basepoint, sub, len(indices))
    return ExtractionResult(tuple(indices), limit, exhausted_at)


@dataclass(frozen=True)
class ShapeMapVerdict:
    passes: bool
    witness: tuple | None = None  # ("center" | "segment", points...)


def verify_shape_map(tree_a: MetricTree, tree_b: MetricTree, bijection: dict) -> ShapeMapVerdict:
    """Whether a point bijection preserves centers and segment membership.

    Centers of named triples must correspond through the map (a center that
    is a named point on one side must be the image/preimage name on the
    other), and ``point_on_segment`` must agree on every ordered named
    triple.  First violation (centers scanned first, sorted order) wins.
    """
    names_a = tree_a.point_names
    if sorted(bijection) != sorted(names_a):
        raise ShapeMapError("map must be defined exactly on the tree's named points")
    values = list(bijection.values())
    if len(set(values)) != len(values):
        raise ShapeMapError("map is not injective")
    for v in values:
        tree_b.resolve(v)
    inverse_range = set(values)

    for p, q, r in combinations(sorted(names_a), 3):
        za = tree_a.center(p, q, r)
        zb = tree_b.center(bijection[p], bijection[q], bijection[r])
        na, nb = tree_a.name_of(za), tree_b.name_of(zb)
        if na is not None:
            if nb is None or nb != bijection[na]:
                return ShapeMapVerdict(False, ("center", p, q, r))
        else:
            if nb is not None and nb in inverse_range:
                return ShapeMapVerdict(False, ("center", p, q, r))
    for r in sorted(names_a):
        for p in sorted(names_a):
            for q in sorted(names_a):
                mem_a = tree_a.point_on_segment(r, p, q)
                mem_b = tree_b.point_on_segment(bijection[r], bijection[p], bijection[q])
                if mem_a != mem_b:
                    return ShapeMapVerdict(False, ("segment", r, p, q))
    return ShapeMapVerdict(True)


def is_convex_point_set(tree: MetricTree, names: Iterable[str]) -> bool:
    """Whether the named subset contains every named point lying on a
    segment between two of its members (connectedness at named resolution,
    which for finite trees is the observers' notion as well)."""
    chosen = list(names)
    chosen_set = set(chosen)
    for a, b in combinations(chosen, 2):
        for r in tree.point_names:
            if r in chosen_set:
                continue
            if tree.point_on_segment(r, a, b):
                return False
    return True
