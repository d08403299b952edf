"""Shared fixtures-by-function for the test suite: seeded random trees,
tables, pairs, and sequences."""
import random
from fractions import Fraction as Fr
from itertools import product

from rtreelab.blend import CompatibleMetricPair, IncompatiblePairError
from rtreelab.hyperbolicity import MetricTable
from rtreelab.tree import MetricTree


def brute_force_four_point(table: MetricTable, delta):
    """Independent oracle: literal scan of every ordered quadruple of the
    four-point inequality; returns (passes, witness_quadruple, margin)."""
    gp = table.gromov_product
    for x, y, z, w in product(table.points, repeat=4):
        margin = min(gp(x, y, w), gp(y, z, w)) - gp(x, z, w) - delta
        if margin > 0:
            return False, (x, y, z, w), margin
    return True, None, None


def random_tree(rng: random.Random, max_points: int = 12, edge_points: int = 0) -> MetricTree:
    """Random tree with rational edge lengths (random attachment model) and
    optionally some designated points strictly inside edges."""
    n = rng.randint(2, max(2, max_points - edge_points))
    edges = []
    for i in range(1, n):
        parent = rng.randrange(i)
        length = Fr(rng.randint(1, 24), rng.randint(1, 6))
        edges.append((f"p{parent}", f"p{i}", length))
    points = []
    used = set()
    for k in range(edge_points):
        u, v, length = edges[rng.randrange(len(edges))]
        off = length * Fr(rng.randint(1, 7), 8)
        if ((u, v), off) in used:
            continue
        used.add(((u, v), off))
        points.append((f"m{k}", u, v, off))
    return MetricTree(edges, points)


def unit_square_table() -> MetricTable:
    d = {
        ("a", "b"): 1,
        ("b", "c"): 1,
        ("c", "d"): 1,
        ("a", "d"): 1,
        ("a", "c"): 2,
        ("b", "d"): 2,
    }
    return MetricTable(d)


def random_cycle_table(rng: random.Random) -> MetricTable:
    """Shortest-path metric of a 4-cycle with weights in [1, 2]: every edge
    is then the unique geodesic between its endpoints, so the cross pairing
    sum strictly dominates and the four-point condition must fail."""
    w = [1 + Fr(rng.randint(0, 32), 32) for _ in range(4)]
    names = ["a", "b", "c", "d"]
    d = {}
    for i in range(4):
        d[(names[i], names[(i + 1) % 4])] = w[i]
    d[("a", "c")] = min(w[0] + w[1], w[2] + w[3])
    d[("b", "d")] = min(w[1] + w[2], w[3] + w[0])
    return MetricTable(d)


def random_compatible_pair(rng: random.Random, max_vertices: int = 5) -> CompatibleMetricPair:
    """Two random positive rational length assignments on one random shape,
    with designated points kept in the same order along each edge (retried
    until the shape verification accepts, which weeds out numeric
    coincidences where a center lands exactly on a named point in only one
    of the metrics)."""
    while True:
        n = rng.randint(2, max_vertices)
        shape = [(f"p{rng.randrange(i)}", f"p{i}") for i in range(1, n)]
        edges0, edges1, points0, points1 = [], [], [], []
        k = 0
        for u, v in shape:
            l0 = Fr(rng.randint(2, 12), rng.randint(1, 3))
            l1 = Fr(rng.randint(2, 12), rng.randint(1, 3))
            edges0.append((u, v, l0))
            edges1.append((u, v, l1))
            npts = rng.choice([0, 0, 0, 1, 2])
            if npts:
                slots = sorted(rng.sample(range(1, 8), npts))
                slots1 = sorted(rng.sample(range(1, 8), npts))
                for s0, s1 in zip(slots, slots1):
                    points0.append((f"m{k}", u, v, l0 * Fr(s0, 8)))
                    points1.append((f"m{k}", u, v, l1 * Fr(s1, 8)))
                    k += 1
        try:
            return CompatibleMetricPair(MetricTree(edges0, points0), MetricTree(edges1, points1))
        except IncompatiblePairError:
            continue


def wandering_then_constant(rng: random.Random, tree: MetricTree, prefix_len: int):
    """A sequence that wanders over named points for a while and then sits
    at a fixed target forever; returns (points_list_fn_compatible, target)."""
    names = list(tree.point_names)
    target = rng.choice(names)
    prefix = [rng.choice(names) for _ in range(prefix_len)]

    def point(i: int):
        return prefix[i] if i < len(prefix) else target

    return point, target
