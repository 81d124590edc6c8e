"""Boundary combinatorics and coordinates of the moduli space of genus-zero curves.

Labels are ints ``1..n`` with ``n = N + 3``.  A stable tree is determined by
its set of splits: each internal edge cuts the labels in two, and the split
is stored as the block not containing the smallest label.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import DegenerateQuadruple, LabelMismatch, SingularPoint, UnstableTree
from .ratfunc import RatFunc, UPoly


# ---------------------------------------------------------------------------
# cross ratio


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "∞"


INF = _Infinity()


def _homogeneous(x):
    return (1, 0) if x is INF else (x, 1)


def _det(p, q):
    return p[0] * q[1] - p[1] * q[0]


def cross_ratio(p1, p2, p3, p4):
    """r(p1,p2,p3,p4) = (p4-p1)(p3-p2) / ((p4-p2)(p3-p1)), normalized by r(0,∞,1,x) = x.

    Points are field elements (Fraction, RatFunc, ...) or ``INF``.
    """
    a, b, c, d = map(_homogeneous, (p1, p2, p3, p4))
    num = _det(d, a) * _det(c, b)
    den = _det(d, b) * _det(c, a)
    if den == 0:
        if num == 0:
            raise DegenerateQuadruple("fewer than three distinct points")
        return INF
    return num / den if not isinstance(num, int) or not isinstance(den, int) else Fraction(num, den)


# ---------------------------------------------------------------------------
# partitions and trees


def _labels(n: int) -> frozenset[int]:
    return frozenset(range(1, n + 1))


@dataclass(frozen=True)
class Partition2:
    """Unordered partition of the labels into two blocks of size >= 2."""

    first: frozenset
    second: frozenset

    def __post_init__(self):
        a, b = frozenset(self.first), frozenset(self.second)
        if a & b or len(a) < 2 or len(b) < 2:
            raise ValueError("blocks must be disjoint with at least two labels each")
        if min(b) < min(a):
            a, b = b, a
        object.__setattr__(self, "first", a)
        object.__setattr__(self, "second", b)

    @classmethod
    def parse(cls, text: str) -> "Partition2":
        left, right = text.split("|")
        return cls(frozenset(int(x) for x in left.split(",")), frozenset(int(x) for x in right.split(",")))

    @property
    def labels(self) -> frozenset:
        return self.first | self.second

    def blocks(self) -> tuple[frozenset, frozenset]:
        return self.first, self.second

    def __str__(self) -> str:
        return ",".join(map(str, sorted(self.first))) + "|" + ",".join(map(str, sorted(self.second)))


def boundary_divisors(n: int) -> list[Partition2]:
    """All boundary divisors of the compactified space with n marked points."""
    labels = sorted(_labels(n))
    rest = labels[1:]
    out = []
    for size in range(2, n - 1):
        for block in combinations(rest, size):
            out.append(Partition2(frozenset(labels) - frozenset(block), frozenset(block)))
    return out


def divisors_intersect(P: Partition2, Q: Partition2) -> bool:
    """Some block of one partition contains a block of the other."""
    if P.labels != Q.labels:
        raise LabelMismatch("partitions of different label sets")
    return any(a <= b or b <= a for a in P.blocks() for b in Q.blocks())


class StableTree:
    """Tree with labelled tails, every vertex of valency >= 3."""

    __slots__ = ("labels", "vertices", "edges", "tails", "_splits")

    def __init__(self, vertices: Iterable, edges: Iterable, tails: Mapping[int, object]):
        self.vertices = tuple(vertices)
        self.edges = frozenset(frozenset(e) for e in edges)
        self.tails = dict(tails)
        self.labels = frozenset(self.tails)
        vs = set(self.vertices)
        if len(vs) != len(self.vertices) or not all(v in vs for v in self.tails.values()):
            raise UnstableTree("tails must attach to listed vertices")
        if any(len(e) != 2 or not e <= vs for e in self.edges):
            raise UnstableTree("bad internal edge")
        if len(self.edges) != len(vs) - 1 or not self._connected():
            raise UnstableTree("internal edges do not form a tree")
        for v in self.vertices:
            if self.valency(v) < 3:
                raise UnstableTree(f"vertex {v!r} has valency {self.valency(v)}")
        self._splits = None

    # construction -------------------------------------------------------

    @classmethod
    def one_vertex(cls, n: int) -> "StableTree":
        return cls([0], [], {i: 0 for i in range(1, n + 1)})

    @classmethod
    def one_edge(cls, partition: Partition2) -> "StableTree":
        tails = {i: 0 for i in partition.first}
        tails.update({i: 1 for i in partition.second})
        return cls([0, 1], [(0, 1)], tails)

    @classmethod
    def from_splits(cls, labels: Iterable[int], splits: Iterable[Iterable[int]]) -> "StableTree":
        """Tree whose internal edges realize the given pairwise compatible splits."""
        labels = frozenset(labels)
        root_label = min(labels)
        clusters = []
        for s in splits:
            s = frozenset(s)
            block = labels - s if root_label in s else s
            if len(block) < 2 or len(labels - block) < 2:
                raise UnstableTree(f"split {sorted(block)} has a block of size < 2")
            if block not in clusters:
                clusters.append(block)
        for a, b in combinations(clusters, 2):
            if a & b and not (a <= b or b <= a):
                raise UnstableTree("splits are not compatible")
        clusters.sort(key=lambda c: (len(c), sorted(c)))

        def home(members: frozenset, exclude=None) -> int:
            # smallest cluster strictly containing ``members`` (0 = root)
            for k, c in enumerate(clusters):
                if c is not exclude and members <= c and c != members:
                    return k + 1
            return 0

        edges = [(k + 1, home(c, c)) for k, c in enumerate(clusters)]
        tails = {}
        for label in labels:
            tails[label] = 0
            for k, c in enumerate(clusters):
                if label in c:
                    tails[label] = k + 1
                    break
        return cls(range(len(clusters) + 1), edges, tails)

    @classmethod
    def binary_T(cls, N: int) -> "StableTree":
        """Chain v_0..v_N: tails {1,2} at v_0, i+2 at v_i, {N+2,N+3} at v_N."""
        if N < 1:
            raise UnstableTree("N must be positive")
        tails = {1: 0, 2: 0, N + 2: N, N + 3: N}
        for i in range(1, N):
            tails[i + 2] = i
        return cls(range(N + 1), [(i, i + 1) for i in range(N)], tails)

    @classmethod
    def binary_T_prime(cls, N: int) -> "StableTree":
        """The chain of binary_T with every label shifted by one (N+3 -> 1)."""
        return cls.binary_T(N).relabel(lambda l: l % (N + 3) + 1)

    def relabel(self, f: Callable[[int], int]) -> "StableTree":
        return StableTree(self.vertices, [tuple(e) for e in self.edges], {f(l): v for l, v in self.tails.items()})

    # structure ----------------------------------------------------------

    def _connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            v = todo.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def neighbors(self, v) -> list:
        return [next(iter(e - {v})) for e in self.edges if v in e]

    def tails_at(self, v) -> list[int]:
        return sorted(l for l, u in self.tails.items() if u == v)

    def valency(self, v) -> int:
        return len(self.tails_at(v)) + len(self.neighbors(v))

    def valencies(self) -> list[int]:
        return sorted(self.valency(v) for v in self.vertices)

    def codim(self) -> int:
        return len(self.edges)

    def path(self, u, v) -> list:
        """Vertices on the path from u to v, inclusive."""
        parent = {u: None}
        todo = deque([u])
        while todo:
            x = todo.popleft()
            for y in self.neighbors(x):
                if y not in parent:
                    parent[y] = x
                    todo.append(y)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def _side(self, edge: frozenset, start) -> frozenset:
        other = next(iter(edge - {start}))
        seen = {start}
        todo = [start]
        while todo:
            x = todo.pop()
            for y in self.neighbors(x):
                if y not in seen and not (x == start and y == other):
                    seen.add(y)
                    todo.append(y)
        return frozenset(l for l, v in self.tails.items() if v in seen)

    def splits(self) -> frozenset:
        """Canonical key: per edge, the label block not containing the smallest label."""
        if self._splits is None:
            root = min(self.labels)
            out = set()
            for e in self.edges:
                side = self._side(e, next(iter(e)))
                out.add(self.labels - side if root in side else side)
            self._splits = frozenset(out)
        return self._splits

    def partitions(self) -> list[Partition2]:
        return [Partition2(self.labels - s, s) for s in self.splits()]

    def __eq__(self, other) -> bool:
        return isinstance(other, StableTree) and self.labels == other.labels and self.splits() == other.splits()

    def __hash__(self) -> int:
        return hash((self.labels, self.splits()))

    def __repr__(self) -> str:
        return f"StableTree({self.to_text()})"

    def to_text(self) -> str:
        parts = [str(p) for p in sorted(self.partitions(), key=lambda p: (sorted(p.second), sorted(p.first)))]
        return ";".join(parts) if parts else f"n={len(self.labels)}"

    def to_json(self) -> dict:
        return {
            "labels": sorted(self.labels),
            "vertices": [{"id": i, "tails": self.tails_at(v)} for i, v in enumerate(self.vertices)],
            "edges": sorted(
                sorted(self.vertices.index(v) for v in e) for e in self.edges
            ),
            "splits": [str(p) for p in sorted(self.partitions(), key=lambda p: sorted(p.second))],
        }

    # operations ---------------------------------------------------------

    def contract_edge(self, edge: Iterable) -> "StableTree":
        """Merge the two endpoints of an internal edge."""
        u, v = sorted(edge, key=self.vertices.index)
        edges = []
        for e in self.edges:
            if e == frozenset((u, v)):
                continue
            edges.append(tuple(u if x == v else x for x in e))
        tails = {l: (u if x == v else x) for l, x in self.tails.items()}
        return StableTree([x for x in self.vertices if x != v], edges, tails)

    def remove_label(self, i: int) -> "StableTree":
        """Drop tail i, contracting its edge if the vertex becomes unstable."""
        v = self.tails[i]
        tails = {l: x for l, x in self.tails.items() if l != i}
        if self.valency(v) >= 4:
            return StableTree(self.vertices, [tuple(e) for e in self.edges], tails)
        (w,) = self.neighbors(v) if len(self.neighbors(v)) == 1 else (None,)
        if w is None:
            raise UnstableTree(f"removing {i} leaves a vertex of valency 2 between two edges")
        tails = {l: (w if x == v else x) for l, x in tails.items()}
        edges = [tuple(e) for e in self.edges if v not in e]
        return StableTree([x for x in self.vertices if x != v], edges, tails)

    def median(self, i: int, j: int, k: int):
        """The vertex whose removal separates the tails i, j, k."""
        for t in self.vertices:
            if len({self._branch(t, l) for l in (i, j, k)}) == 3:
                return t
        raise ValueError("labels must be distinct")

    def _branch(self, t, label: int):
        v = self.tails[label]
        if v == t:
            return ("tail", label)
        return ("edge", self.path(t, v)[1])


def all_trees(n: int) -> list[StableTree]:
    """Every stable tree on labels 1..n, one per set of pairwise compatible splits."""
    labels = _labels(n)
    blocks = [p.second for p in boundary_divisors(n)]

    def compatible(a: frozenset, b: frozenset) -> bool:
        return not (a & b) or a <= b or b <= a or (a | b) == labels

    out = []

    def extend(start: int, chosen: list):
        out.append(StableTree.from_splits(labels, chosen))
        for k in range(start, len(blocks)):
            if all(compatible(blocks[k], c) for c in chosen):
                extend(k + 1, chosen + [blocks[k]])

    extend(0, [])
    return out


def contracts_to(fine: StableTree, coarse: StableTree) -> bool:
    """Whether contracting some internal edges of ``fine`` gives ``coarse``."""
    if fine.labels != coarse.labels:
        raise LabelMismatch("trees have different label sets")
    return coarse.splits() <= fine.splits()


def codim(tree: StableTree) -> int:
    return tree.codim()


def parse_tree(text: str, n: int | None = None) -> StableTree:
    """``"1,2|3,4,5;1,2,3|4,5"`` (splits separated by ';'); empty text needs ``n``."""
    text = text.strip()
    parts = [Partition2.parse(p) for p in text.split(";") if p.strip()]
    if parts:
        labels = parts[0].labels
        if n is not None and labels != _labels(n):
            raise LabelMismatch("splits do not match the label count")
        if any(p.labels != labels for p in parts):
            raise LabelMismatch("splits use different label sets")
    elif n is None:
        raise ValueError("a tree without splits needs the label count")
    else:
        labels = _labels(n)
    return StableTree.from_splits(labels, [p.second for p in parts])


# ---------------------------------------------------------------------------
# equivalence at a vertex and vanishing quadruples


SIM_RULES = ("literal", "branch")


def sim_t(tree: StableTree, t, i: int, j: int, rule: str = "literal") -> bool:
    """Equivalence of tails i, j seen from vertex t.

    ``literal``: the tails share a vertex, or the path between their
    vertices avoids t.  ``branch``: i == j, or the path avoids t; distinct
    tails attached to t itself are then inequivalent, matching the limits
    of cross ratios on degenerating curves.
    """
    if rule not in SIM_RULES:
        raise ValueError(f"rule must be one of {SIM_RULES}")
    vi, vj = tree.tails[i], tree.tails[j]
    if i == j or (rule == "literal" and vi == vj):
        return True
    return t not in tree.path(vi, vj)


def v_of(tree: StableTree, rule: str = "literal") -> set[tuple[int, int, int, int]]:
    """Quadruples (v1,v2,v3,v4) with v1 ~_t v4, v2 !~_t v4, v3 !~_t v4 for some t."""
    labels = sorted(tree.labels)
    out = set()
    for t in tree.vertices:
        for q in permutations(labels, 4):
            v1, v2, v3, v4 = q
            if (
                sim_t(tree, t, v1, v4, rule)
                and not sim_t(tree, t, v2, v4, rule)
                and not sim_t(tree, t, v3, v4, rule)
            ):
                out.add(q)
    return out


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class ChartCoordinate:
    """λ_quadruple; ``substituted`` marks use of λ_(c,b,a,d) = 1 - λ_(a,b,c,d)."""

    quadruple: tuple[int, int, int, int]
    substituted: bool = False

    def __str__(self) -> str:
        return "λ" + ",".join(map(str, self.quadruple))


def eligible_labels(tree: StableTree) -> list[int]:
    out = []
    for i in sorted(tree.labels):
        v = tree.tails[i]
        if tree.valency(v) >= 4 or len(tree.tails_at(v)) >= 2:
            out.append(i)
    return out


def valid_triples(tree: StableTree, i: int) -> list[tuple[int, int, int]]:
    v = tree.tails[i]
    others = sorted(tree.labels - {i})
    out = []
    if tree.valency(v) >= 4:
        for d in permutations(others, 3):
            if tree.median(*d) == v:
                out.append(d)
        return out
    (w,) = tree.neighbors(v)
    attached = [l for l in tree.tails_at(v) if l != i]
    for d in permutations(others, 3):
        if d[2] in attached and tree.median(*d) == w:
            out.append(d)
    return out


def chart_coordinates(
    tree: StableTree,
    pick_label: Callable[[StableTree, list[int]], int] | None = None,
    pick_triple: Callable[[StableTree, int, list], tuple] | None = None,
    substitute: Callable[[StableTree, tuple], bool] | None = None,
) -> list[ChartCoordinate]:
    """N cross-ratio coordinates on the open stratum neighbourhood U(T).

    Recursion: choose an eligible label i, take coordinates of T minus i,
    append λ_(d1,d2,d3,i) for a triple with the required median.  Default
    choices: smallest eligible label, lexicographically smallest triple,
    no substitution.
    """
    n = len(tree.labels)
    if n == 3:
        return []
    if n < 3:
        raise UnstableTree("need at least three labels")
    eligible = eligible_labels(tree)
    i = pick_label(tree, eligible) if pick_label else eligible[0]
    if i not in eligible:
        raise ValueError(f"label {i} is not eligible")
    coords = chart_coordinates(tree.remove_label(i), pick_label, pick_triple, substitute)
    triples = valid_triples(tree, i)
    d = pick_triple(tree, i, triples) if pick_triple else triples[0]
    if tuple(d) not in triples:
        raise ValueError(f"triple {d} does not satisfy the median condition")
    quad = (d[0], d[1], d[2], i)
    if substitute and substitute(tree, quad):
        return coords + [ChartCoordinate((d[2], d[1], d[0], i), True)]
    return coords + [ChartCoordinate(quad)]


# ---------------------------------------------------------------------------
# x and z coordinates, the point R, the line through it


def x_to_z(x: Sequence) -> list:
    """z_i = (1 - x_1...x_i)/(1 - x_1...x_(i+1)), with x_(N+1) = 0."""
    N = len(x)
    prods = [1]
    for xi in x:
        prods.append(prods[-1] * xi)
    prods.append(0)
    out = []
    for i in range(1, N + 1):
        den = 1 - prods[i + 1]
        if den == 0:
            raise SingularPoint(f"1 - x_1...x_{i + 1} vanishes")
        out.append(_div(1 - prods[i], den))
    return out


def z_to_x(z: Sequence) -> list:
    """x_i = (1 - z_i...z_N)/(1 - z_(i-1)...z_N), with z_0 = 0."""
    N = len(z)
    tails = [1] * (N + 2)
    for i in range(N, 0, -1):
        tails[i] = tails[i + 1] * z[i - 1]
    tails[0] = 0
    out = []
    for i in range(1, N + 1):
        den = 1 - tails[i - 1]
        if den == 0:
            raise SingularPoint(f"1 - z_{i - 1}...z_N vanishes")
        out.append(_div(1 - tails[i], den))
    return out


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def point_R(N: int) -> list[Fraction]:
    return [Fraction(i, i + 1) for i in range(1, N)] + [Fraction(0)]


def iota(N: int, t) -> list:
    return [Fraction(i, i + 1) for i in range(1, N)] + [N * t]


def project(N: int, z: Sequence) -> list:
    """Forgetting the (N+2)-nd point: (z_1..z_(N-2), z_(N-1) z_N)."""
    if N < 2 or len(z) != N:
        raise ValueError("project needs N >= 2 coordinates")
    return list(z[: N - 2]) + [z[N - 2] * z[N - 1]]


def marked_points(x: Sequence) -> list:
    """The configuration (0, x_1...x_N, x_2...x_N, ..., x_N, 1, ∞)."""
    N = len(x)
    pts = [0]
    for j in range(N):
        p = 1
        for xi in x[j:]:
            p = p * xi
        pts.append(p)
    return pts + [1, INF]


def special_z(points: Sequence) -> list:
    """z_i = λ_(2,1,i+3,i+2) of a configuration of N+3 points."""
    N = len(points) - 3
    P = lambda l: points[l - 1]  # noqa: E731
    return [cross_ratio(P(2), P(1), P(i + 3), P(i + 2)) for i in range(1, N + 1)]


def special_x(points: Sequence) -> list:
    """x_i = λ_(1,N+3,i+2,i+1) of a configuration of N+3 points."""
    N = len(points) - 3
    P = lambda l: points[l - 1]  # noqa: E731
    return [cross_ratio(P(1), P(N + 3), P(i + 2), P(i + 1)) for i in range(1, N + 1)]


def limit_of_diagonal(N: int) -> list:
    """Limit as t -> 1 of the z-coordinates of (0, t^N, ..., t, 1, ∞)."""
    t = RatFunc(UPoly.var())
    pts = [RatFunc(0)] + [t**k for k in range(N, 0, -1)] + [RatFunc(1), INF]
    return [z.limit(1) for z in special_z(pts)]


def zdiv_expression(I: Iterable[int], z: Sequence):
    """1 - Π_(i in I) (1 - z_i...z_N)/(1 - z_(i-1)...z_N), with z_0 = 0."""
    N = len(z)
    tails = [1] * (N + 2)
    for i in range(N, 0, -1):
        tails[i] = tails[i + 1] * z[i - 1]
    tails[0] = 0
    prod = 1
    for i in I:
        prod = _div(prod * (1 - tails[i]), 1 - tails[i - 1])
    return 1 - prod


def zdiv_residue(N: int, I: Iterable[int]) -> Fraction:
    """Set z_i = i/(i+1) for i < N in the divisor, divide by z_N, let z_N -> 0."""
    zN = RatFunc(UPoly.var())
    z = [RatFunc(Fraction(i, i + 1)) for i in range(1, N)] + [zN]
    expr = zdiv_expression(I, z) / zN
    value = expr.limit(0)
    if value is None:
        raise SingularPoint("divisor expression has a pole at R")
    return value
