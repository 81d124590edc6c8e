"""Independent oracles for the moduli tests."""

from itertools import combinations, permutations

from dblshuffle.moduli import Partition2, StableTree


def degenerating_family(tree: StableTree) -> dict:
    """Points as polynomials in ε whose ε -> 0 limit is the stable curve of ``tree``.

    The largest label sits at ∞ on the root component; every other item of a
    vertex at depth d sits at centre + k ε^d.  Returns label -> coefficient
    list, or None for ∞.
    """
    n = max(tree.labels)
    pos = {n: None}

    def walk(v, parent, centre, depth):
        items = [("t", l) for l in tree.tails_at(v) if l != n]
        items += [("v", w) for w in tree.neighbors(v) if w != parent]
        for k, (kind, x) in enumerate(items, 1):
            p = list(centre) + [0] * (depth + 1 - len(centre))
            p[depth] += k
            if kind == "t":
                pos[x] = p
            else:
                walk(x, v, p, depth + 1)

    walk(tree.tails[n], None, [0], 0)
    return pos


def _order(p, q) -> int:
    # ε-order of (p - q); ∞ against a finite point counts as order 0
    if p is None or q is None:
        return 0
    m = max(len(p), len(q))
    d = [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(m)]
    return next(i for i, x in enumerate(d) if x)


def geometric_v(tree: StableTree) -> set:
    """Quadruples whose cross ratio (p4-p1)(p3-p2)/((p4-p2)(p3-p1)) tends to 0."""
    pos = degenerating_family(tree)
    out = set()
    for q in permutations(sorted(tree.labels), 4):
        a, b, c, d = (pos[l] for l in q)
        if _order(d, a) + _order(c, b) > _order(d, b) + _order(c, a):
            out.add(q)
    return out


def contractions(tree: StableTree) -> set:
    """All trees obtained by contracting subsets of internal edges (graph merges)."""
    seen = {tree}
    todo = [tree]
    while todo:
        t = todo.pop()
        for e in t.edges:
            s = t.contract_edge(e)
            if s not in seen:
                seen.add(s)
                todo.append(s)
    return seen


def two_edge_split_pairs(n: int) -> set:
    """Pairs of partitions realized together by a stable tree with two internal edges.

    Such a tree is a chain: outer blocks X, Z (size >= 2) and a middle block Y
    (size >= 1); the two edges give the partitions X | Y∪Z and X∪Y | Z.
    """
    labels = frozenset(range(1, n + 1))
    out = set()
    for x_size in range(2, n - 2):
        for X in combinations(sorted(labels), x_size):
            X = frozenset(X)
            rest = labels - X
            for z_size in range(2, len(rest)):
                for Z in combinations(sorted(rest), z_size):
                    Z = frozenset(Z)
                    P = Partition2(X, labels - X)
                    Q = Partition2(labels - Z, Z)
                    out.add(frozenset([P, Q]))
    return out
