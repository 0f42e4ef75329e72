"""Tree surgery: grafting, pumping, duplication, and the structural detectors
built on them (equal-view edge pairs, zigzags, de-pumping, the order relation
on useful color pairs and the families it yields)."""
from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    ColoredGraph,
    ColoredTree,
    InvalidGraph,
    RootedTree,
    bfs,
    component,
    edge_view_code,
    path_between,
)

Edge = tuple[int, int]
ColorPair = tuple[int, int]


class SurgeryError(ValueError):
    pass


def _need_edge(t: ColoredGraph, e: Edge, name: str = "edge") -> None:
    u, v = e
    if not t.has_edge(u, v):
        raise SurgeryError(f"{name} ({u},{v}) is not an edge")


class _Mutable:
    """Editable copy of a tree; vertices keep their ids until compact()."""

    def __init__(self, t: ColoredGraph):
        self.colors = list(t.colors)
        self.adj = [set(a) for a in t.adj]
        self.alive = [True] * t.n
        self.c = t.c

    def remove_side(self, x: int, y: int) -> None:
        """Delete the component of y once xy is removed."""
        self.adj[x].discard(y)
        self.adj[y].discard(x)
        stack = [y]
        self.alive[y] = False
        while stack:
            z = stack.pop()
            for w in self.adj[z]:
                if self.alive[w]:
                    self.alive[w] = False
                    stack.append(w)
            self.adj[z] = set()

    def attach_copy(self, x: int, src: ColoredGraph, root: int, parent: int) -> dict[int, int]:
        """Copy the component of root away from parent in src and join its
        copy of root to x. Returns the old-to-new id map."""
        mapping: dict[int, int] = {}
        for z in component(src, parent, root) if parent >= 0 else range(src.n):
            mapping[z] = len(self.colors)
            self.colors.append(src.colors[z])
            self.adj.append(set())
            self.alive.append(True)
        for z, nz in mapping.items():
            for w in src.adj[z]:
                if w in mapping:
                    self.adj[nz].add(mapping[w])
        if x >= 0:
            self.adj[x].add(mapping[root])
            self.adj[mapping[root]].add(x)
        return mapping

    def compact(self) -> tuple[ColoredTree, dict[int, int]]:
        index = {}
        for v, ok in enumerate(self.alive):
            if ok:
                index[v] = len(index)
        colors = tuple(self.colors[v] for v in index)
        edges = tuple(
            (index[v], index[w]) for v in index for w in sorted(self.adj[v]) if v < w and w in index
        )
        return ColoredTree(colors, edges, self.c), index


# ---------------------------------------------------------------- grafting

def graft(t: ColoredTree, uv: Edge, t2: ColoredTree, u2v2: Edge) -> ColoredTree:
    """Replace the component T_v of t - uv by the component T'_{v2} of
    t2 - u2v2, joined to u through v2."""
    _need_edge(t, uv, "uv")
    _need_edge(t2, u2v2, "u2v2")
    u, v = uv
    m = _Mutable(t)
    m.remove_side(u, v)
    m.attach_copy(u, t2, u2v2[1], u2v2[0])
    return m.compact()[0]


def equal_edge_views(t: ColoredTree, uv: Edge, t2: ColoredTree, u2v2: Edge, d: int) -> bool:
    """Ordered edge-view equality at radius d."""
    return edge_view_code(t, *uv, d) == edge_view_code(t2, *u2v2, d)


# ---------------------------------------------------------------- pumping

def path_order_ok(t: ColoredTree, uv: Edge, xy: Edge) -> bool:
    """Whether the u-to-y path runs u, v, ..., x, y (v = x allowed)."""
    u, v = uv
    x, y = xy
    if uv == xy or u == y:
        return False
    p = path_between(t, u, y)
    return len(p) >= 3 and p[1] == v and p[-2] == x


def middle_component(t: ColoredTree, uv: Edge, xy: Edge) -> list[int]:
    """C_2: vertices beyond uv but not beyond xy."""
    tail = set(component(t, xy[0], xy[1]))
    return [z for z in component(t, uv[0], uv[1]) if z not in tail]


@dataclass
class PumpResult:
    tree: ColoredTree
    copies: list[dict[int, int]]  # per repetition: original vertex -> new id (C_2 only)
    base: dict[int, int]  # vertices outside T_v -> new id


def pump_tracked(t: ColoredTree, uv: Edge, xy: Edge, i: int, d: int | None = None) -> PumpResult:
    """T_i with bookkeeping: T_1 = t and T_{j+1} grafts T_v at the last copy
    of xy."""
    _need_edge(t, uv, "uv")
    _need_edge(t, xy, "xy")
    if i < 1:
        raise SurgeryError("i must be >= 1")
    if not path_order_ok(t, uv, xy):
        raise SurgeryError("edges are not in order on a common path")
    if d is not None and not equal_edge_views(t, uv, t, xy, d):
        raise SurgeryError(f"edge views at radius {d} differ")
    u, v = uv
    m = _Mutable(t)
    mid = set(middle_component(t, uv, xy))
    copies = [{z: z for z in mid}]
    cx, cy = xy
    for _ in range(i - 1):
        m.remove_side(cx, cy)
        mapping = m.attach_copy(cx, t, v, u)
        copies.append({z: mapping[z] for z in mid})
        cx, cy = mapping[xy[0]], mapping[xy[1]]
    tree, index = m.compact()
    beyond_v = set(component(t, u, v))
    base = {z: index[z] for z in range(t.n) if z not in beyond_v}
    return PumpResult(tree, [{z: index[w] for z, w in cp.items()} for cp in copies], base)


def pump(t: ColoredTree, uv: Edge, xy: Edge, i: int, d: int | None = None) -> ColoredTree:
    """i-fold replication of the segment between uv and xy. With d given,
    the ordered edge views at radius d must agree."""
    return pump_tracked(t, uv, xy, i, d).tree


# ---------------------------------------------------------------- duplication

def duplicate(g: ColoredGraph, uv: Edge) -> ColoredGraph:
    """G^{uv}: two copies of g with both copies of uv replaced by u1v2, u2v1."""
    _need_edge(g, uv, "uv")
    u, v = uv
    n = g.n
    edges = []
    for a, b in g.edges:
        if {a, b} == {u, v}:
            continue
        edges.append((a, b))
        edges.append((a + n, b + n))
    edges += [(u, v + n), (u + n, v)]
    return ColoredGraph(g.colors + g.colors, tuple(edges), g.c)


def distance_without(g: ColoredGraph, u: int, v: int) -> int:
    """Distance from u to v once the edge uv is removed (-1 if disconnected)."""
    return bfs(g, u, skip_edge=(u, v))[v]


# ---------------------------------------------------------------- detectors

def _all_pairs(t: ColoredGraph) -> list[list[int]]:
    return [bfs(t, s) for s in range(t.n)]


def find_equal_view_edge_pair(t: ColoredTree, d: int) -> tuple[Edge, Edge] | None:
    """Two distinct edges uv, xy on a common path (the u-to-y path runs
    u, v, ..., x, y) with equal ordered edge views at radius d."""
    dist = _all_pairs(t)
    groups: dict[tuple[bytes, bytes], list[Edge]] = {}
    for a, b in sorted(t.edges):
        for e in ((a, b), (b, a)):
            groups.setdefault(edge_view_code(t, *e, d), []).append(e)
    for key in sorted(groups):
        arcs = groups[key]
        for (u, v), (x, y) in itertools.permutations(arcs, 2):
            if u == y or {u, v} == {x, y}:
                continue
            # u-to-y path passes v then x
            if dist[u][y] == dist[v][x] + 2 and dist[u][x] == dist[v][x] + 1:
                return (u, v), (x, y)
    return None


@dataclass(frozen=True)
class Zigzag:
    u1: int
    u2: int
    u3: int
    v1: int
    v2: int
    v3: int

    def vertices(self) -> tuple[int, ...]:
        return (self.u1, self.u2, self.u3, self.v1, self.v2, self.v3)


def is_zigzag(t: ColoredTree, z: Zigzag) -> bool:
    """Independent check: degrees, and the six vertices in order on a path."""
    deg = t.degree
    if len(set(z.vertices())) != 6:
        return False
    if not (deg(z.u1) == deg(z.u3) == deg(z.u2) - 1 and deg(z.v1) == deg(z.v3) == deg(z.v2) + 1):
        return False
    p = path_between(t, z.u1, z.v3)
    pos = {x: i for i, x in enumerate(p)}
    idx = [pos.get(x, -1) for x in z.vertices()]
    return -1 not in idx and idx == sorted(idx) and idx[1] == idx[0] + 1 and idx[2] == idx[1] + 1 and idx[4] == idx[3] + 1 and idx[5] == idx[4] + 1


def find_zigzag(t: ColoredTree) -> Zigzag | None:
    """A peak triple (u1,u2,u3) followed along some path by a dip triple
    (v1,v2,v3), or None. Linear time via rerooting."""
    n = t.n
    if n < 6:
        return None
    deg = [len(a) for a in t.adj]
    peak = [[w for w in t.adj[x] if deg[w] == deg[x] - 1] for x in range(n)]
    dip = [[w for w in t.adj[x] if deg[w] == deg[x] + 1] for x in range(n)]

    def dip_toward(b: int, w: int) -> bool:
        # b can serve as v2 when entered from its neighbor w
        return len(dip[b]) >= 2 and deg[w] == deg[b] + 1

    parent = [-1] * n
    order = [0]
    for x in order:
        for y in t.adj[x]:
            if y != parent[x]:
                parent[y] = x
                order.append(y)
    NEG = -(10**9)
    # down[y]: farthest valid dip center, measured from parent(y), inside y's subtree
    down = [NEG] * n
    for y in reversed(order):
        if parent[y] < 0:
            continue
        best = 1 if dip_toward(y, parent[y]) else NEG
        for z in t.adj[y]:
            if z != parent[y] and down[z] > NEG:
                best = max(best, down[z] + 1)
        down[y] = best
    # up[y]: same for the branch through parent(y), measured from y
    up = [NEG] * n
    for x in order:
        kids = [z for z in t.adj[x] if z != parent[x]]
        vals = [down[z] for z in kids]
        if parent[x] >= 0 and up[x] > NEG:
            vals_up = up[x]
        else:
            vals_up = NEG
        top2 = sorted(((v, z) for v, z in zip(vals, kids)), reverse=True)[:2]
        for z in kids:
            other = vals_up
            for v, w in top2:
                if w != z:
                    other = max(other, v)
                    break
            best = 1 if dip_toward(x, z) else NEG
            if other > NEG:
                best = max(best, other + 1)
            up[z] = best

    for a in range(n):
        if len(peak[a]) < 2:
            continue
        for a2 in peak[a]:
            reach = down[a2] if parent[a2] == a else up[a]
            if reach >= 3:
                return _zigzag_witness(t, a, a2, peak[a], dip_toward)
    return None


def _zigzag_witness(t, a, a2, peaks, dip_toward) -> Zigzag:
    dist = {a: 0, a2: 1}
    prev = {a2: a}
    queue = deque([a2])
    while queue:
        x = queue.popleft()
        if dist[x] >= 3 and dip_toward(x, prev[x]):
            b = x
            break
        for y in t.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                prev[y] = x
                queue.append(y)
    else:  # pragma: no cover
        raise AssertionError("rerooting promised a dip")
    b1 = prev[b]
    b3 = next(w for w in t.adj[b] if w != b1 and t.degree(w) == t.degree(b) + 1)
    a1 = next(w for w in peaks if w != a2)
    return Zigzag(a1, a, a2, b1, b, b3)


def find_zigzag_bruteforce(t: ColoredTree) -> Zigzag | None:
    """Oracle: every vertex pair's path, every peak window before every dip window."""
    deg = t.degree
    for s in range(t.n):
        for e in range(t.n):
            p = path_between(t, s, e)
            for i in range(len(p) - 2):
                a1, a, a2 = p[i:i + 3]
                if not deg(a1) == deg(a2) == deg(a) - 1:
                    continue
                for j in range(i + 3, len(p) - 2):
                    b1, b, b3 = p[j:j + 3]
                    if deg(b1) == deg(b3) == deg(b) + 1:
                        return Zigzag(a1, a, a2, b1, b, b3)
    return None


def find_equal_degree_pair_path(t: ColoredTree) -> tuple[Edge, Edge] | None:
    """Two vertex-disjoint edges with equal-degree endpoints, returned as
    (u1u2, v1v2) in path order. In a tree any two disjoint edges lie on a
    common path."""
    eq = [(a, b) for a, b in sorted(t.edges) if t.degree(a) == t.degree(b)]
    for (a, b), (x, y) in itertools.combinations(eq, 2):
        if {a, b} & {x, y}:
            continue
        p = path_between(t, a, x)
        u1, u2 = (b, a) if b not in p else (a, b)
        v1, v2 = (x, y) if y not in p else (y, x)
        return (u1, u2), (v1, v2)
    return None


# ---------------------------------------------------------------- de-pumping

def _rooted_nested(t: ColoredGraph, root: int) -> list:
    """Mutable nested form [color, [children...], original id]."""
    node = {root: [t.colors[root], [], root]}
    order = [(root, -1)]
    for x, p in order:
        for y in t.adj[x]:
            if y != p:
                node[y] = [t.colors[y], [], y]
                node[x][1].append(node[y])
                order.append((y, x))
    return node[root]


def _deepest_arc(node: list, pair: ColorPair) -> list | None:
    """The upper vertex of the deepest arc with the given color pair at or
    below node."""
    best, best_depth = None, -1
    stack = [(node, 0)]
    while stack:
        x, dep = stack.pop()
        for ch in x[1]:
            if (x[0], ch[0]) == pair and dep > best_depth:
                best, best_depth = x, dep
            stack.append((ch, dep + 1))
    return best


def depump(t: RootedTree, c: int, order: Sequence[ColorPair] | None = None) -> RootedTree:
    """Auxiliary tree of the de-pumping argument: for each color pair, while
    a branch holds two arcs of that pair, graft at the upper end of the
    topmost one the subtree rooted at the upper end of the deepest one."""
    pairs = list(order) if order is not None else [(a, b) for a in range(1, c + 1) for b in range(1, c + 1)]
    root = _rooted_nested(t.tree, t.root)
    for pair in pairs:
        root = _collapse(root, pair)
    colors: list[int] = []
    edges: list[Edge] = []
    stack = [(root, -1)]
    while stack:
        x, p = stack.pop()
        me = len(colors)
        colors.append(x[0])
        if p >= 0:
            edges.append((p, me))
        for ch in reversed(x[1]):
            stack.append((ch, me))
    return RootedTree(ColoredTree(tuple(colors), tuple(edges), t.tree.c), 0)


def _collapse(node: list, pair: ColorPair) -> list:
    # node is u1 candidate: an arc node -> child with this pair is the topmost on its branch
    while any((node[0], ch[0]) == pair for ch in node[1]):
        lower = None
        for ch in node[1]:
            if (node[0], ch[0]) == pair:
                lower = _deepest_arc(ch, pair)
                if lower is not None:
                    break
        if lower is None:
            break
        node = lower
    node[1] = [_collapse(ch, pair) for ch in node[1]]
    return node


def repeated_pair_on_branch(t: RootedTree) -> bool:
    """Whether some root-to-leaf branch repeats an ordered color pair."""
    tree = t.tree
    stack = [(t.root, -1, frozenset())]
    while stack:
        x, p, seen = stack.pop()
        for y in tree.adj[x]:
            if y == p:
                continue
            pair = (tree.colors[x], tree.colors[y])
            if pair in seen:
                return True
            stack.append((y, x, seen | {pair}))
    return False


def rooted_height(t: RootedTree) -> int:
    return max(bfs(t.tree, t.root))


# ---------------------------------------------------------------- useful pairs and <_L

def _pair(t: ColoredGraph, a: int, b: int) -> ColorPair:
    return (t.colors[a], t.colors[b])


def useful_pairs(trees: Iterable[ColoredTree], c: int | None = None) -> set[ColorPair]:
    """Ordered pairs (c1,c2) seen on arcs a->b and x->y of a common path
    a, b, ..., x, y with at least four vertices."""
    out: set[ColorPair] = set()
    for t in trees:
        for a, b in t.edges:
            for u1, u2 in ((a, b), (b, a)):
                p = _pair(t, u1, u2)
                if p in out:
                    continue
                # walk away from u1 past u2; x must differ from u2
                dist = {u1: -1, u2: 0}
                queue = deque([u2])
                while queue and p not in out:
                    x = queue.popleft()
                    for y in t.adj[x]:
                        if y in dist:
                            continue
                        dist[y] = dist[x] + 1
                        if x != u2 and _pair(t, x, y) == p:
                            out.add(p)
                            break
                        queue.append(y)
    return out


@dataclass(frozen=True)
class Witness:
    """A tree rooted at `root` with arcs u1->u2, v1->v2, w1->w2 witnessing
    pair(u) = pair(v) <_L pair(w)."""

    tree: ColoredTree
    root: int
    u1: int
    u2: int
    v1: int
    v2: int
    w1: int
    w2: int

    def vertices(self) -> tuple[int, ...]:
        return (self.u1, self.u2, self.v1, self.v2, self.w1, self.w2)

    @property
    def lower(self) -> ColorPair:
        return _pair(self.tree, self.u1, self.u2)

    @property
    def upper(self) -> ColorPair:
        return _pair(self.tree, self.w1, self.w2)

    def to_dict(self) -> dict:
        return {"tree": self.tree.to_json(), "root": self.root, "vertices": list(self.vertices())}


def verify_witness(w: Witness) -> bool:
    """Independent pattern check on explicit parent pointers."""
    t = w.tree
    parent = {w.root: -1}
    order = [w.root]
    for x in order:
        for y in t.adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)

    def ancestors(x: int) -> set[int]:
        out = set()
        while x >= 0:
            out.add(x)
            x = parent[x]
        return out

    arcs_ok = all(parent.get(b) == a for a, b in ((w.u1, w.u2), (w.v1, w.v2), (w.w1, w.w2)))
    return (
        arcs_ok
        and w.u2 in ancestors(w.v1)
        and w.u2 in ancestors(w.w1)
        and w.v2 not in ancestors(w.w2)
        and w.w2 not in ancestors(w.v2)
        and _pair(t, w.u1, w.u2) == _pair(t, w.v1, w.v2)
    )


def _witnesses_in(t: ColoredTree, useful: set[ColorPair], found: dict) -> None:
    """Record one witness per (p, q) in useful x useful not yet in found."""
    for a, b in sorted(t.edges):
        for u1, u2 in ((a, b), (b, a)):
            p = _pair(t, u1, u2)
            if p not in useful:
                continue
            # orient the component of u2 away from u1
            parent = {u2: u1}
            order = [u2]
            for x in order:
                for y in t.adj[x]:
                    if y != parent[x]:
                        parent[y] = x
                        order.append(y)
            arcs = [(parent[y], y) for y in order[1:]]
            sub: dict[int, Counter] = {}
            for y in reversed(order):
                cnt = Counter()
                for z in t.adj[y]:
                    if z != parent[y]:
                        cnt[_pair(t, y, z)] += 1
                        cnt.update(sub[z])
                sub[y] = cnt
            onpath: dict[int, Counter] = {u2: Counter()}
            for y in order[1:]:
                cnt = Counter(onpath[parent[y]])
                cnt[_pair(t, parent[y], y)] += 1
                onpath[y] = cnt
            total = sub[u2]
            for v1, v2 in arcs:
                if _pair(t, v1, v2) != p:
                    continue
                for q in useful:
                    if (p, q) in found:
                        continue
                    if total[q] - sub[v2][q] - onpath[v2][q] <= 0:
                        continue
                    blocked = set(_subtree(t, parent, v2))
                    w1, w2 = next(
                        (x, y) for x, y in arcs
                        if _pair(t, x, y) == q and y not in blocked and not _is_ancestor(parent, y, v2)
                    )
                    found[(p, q)] = Witness(t, u1, u1, u2, v1, v2, w1, w2)


def _subtree(t, parent, top):
    out = [top]
    for x in out:
        out.extend(y for y in t.adj[x] if y != parent.get(x))
    return out


def _is_ancestor(parent, a, x):
    while x in parent:
        if x == a:
            return True
        x = parent[x]
    return False


@dataclass
class OrderRelation:
    pairs: list[ColorPair]
    witnesses: dict[tuple[ColorPair, ColorPair], Witness] = field(default_factory=dict)
    closure: set[tuple[ColorPair, ColorPair]] = field(default_factory=set)
    chain: list[ColorPair] = field(default_factory=list)

    @property
    def edges(self) -> list[tuple[ColorPair, ColorPair]]:
        return sorted(self.witnesses)

    @property
    def strict(self) -> bool:
        """False when some pair is below itself."""
        return not any(p == q for p, q in self.closure)

    @property
    def k(self) -> int:
        return len(self.chain)

    def less(self, p: ColorPair, q: ColorPair) -> bool:
        return (p, q) in self.closure

    def linear_order(self) -> list[ColorPair]:
        """Pairs sorted so that p comes before q whenever p <_L q strictly."""
        below = {p: sum(1 for q in self.pairs if (q, p) in self.closure and (p, q) not in self.closure) for p in self.pairs}
        return sorted(self.pairs, key=lambda p: (below[p], p))

    def to_dict(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "edges": [[list(p), list(q)] for p, q in self.edges],
            "chain": [list(p) for p in self.chain],
            "strict": self.strict,
        }


def transitive_closure(pairs: Sequence[ColorPair], rel: Iterable[tuple[ColorPair, ColorPair]]) -> set:
    reach = {p: set() for p in pairs}
    for p, q in rel:
        reach[p].add(q)
    for k in pairs:
        for i in pairs:
            if k in reach[i]:
                reach[i] |= reach[k]
    return {(p, q) for p in pairs for q in reach[p]}


def longest_chain(pairs: Sequence[ColorPair], closure: set) -> list[ColorPair]:
    """Longest p1 < p2 < ... using only strict comparisons (mutually
    comparable pairs are skipped)."""
    strict = {(p, q) for p, q in closure if p != q and (q, p) not in closure}
    best: dict[ColorPair, list[ColorPair]] = {}

    def chain_from(p):
        if p not in best:
            tails = [chain_from(q) for q in pairs if (p, q) in strict]
            best[p] = [p] + max(tails, key=len, default=[])
        return best[p]

    return max((chain_from(p) for p in pairs), key=len, default=[])


def order_relation(trees: Iterable[ColoredTree], c: int | None = None, max_n: int = 60) -> OrderRelation:
    """Useful pairs, witnessed <_L edges, closure and a longest chain."""
    trees = [t for t in trees if t.n <= max_n]
    useful = useful_pairs(trees)
    found: dict = {}
    for t in trees:
        _witnesses_in(t, useful, found)
    pairs = sorted(useful)
    rel = OrderRelation(pairs, dict(sorted(found.items())))
    rel.closure = transitive_closure(pairs, found)
    rel.chain = longest_chain(pairs, rel.closure)
    return rel


# ---------------------------------------------------------------- families from witnesses

def build_logcase_family(w: Witness, i: int) -> ColoredTree:
    """T_1 is the witness tree; T_{j+1} grafts the witness's T_{u2} at every
    copy of v1v2 and w1w2 in T_j."""
    if not verify_witness(w) or w.lower != w.upper:
        raise SurgeryError("witness does not realize p <_L p")
    if i < 1:
        raise SurgeryError("i must be >= 1")
    m = _Mutable(w.tree)
    targets = [(w.v1, w.v2), (w.w1, w.w2)]
    for _ in range(i - 1):
        nxt = []
        for x, y in targets:
            m.remove_side(x, y)
            mapping = m.attach_copy(x, w.tree, w.u2, w.u1)
            nxt += [(mapping[w.v1], mapping[w.v2]), (mapping[w.w1], mapping[w.w2])]
        targets = nxt
    return m.compact()[0]


def binary_logcase_witness() -> Witness:
    """Witness of (1,1) <_L (1,1) on the 10-vertex tree whose inner vertices
    all have degree 3."""
    edges = ((0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 6), (2, 7), (3, 8), (3, 9))
    t = ColoredTree((1,) * 10, edges, 1)
    return Witness(t, 0, 0, 1, 1, 4, 1, 5)


@dataclass(frozen=True)
class UsefulWitness:
    """Tree with arcs u1->u2 and v1->v2 of the same pair along a path."""

    tree: ColoredTree
    u1: int
    u2: int
    v1: int
    v2: int


def build_chain_rakes(witnesses: Sequence[Witness], last: UsefulWitness, N: int) -> ColoredTree:
    """S^(1) from a chain p_1 <_L ... <_L p_k: witnesses[i] shows p_i <_L p_{i+1}
    and `last` shows p_k useful. Each level is pumped N times along its
    (u, v) arcs; the copies of w then receive the next level's tree."""
    if N < 1:
        raise SurgeryError("N must be >= 1")
    for i, w in enumerate(witnesses):
        if not verify_witness(w):
            raise SurgeryError(f"witness {i} is malformed")
        nxt = witnesses[i + 1].lower if i + 1 < len(witnesses) else _pair(last.tree, last.u1, last.u2)
        if w.upper != nxt:
            raise SurgeryError("witnesses do not form a chain")
    if _pair(last.tree, last.u1, last.u2) != _pair(last.tree, last.v1, last.v2):
        raise SurgeryError("final witness arcs differ in colors")
    res = pump_tracked(last.tree, (last.u1, last.u2), (last.v1, last.v2), N)
    s_tree = res.tree
    s_u1, s_u2 = res.base[last.u1], res.copies[0][last.u2]
    for w in reversed(witnesses):
        res = pump_tracked(w.tree, (w.u1, w.u2), (w.v1, w.v2), N)
        m = _Mutable(res.tree)
        for cp in res.copies:
            x, y = cp[w.w1], cp[w.w2]
            m.remove_side(x, y)
            m.attach_copy(x, s_tree, s_u2, s_u1)
        s_tree, index = m.compact()
        s_u1, s_u2 = index[res.base[w.u1]], index[res.copies[0][w.u2]]
    return s_tree


def rake_chain_witnesses(ell: int = 6) -> tuple[list[Witness], UsefulWitness]:
    """Chain witnesses read off the canonical 2-rake on ell^2 vertices."""
    from .constructions import gen_k_rake

    t = gen_k_rake(2, ell)
    rel = order_relation([t])
    top = (1, 2)
    below = next(q for (p, q) in rel.witnesses if p == top and q[0] > 3)
    w = rel.witnesses[(top, below)]
    last = _useful_witness(t, below)
    return [w], last


def _useful_witness(t: ColoredTree, p: ColorPair) -> UsefulWitness:
    for a, b in sorted(t.edges):
        for u1, u2 in ((a, b), (b, a)):
            if _pair(t, u1, u2) != p:
                continue
            prev = {u2: u1}
            queue = deque([u2])
            while queue:
                x = queue.popleft()
                for y in t.adj[x]:
                    if y in prev:
                        continue
                    prev[y] = x
                    if x != u2 and _pair(t, x, y) == p:
                        return UsefulWitness(t, u1, u2, x, y)
                    queue.append(y)
    raise SurgeryError(f"pair {p} is not useful in this tree")
