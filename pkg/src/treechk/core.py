"""Colored graphs and trees, canonical codes, views and small-tree enumeration."""
from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

from . import _kernels

DEFAULT_CAP = 10**7

# nested rooted form used by the generators: (color, (child, child, ...)), children sorted
Nested = tuple


class InvalidGraph(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class CapExceeded(RuntimeError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get("TREECHK_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    """Vertex-colored graph on vertices 0..n-1 with colors in 1..c.

    Construction does not validate; use :func:`validate` or build a
    :class:`ColoredTree`, which does.
    """

    colors: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    c: int = 0

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(x) for x in self.colors))
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.c == 0:
            object.__setattr__(self, "c", max(self.colors, default=1))

    @property
    def n(self) -> int:
        return len(self.colors)

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            if 0 <= u < self.n and 0 <= v < self.n and u != v:
                out[u].append(v)
                out[v].append(u)
        return tuple(tuple(sorted(a)) for a in out)

    @cached_property
    def csr(self):
        return _kernels.to_csr(self.n, self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self.adj[u]

    def to_json(self) -> dict:
        return {"c": self.c, "colors": list(self.colors), "edges": [list(e) for e in self.edges]}

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (self.c, self.colors, sorted(map(tuple, map(sorted, self.edges)))) == (
            other.c, other.colors, sorted(map(tuple, map(sorted, other.edges))))

    def __hash__(self):
        return hash((self.c, self.colors, tuple(sorted(map(tuple, map(sorted, self.edges))))))


class ColoredTree(ColoredGraph):
    """A ColoredGraph that is checked to be a tree at construction."""

    def __post_init__(self):
        super().__post_init__()
        problems = validate(self, as_tree=True)
        if problems:
            raise InvalidGraph(problems)


@dataclass(frozen=True)
class RootedTree:
    tree: ColoredTree
    root: int

    def __post_init__(self):
        if not 0 <= self.root < self.tree.n:
            raise ValueError(f"root {self.root} out of range")

    @property
    def code(self) -> bytes:
        return canonical_code(self)


def validate(g: ColoredGraph, as_tree: bool | None = None) -> list[str]:
    """Return the list of violations (empty when valid)."""
    if as_tree is None:
        as_tree = isinstance(g, ColoredTree)
    out: list[str] = []
    n = len(g.colors)
    seen: set[tuple[int, int]] = set()
    for u, v in g.edges:
        if not (0 <= u < n and 0 <= v < n):
            out.append(f"vertex out of range in edge ({u},{v})")
            continue
        if u == v:
            out.append("loop")
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            out.append("duplicate edge")
        seen.add(key)
    for x in g.colors:
        if not 1 <= x <= g.c:
            out.append(f"color {x} outside [1..{g.c}]")
            break
    if as_tree and not out:
        if n == 0:
            out.append("empty")
        else:
            comps = _component_count(n, seen)
            if len(seen) > n - comps:
                out.append("cyclic")
            if comps > 1:
                out.append("disconnected")
    return out


def _component_count(n: int, edges: Iterable[tuple[int, int]]) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps


def make_tree(colors: Sequence[int], edges: Iterable[Sequence[int]], c: int = 0) -> ColoredTree:
    return ColoredTree(tuple(colors), tuple((u, v) for u, v in edges), c)


def is_tree(g: ColoredGraph) -> bool:
    return not validate(g, as_tree=True)


# ---------------------------------------------------------------- distances

def bfs(g: ColoredGraph, src: int, skip_edge: tuple[int, int] | None = None) -> list[int]:
    """Distances from src (-1 when unreachable), optionally ignoring one edge."""
    dist = [-1] * g.n
    dist[src] = 0
    queue = deque([src])
    adj = g.adj
    a, b = skip_edge if skip_edge else (-1, -1)
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if dist[y] < 0 and not ((x == a and y == b) or (x == b and y == a)):
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def distance(g: ColoredGraph, u: int, v: int) -> int:
    return bfs(g, u)[v]


def diameter(g: ColoredGraph) -> int:
    """Exact diameter in edges: double sweep on trees, all-pairs BFS otherwise."""
    if g.n == 0:
        raise ValueError("empty graph")
    indptr, indices = g.csr
    if len(g.edges) == g.n - 1 and isinstance(g, ColoredTree):
        return _kernels.tree_diameter(indptr, indices)
    result = _kernels.graph_diameter(indptr, indices)
    if result < 0:
        raise ValueError("graph is disconnected")
    return result


def path_between(t: ColoredGraph, u: int, v: int) -> list[int]:
    parent = {u: -1}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in t.adj[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    out = [v]
    while out[-1] != u:
        out.append(parent[out[-1]])
    return out[::-1]


def tree_centers(t: ColoredGraph) -> list[int]:
    """Center(s) of a tree by iterated leaf removal."""
    n = t.n
    if n <= 2:
        return list(range(n))
    deg = [len(a) for a in t.adj]
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in t.adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def component(t: ColoredGraph, u: int, v: int) -> list[int]:
    """Vertices of the component containing v once the edge uv is removed."""
    seen = {u, v}
    out = [v]
    stack = [v]
    while stack:
        x = stack.pop()
        for y in t.adj[x]:
            if y not in seen:
                seen.add(y)
                out.append(y)
                stack.append(y)
    return out


# ---------------------------------------------------------------- canonical codes

def code_below(adj, colors, root: int, parent: int = -1, limit: int | None = None) -> bytes:
    """AHU code of the subtree hanging at root away from parent, truncated at depth limit."""
    order = [(root, parent, 0)]
    i = 0
    while i < len(order):
        x, p, dep = order[i]
        i += 1
        if limit is not None and dep >= limit:
            continue
        for y in adj[x]:
            if y != p:
                order.append((y, x, dep + 1))
    kids: dict[int, list[bytes]] = {}
    code = b""
    for x, p, _ in reversed(order):
        parts = kids.pop(x, [])
        parts.sort()
        code = b"(" + str(colors[x]).encode() + b"".join(parts) + b")"
        kids.setdefault(p, []).append(code)
    return code


def canonical_code(t: RootedTree) -> bytes:
    return code_below(t.tree.adj, t.tree.colors, t.root)


def free_code(t: ColoredGraph) -> bytes:
    """Canonical code of a free tree, rooted at its (smaller-coded) center."""
    return min(code_below(t.adj, t.colors, x) for x in tree_centers(t))


def are_isomorphic(t1: ColoredGraph, t2: ColoredGraph) -> bool:
    if t1.n != t2.n or sorted(t1.colors) != sorted(t2.colors):
        return False
    return free_code(t1) == free_code(t2)


# ---------------------------------------------------------------- views

@dataclass(frozen=True)
class NodeView:
    ball: ColoredGraph
    center: int
    radius: int


@dataclass(frozen=True)
class EdgeView:
    ball: ColoredGraph
    center_edge: tuple[int, int]
    radius: int


def _ball(g: ColoredGraph, sources: Sequence[int], vmax: int, emax: int, extra_edge=None):
    dist = {s: 0 for s in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        if dist[x] >= vmax:
            continue
        for y in g.adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    verts = sorted(dist, key=lambda x: (dist[x], x))
    index = {x: i for i, x in enumerate(verts)}
    edges = set()
    for x in verts:
        if dist[x] <= emax:
            for y in g.adj[x]:
                if y in index:
                    edges.add((min(index[x], index[y]), max(index[x], index[y])))
    if extra_edge is not None:
        a, b = index[extra_edge[0]], index[extra_edge[1]]
        edges.add((min(a, b), max(a, b)))
    ball = ColoredGraph(tuple(g.colors[x] for x in verts), tuple(sorted(edges)), g.c)
    return ball, index


def node_view(g: ColoredGraph, v: int, d: int) -> NodeView:
    ball, index = _ball(g, [v], d, d - 1)
    return NodeView(ball, index[v], d)


def edge_view(g: ColoredGraph, u: int, v: int, d: int) -> EdgeView:
    if not g.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge")
    ball, index = _ball(g, [u, v], d - 1, d - 2, extra_edge=(u, v))
    return EdgeView(ball, (index[u], index[v]), d)


class CyclicView(ValueError):
    pass


def _ball_is_tree(ball: ColoredGraph) -> bool:
    return len(ball.edges) == ball.n - 1 and _component_count(ball.n, ball.edges) == 1


def view_code(view: NodeView | EdgeView):
    """Rooted code for node views, ordered pair of half codes for edge views."""
    ball = view.ball
    if not _ball_is_tree(ball):
        raise CyclicView("view contains a cycle; compare with views_equal")
    if isinstance(view, NodeView):
        return code_below(ball.adj, ball.colors, view.center)
    u, v = view.center_edge
    return (code_below(ball.adj, ball.colors, u, v), code_below(ball.adj, ball.colors, v, u))


def unordered_code(code):
    return tuple(sorted(code)) if isinstance(code, tuple) else code


def node_view_code(t: ColoredGraph, v: int, d: int) -> bytes:
    """Fast path of view_code(node_view(t, v, d)) for trees."""
    return code_below(t.adj, t.colors, v, -1, d)


def edge_view_code(t: ColoredGraph, u: int, v: int, d: int) -> tuple[bytes, bytes]:
    """Fast path of view_code(edge_view(t, u, v, d)) for trees."""
    return (code_below(t.adj, t.colors, u, v, d - 1), code_below(t.adj, t.colors, v, u, d - 1))


def views_equal(a: NodeView | EdgeView, b: NodeView | EdgeView, ordered: bool = True) -> bool:
    """Isomorphism of views with centers mapped to centers; works for cyclic balls too."""
    if type(a) is not type(b) or a.radius != b.radius:
        return False
    if _ball_is_tree(a.ball) and _ball_is_tree(b.ball):
        ca, cb = view_code(a), view_code(b)
        return ca == cb if ordered else unordered_code(ca) == unordered_code(cb)
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match

    def as_nx(view, swap=False):
        h = nx.Graph()
        marks = {}
        if isinstance(view, NodeView):
            marks[view.center] = 1
        else:
            u, v = view.center_edge
            marks[u], marks[v] = (1, 2) if not swap else (2, 1)
            if not ordered:
                marks[u] = marks[v] = 1
        for x in range(view.ball.n):
            h.add_node(x, color=view.ball.colors[x], mark=marks.get(x, 0))
        h.add_edges_from(view.ball.edges)
        return h

    return nx.is_isomorphic(as_nx(a), as_nx(b), node_match=categorical_node_match(["color", "mark"], [0, 0]))


# ---------------------------------------------------------------- nested rooted forms

def nested_size(t: Nested) -> int:
    return 1 + sum(nested_size(ch) for ch in t[1])


def nested_height(t: Nested) -> int:
    return 1 + max((nested_height(ch) for ch in t[1]), default=-1)


def nested_code(t: Nested) -> bytes:
    return b"(" + str(t[0]).encode() + b"".join(sorted(nested_code(ch) for ch in t[1])) + b")"


def nested_from_tree(t: ColoredGraph, root: int, parent: int = -1) -> Nested:
    """Sorted nested form of the subtree at root hanging away from parent."""
    order = [(root, parent)]
    i = 0
    while i < len(order):
        x, p = order[i]
        i += 1
        order.extend((y, x) for y in t.adj[x] if y != p)
    kids: dict[int, list] = {}
    node: Nested = ()
    for x, p in reversed(order):
        node = (t.colors[x], tuple(sorted(kids.pop(x, []))))
        kids.setdefault(p, []).append(node)
    return node


def tree_from_nested(t: Nested, c: int = 0) -> ColoredTree:
    colors: list[int] = []
    edges: list[tuple[int, int]] = []
    stack = [(t, -1)]
    while stack:
        node, parent = stack.pop()
        me = len(colors)
        colors.append(node[0])
        if parent >= 0:
            edges.append((parent, me))
        for ch in reversed(node[1]):
            stack.append((ch, me))
    return ColoredTree(tuple(colors), tuple(edges), c or max(colors))


def join_nested(a: Nested, b: Nested, c: int = 0) -> ColoredTree:
    """Tree made of two rooted trees whose roots are joined by an edge."""
    ta = tree_from_nested(a, c)
    tb = tree_from_nested(b, c)
    off = ta.n
    edges = list(ta.edges) + [(x + off, y + off) for x, y in tb.edges] + [(0, off)]
    return ColoredTree(ta.colors + tb.colors, tuple(edges), c or max(ta.colors + tb.colors))


# ---------------------------------------------------------------- enumeration

LocalRule = Callable[[int, tuple[int, ...]], bool]


class RootedGenerator:
    """Rooted colored trees by (size, height), optionally pruned by a distance-1 rule.

    With a rule, a vertex whose parent is not yet known is kept when some
    parent color would satisfy the rule; it is re-checked once the parent
    color is fixed. The rule receives (own color, sorted neighbor colors).
    """

    def __init__(self, c: int, rule: LocalRule | None = None):
        self.c = c
        self.rule = rule
        self._memo: dict[tuple[int, int], list[Nested]] = {}

    def _ok(self, color: int, kids: tuple[int, ...], parent: int | None) -> bool:
        if self.rule is None:
            return True
        if parent is not None:
            return self.rule(color, tuple(sorted(kids + (parent,))))
        return any(self.rule(color, tuple(sorted(kids + (p,)))) for p in range(1, self.c + 1))

    def exact(self, size: int, height: int) -> list[Nested]:
        """Trees of the given size and height whose root still expects a parent."""
        key = (size, height)
        if key in self._memo:
            return self._memo[key]
        out: list[Nested] = []
        if height == 0:
            if size == 1:
                out = [(x, ()) for x in range(1, self.c + 1) if self._ok(x, (), None)]
        elif size > height:
            for kids in self.child_multisets(size - 1, height - 1, height - 1, 1):
                for x in range(1, self.c + 1):
                    if self._kids_ok(x, kids) and self._ok(x, tuple(k[0] for k in kids), None):
                        out.append((x, kids))
        self._memo[key] = out
        return out

    def _kids_ok(self, x: int, kids: tuple) -> bool:
        if self.rule is None:
            return True
        return all(self._ok(k[0], tuple(g[0] for g in k[1]), x) for k in kids)

    def pool(self, max_size: int, max_height: int) -> list[tuple[Nested, int, int]]:
        """All kept trees up to the given size and height, ordered by size."""
        key = ("pool", max_size, max_height)
        if key not in self._memo:
            out = []
            for s in range(1, max_size + 1):
                for h in range(0, min(max_height, s - 1) + 1):
                    out.extend((t, s, h) for t in self.exact(s, h))
            self._memo[key] = out
        return self._memo[key]

    def child_multisets(self, total: int, max_height: int, need_height: int, need_count: int):
        """Children tuples (a multiset, as nondecreasing pool positions) with sizes
        summing to total, heights <= max_height, and at least need_count
        children of height exactly need_height."""
        pool = self.pool(total, max_height)
        acc: list[Nested] = []

        def rec(start: int, remaining: int, hits: int):
            if remaining == 0:
                if hits >= need_count:
                    yield tuple(acc)
                return
            for i in range(start, len(pool)):
                t, s, h = pool[i]
                if s > remaining:
                    break
                acc.append(t)
                yield from rec(i, remaining - s, hits + (h == need_height))
                acc.pop()

        yield from rec(0, total, 0)

    def centered(self, n: int) -> Iterator[tuple[str, Nested | tuple[Nested, Nested]]]:
        """Free trees on n vertices as center-rooted forms, each class once."""
        if n == 1:
            for x in range(1, self.c + 1):
                if self.rule is None or self.rule(x, ()):
                    yield "uni", (x, ())
            return
        # unicentral: radius h, at least two children of height h-1
        for h in range(1, n):
            if 2 * h + 1 > n:
                break
            for kids in self.child_multisets(n - 1, h - 1, h - 1, 2):
                for x in range(1, self.c + 1):
                    if self._kids_ok(x, kids) and (self.rule is None or self.rule(x, tuple(sorted(k[0] for k in kids)))):
                        yield "uni", (x, kids)
        # bicentral: two halves of equal height h
        for h in range(0, n):
            if 2 * (h + 1) > n:
                break
            halves = []
            for s in range(h + 1, n - h):
                halves.extend((s, t) for t in self.exact(s, h))
            by_size: dict[int, list[Nested]] = {}
            for s, t in halves:
                by_size.setdefault(s, []).append(t)
            for s1 in sorted(by_size):
                s2 = n - s1
                if s2 < s1 or s2 not in by_size:
                    continue
                left = by_size[s1]
                right = by_size[s2]
                for i, a in enumerate(left):
                    for j, b in enumerate(right):
                        if s1 == s2 and j < i:
                            continue
                        if self.rule is not None and not (
                            self._ok(a[0], tuple(k[0] for k in a[1]), b[0])
                            and self._ok(b[0], tuple(k[0] for k in b[1]), a[0])
                        ):
                            continue
                        yield "bi", (a, b)


def _materialize(kind: str, form, c: int) -> ColoredTree:
    if kind == "uni":
        return tree_from_nested(form, c)
    return join_nested(form[0], form[1], c)


def enumerate_trees(n: int, c: int = 1, cap: int | None = None, rule: LocalRule | None = None) -> Iterator[ColoredTree]:
    """One representative per colored-isomorphism class of n-vertex c-colored trees.

    With a distance-1 rule, only the classes on which every vertex satisfies
    the rule are produced.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cap = enumeration_cap() if cap is None else cap
    gen = RootedGenerator(c, rule)
    emitted = 0
    for kind, form in gen.centered(n):
        emitted += 1
        if emitted > cap:
            raise CapExceeded(f"more than {cap} trees for n={n}, c={c}")
        yield _materialize(kind, form, c)


def count_trees(n: int, c: int = 1, cap: int | None = None) -> int:
    return sum(1 for _ in enumerate_trees(n, c, cap))


def rooted_trees(size: int, max_height: int, c: int = 1) -> list[Nested]:
    """Rooted trees with the given size and height at most max_height, sorted by code."""
    gen = RootedGenerator(c)
    out = []
    for h in range(0, min(max_height, size - 1) + 1):
        out.extend(gen.exact(size, h))
    out.sort(key=nested_code)
    return out


# ---------------------------------------------------------------- I/O

def tree_from_json(obj: dict | str) -> ColoredTree:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        colors = obj["colors"]
        edges = obj["edges"]
        c = int(obj.get("c", 0))
    except (KeyError, TypeError) as exc:
        raise InvalidGraph([f"malformed tree record: {exc}"]) from exc
    if any(not isinstance(e, (list, tuple)) or len(e) != 2 for e in edges):
        raise InvalidGraph(["edges must be pairs"])
    return ColoredTree(tuple(colors), tuple((e[0], e[1]) for e in edges), c)


def tree_to_json(t: ColoredGraph) -> str:
    return json.dumps(t.to_json(), separators=(",", ":"))


def graph_from_json(obj: dict | str) -> ColoredGraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    g = ColoredGraph(tuple(obj["colors"]), tuple((e[0], e[1]) for e in obj["edges"]), int(obj.get("c", 0)))
    problems = validate(g, as_tree=False)
    if problems:
        raise InvalidGraph(problems)
    return g


def read_trees(path: str) -> list[ColoredTree]:
    """Read a single JSON tree or a one-tree-per-line stream."""
    with open(path) as fh:
        text = fh.read()
    text = text.strip()
    if not text:
        raise InvalidGraph(["empty file"])
    try:
        return [tree_from_json(json.loads(text))]
    except json.JSONDecodeError:
        return [tree_from_json(json.loads(line)) for line in text.splitlines() if line.strip()]


def write_trees(path: str, trees: Iterable[ColoredGraph]) -> None:
    lines = [tree_to_json(t) for t in trees]
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)
