"""Local checkers: acceptance semantics and the concrete checker families."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, ClassVar, Iterable, Sequence

import numpy as np

from .core import ColoredGraph, NodeView, code_below, node_view, node_view_code
from .languages import (
    L1,
    L2,
    LEAF,
    EncodingSpec,
    LanguageSpec,
    language_from_name,
    padded_base_size,
    padded_diameter,
    split_padding,
)

INF = math.inf
BOUND_CAP = 64


@dataclass(frozen=True)
class Verdict:
    accept: bool
    rejecting_vertex: int | None = None

    def __bool__(self) -> bool:
        return self.accept


class PaletteMismatch(ValueError):
    pass


class Checker:
    """Base class. Subclasses implement view_verdict, and may override
    node_verdict with a faster computation over the same ball."""

    kind: ClassVar[str] = ""
    c: int
    d: int

    def view_verdict(self, view: NodeView) -> bool:
        raise NotImplementedError

    def node_verdict(self, g: ColoredGraph, v: int) -> bool:
        return self.view_verdict(node_view(g, v, self.d))

    def to_dict(self) -> dict:
        raise TypeError(f"{type(self).__name__} is not serializable")


def node_verdict(checker: Checker, g: ColoredGraph, v: int) -> bool:
    return checker.node_verdict(g, v)


def accepts(checker: Checker, t: ColoredGraph) -> Verdict:
    if any(x > checker.c for x in t.colors):
        raise PaletteMismatch(f"tree uses colors beyond the checker palette {checker.c}")
    for v in range(t.n):
        if not checker.node_verdict(t, v):
            return Verdict(False, v)
    return Verdict(True)


# ---------------------------------------------------------------- distance 1

class Distance1Checker(Checker):
    """Checker whose verdict depends on the own color and the multiset of
    neighbor colors."""

    d = 1

    def rule(self, own: int, nbrs: tuple[int, ...]) -> bool:
        raise NotImplementedError

    def node_verdict(self, g, v):
        return self.rule(g.colors[v], tuple(sorted(g.colors[w] for w in g.adj[v])))

    def view_verdict(self, view):
        ball, x = view.ball, view.center
        return self.rule(ball.colors[x], tuple(sorted(ball.colors[w] for w in ball.adj[x])))

    def rule_table(self, maxdeg: int) -> np.ndarray:
        """allowed[color-1, key] for neighbor count vectors encoded in base maxdeg+1."""
        c = self.c
        base = maxdeg + 1
        table = np.zeros((c, base**c), dtype=np.bool_)
        for total in range(maxdeg + 1):
            for combo in itertools.combinations_with_replacement(range(1, c + 1), total):
                key = sum(base ** (col - 1) for col in combo)
                for own in range(1, c + 1):
                    table[own - 1, key] = self.rule(own, combo)
        return table


@dataclass(frozen=True)
class DegreeSetChecker(Distance1Checker):
    """Accept a vertex iff its degree lies in `degrees` (None means every degree)."""

    degrees: frozenset[int] | None
    c: int = 1
    kind: ClassVar[str] = "DegreeSet"

    @property
    def degenerate(self) -> bool:
        """Without degree 1 only trees on one or two vertices can be accepted."""
        return self.degrees is not None and 1 not in self.degrees

    def rule(self, own, nbrs):
        return self.degrees is None or len(nbrs) in self.degrees

    def to_dict(self):
        degs = "all" if self.degrees is None else sorted(self.degrees)
        return {"kind": self.kind, "c": self.c, "d": 1, "degrees": degs}


def make_degree_set_checker(S: Iterable[int] | None) -> DegreeSetChecker:
    return DegreeSetChecker(None if S is None else frozenset(S))


Interval = tuple[int, float]


def _in_intervals(x: int, intervals: Sequence[Interval]) -> bool:
    return any(lo <= x <= hi for lo, hi in intervals)


@dataclass(frozen=True)
class Distance1Rule:
    """Allowed neighbor-color counts for a vertex of color own_color.
    Colors missing from `counts` must not appear among the neighbors."""

    own_color: int
    counts: tuple[tuple[int, tuple[Interval, ...]], ...]

    def __post_init__(self):
        for _, ivs in self.counts:
            for lo, hi in ivs:
                if lo > hi or lo < 0:
                    raise ValueError(f"bad interval [{lo},{hi}]")

    def matches(self, nbrs: Sequence[int]) -> bool:
        have = Counter(nbrs)
        table = dict(self.counts)
        if any(col not in table for col in have):
            return False
        return all(_in_intervals(have.get(col, 0), ivs) for col, ivs in table.items())

    def to_dict(self):
        return {
            "own": self.own_color,
            "counts": {str(col): [[lo, "inf" if hi == INF else hi] for lo, hi in ivs] for col, ivs in self.counts},
        }

    @classmethod
    def from_dict(cls, obj):
        counts = tuple(
            (int(col), tuple((int(lo), INF if hi == "inf" else int(hi)) for lo, hi in ivs))
            for col, ivs in sorted(obj["counts"].items(), key=lambda kv: int(kv[0]))
        )
        return cls(int(obj["own"]), counts)


@dataclass(frozen=True)
class Distance1RulesChecker(Distance1Checker):
    """A vertex accepts iff some rule for its color matches its neighbor colors."""

    rules: tuple[Distance1Rule, ...]
    c: int = 1
    kind: ClassVar[str] = "Distance1Rules"

    def rule(self, own, nbrs):
        return any(r.own_color == own and r.matches(nbrs) for r in self.rules)

    def to_dict(self):
        return {"kind": self.kind, "c": self.c, "d": 1, "rules": [r.to_dict() for r in self.rules]}


def rake_color(i: int, j: int) -> int:
    return 3 * (i - 1) + j


def rake_pair(color: int) -> tuple[int, int]:
    return (color - 1) // 3 + 1, (color - 1) % 3 + 1


@dataclass(frozen=True)
class RakeChecker(Distance1Checker):
    """Colors are pairs (i, j), 1 <= i <= k, j in {1,2,3}; level-i paths are
    colored cyclically by j and every vertex below level k carries a child
    path starting at (i+1, 1)."""

    k: int
    kind: ClassVar[str] = "Rake"

    @property
    def c(self) -> int:  # type: ignore[override]
        return 3 * self.k

    def rule(self, own, nbrs):
        if len(nbrs) > 3:
            return False
        i, j = rake_pair(own)
        rest = [rake_pair(x) for x in nbrs]
        if i < self.k:
            if (i + 1, 1) not in rest:
                return False
            rest.remove((i + 1, 1))
        prev, nxt = (i, (j - 2) % 3 + 1), (i, j % 3 + 1)
        rest.sort()
        if rest == sorted([prev, nxt]) or rest == [prev]:
            return True
        parents = [x for x in rest if x[0] == i - 1]
        if i >= 2 and len(parents) == 1:
            others = [x for x in rest if x[0] != i - 1]
            return others in ([nxt], [])
        # the first vertex of the top path, or a single-vertex top path
        return i == 1 and rest in ([nxt], [])

    def to_dict(self):
        return {"kind": self.kind, "c": self.c, "d": 1, "k": self.k}


def make_rake_checker(k: int) -> RakeChecker:
    if k < 1:
        raise ValueError("k must be >= 1")
    return RakeChecker(k)


# ---------------------------------------------------------------- degree-myopic

TYPES = ("leaf", "minus", "equal", "plus")


@dataclass(frozen=True)
class MyopicParams:
    a_leaf: int = 0
    b_leaf: float = INF
    a_minus: int = 0
    b_minus: float = INF
    a_equal: int = 0
    b_equal: float = 0
    a_plus: int = 0
    b_plus: float = 1

    def __post_init__(self):
        for name in TYPES:
            lo, hi = getattr(self, "a_" + name), getattr(self, "b_" + name)
            if lo < 0 or lo == INF or lo > hi:
                raise ValueError(f"invalid bounds for {name}: [{lo},{hi}]")

    def check_cap(self) -> "MyopicParams":
        """Declared bounds above BOUND_CAP add nothing and must be written as inf."""
        for x in self.__dict__.values():
            if x != INF and x > BOUND_CAP:
                raise ValueError(f"bounds above {BOUND_CAP} must be written as inf")
        return self

    def bounds(self, name: str) -> tuple[int, float]:
        return getattr(self, "a_" + name), getattr(self, "b_" + name)

    def to_dict(self) -> dict:
        return {k: ("inf" if v == INF else int(v)) for k, v in self.__dict__.items()}

    @classmethod
    def from_dict(cls, obj: dict) -> "MyopicParams":
        return cls(**{k: (INF if v in ("inf", None) else int(v)) for k, v in obj.items()}).check_cap()

    @classmethod
    def parse(cls, text: str) -> "MyopicParams":
        """Comma-separated a_leaf,b_leaf,a_minus,b_minus,a_equal,b_equal,a_plus,b_plus."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 8:
            raise ValueError("myopic preset needs 8 comma-separated bounds")
        vals = [INF if p in ("inf", "∞") else int(p) for p in parts]
        names = [f"{ab}_{t}" for t in TYPES for ab in ("a", "b")]
        return cls(**dict(zip(names, vals))).check_cap()


@dataclass(frozen=True)
class DegreeMyopicChecker(Checker):
    """Radius-2 checker seeing only whether each neighbor is a leaf or has
    degree one less, equal or one more than its own."""

    params: MyopicParams
    c: int = 1
    d: int = 2
    kind: ClassVar[str] = "DegreeMyopic"

    def counts(self, deg: int, nbr_degs: Iterable[int]) -> dict[str, int] | None:
        out = dict.fromkeys(TYPES, 0)
        for x in nbr_degs:
            hit = False
            # a degree-1 neighbor of a degree-2 vertex is both a leaf and degree-1
            if x == 1:
                out["leaf"] += 1
                hit = True
            if x == deg - 1:
                out["minus"] += 1
                hit = True
            if x == deg:
                out["equal"] += 1
                hit = True
            if x == deg + 1:
                out["plus"] += 1
                hit = True
            if not hit:
                return None
        return out

    def decide(self, deg: int, nbr_degs: Iterable[int]) -> bool:
        if deg <= 1:
            return True
        got = self.counts(deg, nbr_degs)
        if got is None:
            return False
        p = self.params
        for name in TYPES:
            lo, hi = p.bounds(name)
            if got[name] > hi:
                return False
            if got[name] < lo and not (name == "minus" and deg <= p.a_minus):
                return False
        return True

    def node_verdict(self, g, v):
        return self.decide(len(g.adj[v]), (len(g.adj[w]) for w in g.adj[v]))

    def view_verdict(self, view):
        ball, x = view.ball, view.center
        return self.decide(len(ball.adj[x]), (len(ball.adj[w]) for w in ball.adj[x]))

    def to_dict(self):
        return {"kind": self.kind, "c": 1, "d": 2, "params": self.params.to_dict()}


def make_myopic_checker(p: MyopicParams) -> DegreeMyopicChecker:
    return DegreeMyopicChecker(p)


def normalize_myopic(p: MyopicParams) -> tuple[MyopicParams, list[str]]:
    log = []
    q = p
    if q.a_plus != 0:
        q = replace(q, a_plus=0)
        log.append("a_plus forced to 0")
    if q.a_equal != 0 or q.b_equal != 0:
        if q.b_equal > 0:
            q = replace(q, b_leaf=q.b_leaf + 1 if q.b_leaf != INF else INF)
            log.append("b_leaf increased by 1")
        q = replace(q, a_equal=0, b_equal=0)
        log.append("equal-degree bounds forced to 0")
    if q.a_leaf != 0:
        q = replace(q, a_leaf=0)
        log.append("a_leaf forced to 0")
    if q.b_plus > 1:
        q = replace(q, b_plus=1)
        log.append("b_plus capped at 1")
    return q, log


REGIMES = ("Constant", "Sqrt", "Log", "LogOverLogLog", "Linear", "Unclassified")


def classify_myopic(p: MyopicParams) -> str:
    """Maximum-diameter regime of the normalized checker."""
    q, _ = normalize_myopic(p)
    if q.b_leaf == 0:
        # a non-leaf vertex can have no leaf neighbor: only one or two vertices
        return "Constant"
    if q.b_minus == 0 or q.b_plus == 0:
        # adjacent non-leaf vertices need degrees differing by exactly one,
        # which needs both a minus and a plus side: only stars remain
        return "Constant"
    if q.b_leaf == INF:
        return "Sqrt" if q.a_minus <= 1 else "Log"
    if q.b_minus == INF:
        return "LogOverLogLog"
    if q.b_minus < INF:
        return "Constant"
    return "Unclassified"  # pragma: no cover


# ---------------------------------------------------------------- special caterpillars

class _Ball:
    """Radius-R ball around a center, read straight off the host graph: BFS
    depths, children, subtree heights and truncated subtree codes."""

    def __init__(self, adj, colors, center: int, R: int):
        self.adj, self.colors, self.center, self.R = adj, colors, center, R
        parent = {center: -1}
        depth = {center: 0}
        order = [center]
        self.acyclic = True
        for x in order:
            if depth[x] == R:
                continue
            for y in adj[x]:
                if y == parent[x]:
                    continue
                if y in parent:
                    self.acyclic = False
                    continue
                parent[y] = x
                depth[y] = depth[x] + 1
                order.append(y)
        self.parent, self.depth = parent, depth
        self.children = {x: ([y for y in adj[x] if y != parent[x]] if depth[x] < R else []) for x in order}
        self.height: dict[int, int] = {}
        self.code: dict[int, bytes] = {}
        for x in reversed(order):
            kids = self.children[x]
            self.height[x] = 1 + max((self.height[y] for y in kids), default=-1)
            self.code[x] = b"(" + str(colors[x]).encode() + b"".join(sorted(self.code[y] for y in kids)) + b")"
        self.max_depth = max(depth.values())

    def degree(self, x: int) -> int:
        """Exact for vertices below depth R."""
        return len(self.adj[x])


_END = "end"


@dataclass(frozen=True)
class _Letter:
    m: int
    letter: int | None
    last: bool = False


@dataclass(frozen=True)
class SpecialCaterpillarChecker(Checker):
    """Accepts the trees T[s] with s in the language, at radius depth+1.

    The core is what survives `depth` rounds of leaf removal; a vertex is in
    it iff two of its branches reach distance `depth`, which the vertex and its
    neighbors can decide from the ball. Core vertices take one of three roles:
    an end (one core neighbor, carrying the bare tail), a tail root (no
    hanging subtrees, next to an end), or a letter vertex. A letter vertex
    reads its letter and residue from its own hanging forest, reads the
    letters of its core neighbors, orients itself by residues and checks the
    prefix, infix or suffix rule at its position.
    """

    language: LanguageSpec
    encoding: EncodingSpec
    depth: int
    kind: ClassVar[str] = "SpecialCaterpillar"
    copies: ClassVar[int] = 3

    def __post_init__(self):
        if self.depth < self.encoding.depth:
            raise ValueError("caterpillar depth below the letter depth")

    @property
    def d(self) -> int:  # type: ignore[override]
        return self.depth + 1

    @property
    def c(self) -> int:  # type: ignore[override]
        return self.encoding.palette

    def to_dict(self):
        return {
            "kind": self.kind,
            "c": self.c,
            "d": self.d,
            "depth": self.depth,
            "language": self.language.to_dict()["kind"],
            "encoding": self.encoding.to_dict(),
        }

    def node_verdict(self, g, v):
        return self._verdict(_Ball(g.adj, g.colors, v, self.d))

    def view_verdict(self, view):
        return self._verdict(_Ball(view.ball.adj, view.ball.colors, view.center, view.radius))

    # -- reading letters
    def _split(self, count: int) -> tuple[int, bool]:
        return count % 3, False

    def _letter_of(self, color: int, codes: Counter) -> int | None:
        if any(k % self.copies for k in codes.values()):
            return None
        kids = sorted(code for code, k in codes.items() for _ in range(k // self.copies))
        return self.encoding.letter_index(b"(" + str(color).encode() + b"".join(kids) + b")")

    def _read_own(self, b: _Ball, hanging: list[int]) -> _Letter | None:
        m, last = self._split(len(hanging))
        codes = Counter(b.code[w] for w in hanging)
        codes[LEAF] -= m
        if codes[LEAF] < 0:
            return None
        if last:
            return _Letter(m, None, True)
        letter = self._letter_of(b.colors[b.center], +codes)
        return None if letter is None else _Letter(m, letter)

    def _read_neighbor(self, b: _Ball, y: int) -> _Letter | None:
        """Letter of core neighbor y: its children minus the one continuing the
        core, which is the code left over once copies are grouped."""
        codes = Counter(b.code[w] for w in b.children[y])
        count = len(b.children[y]) - 1
        if count < 0:
            return None
        m, last = self._split(count)
        codes[LEAF] -= m
        if codes[LEAF] < 0:
            return None
        if last:
            return _Letter(m, None, True)
        odd = [code for code, k in codes.items() if k % self.copies == 1]
        if len(odd) != 1:
            return None
        codes[odd[0]] -= 1
        letter = self._letter_of(b.colors[y], +codes)
        return None if letter is None else _Letter(m, letter)

    # -- structure
    def _is_core(self, b: _Ball, y: int) -> bool:
        """Core test for the center or one of its neighbors."""
        d, u = self.depth, b.center
        own = sum(1 + b.height[w] >= d for w in b.children[y])
        if y == u:
            return own >= 2
        toward = 1 + max((1 + b.height[w] for w in b.children[u] if w != y), default=0)
        return own + (toward >= d) >= 2

    def _endlike(self, b: _Ball, y: int) -> bool:
        """A bare color-1 path from y reaching the ball boundary."""
        x = y
        while b.depth[x] < b.R:
            if b.colors[x] != 1 or b.degree(x) != 2:
                return False
            x = b.children[x][0]
        return b.colors[x] == 1

    def _verdict(self, b: _Ball) -> bool:
        if not b.acyclic or b.max_depth < b.R:
            return False
        u = b.center
        if not self._is_core(b, u):
            return True
        core = [y for y in b.children[u] if self._is_core(b, y)]
        hanging = [w for w in b.children[u] if w not in core]
        if len(core) == 1:
            return self._end_vertex(b, core[0], hanging)
        if len(core) != 2:
            return False
        endlike = [y for y in core if self._endlike(b, y)]
        if not hanging and endlike:
            return self._tail_root(b, core, endlike)
        return self._letter_vertex(b, hanging, core, endlike)

    def _end_vertex(self, b: _Ball, z: int, hanging: list[int]) -> bool:
        u = b.center
        if b.colors[u] != 1 or len(hanging) != 1 or b.colors[z] != 1 or b.degree(z) != 2:
            return False
        x = b.children[z][0]
        if b.depth[x] < b.R and b.degree(x) < 3:
            return False  # past the tail root comes a letter vertex with hanging subtrees
        x = hanging[0]
        for k in range(1, self.depth + 1):
            if b.colors[x] != 1 or b.degree(x) != (2 if k < self.depth else 1):
                return False
            if k < self.depth:
                x = b.children[x][0]
        return True

    def _tail_root(self, b: _Ball, core: list[int], endlike: list[int]) -> bool:
        if b.colors[b.center] != 1 or len(endlike) != 1:
            return False
        w = core[0] if core[1] == endlike[0] else core[1]
        if b.degree(w) < 3:
            return False
        info = self._read_neighbor(b, w)
        if info is None:
            return False
        if info.last:
            return True
        lang = self.language
        return (info.m == 1 and lang.can_start(info.letter)) or self._may_end(info)

    def _may_end(self, info: _Letter) -> bool:
        return self.language.can_end(info.letter, info.m)

    def _letter_vertex(self, b: _Ball, hanging, core, endlike) -> bool:
        own = self._read_own(b, hanging)
        if own is None:
            return False
        options = []
        for y in core:
            opts = [_END] if y in endlike else []
            info = self._read_neighbor(b, y)
            if info is not None:
                opts.append(info)
            options.append(opts)
        return any(self._letter_rule(b, hanging, own, pair) for pair in itertools.product(*options))

    def _letter_rule(self, b, hanging, own: _Letter, pair) -> bool:
        lang = self.language
        m = own.m
        ends = [x for x in pair if x is _END]
        letters = [x for x in pair if x is not _END]
        if len(ends) == 2:
            return m == 1 and self._finish_single(b, hanging, own)
        if len(ends) == 1:
            y = letters[0]
            if y.m == (m + 1) % 3 and not own.last:
                # first backbone vertex
                nxt = self._resolve(y, own.letter)
                return m == 1 and nxt is not None and lang.prefix(own.letter, nxt)
            if y.m == (m - 1) % 3 and not y.last:
                return self._finish_last(b, hanging, own, y.letter)
            return False
        prev = [x for x in letters if x.m == (m - 1) % 3]
        nxt = [x for x in letters if x.m == (m + 1) % 3]
        if len(prev) != 1 or len(nxt) != 1 or prev[0].last or own.last:
            return False
        after = self._resolve(nxt[0], own.letter)
        return after is not None and lang.infix(prev[0].letter, own.letter, after)

    def _resolve(self, info: _Letter, before: int) -> int | None:
        if not info.last:
            return info.letter
        try:
            return self.language.last_after(before)
        except ValueError:
            return None

    def _finish_single(self, b, hanging, own: _Letter) -> bool:
        return self.language.single(own.letter)

    def _finish_last(self, b, hanging, own: _Letter, prev: int) -> bool:
        return self.language.suffix(prev, own.letter) and self.language.can_end(own.letter, own.m)


@dataclass(frozen=True)
class PaddedDiameterChecker(SpecialCaterpillarChecker):
    """Six-copy variant. The last backbone vertex has 3, 4 or 5 hanging
    subtrees mod 6, carries three equal marker stars plus 6t extra leaves,
    derives its letter from the previous one and accepts only when the target
    function of the total size equals the diameter fixed by the word."""

    target: object = None
    kind: ClassVar[str] = "PaddedDiameter"
    copies: ClassVar[int] = 6

    def __post_init__(self):
        super().__post_init__()
        if self.language.kind not in ("L1", "L2"):
            raise ValueError("padding needs L1 or L2")
        if self.target is None:
            raise ValueError("padding needs a target diameter function")

    def to_dict(self):
        out = super().to_dict()
        out["target"] = self.target.to_dict()
        return out

    def _split(self, count):
        res = count % 6
        return (res - 3, True) if res >= 3 else (res, False)

    def _may_end(self, info):
        return False  # the last vertex always reads as padded

    def _padding_ok(self, b: _Ball, hanging: list[int], letter: int) -> bool:
        codes = Counter(b.code[w] for w in hanging)
        split = split_padding(codes, self.encoding, letter, b.colors[b.center], len(hanging))
        if split is None:
            return False
        q, t = split
        if q and self.depth < 2:
            return False
        word = self.language.word(letter)
        if len(word) % 3 != len(hanging) % 6 - 3:
            return False
        total = padded_base_size(word, self.encoding, self.depth) + 3 * q + 6 * t
        try:
            return self.target(total) == padded_diameter(word, self.depth)
        except (ValueError, OverflowError, ZeroDivisionError):
            return False

    def _finish_single(self, b, hanging, own):
        return own.last and self.language.single(1) and self._padding_ok(b, hanging, 1)

    def _finish_last(self, b, hanging, own, prev):
        if not own.last:
            return False
        mine = self.language.last_after(prev)
        return self.language.suffix(prev, mine) and self._padding_ok(b, hanging, mine)


def make_special_checker(depth: int, language: LanguageSpec, encoding: EncodingSpec) -> SpecialCaterpillarChecker:
    """Checker at radius depth+1 accepting the encodings T[s] of the words of
    the language (caterpillar depth `depth`)."""
    return SpecialCaterpillarChecker(language, encoding, depth)


def make_padded_checker(depth: int, language: LanguageSpec, encoding: EncodingSpec, D) -> PaddedDiameterChecker:
    return PaddedDiameterChecker(language, encoding, depth, D)


# ---------------------------------------------------------------- custom

@dataclass(frozen=True)
class CustomChecker(Checker):
    """Host-code predicate over the canonical code of the node view."""

    predicate: Callable[[bytes], bool] = field(compare=False)
    d: int = 1
    c: int = 1
    name: str = "custom"
    kind: ClassVar[str] = "Custom"

    def node_verdict(self, g, v):
        return self.predicate(node_view_code(g, v, self.d))

    def view_verdict(self, view):
        return self.predicate(code_below(view.ball.adj, view.ball.colors, view.center))


def view_set_checker(trees: Iterable[ColoredGraph], d: int, c: int) -> CustomChecker:
    """Accept a vertex iff its radius-d view occurs somewhere in the given trees."""
    allowed = frozenset(node_view_code(t, v, d) for t in trees for v in range(t.n))
    return CustomChecker(allowed.__contains__, d, c, "view-set")


_REGISTRY: dict[str, Checker] = {}


def register_checker(name: str, checker: Checker) -> None:
    _REGISTRY[name] = checker


# ---------------------------------------------------------------- serialization

def checker_to_dict(checker: Checker) -> dict:
    return checker.to_dict()


def checker_from_dict(obj: dict) -> Checker:
    from .constructions import TargetDiameterFunction

    kind = obj.get("kind")
    if kind == "DegreeSet":
        degs = obj["degrees"]
        return DegreeSetChecker(None if degs == "all" else frozenset(int(x) for x in degs), int(obj.get("c", 1)))
    if kind == "Distance1Rules":
        return Distance1RulesChecker(tuple(Distance1Rule.from_dict(r) for r in obj["rules"]), int(obj["c"]))
    if kind == "Rake":
        return RakeChecker(int(obj["k"]))
    if kind == "DegreeMyopic":
        return DegreeMyopicChecker(MyopicParams.from_dict(obj["params"]))
    if kind in ("SpecialCaterpillar", "PaddedDiameter"):
        enc = obj["encoding"]
        encoding = EncodingSpec(enc["kind"], int(enc.get("d", 2)), int(enc.get("c", 1)))
        language = language_from_name(obj["language"])
        if kind == "SpecialCaterpillar":
            return SpecialCaterpillarChecker(language, encoding, int(obj["depth"]))
        return PaddedDiameterChecker(language, encoding, int(obj["depth"]), TargetDiameterFunction.from_dict(obj["target"]))
    if kind == "Custom":
        name = obj.get("name")
        if name in _REGISTRY:
            return _REGISTRY[name]
        raise ValueError(f"custom checker {name!r} is not registered")
    raise ValueError(f"unknown checker kind {kind!r}")


PRESETS = {
    "paths": lambda: make_degree_set_checker({1, 2}),
    "binary": lambda: make_degree_set_checker({1, 3}),
    "accept-all": lambda: make_degree_set_checker(None),
}


def preset(name: str) -> Checker:
    """Inline presets: paths, binary, accept-all, rake:k, myopic:<8 bounds>."""
    if name in PRESETS:
        return PRESETS[name]()
    head, _, arg = name.partition(":")
    if head == "rake" and arg:
        return make_rake_checker(int(arg))
    if head == "myopic" and arg:
        return make_myopic_checker(MyopicParams.parse(arg))
    if name in _REGISTRY:
        return _REGISTRY[name]
    raise ValueError(f"unknown checker preset {name!r}")
