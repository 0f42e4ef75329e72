"""Words over the alphabet a_1, a_2, ..., the languages L1 and L2, and the
encoding of words as special caterpillars."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Sequence

from .core import ColoredTree, Nested, RootedGenerator, are_isomorphic, nested_code

LEAF = b"(1)"


class Word(tuple):
    """A word as a tuple of positive letter indices (a_i is stored as i)."""

    def __new__(cls, letters: Iterable[int] = ()):
        letters = tuple(int(x) for x in letters)
        if any(x < 1 for x in letters):
            raise ValueError("letter indices must be >= 1")
        return super().__new__(cls, letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        return cls(int(tok) for tok in text.split())

    def __str__(self) -> str:
        return " ".join(map(str, self))

    def __repr__(self) -> str:
        return "Word(" + "".join(f"a{x}" for x in self) + ")"


# ---------------------------------------------------------------- L1 and L2

def l1_word(p: int) -> Word:
    if p < 1:
        raise ValueError("p must be >= 1")
    return Word(range(1, p + 1))


def l1_member(w: Sequence[int]) -> bool:
    return len(w) >= 1 and tuple(w) == tuple(range(1, len(w) + 1))


def _l2_infix_ok(x: int, y: int, z: int) -> bool:
    return (
        (x == z - 1 and z < y)            # a_{k-1} a_l a_k, k < l
        or (x == z and 1 < y < x)         # a_l a_k a_l, 1 < k < l
        or (y == 1 and x == z - 1 and z > 1)   # a_{l-1} a_1 a_l
        or (z == 1 and x == y - 1 and y > 1)   # a_{k-1} a_k a_1
    )


def l2_member(w: Sequence[int]) -> bool:
    """Literal test: prefix a1a2, suffix a_{p-1}a_p for the largest letter p,
    and every length-3 infix in one of the four allowed shapes."""
    w = tuple(w)
    if len(w) < 2 or w[:2] != (1, 2):
        return False
    p = max(w)
    if w[-2:] != (p - 1, p):
        return False
    return all(_l2_infix_ok(*w[i:i + 3]) for i in range(len(w) - 2))


def l2_word(p: int) -> Word:
    if p < 2:
        raise ValueError("p must be >= 2")
    out = [1, 2]
    for ell in range(3, p + 1):
        for j in range(1, ell):
            out += [j, ell]
    w = Word(out)
    if not l2_member(w):  # pragma: no cover - generator self-check
        raise AssertionError(f"l2_word({p}) failed the membership test")
    return w


@dataclass(frozen=True)
class LanguageSpec:
    """A 2-testable language given by its local predicates.

    Membership of a word of length >= 2 is prefix(w1,w2) and suffix(w_{p-1},w_p)
    and infix(x,y,z) on every window; length-1 words use single().
    """

    kind: str
    single: Callable[[int], bool] = field(repr=False, compare=False)
    prefix: Callable[[int, int], bool] = field(repr=False, compare=False)
    suffix: Callable[[int, int], bool] = field(repr=False, compare=False)
    infix: Callable[[int, int, int], bool] = field(repr=False, compare=False)
    r: int = 2
    literal: Callable[[Sequence[int]], bool] | None = field(default=None, repr=False, compare=False)

    def member(self, w: Sequence[int]) -> bool:
        if self.literal is not None:
            return self.literal(w)
        return self.local_member(w)

    def local_member(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        if not w:
            return False
        if len(w) == 1:
            return self.single(w[0])
        return (
            self.prefix(w[0], w[1])
            and self.suffix(w[-2], w[-1])
            and all(self.infix(*w[i:i + 3]) for i in range(len(w) - 2))
        )

    def word(self, p: int) -> Word:
        if self.kind == "L1":
            return l1_word(p)
        if self.kind == "L2":
            return l2_word(p)
        raise ValueError("custom languages have no canonical word family")

    def last_after(self, prev: int) -> int:
        """Last letter forced by the previous one (L1 and L2 only)."""
        if self.kind in ("L1", "L2"):
            return prev + 1
        raise ValueError("only L1 and L2 fix the last letter")

    def can_start(self, x: int) -> bool:
        if self.kind in ("L1", "L2"):
            return x == 1
        return True

    def can_end(self, x: int, residue: int) -> bool:
        """Whether x may be the last letter at a backbone position congruent to
        residue mod 3. L1 and L2 words are fixed by their last letter."""
        if self.kind == "L1":
            return x >= 1 and x % 3 == residue
        if self.kind == "L2":
            return x >= 2 and (x * (x - 1)) % 3 == residue
        return True

    def to_dict(self) -> dict:
        if self.kind not in ("L1", "L2"):
            raise ValueError("custom languages are not serializable")
        return {"kind": self.kind}


L1 = LanguageSpec(
    "L1",
    single=lambda a: a == 1,
    prefix=lambda a, b: (a, b) == (1, 2),
    suffix=lambda a, b: b == a + 1,
    infix=lambda a, b, c: b == a + 1 and c == b + 1,
    literal=l1_member,
)

L2 = LanguageSpec(
    "L2",
    single=lambda a: False,
    prefix=lambda a, b: (a, b) == (1, 2),
    suffix=lambda a, b: b == a + 1,
    infix=_l2_infix_ok,
    literal=l2_member,
)


def custom_language(single, prefix, suffix, infix) -> LanguageSpec:
    return LanguageSpec("CustomTestable", single, prefix, suffix, infix)


def language_from_name(name: str) -> LanguageSpec:
    table = {"l1": L1, "l2": L2}
    try:
        return table[name.lower()]
    except KeyError:
        raise ValueError(f"unknown language {name!r}") from None


# ---------------------------------------------------------------- subdivision

def is_k_subdivision(w2: Sequence[int], w: Sequence[int], k: int) -> bool:
    """True iff w2 is a subword of a_1^k...a_n^k (for w = a_1...a_n) that contains w."""
    w2, w = tuple(w2), tuple(w)
    if k < 1:
        raise ValueError("k must be >= 1")
    return _is_subword(w, w2) and _is_subword(w2, tuple(x for x in w for _ in range(k)))


def _is_subword(small: tuple, big: tuple) -> bool:
    it = iter(big)
    return all(any(x == y for y in it) for x in small)


def k_subdivide(w: Sequence[int], k: int, rng: random.Random | None = None) -> Word:
    """A random k-subdivision of w: every letter repeated between 1 and k times."""
    rng = rng or random.Random(0)
    return Word(x for x in w for _ in range(rng.randint(1, k)))


# ---------------------------------------------------------------- encodings

def _nonincreasing_count(m: int, top: int) -> int:
    """Number of nonincreasing m-tuples with entries in [0, top]."""
    return comb(top + m, m)


def _tuple_rank(t: tuple[int, ...]) -> int:
    if not t:
        return 0
    rank = sum(_nonincreasing_count(len(t) - 1, a) for a in range(t[0]))
    return rank + _tuple_rank(t[1:])


def _tuple_unrank(rank: int, m: int, top: float = float("inf")) -> tuple[int, ...]:
    if m == 0:
        return ()
    first = 0
    while rank >= _nonincreasing_count(m - 1, first):
        rank -= _nonincreasing_count(m - 1, first)
        first += 1
    if first > top:
        raise ValueError("rank out of range")
    return (first,) + _tuple_unrank(rank, m - 1, first)


@dataclass(frozen=True)
class EncodingSpec:
    """Letter-to-rooted-tree bijection f.

    kind is "star" (f(a_i) = star with i leaves), "cstar" (c-colored stars
    indexed by nonincreasing c-tuples) or "heightenum" (all rooted trees of
    height at most d-1 ordered by size then code).
    """

    kind: str
    d: int = 2
    c: int = 1

    def __post_init__(self):
        if self.kind not in ("star", "cstar", "heightenum"):
            raise ValueError(f"unknown encoding {self.kind!r}")
        if self.kind == "heightenum" and self.d < 2:
            raise ValueError("heightenum needs d >= 2")
        if self.c < 1:
            raise ValueError("palette must be >= 1")

    @property
    def depth(self) -> int:
        """Largest depth of a letter tree, i.e. the smallest usable caterpillar
        depth. The default caterpillar depth is d."""
        return self.d - 1 if self.kind == "heightenum" else 1

    @property
    def palette(self) -> int:
        return 1 if self.kind == "star" else self.c

    def letter_tree(self, i: int) -> Nested:
        if i < 1:
            raise ValueError("letter index must be >= 1")
        if self.kind == "star":
            return (1, ((1, ()),) * i)
        if self.kind == "cstar":
            counts = _tuple_unrank(i - 1, self.c)
            return (1, tuple((j + 1, ()) for j in range(self.c) for _ in range(counts[j])))
        return _height_enum_letter(self.d - 1, self.c, i)

    def letter_code(self, i: int) -> bytes:
        return nested_code(self.letter_tree(i))

    def letter_index(self, code: bytes) -> int | None:
        """Inverse of letter_code; None when the code is not a letter."""
        if self.kind == "heightenum":
            return _height_enum_index(self.d - 1, self.c, code)
        if not code.startswith(b"(1") or not code.endswith(b")"):
            return None
        body = code[2:-1]
        counts = [0] * self.palette
        pos = 0
        while pos < len(body):
            end = body.find(b")", pos)
            if body[pos:pos + 1] != b"(" or end < 0:
                return None
            try:
                col = int(body[pos + 1:end])
            except ValueError:
                return None
            if not 1 <= col <= self.palette:
                return None
            counts[col - 1] += 1
            pos = end + 1
        if self.kind == "star":
            return counts[0] if counts[0] >= 1 else None
        if any(counts[j] < counts[j + 1] for j in range(self.c - 1)):
            return None
        return _tuple_rank(tuple(counts)) + 1

    def to_dict(self) -> dict:
        return {"kind": self.kind, "d": self.d, "c": self.c}

    @classmethod
    def parse(cls, text: str) -> "EncodingSpec":
        """Parse the CLI form: star, cstar:c or heightenum:d[:c]."""
        head, *rest = text.split(":")
        if head == "star":
            return cls("star")
        if head == "cstar":
            return cls("cstar", 2, int(rest[0]) if rest else 2)
        if head == "heightenum":
            d = int(rest[0]) if rest else 3
            return cls("heightenum", d, int(rest[1]) if len(rest) > 1 else 1)
        raise ValueError(f"unknown encoding {text!r}")


@lru_cache(maxsize=None)
def _height_enum_level(height: int, c: int, size: int) -> tuple[bytes, ...]:
    gen = _height_generator(c)
    codes = []
    for h in range(0, min(height, size - 1) + 1):
        codes.extend(nested_code(t) for t in gen.exact(size, h))
    return tuple(sorted(codes))


@lru_cache(maxsize=None)
def _height_generator(c: int) -> RootedGenerator:
    return RootedGenerator(c)


def _height_enum_letter(height: int, c: int, i: int) -> Nested:
    size = 1
    while True:
        level = _height_enum_level(height, c, size)
        if i <= len(level):
            return _parse_code(level[i - 1])
        i -= len(level)
        size += 1
        if size > 64:
            raise ValueError("letter index too large")


def _height_enum_index(height: int, c: int, code: bytes) -> int | None:
    size = code.count(b"(")
    level = _height_enum_level(height, c, size)
    index = {x: k for k, x in enumerate(level)}
    if code not in index:
        return None
    return sum(len(_height_enum_level(height, c, s)) for s in range(1, size)) + index[code] + 1


def _parse_code(code: bytes) -> Nested:
    """Nested form from a canonical code."""
    pos = 0

    def rec():
        nonlocal pos
        assert code[pos:pos + 1] == b"("
        pos += 1
        start = pos
        while code[pos:pos + 1].isdigit():
            pos += 1
        color = int(code[start:pos])
        kids = []
        while code[pos:pos + 1] == b"(":
            kids.append(rec())
        pos += 1
        return (color, tuple(kids))

    return rec()


def encoding_letter_tree(enc: EncodingSpec, i: int):
    from .core import RootedTree, tree_from_nested

    return RootedTree(tree_from_nested(enc.letter_tree(i), enc.palette), 0)


# ---------------------------------------------------------------- caterpillar encoding

class NotSpecialCaterpillar(ValueError):
    pass


@dataclass
class _Builder:
    colors: list[int] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)

    def add(self, color: int, parent: int | None = None) -> int:
        self.colors.append(color)
        me = len(self.colors) - 1
        if parent is not None:
            self.edges.append((parent, me))
        return me

    def hang(self, node: Nested, parent: int) -> None:
        me = self.add(node[0], parent)
        for ch in node[1]:
            self.hang(ch, me)


def caterpillar(
    letters: Sequence[Nested],
    d: int,
    copies: int = 3,
    last_extra: Sequence[Nested] = (),
    c: int = 1,
) -> ColoredTree:
    """Backbone of letter trees with `copies` identified copies each, (j mod 3)
    pending leaves on the j-th backbone vertex and end tails of d+1 edges.
    `last_extra` are additional subtrees hung on the last backbone vertex."""
    if not letters:
        raise ValueError("empty word")
    b = _Builder()
    backbone = []
    prev = _tail(b, d)
    for j, letter in enumerate(letters, start=1):
        v = b.add(letter[0], prev)
        backbone.append(v)
        for _ in range(copies):
            for ch in letter[1]:
                b.hang(ch, v)
        for _ in range(j % 3):
            b.add(1, v)
        prev = v
    for node in last_extra:
        b.hang(node, backbone[-1])
    r_right = b.add(1, prev)
    x = r_right
    for _ in range(d + 1):
        x = b.add(1, x)
    return ColoredTree(tuple(b.colors), tuple(b.edges), max(c, max(b.colors)))


def _tail(b: _Builder, d: int) -> int:
    """Left end: bare path of d+1 edges ending at the vertex r; returns r."""
    x = b.add(1)
    for _ in range(d):
        x = b.add(1, x)
    return b.add(1, x)


def _check_depth(enc: EncodingSpec, d: int | None) -> int:
    if d is None:
        d = enc.d
    if d < enc.depth:
        raise ValueError(f"caterpillar depth {d} is below the letter depth {enc.depth}")
    return d


def encode(s: Sequence[int], enc: EncodingSpec, d: int | None = None) -> ColoredTree:
    """The tree T[s]."""
    d = _check_depth(enc, d)
    return caterpillar([enc.letter_tree(x) for x in s], d, 3, (), enc.palette)


def star_nested(q: int) -> Nested:
    return (1, ((1, ()),) * q)


def padded_parts(q: int, t: int) -> list[Nested]:
    """Marker stars plus extra pending leaves on the last backbone vertex."""
    return [star_nested(q)] * 3 + [(1, ())] * (6 * t)


def encode_padded(s: Sequence[int], enc: EncodingSpec, d: int | None = None, q: int = 0, t: int = 0) -> ColoredTree:
    """Six-copy encoding whose last backbone vertex carries three stars with q
    leaves each and 6t extra leaves."""
    d = _check_depth(enc, d)
    if q and d < 2:
        raise ValueError("marker stars with leaves need caterpillar depth >= 2")
    return caterpillar([enc.letter_tree(x) for x in s], d, 6, padded_parts(q, t), enc.palette)


def padded_base_size(s: Sequence[int], enc: EncodingSpec, d: int) -> int:
    """Vertex count of encode_padded(s, enc, d, 0, 0)."""
    total = 2 * (d + 2) + 3
    for j, x in enumerate(s, start=1):
        total += 1 + 6 * (_nested_size_cached(enc, x) - 1) + j % 3
    return total


def padded_diameter(s: Sequence[int], d: int) -> int:
    return len(s) + 2 * d + 3


def _nested_size_cached(enc: EncodingSpec, x: int) -> int:
    return enc.letter_code(x).count(b"(")


def _peel(t: ColoredTree, rounds: int) -> set[int]:
    alive = set(range(t.n))
    deg = [len(a) for a in t.adj]
    for _ in range(rounds):
        drop = [v for v in alive if deg[v] <= 1]
        for v in drop:
            alive.discard(v)
        for v in drop:
            for w in t.adj[v]:
                if w in alive:
                    deg[w] -= 1
    return alive


def _hanging_codes(t: ColoredTree, v: int, core: set[int]) -> list[bytes]:
    from .core import code_below

    return [code_below(t.adj, t.colors, w, v) for w in t.adj[v] if w not in core]


def decode(
    t: ColoredTree,
    enc: EncodingSpec,
    d: int | None = None,
    padded: bool = False,
    language: LanguageSpec | None = None,
) -> Word:
    """Recover s from T[s] (or from its padded variant, which needs the language
    to fix the last letter)."""
    d = _check_depth(enc, d)
    copies = 6 if padded else 3
    core = _peel(t, d)
    if len(core) < 5:
        raise NotSpecialCaterpillar("not a special d-caterpillar: core too short")
    ends = [v for v in core if sum(w in core for w in t.adj[v]) == 1]
    if any(sum(w in core for w in t.adj[v]) > 2 for v in core) or len(ends) != 2:
        raise NotSpecialCaterpillar("not a special d-caterpillar: core is not a path")
    path = [min(ends)]
    while len(path) < len(core):
        path.append(next(w for w in t.adj[path[-1]] if w in core and (len(path) < 2 or w != path[-2])))
    inner = path[2:-2]
    if not inner:
        raise NotSpecialCaterpillar("not a special d-caterpillar: empty backbone")
    counts = [len(_hanging_codes(t, v, core)) for v in inner]
    if counts[0] % copies % 3 != 1:
        inner.reverse()
        counts.reverse()
    word = []
    for j, v in enumerate(inner, start=1):
        hanging = _hanging_codes(t, v, core)
        codes = Counter(hanging)
        res = len(hanging) % copies
        last = padded and j == len(inner)
        if res % 3 != j % 3 or (padded and (res >= 3) != last):
            raise NotSpecialCaterpillar("pending-leaf pattern broken")
        codes[LEAF] -= j % 3
        if codes[LEAF] < 0:
            raise NotSpecialCaterpillar("missing pending leaves")
        if last:
            if language is None:
                raise ValueError("decoding a padded tree needs the language")
            x = language.last_after(word[-1]) if word else 1
            word.append(x)
            continue
        if any(k % copies for k in codes.values()):
            raise NotSpecialCaterpillar("letter copies do not partition")
        kids = sorted(code for code, k in codes.items() for _ in range(k // copies))
        x = enc.letter_index(b"(" + str(t.colors[v]).encode() + b"".join(kids) + b")")
        if x is None:
            raise NotSpecialCaterpillar("backbone vertex carries no letter")
        word.append(x)
    w = Word(word)
    if padded:
        q, extra = _padding_of(t, inner[-1], core, enc, w[-1])
        rebuilt = encode_padded(w, enc, d, q, extra)
    else:
        rebuilt = encode(w, enc, d)
    if not are_isomorphic(rebuilt, t):
        raise NotSpecialCaterpillar("tree differs from the encoding of the recovered word")
    return w


def _padding_of(t, v, core, enc, letter) -> tuple[int, int]:
    codes = Counter(_hanging_codes(t, v, core))
    split = split_padding(codes, enc, letter, t.colors[v], len(_hanging_codes(t, v, core)))
    if split is None:
        raise NotSpecialCaterpillar("last backbone vertex is not padded correctly")
    return split


def split_padding(codes: Counter, enc: EncodingSpec, letter: int, color: int, total: int) -> tuple[int, int] | None:
    """Given the hanging subtree codes of the last padded vertex, return (q, t)
    for three q-leaf stars and 6t extra leaves, or None."""
    res = total % 6
    if res < 3:
        return None
    m = res - 3
    rest = Counter(codes)
    rest[LEAF] -= m
    tree = enc.letter_tree(letter)
    if tree[0] != color:
        return None
    for ch in tree[1]:
        rest[nested_code(ch)] -= 6
    if any(k < 0 for k in rest.values()):
        return None
    rest = +rest
    others = {code: k for code, k in rest.items() if code != LEAF}
    leaves = rest.get(LEAF, 0)
    if not others:
        if leaves % 6 != 3:
            return None
        return 0, (leaves - 3) // 6
    if len(others) != 1 or leaves % 6:
        return None
    (code, k), = others.items()
    if k != 3:
        return None
    q = code.count(b"(") - 1
    if code != nested_code(star_nested(q)):
        return None
    return q, leaves // 6
