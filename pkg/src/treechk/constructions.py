"""Deterministic generators for the extremal tree families."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import ColoredTree, Nested, enumeration_cap, tree_from_nested
from .languages import (
    EncodingSpec,
    LanguageSpec,
    encode,
    encode_padded,
    padded_base_size,
    padded_diameter,
)


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for nonnegative integers."""
    if x < 2:
        return x
    r = int(round(x ** (1.0 / k)))
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@dataclass(frozen=True)
class TargetDiameterFunction:
    """Integer target D(n). kind is const, floorpow, ceilpow, floorlog or table."""

    kind: str
    k: int = 0
    alpha: Fraction = Fraction(1, 2)
    table: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("const", "floorpow", "ceilpow", "floorlog", "table"):
            raise ValueError(f"unknown target function {self.kind!r}")
        if self.kind in ("floorpow", "ceilpow") and not 0 < self.alpha <= 1:
            raise ValueError("exponent must lie in (0, 1]")

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError("D is defined for n >= 1")
        if self.kind == "const":
            return self.k
        if self.kind == "floorlog":
            return n.bit_length() - 1
        if self.kind == "table":
            if n > len(self.table):
                raise ValueError(f"table has no entry for n={n}")
            return self.table[n - 1]
        p, q = self.alpha.numerator, self.alpha.denominator
        x = n**p
        r = _iroot(x, q)
        if self.kind == "ceilpow" and r**q < x:
            r += 1
        return r

    def is_nondecreasing(self, lo: int = 1, hi: int = 1000) -> bool:
        vals = [self(n) for n in range(lo, hi + 1)]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "const":
            out["k"] = self.k
        elif self.kind in ("floorpow", "ceilpow"):
            out["alpha"] = str(self.alpha)
        elif self.kind == "table":
            out["table"] = list(self.table)
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "TargetDiameterFunction":
        return cls(
            obj["kind"],
            int(obj.get("k", 0)),
            Fraction(obj.get("alpha", "1/2")),
            tuple(int(x) for x in obj.get("table", ())),
        )

    @classmethod
    def parse(cls, text: str) -> "TargetDiameterFunction":
        """CLI form: sqrt, log, const:K, floorpow:p/q, ceilpow:p/q, table:v1,v2,..."""
        head, _, arg = text.partition(":")
        if head == "sqrt":
            return cls("ceilpow", alpha=Fraction(1, 2))
        if head == "log":
            return cls("floorlog")
        if head == "const":
            return cls("const", k=int(arg))
        if head in ("floorpow", "ceilpow"):
            return cls(head, alpha=Fraction(arg))
        if head == "table":
            return cls("table", table=tuple(int(x) for x in arg.split(",")))
        raise ValueError(f"unknown target function {text!r}")


# ---------------------------------------------------------------- basics

def gen_path(n: int) -> ColoredTree:
    if n < 1:
        raise ValueError("n must be >= 1")
    return ColoredTree((1,) * n, tuple((i, i + 1) for i in range(n - 1)), 1)


def gen_star(n: int) -> ColoredTree:
    if n < 1:
        raise ValueError("n must be >= 1")
    return ColoredTree((1,) * n, tuple((0, i) for i in range(1, n)), 1)


def gen_binary(h: int) -> ColoredTree:
    """Complete binary tree of height h (2^(h+1) - 1 vertices)."""
    n = 2 ** (h + 1) - 1
    return ColoredTree((1,) * n, tuple(((i - 1) // 2, i) for i in range(1, n)), 1)


def gen_basics(kind: str, n: int) -> ColoredTree:
    if kind == "path":
        return gen_path(n)
    if kind == "star":
        return gen_star(n)
    if kind == "binary":
        h = (n + 1).bit_length() - 2
        if n < 1 or 2 ** (h + 1) - 1 != n:
            raise ValueError(f"no complete binary tree has {n} vertices")
        return gen_binary(h)
    raise ValueError(f"unknown basic family {kind!r}")


class _Builder:
    def __init__(self):
        self.colors: list[int] = []
        self.edges: list[tuple[int, int]] = []

    def add(self, parent: int | None = None, color: int = 1) -> int:
        self.colors.append(color)
        v = len(self.colors) - 1
        if parent is not None:
            self.edges.append((parent, v))
        return v

    def tree(self, c: int = 1) -> ColoredTree:
        return ColoredTree(tuple(self.colors), tuple(self.edges), c)


# ---------------------------------------------------------------- degree-myopic families

def gen_increasing_caterpillar(i: int) -> ColoredTree:
    """Backbone of i vertices whose j-th vertex has total degree j. For i=1
    this is a single vertex."""
    if i < 1:
        raise ValueError("i must be >= 1")
    b = _Builder()
    if i == 1:
        b.add(None)
        return b.tree()
    spine = []
    for j in range(1, i + 1):
        spine.append(b.add(spine[-1] if spine else None))
    for j, v in enumerate(spine, start=1):
        have = (j > 1) + (j < i)
        for _ in range(max(0, j - have)):
            b.add(v)
    return b.tree()


def increasing_caterpillar_size(i: int) -> int:
    if i == 1:
        return 1
    return i * (i + 1) // 2 - i + 2


def gen_ary_pended(a: int, i: int) -> ColoredTree:
    """Complete a-ary tree of height i with pendant leaves making degrees grow
    by one per level: a vertex at height h >= 2 gets h-2 extra leaves (the
    root gets h-1, standing in for its missing parent) and vertices at
    height 1 keep a-1 leaf children, so that they have degree a."""
    if a < 2 or i < 1:
        raise ValueError("need a >= 2 and i >= 1")
    b = _Builder()

    def grow(parent: int | None, h: int) -> None:
        v = b.add(parent)
        top = parent is None
        if h == 0:
            return
        if h == 1:
            for _ in range(a if top else a - 1):
                b.add(v)
            return
        for _ in range(a):
            grow(v, h - 1)
        for _ in range(h - 1 if top else h - 2):
            b.add(v)

    grow(None, i)
    return b.tree()


def factorial_rooted(a: int, i: int) -> Nested:
    """Rooted T_i: a subdivided star with root degree a-1 at i = a-1, then a
    new root over i+1 copies of T_i."""
    if a < 2 or i < a - 1:
        raise ValueError("need a >= 2 and i >= a-1")
    leaf: Nested = (1, ())
    t: Nested = (1, ((1, (leaf,)),) * (a - 1))
    for k in range(a - 1, i):
        t = (1, (t,) * (k + 1))
    return t


def gen_factorial_tree(a: int, i: int) -> ColoredTree:
    """The rooted T_i with one pendant leaf at the root, which plays the part
    of the parent every other copy root has."""
    root_color, kids = factorial_rooted(a, i)
    return tree_from_nested((root_color, kids + ((1, ()),)), 1)


def gen_zigzag_caterpillar(degrees: Sequence[int]) -> ColoredTree:
    """Caterpillar whose backbone vertices have the given total degrees."""
    b = _Builder()
    spine = []
    for _ in degrees:
        spine.append(b.add(spine[-1] if spine else None))
    m = len(spine)
    for j, (v, deg) in enumerate(zip(spine, degrees)):
        have = (j > 0) + (j < m - 1)
        if deg < have:
            raise ValueError("degree below the backbone degree")
        for _ in range(deg - have):
            b.add(v)
    return b.tree()


# ---------------------------------------------------------------- rakes

def _rake(b: _Builder, parent: int | None, k: int, size: int, top: int, level: int) -> None:
    """Attach a level-`level` rake with `size` vertices whose top path has
    `top` vertices; colors follow the (i, j) scheme."""
    from .checkers import rake_color

    if k == 1:
        top = size
    spine = []
    for idx in range(top):
        prev = spine[-1] if spine else parent
        spine.append(b.add(prev, rake_color(level, idx % 3 + 1)))
    if k == 1:
        return
    rest = size - top
    share, extra = divmod(rest, top)
    for idx, v in enumerate(spine):
        sub = share + (idx < extra)
        _rake(b, v, k - 1, sub, _rake_top(k - 1, sub), level + 1)


def _rake_top(k: int, size: int) -> int:
    if k == 1:
        return size
    top = max(1, _iroot(size, k))
    # every top vertex needs a (k-1)-rake below it, which has at least k-1 vertices
    while top > 1 and size - top < top * (k - 1):
        top -= 1
    return top


def gen_k_rake(k: int, ell: int) -> ColoredTree:
    """k-rake on exactly ell^k vertices: top path of ell vertices, each with a
    (k-1)-rake of ell^(k-1) - 1 vertices hanging from it, recursively."""
    if k < 1 or ell < 1:
        raise ValueError("need k >= 1 and ell >= 1")
    size = ell**k
    if k > 1 and size - ell < ell * (k - 1):
        raise ValueError(f"a {k}-rake needs more than {size} vertices")
    b = _Builder()
    _rake(b, None, k, size, ell, 1)
    return b.tree(3 * k)


# ---------------------------------------------------------------- caterpillars

def gen_caterpillar_family(language: LanguageSpec, encoding: EncodingSpec, d: int | None, p: int) -> ColoredTree:
    return encode(language.word(p), encoding, d)


class NoPadding(ValueError):
    pass


def solve_padding(D: TargetDiameterFunction, base: int, delta: int, d: int, cap: int | None = None) -> int:
    """Smallest r >= 0 with D(base + r) == delta, r a multiple of 3 (d >= 2)
    or of 6 (d = 1)."""
    cap = enumeration_cap() if cap is None else cap
    step = 3 if d >= 2 else 6
    for r in range(0, cap + 1, step):
        val = D(base + r)
        if val == delta:
            return r
        if val > delta and D.kind != "table":
            break  # D is nondecreasing
    raise NoPadding(f"no padding r <= {cap} gives D(n) = {delta} from n = {base}")


def gen_exact_diameter_family(
    D: TargetDiameterFunction,
    language: LanguageSpec,
    encoding: EncodingSpec,
    d: int | None,
    p: int,
    cap: int | None = None,
) -> ColoredTree:
    """Padded caterpillar of the p-th word whose diameter equals D of its size."""
    d = encoding.d if d is None else d
    word = language.word(p)
    base = padded_base_size(word, encoding, d)
    delta = padded_diameter(word, d)
    r = solve_padding(D, base, delta, d, cap)
    if d >= 2:
        q, t = r // 3, 0
    else:
        q, t = 0, r // 6
    return encode_padded(word, encoding, d, q, t)


# ---------------------------------------------------------------- dispatcher

FAMILIES = ("path", "star", "binary", "increasing", "ary", "factorial", "rake", "l1", "l2", "exact", "logcase")


def generate(kind: str, **params) -> ColoredTree:
    """Dispatch on a family name; used by the command line."""
    from .languages import L1, L2

    if kind in ("path", "star", "binary"):
        return gen_basics(kind, int(params["n"]))
    if kind == "increasing":
        return gen_increasing_caterpillar(int(params["i"]))
    if kind == "ary":
        return gen_ary_pended(int(params.get("a", 3)), int(params["i"]))
    if kind == "factorial":
        return gen_factorial_tree(int(params.get("a", 3)), int(params["i"]))
    if kind == "rake":
        return gen_k_rake(int(params["k"]), int(params["l"]))
    enc = params.get("encoding") or EncodingSpec("star")
    d = params.get("d")
    d = None if d is None else int(d)
    if kind in ("l1", "l2"):
        return gen_caterpillar_family(L1 if kind == "l1" else L2, enc, d, int(params["p"]))
    if kind == "exact":
        lang = params.get("language") or L2
        return gen_exact_diameter_family(params["D"], lang, enc, d, int(params["p"]))
    if kind == "logcase":
        from .surgery import binary_logcase_witness, build_logcase_family

        return build_logcase_family(binary_logcase_witness(), int(params["i"]))
    raise ValueError(f"unknown family {kind!r}")
