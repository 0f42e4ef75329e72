"""Diameter landscapes, threshold functions, the gap probe, rooted-tree counts
and Θ-regime fitting."""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from . import _kernels
from .checkers import Checker, Distance1Checker, accepts
from .core import (
    CapExceeded,
    ColoredTree,
    RootedGenerator,
    diameter,
    enumerate_trees,
    enumeration_cap,
    free_code,
)
from .surgery import find_equal_view_edge_pair, pump

# largest n enumerated by default, per palette size
DEFAULT_NMAX = {1: 14, 2: 10, 3: 8}


@dataclass
class LandscapeRow:
    n: int
    accepted_count: int
    min_diameter: int | None
    max_diameter: int | None
    truncated: bool = False

    def as_tuple(self) -> tuple:
        return (self.n, self.accepted_count, self.min_diameter, self.max_diameter, self.truncated)


@dataclass
class LandscapeReport:
    rows: list[LandscapeRow] = field(default_factory=list)

    COLUMNS = ("n", "accepted_count", "min_diameter", "max_diameter", "truncated")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            w.writerow(["" if x is None else (str(x).lower() if isinstance(x, bool) else x) for x in r.as_tuple()])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "LandscapeReport":
        rows = []
        for rec in csv.DictReader(io.StringIO(text)):
            opt = lambda s: int(s) if s not in ("", None) else None  # noqa: E731
            rows.append(LandscapeRow(int(rec["n"]), int(rec["accepted_count"]), opt(rec["min_diameter"]),
                                     opt(rec["max_diameter"]), rec.get("truncated", "false") == "true"))
        return cls(rows)


def _shape_colorings(checker: Distance1Checker, shape: ColoredTree, c: int) -> Iterator[ColoredTree]:
    maxdeg = max(1, max(len(a) for a in shape.adj))
    table = _rule_table(checker, maxdeg)
    indptr, indices = shape.csr
    seen = set()
    for cols in _kernels.scan_colorings(indptr, indices, c, table, maxdeg):
        t = ColoredTree(tuple(int(x) for x in cols), shape.edges, c)
        code = free_code(t)
        if code not in seen:
            seen.add(code)
            yield t


_TABLES: dict = {}


def _rule_table(checker: Distance1Checker, maxdeg: int):
    key = (id(checker), maxdeg)
    if key not in _TABLES:
        _TABLES[key] = (checker, checker.rule_table(maxdeg))
    return _TABLES[key][1]


def _feasible_degrees(checker: Distance1Checker, c: int, maxdeg: int) -> frozenset[int]:
    """Degrees at which some own color and some neighbor colors pass the rule;
    shapes using any other degree have no accepted coloring."""
    out = set()
    for deg in range(maxdeg + 1):
        if any(checker.rule(own, combo)
               for combo in itertools.combinations_with_replacement(range(1, c + 1), deg)
               for own in range(1, c + 1)):
            out.add(deg)
    return frozenset(out)


def accepted_trees(checker: Checker, n: int, c: int | None = None, cap: int | None = None) -> Iterator[ColoredTree]:
    """Accepted isomorphism classes on n vertices. Distance-1 checkers scan
    the colorings of every uncolored shape whose degrees are all feasible,
    using the array kernel; other checkers filter the colored enumeration."""
    c = checker.c if c is None else c
    if isinstance(checker, Distance1Checker):
        degrees = _feasible_degrees(checker, c, n - 1)
        seen = set()
        for shape in enumerate_trees(n, 1, cap, rule=lambda own, nbrs: len(nbrs) in degrees):
            for t in _shape_colorings(checker, shape, c):
                code = free_code(t)
                if code not in seen:
                    seen.add(code)
                    yield t
        return
    for t in enumerate_trees(n, c, cap):
        if accepts(checker, t).accept:
            yield t


def landscape(
    checker: Checker | None,
    n_max: int,
    c: int | None = None,
    mode: str = "enumerate",
    trees: Iterable[ColoredTree] = (),
    cap: int | None = None,
) -> LandscapeReport:
    """Per-n accepted count and min/max diameter. mode "families" summarizes
    the supplied trees (those the checker accepts, when one is given)."""
    report = LandscapeReport()
    if mode == "families":
        by_n: dict[int, list[int]] = {}
        for t in trees:
            if checker is None or accepts(checker, t).accept:
                by_n.setdefault(t.n, []).append(diameter(t))
        for n in sorted(by_n):
            if n <= n_max:
                ds = by_n[n]
                report.rows.append(LandscapeRow(n, len(ds), min(ds), max(ds)))
        return report
    if mode != "enumerate":
        raise ValueError(f"unknown landscape mode {mode!r}")
    if checker is None:
        raise ValueError("enumerate mode needs a checker")
    for n in range(1, n_max + 1):
        ds: list[int] = []
        truncated = False
        try:
            for t in accepted_trees(checker, n, c, cap):
                ds.append(diameter(t))
        except CapExceeded:
            truncated = True
        if ds:
            report.rows.append(LandscapeRow(n, len(ds), min(ds), max(ds), truncated))
        elif truncated:
            report.rows.append(LandscapeRow(n, 0, None, None, True))
    return report


# ---------------------------------------------------------------- threshold functions

def _iterlog(x: float, times: int) -> float:
    for _ in range(times):
        if x <= 0:
            return -math.inf
        x = math.log2(x)
    return x


def _tower(k: int) -> float:
    x = 1.0
    for _ in range(k):
        x = 2.0**x
    return x


def g_floor(d: int) -> float:
    """Lower end of the domain on which x / log^(d-3) x is inverted."""
    if d < 4:
        raise ValueError("g_d is defined for d >= 4")
    return math.e * _tower(d - 3)


def g_d(y: float, d: int, rel_tol: float = 1e-12) -> float:
    """Inverse of x -> x / log^(d-3)(x), by bisection above g_floor(d)."""
    k = d - 3
    f = lambda x: x / _iterlog(x, k)  # noqa: E731
    lo = g_floor(d)
    if y < f(lo):
        raise ValueError(f"g_{d} is not defined below {f(lo):.4g}")
    hi = max(2 * lo, 2 * y)
    while f(hi) < y:
        hi *= 2
    for _ in range(400):
        mid = (lo + hi) / 2
        if f(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            break
    return (lo + hi) / 2


def threshold_S(c: int, d: int, n: float) -> float:
    """S_{c,d}(n); logs base 2."""
    if c < 1 or d < 1:
        raise ValueError("need c >= 1 and d >= 1")
    if d == 1:
        return c * c / 9
    if n < 2:
        raise ValueError("S is evaluated for n >= 2")
    if d == 2:
        return (c * n**c) ** (2 / (2 * c + 1))
    if d == 3:
        return 36 * n / math.log2(n) ** 2
    return 4 * n / g_d(math.log2(n), d)


def max_diameter_bound(c: int, d: int, n: float) -> float:
    return (4 * d * d + 4 * d + 1) * threshold_S(c, d, n)


# ---------------------------------------------------------------- gap probe

@dataclass
class LinearEvidence:
    tree: ColoredTree
    uv: tuple[int, int]
    xy: tuple[int, int]
    d: int

    def replay(self, reps: Sequence[int] = (2, 3, 4)) -> list[ColoredTree]:
        return [pump(self.tree, self.uv, self.xy, i, self.d) for i in reps]

    def to_dict(self) -> dict:
        return {"kind": "LinearEvidence", "d": self.d, "tree": self.tree.to_json(),
                "uv": list(self.uv), "xy": list(self.xy)}


@dataclass
class BoundedReport:
    c: int
    d: int
    rows: list[dict]

    def to_dict(self) -> dict:
        return {"kind": "BoundedReport", "c": self.c, "d": self.d, "rows": self.rows}


def gap_probe(checker: Checker, n_max: int, c: int | None = None, cap: int | None = None):
    """Look for an equal-view edge pair in an accepted tree (pumpable, hence
    linear maximum diameter); otherwise report the largest diameters seen
    against (4d^2+4d+1) S_{c,d}(n)."""
    c = checker.c if c is None else c
    d = checker.d
    rows = []
    for n in range(1, n_max + 1):
        best = None
        truncated = False
        try:
            for t in accepted_trees(checker, n, c, cap):
                found = find_equal_view_edge_pair(t, d)
                if found is not None:
                    return LinearEvidence(t, found[0], found[1], d)
                dm = diameter(t)
                best = dm if best is None or dm > best else best
        except CapExceeded:
            truncated = True
        if best is None and not truncated:
            continue
        try:
            bound = max_diameter_bound(c, d, n)
        except ValueError:
            bound = None
        rows.append({"n": n, "max_diameter": best, "bound": bound, "truncated": truncated})
    return BoundedReport(c, d, rows)


# ---------------------------------------------------------------- rooted trees by height

def count_height_trees(d: int, k: int, exact: bool = True, cap: int | None = None) -> int:
    """t(d,k): unlabeled rooted trees on k vertices of height exactly d (or at
    most d with exact=False)."""
    if d < 0 or k < 1:
        raise ValueError("need d >= 0 and k >= 1")
    cap = enumeration_cap() if cap is None else cap
    gen = RootedGenerator(1)
    heights = [d] if exact else range(0, d + 1)
    total = 0
    for h in heights:
        if k <= h:
            continue
        total += len(gen.exact(k, h))
        if total > cap:
            raise CapExceeded(f"more than {cap} rooted trees")
    return total


# ---------------------------------------------------------------- regime fitting

def _candidate(name: str) -> Callable[[float], float]:
    log2 = math.log2
    if name == "Constant":
        return lambda n: 1.0
    if name == "Log":
        return lambda n: log2(n)
    if name == "LogOverLogLog":
        return lambda n: log2(n) / log2(log2(n))
    if name == "Sqrt":
        return lambda n: math.sqrt(n)
    if name == "Linear":
        return lambda n: float(n)
    if name.startswith("Pow:"):
        alpha = Fraction(name[4:])
        return lambda n: n ** float(alpha)
    raise ValueError(f"unknown candidate {name!r}")


CANDIDATES = ("Constant", "Log", "LogOverLogLog", "Sqrt", "Linear", "Pow:p/q")


@dataclass
class RegimeFit:
    candidate: str
    which: str
    lo: float
    hi: float
    factor: float
    passed: bool

    def to_dict(self) -> dict:
        return {"candidate": self.candidate, "which": self.which, "window": [self.lo, self.hi],
                "factor": self.factor, "verdict": "pass" if self.passed else "fail"}


def fit_regime(report: LandscapeReport | Sequence[LandscapeRow], which: str, candidate: str, factor: float = 4.0) -> RegimeFit:
    """Pass iff diameter / candidate(n) stays in a window [w, W] with
    W / w <= factor over the upper half of the rows."""
    rows = report.rows if isinstance(report, LandscapeReport) else list(report)
    if which not in ("min", "max"):
        raise ValueError("which must be min or max")
    rows = [r for r in rows if r.accepted_count > 0]
    if len(rows) < 5:
        raise ValueError("fit needs at least 5 rows")
    f = _candidate(candidate)
    rows = sorted(rows, key=lambda r: r.n)
    upper = rows[len(rows) // 2:]
    ratios = []
    for r in upper:
        val = r.min_diameter if which == "min" else r.max_diameter
        ratios.append(val / f(r.n))
    lo, hi = min(ratios), max(ratios)
    ok = lo > 0 and math.isfinite(hi) and hi / lo <= factor
    return RegimeFit(candidate, which, lo, hi, factor, ok)
