"""Command-line front end.

Exit codes: 0 accept / pass, 1 reject / fail, 2 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from .analysis import (
    DEFAULT_NMAX,
    LandscapeReport,
    LandscapeRow,
    count_height_trees,
    fit_regime,
    gap_probe,
    landscape,
)
from .checkers import (
    Checker,
    PaletteMismatch,
    accepts,
    checker_from_dict,
    make_padded_checker,
    make_special_checker,
    preset,
)
from .constructions import FAMILIES, TargetDiameterFunction, generate
from .core import (
    CapExceeded,
    ColoredTree,
    InvalidGraph,
    diameter,
    enumerate_trees,
    graph_from_json,
    read_trees,
    tree_to_json,
    write_trees,
)
from .languages import EncodingSpec, Word, encode, language_from_name
from .surgery import (
    SurgeryError,
    duplicate,
    find_equal_view_edge_pair,
    graft,
    middle_component,
    order_relation,
    pump,
)


class InputError(Exception):
    pass


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(text: str, path: str | None) -> None:
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _edge(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"edge must look like u,v: {text!r}") from exc
    return a, b


def _load_checker(args) -> Checker:
    spec = getattr(args, "checker", None)
    if spec:
        if os.path.exists(spec):
            with open(spec) as fh:
                return checker_from_dict(json.load(fh))
        return preset(spec)
    if getattr(args, "language", None):
        enc = EncodingSpec.parse(args.encoding or "star")
        lang = language_from_name(args.language)
        depth = args.depth if args.depth is not None else enc.d
        if getattr(args, "target", None):
            return make_padded_checker(depth, lang, enc, TargetDiameterFunction.parse(args.target))
        return make_special_checker(depth, lang, enc)
    raise InputError("give --checker (preset or JSON file) or --language/--encoding")


def _read_word(text: str) -> Word:
    try:
        return Word(int(x) for x in text.split())
    except ValueError as exc:
        raise InputError(f"words are space-separated letter indices: {text!r}") from exc


# ---------------------------------------------------------------- commands

def cmd_check(args) -> int:
    checker = _load_checker(args)
    trees = read_trees(args.tree)
    code = 0
    out = []
    for t in trees:
        v = accepts(checker, t)
        out.append(json.dumps({"accept": v.accept, "rejecting_vertex": v.rejecting_vertex}))
        if not v.accept:
            code = 1
    print("\n".join(out))
    return code


def _parse_params(text: str | None) -> dict[str, str]:
    out: dict[str, str] = {}
    for part in (text or "").split(","):
        if part.strip():
            if "=" not in part:
                raise InputError(f"params are key=value pairs: {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _range(text: str) -> tuple[str, list[int]]:
    """key=lo..hi or key=v1,v2,..."""
    key, _, span = text.partition("=")
    try:
        if ".." in span:
            lo, _, hi = span.partition("..")
            return key.strip(), list(range(int(lo), int(hi) + 1))
        return key.strip(), [int(x) for x in span.split(",")]
    except ValueError as exc:
        raise InputError(f"range must look like key=lo..hi or key=v1,v2,...: {text!r}") from exc


def cmd_generate(args) -> int:
    params: dict = _parse_params(args.params)
    if args.encoding:
        params["encoding"] = EncodingSpec.parse(args.encoding)
    if args.language:
        params["language"] = language_from_name(args.language)
    if args.D:
        params["D"] = TargetDiameterFunction.parse(args.D)
    if args.d is not None:
        params["d"] = args.d
    if args.family == "word":
        text = args.word
        if args.word_file:
            with open(args.word_file) as fh:
                text = fh.read()
        if not text:
            raise InputError("family word needs --word or --word-file")
        tree = encode(_read_word(text), params.get("encoding") or EncodingSpec("star"), params.get("d"))
        _emit(tree_to_json(tree) + "\n", args.out)
        return 0
    if not args.range:
        tree = generate(args.family, **params)
        _emit(tree_to_json(tree) + "\n", args.out)
        return 0
    key, values = _range(args.range)
    trees = [(x, generate(args.family, **{**params, key: x})) for x in values]
    if not args.out:
        raise InputError("batch generation needs --out DIR")
    os.makedirs(args.out, exist_ok=True)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    target = params.get("D")
    w.writerow([key, "n", "diameter"] + (["target"] if target is not None else []))
    for x, t in trees:
        write_trees(os.path.join(args.out, f"{args.family}_{key}{x}.json"), [t])
        w.writerow([x, t.n, diameter(t)] + ([target(t.n)] if target is not None else []))
    _atomic_write(args.csv or os.path.join(args.out, "summary.csv"), buf.getvalue())
    return 0


def cmd_landscape(args) -> int:
    checker = _load_checker(args)
    c = args.c or checker.c
    nmax = args.nmax or DEFAULT_NMAX.get(c, 8)
    report = landscape(checker, nmax, c)
    _emit(report.to_csv(), args.out)
    return 0


def cmd_gapprobe(args) -> int:
    checker = _load_checker(args)
    c = args.c or checker.c
    result = gap_probe(checker, args.nmax or DEFAULT_NMAX.get(c, 8), c)
    _emit(json.dumps(result.to_dict()) + "\n", args.out)
    return 0


def cmd_fit(args) -> int:
    if args.csv:
        with open(args.csv) as fh:
            report = LandscapeReport.from_csv(fh.read())
    elif args.family:
        key, values = _range(args.range or "")
        params = _parse_params(args.params)
        rows = []
        for x in values:
            t = generate(args.family, **{**params, key: x})
            dm = diameter(t)
            rows.append(LandscapeRow(t.n, 1, dm, dm))
        report = LandscapeReport(rows)
    else:
        checker = _load_checker(args)
        c = args.c or checker.c
        report = landscape(checker, args.nmax or DEFAULT_NMAX.get(c, 8), c)
    fit = fit_regime(report, args.which, args.candidate, args.factor)
    _emit(json.dumps(fit.to_dict()) + "\n", args.out)
    return 0 if fit.passed else 1


def _one_tree(path: str) -> ColoredTree:
    trees = read_trees(path)
    if len(trees) != 1:
        raise InputError(f"{path} must hold exactly one tree")
    return trees[0]


def cmd_surgery(args) -> int:
    op = args.op
    if op == "graft":
        t, t2 = _one_tree(args.tree), _one_tree(args.tree2 or args.tree)
        out = graft(t, _edge(args.uv), t2, _edge(args.u2v2))
        write_trees(args.out, [out])
        print(json.dumps({"n": out.n, "diameter": diameter(out)}))
        return 0
    if op == "pump":
        t = _one_tree(args.tree)
        if args.uv and args.xy:
            uv, xy = _edge(args.uv), _edge(args.xy)
        else:
            found = find_equal_view_edge_pair(t, args.d or 1)
            if found is None:
                raise InputError("no pair of edges with equal views; give --uv and --xy")
            uv, xy = found
        out = pump(t, uv, xy, args.i, args.d)
        c2 = len(middle_component(t, uv, xy))
        write_trees(args.out, [out])
        print(json.dumps({"n_in": t.n, "n_out": out.n, "c2": c2, "i": args.i, "uv": list(uv), "xy": list(xy),
                          "diameter": diameter(out)}))
        return 0
    if op == "duplicate":
        with open(args.tree) as fh:
            g = graph_from_json(fh.read())
        out = duplicate(g, _edge(args.uv))
        _atomic_write(args.out, json.dumps(out.to_json(), separators=(",", ":")) + "\n")
        print(json.dumps({"n": out.n}))
        return 0
    if op == "order":
        trees = read_trees(args.tree)
        rel = order_relation(trees)
        _emit(json.dumps(rel.to_dict()) + "\n", args.out)
        return 0
    raise InputError(f"unknown surgery {op!r}")  # pragma: no cover


def cmd_enumerate(args) -> int:
    checker = _load_checker(args) if (args.checker or args.language) else None
    c = args.c or (checker.c if checker else 1)
    trees = [t for t in enumerate_trees(args.n, c) if checker is None or accepts(checker, t).accept]
    if args.out:
        write_trees(args.out, trees)
    print(len(trees))
    return 0


def cmd_count_heights(args) -> int:
    print(count_height_trees(args.d, args.k, exact=not args.at_most))
    return 0


# ---------------------------------------------------------------- parser

def _checker_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--checker", help="preset (paths, binary, accept-all, rake:k, myopic:...) or JSON file")
    p.add_argument("--language", choices=["l1", "l2"])
    p.add_argument("--encoding", help="star, cstar:c or heightenum:d")
    p.add_argument("--depth", type=int, help="caterpillar depth (default: the encoding's d)")
    p.add_argument("--target", help="target diameter for the padded checker: sqrt, log, const:K, ...")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="treechk", description="Local checkers on colored trees.")
    parser.add_argument("--config", help="key=value or JSON file mirroring the flags (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("check", help="run a checker on a tree file")
    p.add_argument("tree")
    _checker_opts(p)
    p.set_defaults(func=cmd_check)
    subs["check"] = p

    p = sub.add_parser("generate", help="emit trees of a family")
    p.add_argument("--family", required=True, choices=list(FAMILIES) + ["word"])
    p.add_argument("--params", help="comma-separated key=value, e.g. k=2,l=3")
    p.add_argument("--range", help="batch over key=lo..hi or key=v1,v2,...")
    p.add_argument("--language", choices=["l1", "l2"])
    p.add_argument("--encoding")
    p.add_argument("--D", help="target diameter function for the exact family")
    p.add_argument("--d", type=int, help="caterpillar depth")
    p.add_argument("--word", help="space-separated letter indices")
    p.add_argument("--word-file")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_generate)
    subs["generate"] = p

    for name, func, helptext in (("landscape", cmd_landscape, "per-n min/max diameter CSV"),
                                 ("gapprobe", cmd_gapprobe, "equal-view pair search")):
        p = sub.add_parser(name, help=helptext)
        _checker_opts(p)
        p.add_argument("--nmax", type=int)
        p.add_argument("--c", type=int)
        p.add_argument("--out")
        p.set_defaults(func=func)
        subs[name] = p

    p = sub.add_parser("fit", help="test a Θ-regime against landscape rows")
    _checker_opts(p)
    p.add_argument("--csv", help="landscape CSV to fit")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--params")
    p.add_argument("--range")
    p.add_argument("--nmax", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--which", choices=["min", "max"], default="max")
    p.add_argument("--candidate", required=True)
    p.add_argument("--factor", type=float, default=4.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)
    subs["fit"] = p

    p = sub.add_parser("surgery", help="graft, pump, duplicate or order")
    p.add_argument("op", choices=["graft", "pump", "duplicate", "order"])
    p.add_argument("--tree", required=True)
    p.add_argument("--tree2")
    p.add_argument("--uv")
    p.add_argument("--u2v2")
    p.add_argument("--xy")
    p.add_argument("--i", type=int, default=2)
    p.add_argument("--d", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_surgery)
    subs["surgery"] = p

    p = sub.add_parser("enumerate", help="list tree classes on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int)
    _checker_opts(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)
    subs["enumerate"] = p

    p = sub.add_parser("count-heights", help="rooted trees on k vertices of height d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--at-most", action="store_true")
    p.set_defaults(func=cmd_count_heights)
    subs["count-heights"] = p
    return parser, subs


def _read_config(path: str) -> dict:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                k, _, v = line.partition("=")
                data[k.strip()] = v.strip()
    return {k.replace("-", "_"): v for k, v in data.items()}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.config:
            cfg = _read_config(args.config)
            sp = subs[args.command]
            types = {a.dest: a.type for a in sp._actions}
            sp.set_defaults(**{k: (types[k](v) if types.get(k) and isinstance(v, str) else v)
                               for k, v in cfg.items() if k in types})
            args = parser.parse_args(argv)
        if args.command in ("surgery",) and args.op in ("graft", "pump", "duplicate") and not args.out:
            raise InputError(f"surgery {args.op} needs --out")
        return args.func(args)
    except (InputError, InvalidGraph, SurgeryError, PaletteMismatch, CapExceeded, ValueError, KeyError,
            OSError, json.JSONDecodeError) as exc:
        print(f"treechk: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
