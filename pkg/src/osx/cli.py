"""Command-line entry point: ``osx <command> ...``.

Exit codes: 0 success, 1 malformed input, 2 domain precondition violated,
3 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Any, Sequence

from osx import __version__
from osx import asym_completion as AC
from osx import completion_points as CP
from osx import fixtures as FX
from osx import fs_complex as FS
from osx import marked_graph as MG
from osx import metric as M
from osx import schema
from osx import words as W

MALFORMED, DOMAIN, INTERNAL = 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        raise CliError(MALFORMED, "usage", message)


# -- helpers ---------------------------------------------------------------------


def _log(f) -> float | None:
    if f == M.INFINITE:
        return None
    return float(f"{M.log_factor(f):.12g}")


def _factor_json(f) -> dict[str, Any]:
    return {"factor": M.format_factor(f), "log": _log(f)}


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(MALFORMED, "syntax", f"bad rational list {text!r}") from exc


def _ids(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _word(text: str, rank: int) -> W.Word:
    try:
        return W.parse_word(text, rank)
    except W.WordSyntaxError as exc:
        raise CliError(MALFORMED, "syntax", str(exc)) from exc


def _check_rank(x: MG.MarkedGraph, args) -> None:
    if args.rank is not None and x.rank != args.rank:
        raise CliError(DOMAIN, "RankMismatch", f"point has rank {x.rank}, --rank is {args.rank}")


def _load_point(path: str, args, interior: bool = False) -> MG.MarkedGraph:
    x = schema.load(path)
    _check_rank(x, args)
    rep = MG.validate(x) if interior else CP.validate_completion(x)
    if not rep.ok:
        first = rep.violations[0]
        raise CliError(DOMAIN, first.kind, f"{path}: " + "; ".join(f"{v.kind}: {v.detail}" for v in rep.violations))
    return x


def _edge_ids(x: MG.MarkedGraph, ids: Sequence[str]) -> list[str]:
    unknown = [e for e in ids if e not in x.graph.edge_index]
    if unknown:
        raise CliError(DOMAIN, "UnknownEdge", f"unknown edges {unknown}")
    return list(ids)


def _emit(args, payload: Any, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


# -- commands --------------------------------------------------------------------


def cmd_distance(args) -> None:
    x = _load_point(args.x, args, interior=True)
    y = _load_point(args.y, args, interior=True)
    fwd = M.distance(x, y)
    out = _factor_json(fwd.factor)
    out["witness"] = W.format_word(fwd.witness.word)
    human = f"factor {M.format_factor(fwd.factor)}  log {out['log']}  witness {out['witness']}"
    if args.sym:
        back = M.distance(y, x)
        total = fwd.factor * back.factor
        out = {
            **_factor_json(total),
            "forward": out,
            "backward": {**_factor_json(back.factor), "witness": W.format_word(back.witness.word)},
        }
        human = f"symmetric factor {M.format_factor(total)}  log {out['log']}"
    _emit(args, out, human)


def _ext_json(r: M.DistanceResult) -> dict[str, Any]:
    out = _factor_json(r.factor)
    out["witness"] = W.format_word(r.witness.word) if r.witness is not None else None
    out["witness_kind"] = getattr(r.witness, "kind", None)
    return out


def cmd_cdistance(args) -> None:
    S = _load_point(args.S, args)
    T = _load_point(args.T, args)
    out = _ext_json(CP.distance_ext(S, T))
    _emit(args, out, f"factor {out['factor']}  log {out['log']}  witness {out['witness']} ({out['witness_kind']})")


def cmd_length(args) -> None:
    x = _load_point(args.x, args)
    w = _word(args.word, x.rank)
    v = CP.translation_length_ext(x, w)
    _emit(args, {"length": schema.format_rational(v), "word": W.format_word(W.reduce(w))}, schema.format_rational(v))


def cmd_candidates(args) -> None:
    x = _load_point(args.x, args)
    view = CP.collapse_zero(x)
    rows = []
    for c in CP.candidates_ext(x, view):
        rows.append({"kind": c.kind, "word": W.format_word(c.word),
                     "length": schema.format_rational(CP.translation_length_ext(x, c.word))})
    _emit(args, {"candidates": rows}, "\n".join(f"{r['kind']:24s} {r['word']:16s} {r['length']}" for r in rows))


def _point_out(args, x: MG.MarkedGraph) -> None:
    if args.json:
        print(json.dumps(schema.to_dict(x), sort_keys=True))
    else:
        print(schema.dumps(x))


def cmd_collapse(args) -> None:
    x = _load_point(args.x, args, interior=True)
    ids = _edge_ids(x, _ids(args.edges))
    vol = sum((x.graph.edges[x.graph.edge_index[e]].length for e in ids), Fraction(0))
    if vol >= 1:
        raise CliError(DOMAIN, "ForestTooLong", "collapsed edges carry the whole volume")
    _point_out(args, MG.collapse_forest(x, ids))


def cmd_face(args) -> None:
    x = _load_point(args.x, args)
    _point_out(args, FS.face(x, _edge_ids(x, _ids(args.keep))))


def cmd_facedist(args) -> None:
    x = _load_point(args.x, args, interior=True)
    f = FS.face_distance(x, _edge_ids(x, _ids(args.subgraph)))
    out = _factor_json(f)
    _emit(args, out, f"factor {out['factor']}  log {out['log']}")


def cmd_axes(args) -> None:
    T = _load_point(args.T, args)
    texts = list(args.word or [])
    if args.words:
        try:
            texts += [ln.strip() for ln in FsPath(args.words).read_text().splitlines() if ln.strip()]
        except OSError as exc:
            raise CliError(MALFORMED, "io", str(exc)) from exc
    if not texts:
        raise CliError(MALFORMED, "usage", "no probe words given")
    vec = FS.axes_vector(T, [_word(t, T.rank) for t in texts])
    rows = [{"word": W.format_word(w), "length": schema.format_rational(v)} for w, v in zip(vec.words, vec.values)]
    _emit(args, {"axes": rows}, "\n".join(f"{r['word']:16s} {r['length']}" for r in rows))


def cmd_pinch(args) -> None:
    x = _load_point(args.x, args, interior=True)
    ids = _edge_ids(x, _ids(args.edges))
    pts = CP.pinch_sequence(x, ids, _rationals(args.schedule))
    if args.out_dir:
        d = FsPath(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        paths = []
        for k, p in enumerate(pts, 1):
            schema.dump(p, d / f"pinch_{k:03d}.json")
            paths.append(str(d / f"pinch_{k:03d}.json"))
        _emit(args, {"points": paths}, "\n".join(paths))
        return
    payload = [schema.to_dict(p) for p in pts]
    print(json.dumps(payload, sort_keys=True, indent=None if args.json else 2))


def cmd_approx(args) -> None:
    T = _load_point(args.T, args)
    eps = _rationals(args.eps)
    if len(eps) != 1 or not 0 < eps[0] < 1:
        raise CliError(DOMAIN, "BadEpsilon", "--eps must be one rational strictly between 0 and 1")
    _point_out(args, CP.approximate_from_interior(T, eps[0]))


def _load_list(path: str, args) -> list[MG.MarkedGraph]:
    try:
        items = json.loads(FsPath(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(MALFORMED, "io", f"cannot read point list {path}: {exc}") from exc
    if not isinstance(items, list) or not items:
        raise CliError(MALFORMED, "schema", f"{path} must hold a nonempty JSON list")
    out = []
    for it in items:
        if isinstance(it, str):
            out.append(_load_point(str(FsPath(path).parent / it), args))
        else:
            x = schema.from_dict(it)
            _check_rank(x, args)
            CP.require_valid(x)
            out.append(x)
    return out


def _cert_json(c: AC.Certificate) -> dict[str, Any]:
    def val(v):
        return None if v is None else ("INFINITE" if AC.is_inf(v) else float(f"{AC.display(v):.12g}"))

    return {
        "kind": c.kind,
        "verdict": c.verdict,
        "window": c.window,
        "records": [{"eps": str(r.eps), "N": r.N, "K": {str(k): v for k, v in r.K.items()}} for r in c.records],
        "witness": None if c.witness is None else [str(w) if isinstance(w, Fraction) else w for w in c.witness],
        "value": val(c.value),
        "notes": c.notes,
    }


def cmd_seq(args) -> None:
    space = AC.LipschitzSpace()
    a = AC.SequenceWindow(_load_list(args.points, args), space)
    eps = _rationals(args.schedule)
    if not eps or any(e <= 0 for e in eps):
        raise CliError(DOMAIN, "BadSchedule", "schedule values must be positive")
    if args.kind == "cauchy":
        cert = AC.check_forwards_cauchy(a, eps)
    elif args.kind == "admissible":
        cert = AC.check_admissible(a, eps)
    else:
        if not args.against:
            raise CliError(MALFORMED, "usage", "--kind equiv needs --against")
        b = AC.SequenceWindow(_load_list(args.against, args), space)
        cert = AC.equivalent(a, b, eps)
    out = _cert_json(cert)
    human = [f"{cert.kind}: {cert.verdict} on a window of {cert.window}"]
    human += [f"  eps {r.eps}: N = {r.N}" for r in cert.records]
    if cert.witness:
        human.append(f"  witness {out['witness']}")
    human += [f"  {n}" for n in cert.notes]
    _emit(args, out, "\n".join(human))


def cmd_strictness(args) -> None:
    sp = FS.strictness_family(args.i, args.m)
    P = [(1,), (2,)]
    ax, ay = FS.axes_vector(sp.x, P), FS.axes_vector(sp.y, P)
    fwd = CP.distance_ext(sp.y, sp.x).factor
    back = CP.distance_ext(sp.x, sp.y).factor
    out = {
        "i": sp.i,
        "m": sp.m,
        "p": str(sp.p),
        "q": str(sp.q),
        "x": schema.to_dict(sp.x),
        "y": schema.to_dict(sp.y),
        "axes_x": [str(v) for v in ax.values],
        "axes_y": [str(v) for v in ay.values],
        "axes_gap": str(ay.sup_gap(ax)),
        "factor_y_to_x": M.format_factor(fwd),
        "factor_x_to_y": M.format_factor(back),
    }
    human = (f"y_{sp.i}: petals e = a b^{sp.i} (length {sp.p}), e' = b (length {sp.q})\n"
             f"axes on (a, b): x {[str(v) for v in ax.values]}, y {[str(v) for v in ay.values]}, gap {out['axes_gap']}\n"
             f"factor y -> x {out['factor_y_to_x']}, x -> y {out['factor_x_to_y']}")
    _emit(args, out, human)


def cmd_verify(args) -> None:
    from osx import acceptance

    if args.suite == "all":
        nums = None
    else:
        try:
            nums = [int(t) for t in _ids(args.suite)]
        except ValueError as exc:
            raise CliError(MALFORMED, "usage", f"bad suite {args.suite!r}") from exc
        unknown = [n for n in nums if n not in acceptance.CHECKS]
        if unknown:
            raise CliError(MALFORMED, "usage", f"unknown checks {unknown}")
    results = acceptance.run(nums, seed=args.seed, threads=args.threads)
    passed = sum(r.passed for r in results)
    if args.json:
        print(json.dumps({
            "seed": args.seed,
            "passed": passed,
            "total": len(results),
            "checks": [{"number": r.number, "title": r.title, "passed": r.passed,
                        "summary": r.summary, "details": r.details} for r in results],
        }, sort_keys=True))
    else:
        for r in results:
            print(r.line())
            if args.verbose:
                for d in r.details:
                    print(f"      {d}")
        print(f"{passed}/{len(results)} checks passed")
    if args.strict and passed != len(results):
        raise CliError(INTERNAL, "CheckFailed", f"{len(results) - passed} checks failed")


def cmd_fixtures(args) -> None:
    import random

    d = FsPath(args.out) if args.out else FX.fixture_dir()
    written = FX.write_family(d)
    if args.random:
        rng = random.Random(args.seed)
        rank = args.rank or 2
        for k in range(args.random):
            p = d / f"random_r{rank}_{k:03d}.json"
            schema.dump(FX.random_point(rng, rank), p)
            written.append(p)
    # round trip
    for p in written:
        x = schema.load(p)
        if not CP.validate_completion(x).ok:
            raise CliError(INTERNAL, "RoundTrip", f"{p} does not re-validate")
    _emit(args, {"written": [str(p) for p in written]}, "\n".join(str(p) for p in written))


# -- parser ----------------------------------------------------------------------


def _globals(p: argparse.ArgumentParser, top: bool) -> None:
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--rank", type=int, default=d(None), help="expected rank of every input point")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomised commands")
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--threads", type=int, default=d(1), help="worker threads for library parallelism")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="osx", description="Lipschitz geometry of Outer Space and its simplicial completion.")
    p.add_argument("--version", action="version", version=f"osx {__version__}")
    _globals(p, True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        _globals(sp, False)
        sp.set_defaults(fn=fn)
        return sp

    sp = cmd("distance", cmd_distance, "Lipschitz distance between interior points")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("--sym", action="store_true", help="symmetrised distance")
    sp = cmd("cdistance", cmd_cdistance, "extended distance between completion points")
    sp.add_argument("S")
    sp.add_argument("T")
    sp = cmd("length", cmd_length, "translation length of a word")
    sp.add_argument("x")
    sp.add_argument("-w", "--word", required=True)
    sp = cmd("candidates", cmd_candidates, "candidate loops of a point")
    sp.add_argument("x")
    sp = cmd("collapse", cmd_collapse, "collapse a forest and renormalise")
    sp.add_argument("x")
    sp.add_argument("--edges", required=True)
    sp = cmd("face", cmd_face, "face point keeping the given edges")
    sp.add_argument("x")
    sp.add_argument("--keep", required=True)
    sp = cmd("facedist", cmd_facedist, "distance to the face spanned by a candidate image")
    sp.add_argument("x")
    sp.add_argument("--subgraph", required=True)
    sp = cmd("axes", cmd_axes, "translation lengths on probe words")
    sp.add_argument("T")
    sp.add_argument("--words", help="file with one word per line")
    sp.add_argument("-w", "--word", action="append", help="probe word (repeatable)")
    sp = cmd("pinch", cmd_pinch, "pinch a subgraph along a schedule")
    sp.add_argument("x")
    sp.add_argument("--edges", required=True)
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--out-dir")
    sp = cmd("approx", cmd_approx, "interior approximation of a completion point")
    sp.add_argument("T")
    sp.add_argument("--eps", required=True)
    sp = cmd("seq", cmd_seq, "finite-window sequence checks")
    sp.add_argument("action", choices=["check"])
    sp.add_argument("points", help="file holding a JSON list of point files or inline points")
    sp.add_argument("--kind", choices=["cauchy", "admissible", "equiv"], required=True)
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--against", help="second point list for --kind equiv")
    sp = cmd("strictness", cmd_strictness, "the axes-versus-Lipschitz example")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp = cmd("verify", cmd_verify, "run the acceptance checks")
    sp.add_argument("--suite", default="all", help="'all' or comma-separated check numbers")
    sp.add_argument("--strict", action="store_true", help="exit 3 when a check fails")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp = cmd("fixtures", cmd_fixtures, "write the fixture family")
    sp.add_argument("--out", help=f"directory (default ${FX.FIXTURE_ENV} or ./fixtures)")
    sp.add_argument("--random", type=int, default=0, help="also write this many random interior points")
    return p


_DOMAIN_ERRORS = (
    CP.InvalidPoint,
    CP.ScheduleNotDecreasing,
    MG.GraphError,
    FS.InvalidFace,
    FS.NotACandidateImage,
    M.IdentityWord,
    W.NotAnAutomorphism,
)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.rank is not None and args.rank < 2:
            raise CliError(DOMAIN, "RankTooSmall", "--rank must be at least 2")
        if args.threads < 1:
            raise CliError(MALFORMED, "usage", "--threads must be positive")
        args.fn(args)
        return 0
    except CliError as exc:
        return _fail(exc.code, exc.kind, str(exc), want_json)
    except schema.SchemaError as exc:
        return _fail(MALFORMED, "SchemaError", str(exc), want_json)
    except W.WordSyntaxError as exc:
        return _fail(MALFORMED, "WordSyntaxError", str(exc), want_json)
    except _DOMAIN_ERRORS as exc:
        return _fail(DOMAIN, type(exc).__name__, str(exc), want_json)
    except ValueError as exc:
        return _fail(DOMAIN, type(exc).__name__, str(exc), want_json)
    except Exception as exc:  # noqa: BLE001
        return _fail(INTERNAL, type(exc).__name__, str(exc) or repr(exc), want_json)


def _fail(code: int, kind: str, message: str, as_json: bool) -> int:
    if as_json:
        print(json.dumps({"error": kind, "message": message, "exit": code}, sort_keys=True), file=sys.stderr)
    else:
        print(f"osx: {kind}: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
