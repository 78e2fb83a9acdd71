"""Command-line entry point: ``adictk <subcommand> [options]``.

Exit status is 0 on success, 2 on a usage error and 1 on a runtime error.
Undetermined points are reported as data, never as errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .adic_graph import GradedGraph, pascal_graph, verify_induced_over_odometer
from .dyadic_core import UNDETERMINED, DigitWord, MeasureSpec, dyadic_words, format_fraction, odometer_step
from .hk_tower import TowerPoint, first_return_to_base, hk_orbit, tower_report
from .limit_stats import NormalizationLadder, monte_carlo_cdf, takagi, truncated_jump_expectation
from .pascal import jump_from_stats, parse_pattern, pascal_inverse, pascal_step
from .randwalk import WalkSpec, parse_group, simulate_trajectory, spectral_radius_estimate

SEED_ENV = "ADICTK_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}")


def _write(args, rows: list[dict] | None = None, doc=None, columns: list[str] | None = None) -> None:
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(doc if doc is not None else rows, sort_keys=True, indent=2) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _word(text: str) -> DigitWord:
    try:
        return DigitWord.from_string(text)
    except ValueError as exc:
        raise UsageError(f"bad word {text!r}: {exc}")


def _pascal_record(step: int, w: DigitWord) -> dict:
    stats = parse_pattern(w)
    if stats is None:
        return {"step": step, "word": str(w), "status": "undetermined"}
    return {"step": step, "word": str(w), "m": stats.m, "k": stats.k,
            "jump": jump_from_stats(stats), "status": "ok"}


def cmd_orbit(args) -> None:
    w = _word(args.word)
    rows = []
    if args.map == "hk":
        orbit = hk_orbit(TowerPoint(w, args.level), args.steps)
        rows = [{"step": i, "word": str(p.base), "level": p.level, "status": "ok"}
                for i, p in enumerate(orbit.points)]
        if orbit.undetermined:
            rows.append({"step": len(orbit.points), "status": "undetermined"})
        columns = ["step", "word", "level", "status"]
    else:
        step_fn = {
            "pascal": lambda x: pascal_step(x)[0],
            "pascal-inverse": pascal_inverse,
            "odometer": odometer_step,
        }[args.map]
        cur = w
        for i in range(args.steps + 1):
            rows.append(_pascal_record(i, cur) if args.map == "pascal" else
                        {"step": i, "word": str(cur), "status": "ok"})
            if i == args.steps:
                break
            nxt = step_fn(cur)
            if nxt is UNDETERMINED:
                rows.append({"step": i + 1, "status": "undetermined"})
                break
            cur = nxt
        columns = ["step", "word", "m", "k", "jump", "status"]
    _write(args, rows, {"map": args.map, "records": rows}, columns)


def cmd_jump(args) -> None:
    words = [_word(t) for t in args.word or []]
    if args.length is not None:
        words += list(dyadic_words(args.length))
    if not words:
        raise UsageError("jump: give --word or --length")
    rows = []
    for w in words:
        rec = _pascal_record(0, w)
        rec.pop("step")
        rows.append(rec)
    _write(args, rows, {"records": rows}, ["word", "m", "k", "jump", "status"])


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for c in text:
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        if c == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(c)
    parts.append("".join(cur))
    return parts


def cmd_rank_stats(args) -> None:
    ladder = [int(t) for t in args.n_ladder.split(",") if t.strip()]
    spec = MeasureSpec.haar() if args.measure is None else MeasureSpec.bernoulli(Fraction(args.measure))
    norm = None
    if args.norm:
        parts = _split_top_level(args.norm)
        if len(parts) != 2:
            raise UsageError("--norm takes two expressions 'a_n,b_n'")
        norm = NormalizationLadder.from_expressions(parts[0], parts[1])
    result = monte_carlo_cdf(spec, ladder, args.samples, norm, seed=args.seed)
    summary = result.summary()
    rows = []
    for n in ladder:
        sample = result.samples[n]
        for i, (rec, val) in enumerate(zip(sample.records, sample.normalized)):
            row = {"n": n, "sample_index": i, "m": rec.m, "t": rec.t,
                   "u": format_fraction(rec.u), "normalized": format_fraction(val)}
            if args.takagi_terms:
                tv, err = takagi(rec.u, args.takagi_terms)
                row["takagi_u"] = repr(float(tv))
                row["takagi_error_bound"] = repr(float(err))
            rows.append(row)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    columns = ["n", "sample_index", "m", "t", "u", "normalized"]
    if args.takagi_terms:
        columns += ["takagi_u", "takagi_error_bound"]
    _write(args, rows, summary, columns)


def cmd_hk(args) -> None:
    doc = {"window": args.window}
    rows = []
    if args.base_word:
        base = _word(args.base_word)
        orbit = hk_orbit(TowerPoint(base, args.level), args.steps)
        doc["orbit"] = orbit.to_dict()
        rows = [{"step": i, "base": str(p.base), "level": p.level} for i, p in enumerate(orbit.points)]
        if args.level == 0:
            ret = first_return_to_base(TowerPoint(base, 0))
            doc["first_return"] = (
                "undetermined" if ret is UNDETERMINED
                else {"point": ret[0].to_dict(), "steps": ret[1]}
            )
    doc["report"] = tower_report(args.window, args.report_levels).to_dict()
    if args.format == "csv" and not rows:
        rows = [{"level": r["level"], "measure": r["measure"], "cumulative": r["cumulative"]}
                for r in doc["report"]["levels"]]
        columns = ["level", "measure", "cumulative"]
    else:
        columns = ["step", "base", "level"]
    _write(args, rows, doc, columns)


def cmd_walk(args) -> None:
    group = parse_group(args.group)
    spec = WalkSpec.parse(group, args.nu)
    if args.ball_radius is not None:
        args.format = args.format or "json"
        est = spectral_radius_estimate(spec, args.ball_radius, args.iters)
        doc = {"group": group.name, "ball_radius": args.ball_radius, "nu": {
            group.format(s): format_fraction(p) for s, p in spec.nu.items()}}
        doc.update(est.to_dict())
        rows = [{"iteration": i + 1, "estimate": repr(v)} for i, v in enumerate(est.trace)]
        _write(args, rows, doc, ["iteration", "estimate"])
        return
    args.format = args.format or "csv"
    y0 = group.parse(args.y0) if args.y0 else group.identity()
    traj = simulate_trajectory(spec, y0, args.length, args.seed, start=args.start_index)
    rows = []
    for i, y in enumerate(traj.points):
        row = {"index": traj.start + i, "point": group.format(y), "increment": ""}
        if i + 1 < len(traj.points):
            row["increment"] = group.format(group.multiply(group.inverse(y), traj.points[i + 1]))
        rows.append(row)
    doc = {"group": group.name, "seed": args.seed, "trajectory": rows}
    _write(args, rows, doc, ["index", "point", "increment"])


def cmd_graph_check(args) -> None:
    if args.graph_file:
        with open(args.graph_file, encoding="utf-8") as fh:
            graph = GradedGraph.from_json(fh.read())
    else:
        graph = pascal_graph(args.levels)
    height = args.height if args.height is not None else graph.levels
    report = verify_induced_over_odometer(graph, args.p, height)
    doc = report.to_dict()
    rows = [{"j": j, "count": c} for j, c in sorted(report.j_histogram.items())]
    _write(args, rows, doc, ["j", "count"])


def cmd_expectation(args) -> None:
    rows = [{"window": L, "expectation": format_fraction(truncated_jump_expectation(L))}
            for L in range(args.min_window, args.max_window + 1)]
    _write(args, rows, {"records": rows}, ["window", "expectation"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adictk", description="Pascal-adic dynamics toolkit")
    parser.add_argument("--version", action="version", version=f"adictk {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, fmt, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=["json", "csv"], default=fmt)
        p.add_argument("--output", "-o", help="output file (default: standard output)")
        return p

    p = add("orbit", cmd_orbit, "json", "iterate a map from a word")
    p.add_argument("--map", choices=["pascal", "pascal-inverse", "odometer", "hk"], default="pascal")
    p.add_argument("--word", required=True)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--level", type=int, default=0, help="starting tower level for --map hk")

    p = add("jump", cmd_jump, "json", "jump values n(x) = 2^m + 2^k - 1")
    p.add_argument("--word", action="append")
    p.add_argument("--length", type=int, help="every word of this length")

    p = add("rank-stats", cmd_rank_stats, "csv", "sample composition-class ranks")
    p.add_argument("--n-ladder", default="4,8,16")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--measure", default=None, help="Bernoulli p for digit 1 (default: Haar)")
    p.add_argument("--norm", default=None, help="'a_n,b_n' expressions in n and m")
    p.add_argument("--summary", default=None, help="also write the JSON summary here")
    p.add_argument("--takagi-terms", type=int, default=0)

    p = add("hk", cmd_hk, "json", "Hajian-Kakutani tower orbits and level measures")
    p.add_argument("--base-word", default=None)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--window", type=int, default=12)
    p.add_argument("--report-levels", type=int, default=8)

    # trajectories default to CSV, spectral probes to JSON
    p = add("walk", cmd_walk, None, "random-walk trajectories and spectral probes")
    p.add_argument("--group", default="z:1", help="z:d | free:k | cyclic:q")
    p.add_argument("--nu", default=None, help="comma list of generator=p/q (default: simple walk)")
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--y0", default=None)
    p.add_argument("--start-index", type=int, default=0)
    p.add_argument("--ball-radius", type=int, default=None)
    p.add_argument("--iters", type=int, default=100_000)

    p = add("graph-check", cmd_graph_check, "json", "adic successor versus the p-odometer")
    p.add_argument("--graph", choices=["pascal"], default="pascal")
    p.add_argument("--graph-file", default=None)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--height", type=int, default=None)
    p.add_argument("--p", type=int, default=2)

    p = add("expectation", cmd_expectation, "csv", "truncated expectation of the jump")
    p.add_argument("--min-window", type=int, default=2)
    p.add_argument("--max-window", type=int, default=12)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            print("adictk: error: a subcommand is required", file=sys.stderr)
            return 2
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"adictk: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
