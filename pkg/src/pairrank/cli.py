"""Command-line interface and the CSV/JSON file formats.

Files are plain UTF-8 CSV with a header row; lines starting with ``#`` are
comments.  Matches: ``i,j,wins`` (one row per ordered pair with wins > 0).
Ties: ``i,j,ties`` (one row per unordered pair, ids in lexicographic order).
Rankings: ``rank,id,pi,score,p1`` sorted by strength.  Floats are written
with 17 significant digits so that round-tripping is exact, and every command
with a fixed seed produces byte-identical outputs.

Exit codes: 0 success, 1 model/validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .bench import BenchSpec, run_bench, trace_run
from .core import (
    ComparisonData,
    FitResult,
    NegativeCount,
    NotStronglyConnected,
    PairRankError,
    ParseError,
    SelfMatch,
    SolverSpec,
    validate,
)
from .graph import restrict_to_largest_scc, strongly_connected_components
from .solvers import fit
from .synth import SynthSpec, generate_tournament, generate_tournament_ties


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _data_rows(path: str, header: tuple[str, str, str]) -> list[tuple[int, list[str]]]:
    rows: list[tuple[int, list[str]]] = []
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")
    header_seen = False
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parsed = next(csv.reader([line]))
        parsed = [field.strip() for field in parsed]
        if not header_seen:
            if [f.lower() for f in parsed] != list(header):
                raise ParseError(
                    f"expected header {','.join(header)!r}, got {stripped!r}", line_no
                )
            header_seen = True
            continue
        if len(parsed) != 3:
            raise ParseError(f"expected 3 fields, got {len(parsed)}", line_no)
        rows.append((line_no, parsed))
    if not header_seen:
        raise ParseError(f"{path} has no header row")
    return rows


def _count(raw: str, line_no: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"not a number: {raw!r}", line_no) from None
    if not np.isfinite(value) or value < 0:
        raise NegativeCount(f"line {line_no}: counts must be finite and >= 0, got {raw}")
    return value


def parse_matches(match_path: str, tie_path: str | None = None) -> ComparisonData:
    """Read a match file (and optionally a tie file) into comparison data.

    Duplicate win rows for the same ordered pair are summed; duplicate tie
    rows for the same unordered pair are rejected.
    """
    win_rows = []
    for line_no, (a, b, raw) in _data_rows(match_path, ("i", "j", "wins")):
        if a == b:
            raise SelfMatch(f"line {line_no}: player {a!r} matched against itself")
        win_rows.append((a, b, _count(raw, line_no)))

    tie_rows = []
    if tie_path is not None:
        seen: set[tuple[str, str]] = set()
        for line_no, (a, b, raw) in _data_rows(tie_path, ("i", "j", "ties")):
            if a == b:
                raise SelfMatch(f"line {line_no}: player {a!r} tied against itself")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ParseError(f"duplicate tie pair {key[0]!r},{key[1]!r}", line_no)
            seen.add(key)
            tie_rows.append((a, b, _count(raw, line_no)))

    data = ComparisonData.from_pairs(win_rows, tie_rows)
    if data.total_games <= 0:
        raise ParseError(f"{match_path} contains no positive counts")
    return data


# --- serializers ------------------------------------------------------------


def matches_csv(data: ComparisonData) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["i", "j", "wins"])
    rows = sorted(
        ((data.ids[i], data.ids[j], c) for (i, j), c in data.wins.items())
    )
    for a, b, c in rows:
        w.writerow([a, b, _fmt(c)])
    return out.getvalue()


def ties_csv(data: ComparisonData) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["i", "j", "ties"])
    rows = sorted(
        (tuple(sorted((data.ids[i], data.ids[j]))) + (c,))
        for (i, j), c in data.ties.items()
    )
    for a, b, c in rows:
        w.writerow([a, b, _fmt(c)])
    return out.getvalue()


def scores_csv(data: ComparisonData, scores: np.ndarray) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["id", "score", "pi"])
    for k, name in enumerate(data.ids):
        w.writerow([name, _fmt(scores[k]), _fmt(np.exp(scores[k]))])
    return out.getvalue()


def ranking_csv(result: FitResult) -> str:
    pi = result.strengths.pi
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["rank", "id", "pi", "score", "p1"])
    for rank, k in enumerate(result.ranking(), start=1):
        w.writerow(
            [rank, result.data.ids[k], _fmt(pi[k]), _fmt(np.log(pi[k])), _fmt(pi[k] / (pi[k] + 1.0))]
        )
    return out.getvalue()


def spec_dict(spec: SolverSpec) -> dict:
    return {
        "algorithm": spec.algorithm,
        "alpha": spec.effective_alpha,
        "mode": spec.mode,
        "ties_model": spec.ties_model,
        "init": spec.init,
        "seed": spec.seed,
        "tolerance": spec.tolerance,
        "max_sweeps": spec.max_sweeps,
    }


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def summary_json(data: ComparisonData, spec: SolverSpec, result: FitResult) -> str:
    trace = result.trace
    payload = {
        "spec": spec_dict(spec),
        "n_players": data.n_players,
        "total_games": data.total_games,
        "sweeps_used": result.sweeps_used,
        "terminated": result.terminated,
        "objective": float(trace.objective[-1]) if trace.objective.size else None,
        "nu": result.strengths.nu,
    }
    return _json(payload)


def trace_csv(table) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(table.columns)
    for label, sweep_no, objective, rms in table.rows:
        w.writerow([label, sweep_no, _fmt(objective), _fmt(rms)])
    return out.getvalue()


def bench_json(report, data_note: str | None = None) -> str:
    payload = {
        "criterion_tol": report.spec.criterion_tol,
        "replicates": report.spec.replicates,
        "seed_base": report.spec.seed_base,
        "reference_tol": report.spec.reference_tol,
        # one fixed instance per invocation; regenerating data per replicate
        # is an outer loop over invocations
        "data": data_note,
        "algorithms": [
            {
                "label": r.label,
                "spec": spec_dict(r.spec),
                "mean_iterations": r.mean,
                "std_iterations": r.std,
                "speed_up_vs_zermelo": r.speed_up_vs_zermelo,
                "iterations": r.iterations.tolist(),
            }
            for r in report.results
        ],
    }
    return _json(payload)


# --- argument handling ------------------------------------------------------

# Inline-generated bench/trace data shares --seed with the replicate seeds;
# shifting the replicate seed base keeps the two PRNG streams apart.
_BENCH_SEED_OFFSET = 1 << 20


def _algorithm(value: str) -> tuple[str, float]:
    if value in ("newman", "zermelo"):
        return value, 0.0
    if value.startswith("alpha="):
        try:
            alpha = float(value.split("=", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad alpha value in {value!r}") from None
        if not (np.isfinite(alpha) and alpha >= 0):
            raise argparse.ArgumentTypeError("alpha must be finite and >= 0")
        return "alpha", alpha
    raise argparse.ArgumentTypeError(
        f"unknown algorithm {value!r} (expected newman, zermelo, or alpha=<x>)"
    )


def _default_seed() -> int:
    return int(os.environ.get("PAIRRANK_SEED", "0"))


def _add_solver_flags(p: argparse.ArgumentParser, multi_algorithm: bool = False) -> None:
    p.add_argument(
        "--algorithm",
        type=_algorithm,
        action="append" if multi_algorithm else "store",
        default=None,
        help="newman (fast, default), zermelo (classic), or alpha=<x>"
        + ("; repeatable" if multi_algorithm else ""),
    )
    p.add_argument("--mode", choices=("mle", "map"), default="mle")
    p.add_argument(
        "--ties",
        choices=("none", "davidson", "newman", "half-win"),
        default="none",
        help="ties handling: davidson/newman select the tie-aware model "
        "(ties also count as interaction edges for connectivity), "
        "half-win folds each tie into half a win per player",
    )
    p.add_argument("--tol", type=float, default=1e-10, help="stop when max |delta p1| < tol")
    p.add_argument("--max-sweeps", type=int, default=100_000)
    p.add_argument("--init", choices=("ones", "logistic"), default="ones")
    p.add_argument("--seed", type=int, default=None, help="default: $PAIRRANK_SEED or 0")


def _spec_from_args(args, algorithm: tuple[str, float] | None = None) -> SolverSpec:
    name, alpha = algorithm if algorithm is not None else (args.algorithm or ("newman", 0.0))
    ties_model = {"none": "none", "davidson": "davidson", "newman": "newman-ties", "half-win": "half-win"}[
        args.ties
    ]
    seed = args.seed if args.seed is not None else _default_seed()
    return SolverSpec(
        algorithm=name,
        alpha=alpha,
        mode=args.mode,
        ties_model=ties_model,
        init=args.init,
        seed=seed,
        tolerance=args.tol,
        max_sweeps=args.max_sweeps,
    )


def _write_all(outputs: dict[str, str]) -> None:
    for path, content in outputs.items():
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(content)


def _load_data(args) -> ComparisonData:
    return parse_matches(args.matches, args.ties_file)


def _components_message(data: ComparisonData, components: list[list[int]]) -> str:
    def fmt(comp: list[int]) -> str:
        names = [data.ids[i] for i in comp]
        if len(names) > 8:
            names = names[:8] + [f"... +{len(comp) - 8} more"]
        return "{" + ", ".join(names) + "}"

    listed = "; ".join(fmt(c) for c in components[:10])
    if len(components) > 10:
        listed += f"; ... +{len(components) - 10} more components"
    return (
        f"not strongly connected ({len(components)} components: {listed}). "
        "A maximum-likelihood fit needs a win path between every pair of players; "
        "use --mode map, or restrict to the largest component with 'pairrank scc --restrict'."
    )


def _cmd_fit(args) -> int:
    data = _load_data(args)
    spec = _spec_from_args(args)
    try:
        validate(data, spec)
    except NotStronglyConnected as e:
        raise NotStronglyConnected(_components_message(data, e.components), e.components)
    result = fit(data, spec)
    ranking = ranking_csv(result)
    summary = summary_json(data, spec, result)
    if args.output:
        _write_all({f"{args.output}.ranking.csv": ranking, f"{args.output}.summary.json": summary})
        print(f"wrote {args.output}.ranking.csv and {args.output}.summary.json")
    else:
        sys.stdout.write(ranking)
        sys.stdout.write(summary)
    return 0


def _cmd_synth(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    spec = SynthSpec(
        n_players=args.players,
        n_games=args.games,
        ties=args.nu is not None,
        nu_true=args.nu if args.nu is not None else 0.5,
        seed=seed,
        max_redraws=args.max_redraws,
    )
    result = generate_tournament_ties(spec) if spec.ties else generate_tournament(spec)
    outputs = {
        f"{args.output}.matches.csv": matches_csv(result.data),
        f"{args.output}.scores.csv": scores_csv(result.data, result.true_scores),
    }
    if spec.ties:
        outputs[f"{args.output}.ties.csv"] = ties_csv(result.data)
    _write_all(outputs)
    print(
        f"generated {result.data.n_players} players, "
        f"{_fmt(result.data.total_games)} games "
        f"({_fmt(result.data.total_ties)} ties), {result.redraws} redraws; "
        f"wrote {', '.join(sorted(outputs))}"
    )
    return 0


def _cmd_scc(args) -> int:
    data = _load_data(args)
    components = strongly_connected_components(data)
    print(f"{data.n_players} players, {len(components)} strongly connected component(s)")
    for k, comp in enumerate(components, start=1):
        names = ", ".join(data.ids[i] for i in comp)
        print(f"  component {k} (size {len(comp)}): {names}")
    if not args.restrict:
        return 0
    restricted, removed = restrict_to_largest_scc(data)
    outputs = {f"{args.output}.matches.csv": matches_csv(restricted)}
    if restricted.total_ties > 0 or data.total_ties > 0:
        outputs[f"{args.output}.ties.csv"] = ties_csv(restricted)
    _write_all(outputs)
    kept = restricted.n_players
    print(
        f"kept {kept} players, removed {len(removed)}"
        + (f" ({', '.join(removed)})" if removed else "")
        + f"; wrote {', '.join(sorted(outputs))}"
    )
    return 0


def _bench_data(args) -> tuple[ComparisonData, int, str]:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.matches:
        note = f"file: {args.matches}" + (f" + {args.ties_file}" if args.ties_file else "")
        return _load_data(args), seed, note
    if not args.players or not args.games:
        raise PairRankError("provide a matches file, or --players and --games to generate one")
    spec = SynthSpec(
        n_players=args.players,
        n_games=args.games,
        ties=args.nu is not None,
        nu_true=args.nu if args.nu is not None else 0.5,
        seed=seed,
        max_redraws=args.max_redraws,
    )
    result = generate_tournament_ties(spec) if spec.ties else generate_tournament(spec)
    note = (
        f"synthetic: players={spec.n_players} games={spec.n_games} seed={spec.seed}"
        + (f" nu={spec.nu_true:g}" if spec.ties else "")
    )
    return result.data, seed + _BENCH_SEED_OFFSET, note


def _bench_specs(args) -> list[SolverSpec]:
    names = args.algorithm or [("newman", 0.0), ("zermelo", 1.0)]
    specs = []
    for name, alpha in names:
        if args.ties in ("davidson", "newman"):
            # ties family: 'newman' means the fast tie-aware rule, 'zermelo'
            # the classic one
            if name == "alpha":
                raise PairRankError("the ties model defines only the newman and zermelo rules")
            ties_model = "newman-ties" if name == "newman" else "davidson"
            specs.append(replace(_spec_from_args(args, (name, alpha)), ties_model=ties_model))
        else:
            specs.append(_spec_from_args(args, (name, alpha)))
    return specs


def _cmd_bench(args) -> int:
    data, seed_base, data_note = _bench_data(args)
    specs = _bench_specs(args)
    bench = BenchSpec(
        algorithms=tuple(specs),
        criterion_tol=args.criterion_tol,
        replicates=args.replicates,
        seed_base=seed_base,
    )
    report = run_bench(data, bench)
    payload = bench_json(report, data_note)
    if args.output:
        _write_all({f"{args.output}.bench.json": payload})
        print(f"wrote {args.output}.bench.json")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_trace(args) -> int:
    data, seed, _ = _bench_data(args)
    specs = _bench_specs(args)
    table = trace_run(data, specs, args.sweeps, seed=seed)
    payload = trace_csv(table)
    if args.output:
        _write_all({f"{args.output}.trace.csv": payload})
        print(f"wrote {args.output}.trace.csv")
    else:
        sys.stdout.write(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairrank",
        description="Rankings from pairwise comparisons: fast iterative fits, "
        "tie models, MAP regularization, and convergence benchmarking.",
    )
    parser.add_argument("--version", action="version", version=f"pairrank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit strengths and write a ranking")
    p_fit.add_argument("matches", help="CSV of i,j,wins rows")
    p_fit.add_argument("--ties-file", default=None, help="CSV of i,j,ties rows")
    _add_solver_flags(p_fit)
    p_fit.add_argument("--output", default=None, help="prefix for .ranking.csv and .summary.json")
    p_fit.set_defaults(func=_cmd_fit)

    p_synth = sub.add_parser("synth", help="generate a synthetic tournament")
    p_synth.add_argument("--players", type=int, required=True)
    p_synth.add_argument("--games", type=int, required=True)
    p_synth.add_argument("--seed", type=int, default=None)
    p_synth.add_argument(
        "--nu", type=float, default=None, help="generate ties with this tie-odds parameter"
    )
    p_synth.add_argument("--max-redraws", type=int, default=100)
    p_synth.add_argument("--output", required=True, help="prefix for the generated CSV files")
    p_synth.set_defaults(func=_cmd_synth)

    p_scc = sub.add_parser("scc", help="report strongly connected components")
    p_scc.add_argument("matches")
    p_scc.add_argument("--ties-file", default=None)
    p_scc.add_argument("--restrict", action="store_true", help="write the largest component")
    p_scc.add_argument("--output", default=None, help="prefix for restricted CSV files")
    p_scc.set_defaults(func=_cmd_scc)

    p_bench = sub.add_parser("bench", help="measure iterations to convergence")
    p_bench.add_argument("matches", nargs="?", default=None)
    p_bench.add_argument("--ties-file", default=None)
    p_bench.add_argument("--players", type=int, default=None)
    p_bench.add_argument("--games", type=int, default=None)
    p_bench.add_argument("--nu", type=float, default=None)
    p_bench.add_argument("--max-redraws", type=int, default=100)
    _add_solver_flags(p_bench, multi_algorithm=True)
    p_bench.add_argument("--replicates", type=int, default=100)
    p_bench.add_argument("--criterion-tol", type=float, default=1e-6)
    p_bench.add_argument("--output", default=None, help="prefix for .bench.json")
    p_bench.set_defaults(func=_cmd_bench)

    p_trace = sub.add_parser("trace", help="per-sweep objective and RMS deviation table")
    p_trace.add_argument("matches", nargs="?", default=None)
    p_trace.add_argument("--ties-file", default=None)
    p_trace.add_argument("--players", type=int, default=None)
    p_trace.add_argument("--games", type=int, default=None)
    p_trace.add_argument("--nu", type=float, default=None)
    p_trace.add_argument("--max-redraws", type=int, default=100)
    _add_solver_flags(p_trace, multi_algorithm=True)
    p_trace.add_argument("--sweeps", type=int, default=50)
    p_trace.add_argument("--output", default=None, help="prefix for .trace.csv")
    p_trace.set_defaults(func=_cmd_trace)

    return parser


def run_command(argv: list[str] | None = None) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except NotStronglyConnected as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except PairRankError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
