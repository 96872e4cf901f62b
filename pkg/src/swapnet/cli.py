"""Command-line front end.

    swapnet <concurrence|swap|path|dist|sweep|fit|optimal-path|selftest> [flags]

Every subcommand accepts ``--config FILE``: a flat ``key = value`` text file
whose keys are flag names (``n-fiducial = 10`` or ``n_fiducial = 10``).
Flags given on the command line override the file. Boolean keys take
``true``/``false``; list-valued keys take comma or space separated values.

Exit codes: 0 success, 1 usage error, 2 numeric, generation or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, svg
from .entanglement import concurrence, concurrence_batch, concurrence_closed_form, param_for_concurrence
from .ensembles import Rng, ginibre_state, haar_unitaries, rotate_batch
from .errors import SwapnetError
from .experiments import (
    DEFAULT_GRID,
    PANEL_ANGLES,
    REFERENCE_FIDUCIAL,
    FitResult,
    Histogram,
    SweepConfig,
    SweepRecord,
    WinnerMap,
    concurrence_distribution,
    fit_threshold,
    fit_xi,
    optimal_path_map,
    relative_range_curve,
    relaxed_fiducial,
    path_sweep,
)
from .states import (
    Family,
    StateFamily,
    family_state,
    make_pure_schmidt,
    make_x_state,
    purity,
    read_state_file,
    validate_density_matrix,
)
from .swap import (
    OracleKind,
    average_swap_concurrence,
    average_swap_concurrence_batch,
    path_average_concurrence,
    predicted_single_swap,
    werner_path_concurrence,
)

__all__ = ["run", "main", "write_csv", "read_sweep_csv", "render_svg", "parse_config", "selftest"]

SWEEP_COLUMNS = ("C", "l", "stat_avg_mean", "avg_range", "std_of_means", "n_tuples", "n_inner", "pruned_mass")
WINNER_COLUMNS = ("theta1", "theta2", "cbar_p1", "cbar_p2", "winner")
HIST_COLUMNS = ("bin_lo", "bin_hi", "count")
FIT_COLUMNS = ("l", "constrained", "m_l", "c_th", "residual")
SVG_KINDS = ("mean_vs_C", "range_vs_C", "ratio_vs_C", "histogram", "winner_heatmap")


class UsageError(Exception):
    pass


# -- output writers -------------------------------------------------------------


def _g(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


def _rows_for(records):
    if isinstance(records, WinnerMap):
        return WINNER_COLUMNS, list(records.rows())
    if isinstance(records, Histogram):
        e, n = records.edges, records.counts
        return HIST_COLUMNS, [(e[k], e[k + 1], int(n[k])) for k in range(len(n))]
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    if all(isinstance(r, SweepRecord) for r in records):
        return SWEEP_COLUMNS, [tuple(getattr(r, c) for c in SWEEP_COLUMNS) for r in records]
    if all(isinstance(r, FitResult) for r in records):
        return FIT_COLUMNS, [tuple(getattr(r, c) for c in FIT_COLUMNS) for r in records]
    raise TypeError("unsupported record type for CSV output")


def write_csv(records, path) -> None:
    """Header plus one row per record; floats to 9 significant digits, LF endings."""
    header, rows = _rows_for(records)
    if not rows:
        raise ValueError("no records to write")
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_g(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_sweep_csv(path) -> list[SweepRecord]:
    """Read back the scalar columns of a sweep CSV (per-tuple lists are not stored)."""
    out = []
    with Path(path).open(encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(
                SweepRecord(
                    C=float(row["C"]),
                    l=int(row["l"]),
                    stat_avg_mean=float(row["stat_avg_mean"]),
                    avg_range=float(row["avg_range"]),
                    std_of_means=float(row["std_of_means"]),
                    tuple_means=(),
                    tuple_ranges=(),
                    pruned_mass=float(row["pruned_mass"]),
                    n_tuples=int(row["n_tuples"]),
                    n_inner=int(row["n_inner"]),
                )
            )
    if not out:
        raise ValueError(f"{path}: no sweep rows")
    return out


def _by_length(records: Sequence[SweepRecord]) -> dict[int, list[SweepRecord]]:
    out: dict[int, list[SweepRecord]] = {}
    for r in records:
        out.setdefault(r.l, []).append(r)
    return dict(sorted(out.items()))


def render_svg(records, kind: str, path) -> None:
    """Presentation plot of sweep, histogram or winner-map output."""
    if kind not in SVG_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; expected one of {', '.join(SVG_KINDS)}")
    if kind == "histogram":
        svg.bar_plot(records.edges, records.counts, path, title="average swap concurrence", xlabel="C_bar")
        return
    if kind == "winner_heatmap":
        colours = {"P1": "#2ca02c", "P2": "#e6c619", "TIE": "#7f7f7f"}
        svg.heatmap(
            records.theta1, records.theta2, records.winner, colours, path,
            title="larger average concurrence", xlabel="theta1", ylabel="theta2",
        )
        return
    groups = _by_length(list(records))
    if not groups:
        raise ValueError("no records to plot")
    series = {}
    for l, recs in groups.items():
        if kind == "mean_vs_C":
            series[f"l={l}"] = [(r.C, r.stat_avg_mean) for r in recs]
        elif kind == "range_vs_C":
            series[f"l={l}"] = [(r.C, r.avg_range) for r in recs]
        else:
            try:
                c_th = fit_threshold([(r.C, r.stat_avg_mean) for r in recs], l, True).c_th
            except SwapnetError:
                c_th = None
            series[f"l={l}"] = relative_range_curve(recs, c_th)
    ylabel = {"mean_vs_C": "mean", "range_vs_C": "range", "ratio_vs_C": "range / mean"}[kind]
    svg.line_plot(series, path, title=f"{ylabel} vs C", xlabel="C", ylabel=ylabel)


# -- config -----------------------------------------------------------------------


def parse_config(text: str) -> list[tuple[str, str]]:
    """``key = value`` pairs; ``#`` starts a comment, blank lines are skipped."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise UsageError(f"config line {n}: empty key")
        out.append((key.replace("_", "-"), value))
    return out


def _config_tokens(pairs, parser: argparse.ArgumentParser) -> list[str]:
    known = {}
    for act in parser._actions:
        for opt in act.option_strings:
            known[opt] = act
    tokens: list[str] = []
    for key, value in pairs:
        flag = "--" + key
        act = known.get(flag)
        if act is None or key == "config":
            raise UsageError(f"config key {key!r} is not a flag of this subcommand")
        if isinstance(act, argparse.BooleanOptionalAction):
            v = value.lower()
            if v not in ("true", "false", "1", "0", "yes", "no"):
                raise UsageError(f"config key {key!r}: expected true/false, got {value!r}")
            tokens.append(flag if v in ("true", "1", "yes") else "--no-" + key)
        elif act.nargs == 0:
            if value.lower() in ("true", "1", "yes"):
                tokens.append(flag)
        elif act.nargs in ("+", "*"):
            tokens.append(flag)
            tokens.extend(value.replace(",", " ").split())
        else:
            tokens.extend([flag, value])
    return tokens


# -- parser -----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def _unit_float(name):
    def conv(s):
        try:
            v = float(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name}: not a number: {s!r}") from None
        if not (0.0 <= v <= 1.0):
            raise argparse.ArgumentTypeError(f"{name} must lie in [0, 1], got {v}")
        return v

    return conv


def _pos_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _common(p: argparse.ArgumentParser, outputs: bool = True):
    p.add_argument("--config", type=Path, help="key = value file of default flag values")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_pos_int, default=None, help="worker threads (default: all CPUs)")
    p.add_argument("--verbose", "-v", action="store_true")
    if outputs:
        p.add_argument("--out-dir", type=Path, default=Path("."))
        p.add_argument("--csv", action=argparse.BooleanOptionalAction, default=True, help="write CSV (default on)")
        p.add_argument("--svg", action=argparse.BooleanOptionalAction, default=False, help="write SVG plots")


_FAMILIES = [f.value for f in Family if f is not Family.GENERAL]


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="swapnet", description="Entanglement swapping on mixed-state networks.")
    top.add_argument("--version", action="version", version=f"swapnet {__version__}")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("concurrence", help="concurrence of one state")
    _common(p, outputs=False)
    p.add_argument("--state", type=Path, help="state file (4 rows of 4 complex entries)")
    p.add_argument("--family", choices=_FAMILIES)
    p.add_argument("--params", type=float, nargs="+", help="family parameters")

    p = sub.add_parser("swap", help="average concurrence after one swap")
    _common(p, outputs=False)
    p.add_argument("--family", choices=["werner", "isotropic", "pure"])
    p.add_argument("--c1", type=_unit_float("c1"))
    p.add_argument("--c2", type=_unit_float("c2"))
    p.add_argument("--state1", type=Path)
    p.add_argument("--state2", type=Path)

    p = sub.add_parser("path", help="average end-to-end concurrence along a path")
    _common(p, outputs=False)
    p.add_argument("--werner", action="store_true", help="shorthand for --family werner")
    p.add_argument("--family", choices=["werner", "isotropic", "pure"])
    p.add_argument("--c", type=_unit_float("c"), help="edge concurrence (all edges)")
    p.add_argument("--l", type=_pos_int, help="path length (edges)")
    p.add_argument("--states", type=Path, nargs="+", help="edge state files, left to right")

    p = sub.add_parser("dist", help="histogram of swap concurrence over orbit pairs")
    _common(p)
    p.add_argument("--c", type=_unit_float("c"), required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--bins", type=_pos_int, default=50)
    p.add_argument("--n-per-side", type=_pos_int, default=20)

    p = sub.add_parser("sweep", help="ensemble statistics over a concurrence grid")
    _common(p)
    p.add_argument("--l", type=int, nargs="+", default=[2], help="path lengths")
    p.add_argument("--grid", type=float, nargs="+", default=list(DEFAULT_GRID))
    p.add_argument("--n-fiducial", type=_pos_int, default=10)
    p.add_argument("--n-per-side", type=_pos_int, default=20)
    p.add_argument("--n-fiducial-tuples", type=_pos_int, default=50)
    p.add_argument("--n-input-tuples", type=_pos_int, default=200)
    p.add_argument("--exhaustive-tuple-limit", type=int, default=100)

    p = sub.add_parser("fit", help="threshold / slope fits of a sweep CSV")
    _common(p)
    p.add_argument("--input", type=Path, required=True, help="sweep CSV")

    p = sub.add_parser("optimal-path", help="two-path winner map")
    _common(p)
    p.add_argument("--fiducial", type=Path, help="state file (default: the printed example state)")
    p.add_argument("--panel", choices=sorted(PANEL_ANGLES), default="A")
    p.add_argument("--fixed-t1", type=float, help="overrides the panel angle for path 2")
    p.add_argument("--fixed-t2", type=float, help="overrides the panel angle for path 1")
    p.add_argument("--grid-size", type=_pos_int, default=64)

    p = sub.add_parser("selftest", help="analytic oracle suite")
    _common(p, outputs=False)
    return top


def _parse(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    sub = parser._subparsers._group_actions[0].choices[args.command]
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"--config: cannot read {args.config}: {exc.strerror or exc}") from None
    tokens = _config_tokens(parse_config(text), sub)
    argv = list(argv)
    pos = argv.index(args.command)
    # config values first so that explicit flags win
    return parser.parse_args(argv[: pos + 1] + tokens + argv[pos + 1 :])


def _out(args, name: str) -> Path:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    return args.out_dir / name


# -- subcommands -----------------------------------------------------------------


def _family_for(tag: str, c: float):
    fam = param_for_concurrence(tag, c)
    return family_state(fam)


def cmd_concurrence(args) -> int:
    if args.state is not None:
        rho = validate_density_matrix(read_state_file(args.state))
        print(f"concurrence={concurrence(rho):.6f}")
        print(f"purity={purity(rho):.6f}")
        return 0
    if args.family is None or args.params is None:
        raise UsageError("concurrence: give --state FILE or --family NAME --params ...")
    fam = StateFamily(Family(args.family), tuple(args.params))
    rho = family_state(fam)
    print(f"concurrence={concurrence(rho):.6f}")
    print(f"closed_form={concurrence_closed_form(fam):.6f}")
    return 0


def cmd_swap(args) -> int:
    if args.state1 is not None or args.state2 is not None:
        if args.state1 is None or args.state2 is None:
            raise UsageError("swap: --state1 and --state2 go together")
        r1 = validate_density_matrix(read_state_file(args.state1))
        r2 = validate_density_matrix(read_state_file(args.state2))
        print(f"avg_concurrence={average_swap_concurrence(r1, r2):.6f}")
        print(f"bound={concurrence(r1) * concurrence(r2):.6f}")
        return 0
    if args.family is None or args.c1 is None or args.c2 is None:
        raise UsageError("swap: give --family with --c1 --c2, or --state1/--state2")
    r1, r2 = _family_for(args.family, args.c1), _family_for(args.family, args.c2)
    value = average_swap_concurrence(r1, r2)
    kind = OracleKind.PRODUCT if args.family == "pure" else OracleKind.WERNER_PAIR
    print(f"avg_concurrence={value:.6f}")
    print(f"oracle={predicted_single_swap(kind, args.c1, args.c2):.6f}")
    return 0


def cmd_path(args) -> int:
    if args.states:
        edges = [validate_density_matrix(read_state_file(p)) for p in args.states]
        print(f"avg_concurrence={path_average_concurrence(edges):.6f}")
        return 0
    family = "werner" if args.werner else args.family
    if family is None or args.c is None or args.l is None:
        raise UsageError("path: give --werner (or --family) with --c and --l, or --states FILE...")
    edge = _family_for(family, args.c)
    value = path_average_concurrence([edge] * args.l)
    oracle = args.c**args.l if family == "pure" else werner_path_concurrence([args.c] * args.l)
    print(f"avg_concurrence={value:.6f}")
    print(f"oracle={oracle:.6f}")
    return 0


def cmd_dist(args) -> int:
    if args.samples < 100:
        raise UsageError("dist: --samples must be >= 100")
    if not (0.0 < args.c < 1.0):
        raise UsageError("dist: --c must lie in (0, 1)")
    h = concurrence_distribution(args.c, args.samples, args.bins, Rng(args.seed), n_per_side=args.n_per_side)
    q1, med, q3 = np.percentile(h.samples, [25, 50, 75])
    print(f"C={args.c:.6g} samples={len(h.samples)} mean={h.samples.mean():.6f} median={med:.6f} iqr={q3 - q1:.6f}")
    if args.csv:
        write_csv(h, _out(args, "dist.csv"))
    if args.svg:
        render_svg(h, "histogram", _out(args, "dist.svg"))
    return 0


def cmd_sweep(args) -> int:
    records: list[SweepRecord] = []
    for l in args.l:
        cfg = SweepConfig(
            length=l,
            grid=tuple(args.grid),
            n_fiducial=args.n_fiducial,
            n_per_side=args.n_per_side,
            n_fiducial_tuples=args.n_fiducial_tuples,
            n_input_tuples=args.n_input_tuples,
            exhaustive_tuple_limit=args.exhaustive_tuple_limit,
            seed=args.seed,
            **({"threads": args.threads} if args.threads else {}),
        )
        t0 = time.perf_counter()
        recs = path_sweep(cfg)
        if args.verbose:
            print(f"l={l}: {time.perf_counter() - t0:.1f}s", file=sys.stderr)
        records.extend(recs)
        for r in recs:
            print(f"l={r.l} C={r.C:.4g} mean={r.stat_avg_mean:.6f} range={r.avg_range:.6f} std={r.std_of_means:.6f}")
    if args.csv:
        write_csv(records, _out(args, "sweep.csv"))
    if args.svg:
        for kind in ("mean_vs_C", "range_vs_C", "ratio_vs_C"):
            render_svg(records, kind, _out(args, f"sweep_{kind}.svg"))
    return 0


def cmd_fit(args) -> int:
    try:
        records = read_sweep_csv(args.input)
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"fit: cannot read sweep CSV {args.input}: {exc}") from None
    fits = []
    for l, recs in _by_length(records).items():
        pts = [(r.C, r.stat_avg_mean) for r in recs]
        for constrained in (False, True):
            f = fit_threshold(pts, l, constrained)
            fits.append(f)
            tag = "constrained" if constrained else "free"
            flag = " degenerate" if f.degenerate else ""
            print(f"l={l} {tag}: m_l={f.m_l:.6f} c_th={f.c_th:.6f} rms={f.residual:.6f}{flag}")
    constrained = [f for f in fits if f.constrained]
    if len(constrained) >= 3:
        print(f"xi={fit_xi(constrained):.6f}")
    if args.csv:
        write_csv(fits, _out(args, "fit.csv"))
    return 0


def cmd_optimal_path(args) -> int:
    if args.fiducial is not None:
        rho, dist = relaxed_fiducial(read_state_file(args.fiducial))
    else:
        rho, dist = relaxed_fiducial(REFERENCE_FIDUCIAL)
    angle = PANEL_ANGLES[args.panel]
    t1_fixed = angle if args.fixed_t1 is None else args.fixed_t1
    t2_fixed = angle if args.fixed_t2 is None else args.fixed_t2
    n = args.grid_size
    theta1 = np.linspace(0.0, math.pi, n)
    theta2 = np.linspace(0.0, 2.0 * math.pi, n)
    wm = optimal_path_map(rho, theta1, theta2, t2_fixed, t1_fixed, threads=args.threads or 1)
    counts = {k: int(np.sum(wm.winner == k)) for k in ("P1", "P2", "TIE")}
    print(f"fiducial_concurrence={concurrence(rho):.6f} projection_distance={dist:.3e}")
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    if args.csv:
        write_csv(wm, _out(args, "optimal_path.csv"))
    if args.svg:
        render_svg(wm, "winner_heatmap", _out(args, "optimal_path.svg"))
    return 0


# -- self-test -----------------------------------------------------------------------


def _random_x_states(rng: Rng, n: int) -> np.ndarray:
    g = rng.generator
    diag = g.dirichlet(np.ones(4), size=n)
    r14 = np.sqrt(diag[:, 0] * diag[:, 3]) * g.uniform(0, 1, n)
    r23 = np.sqrt(diag[:, 1] * diag[:, 2]) * g.uniform(0, 1, n)
    p14 = np.exp(1j * g.uniform(0, 2 * np.pi, n))
    p23 = np.exp(1j * g.uniform(0, 2 * np.pi, n))
    return np.stack([make_x_state(*diag[k], r14[k] * p14[k], r23[k] * p23[k]).mat for k in range(n)])


def _pure_states(lams: np.ndarray) -> np.ndarray:
    return np.stack([make_pure_schmidt(x).density().mat for x in lams])


_c_batch = concurrence_batch


def selftest(seed: int = 0, out=None) -> bool:
    """Run the analytic oracles; print one PASS/FAIL line each."""
    out = sys.stdout if out is None else out
    rng = Rng(seed, 7)
    g = rng.generator
    results = []

    def check(name, ok, detail):
        results.append(ok)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=out)

    lam = g.uniform(0, 1, (200, 2))
    pa, pb = _pure_states(lam[:, 0]), _pure_states(lam[:, 1])
    err = np.max(np.abs(average_swap_concurrence_batch(pa, pb) - _c_batch(pa) * _c_batch(pb)))
    check("pure product law", err <= 1e-9, f"max err {err:.2e} over 200 pairs")

    cs = np.linspace(0, 1, 11)
    worst = 0.0
    for c1 in cs:
        for c2 in cs:
            v = average_swap_concurrence(_family_for("werner", c1), _family_for("werner", c2))
            worst = max(worst, abs(v - predicted_single_swap(OracleKind.WERNER_PAIR, c1, c2)))
    check("Werner single swap", worst <= 1e-9, f"max err {worst:.2e} on 11x11 grid")

    worst = 0.0
    for l in (2, 3, 4):
        for c in (0.5, 0.7, 0.9):
            v = path_average_concurrence([_family_for("werner", c)] * l)
            worst = max(worst, abs(v - werner_path_concurrence([c] * l)))
    check("Werner paths", worst <= 1e-8, f"max err {worst:.2e} for l=2..4")

    xs = _random_x_states(rng.spawn(1), 200)
    px = _pure_states(g.uniform(0, 1, 200))
    err = np.max(np.abs(average_swap_concurrence_batch(px, xs) - _c_batch(px) * _c_batch(xs)))
    check("pure x X-state law", err <= 1e-9, f"max err {err:.2e} over 200 pairs")

    r = rng.spawn(2)
    m1 = np.stack([ginibre_state(r) for _ in range(200)])
    m2 = np.stack([ginibre_state(r) for _ in range(200)])
    gap = np.max(average_swap_concurrence_batch(m1, m2) - _c_batch(m1) * _c_batch(m2))
    check("upper bound C1*C2", gap <= 1e-9, f"max excess {gap:.2e} over 200 pairs")

    u = haar_unitaries(rng.spawn(3), 100_000)
    moment = float(np.mean(np.abs(u[:, 0, 0]) ** 2))
    check("Haar moment E|u00|^2", abs(moment - 0.5) <= 0.01, f"{moment:.4f} at 1e5 draws")

    ua, ub = haar_unitaries(rng.spawn(4), 200), haar_unitaries(rng.spawn(5), 200)
    rot = rotate_batch(m1, ua, ub)
    dc = np.max(np.abs(_c_batch(rot) - _c_batch(m1)))
    dp = np.max(np.abs(np.sum(np.abs(rot) ** 2, axis=(1, 2)) - np.sum(np.abs(m1) ** 2, axis=(1, 2))))
    check("local-unitary invariance", max(dc, dp) <= 1e-8, f"concurrence {dc:.2e}, purity {dp:.2e}")
    return all(results)


def cmd_selftest(args) -> int:
    t0 = time.perf_counter()
    ok = selftest(args.seed)
    print(f"selftest {'passed' if ok else 'FAILED'} in {time.perf_counter() - t0:.1f}s")
    return 0 if ok else 2


_COMMANDS = {
    "concurrence": cmd_concurrence,
    "swap": cmd_swap,
    "path": cmd_path,
    "dist": cmd_dist,
    "sweep": cmd_sweep,
    "fit": cmd_fit,
    "optimal-path": cmd_optimal_path,
    "selftest": cmd_selftest,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Execute one subcommand and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SwapnetError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())
