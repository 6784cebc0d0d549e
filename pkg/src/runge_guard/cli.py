"""``runge-guard`` command line.

Exit status: 0 on success, 2 on a configuration error, 3 when any sweep
point or interval reported Picard non-convergence.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

from . import bench
from .errors import ConfigError
from .scenario import load_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3

SUBCOMMANDS = {
    "interp-demo": "interp_demo",
    "lebesgue": "lebesgue_table",
    "coning": "coning_run",
    "freq-sweep": "freq_sweep",
    "noise-sweep": "noise_sweep",
}

_EACH = 'for [s in "poly_plain poly_bac efh_bac"] "< grep ,".s.", OUT"'
GNUPLOT_HINTS = {
    "interp-demo": "set datafile separator ','; set logscale y\n"
                   f"plot {_EACH} using 1:3 with lines title s",
    "lebesgue": "set datafile separator ','; set logscale y\n"
                'plot "< grep ^poly,.*,equispaced, OUT" using 2:5 with linespoints title "poly", '
                '"< grep ^efh_bac, OUT" using 2:5 with linespoints title "efh_bac"',
    "coning": "set datafile separator ','; set logscale y\n"
              f"plot {_EACH} using 2:5 with lines title s",
    "freq-sweep": "set datafile separator ','; set logscale xy\n"
                  f"plot {_EACH} using ($1/$2):7 with linespoints title s",
}
GNUPLOT_HINTS["noise-sweep"] = GNUPLOT_HINTS["freq-sweep"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="runge-guard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="scenario file ([scenario] key = value)")
        p.add_argument("--out", help="CSV output path (default: scenario 'out' or stdout)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
        p.add_argument("--gnuplot-hint", action="store_true", help="print a plotting snippet and exit")
    sub.add_parser("selftest", help="run the oracle and property checks")
    return parser


def _open_out(path):
    if path is None or path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        from .selftest import run_all

        return EXIT_OK if run_all() else 1
    if args.gnuplot_hint:
        print(GNUPLOT_HINTS[args.command].replace("OUT", args.out or "out.csv"))
        return EXIT_OK
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    kind = SUBCOMMANDS[args.command]
    try:
        sc = load_scenario(args.config, default_kind=kind)
        if sc.kind != kind:
            raise ConfigError(f"scenario kind {sc.kind!r} does not match subcommand {args.command!r}",
                              None, "kind")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        sc.seed = args.seed
    header = sc.echo()
    nonconverged = False
    try:
        if kind == "interp_demo":
            rows, summaries = bench.interp_demo(sc)
            columns = bench.DEMO_COLUMNS
            for s in summaries:
                print(f"{s.scheme} N={s.N} d={s.d}: max_abs_err={s.max_abs_err:.3e} "
                      f"max_lebesgue={s.max_lebesgue:.3f} windows={s.windows}", file=sys.stderr)
        elif kind == "lebesgue_table":
            rows, _ = bench.lebesgue_table(sc)
            columns = bench.LEBESGUE_COLUMNS
        elif kind == "coning_run":
            rows, results = bench.coning_run(sc)
            columns = bench.SEQUENCE_COLUMNS
            nonconverged = not all(r.all_converged for r in results)
        elif kind == "freq_sweep":
            rows = bench.freq_sweep(sc, args.jobs)
            columns = bench.SWEEP_COLUMNS
            nonconverged = not all(r["converged"] for r in rows)
        else:
            rows = bench.noise_sweep(sc, args.jobs)
            columns = bench.NOISE_COLUMNS
            nonconverged = not all(r["converged"] for r in rows)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or sc.out
    with _open_out(out) as fh:
        bench.write_csv(columns, rows, fh, header)
    return EXIT_NONCONVERGED if nonconverged else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
