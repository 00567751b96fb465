"""Command line entry point: ``tsgraphssl run`` and ``tsgraphssl bench``."""

import argparse
import logging
import sys
from pathlib import Path

from tsgraphssl.harness import (
    bench_distances,
    parse_config,
    run_experiment,
    spec_from_mapping,
    write_results,
)


def _csv_floats(s):
    return [float(v) for v in s.split(",") if v.strip()]


def _csv_ints(s):
    return [int(v) for v in s.split(",") if v.strip()]


def build_parser():
    p = argparse.ArgumentParser(prog="tsgraphssl", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment grid and write a result CSV")
    run.add_argument("--config", type=Path, help="key = value experiment file")
    run.add_argument("--dataset", action="append", default=None,
                     help="UCR file, or directory holding NAME_TRAIN/NAME_TEST (repeatable)")
    run.add_argument("--distance", action="append", default=None,
                     choices=["euclidean", "dtw", "sdtw", "mpdist"])
    run.add_argument("--method", action="append", default=None,
                     choices=["ac", "ls", "gcn", "1nn"])
    run.add_argument("--fractions", type=_csv_floats)
    run.add_argument("--repeats", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--self-tuning-k", type=int, dest="self_tuning_k")
    run.add_argument("--split", choices=["random", "archive"])
    run.add_argument("--cache-dir")
    run.add_argument("--out", default=None)
    run.add_argument("--workers", type=int)
    run.add_argument("--znormalize", action="store_true", default=None,
                     help="z-normalize every series after loading")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="parameter override such as gcn.epochs=200 or sdtw.gamma=0.1")

    bench = sub.add_parser("bench", help="time single-pair distance evaluations")
    bench.add_argument("--lengths", type=_csv_ints, default=[10, 100, 1000])
    bench.add_argument("--repeats", type=int, default=5)
    return p


def _run(args):
    conf = parse_config(args.config.read_text()) if args.config else {"overrides": {}}
    # flags win over file values
    flag_map = {"dataset": "datasets", "distance": "distances", "method": "methods"}
    for flag, key in flag_map.items():
        if getattr(args, flag):
            conf[key] = getattr(args, flag)
    for key in ("fractions", "repeats", "seed", "self_tuning_k", "split",
                "cache_dir", "out", "workers", "znormalize"):
        val = getattr(args, key)
        if val is not None:
            conf[key] = val
    for item in args.set:
        k, _, v = item.partition("=")
        conf["overrides"][k.strip().lower()] = v.strip()
    out = conf.pop("out", None) or "results.csv"
    spec = spec_from_mapping(conf)
    spec.out = out
    results = run_experiment(spec)
    write_results(results, out)
    failed = sum(r.error is not None for r in results)
    print(f"wrote {len(results)} cells to {out}" + (f" ({failed} failed)" if failed else ""))
    return 0


def _bench(args):
    rows = bench_distances(args.lengths, args.repeats)
    print(f"{'measure':<10} {'length':>7} {'median_s':>12}")
    for r in rows:
        print(f"{r['measure']:<10} {r['length']:>7} {r['median_s']:>12.3e}")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return _run(args) if args.command == "run" else _bench(args)


if __name__ == "__main__":
    sys.exit(main())
