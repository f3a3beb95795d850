"""Command line entry point ``cluster``.

Exit codes: 0 success, 2 validation error, 3 input/data error,
4 internal or numeric error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime
from pathlib import Path

from .config import load_config, validate
from .errors import LoadClustError, ValidationError

logger = logging.getLogger("loadclust")


def _print_json(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_validate(args):
    cfg = validate(load_config(args.config, args.override))
    _print_json(cfg.to_dict())
    return 0


def _run(raw):
    from .pipeline import run

    out = run(raw)
    summary = {"run_id": out.run_id, "labels_file": str(out.labels_file),
               "scores_file": str(out.scores_file),
               "report_file": str(out.report_file) if out.report_file else None,
               "k": out.assignment.k, "silhouette": out.validity.silhouette,
               "davies_bouldin": out.validity.davies_bouldin,
               "calinski_harabasz": out.validity.calinski_harabasz}
    if out.sweep is not None:
        summary["suggested_k"] = out.sweep.suggested_k
    _print_json(summary)
    return 0


def cmd_run(args):
    raw = load_config(args.config, args.override)
    if args.output_dir:
        raw["output_dir"] = str(Path(args.output_dir).resolve())
    return _run(raw)


def cmd_sweep(args):
    raw = load_config(args.config, args.override)
    sweep = dict(raw.get("k_sweep") or {})
    if args.k_min is not None:
        sweep["k_min"] = args.k_min
    if args.k_max is not None:
        sweep["k_max"] = args.k_max
    if args.method:
        sweep["method"] = args.method
    raw["k_sweep"] = sweep
    raw.setdefault("cluster", {})["k"] = None
    if args.output_dir:
        raw["output_dir"] = str(Path(args.output_dir).resolve())
    return _run(raw)


def cmd_trajectory(args):
    from .trajectory import label_trajectory

    runs = [p for chunk in args.runs for p in chunk.split(",") if p]
    traj = label_trajectory(runs)
    if args.out:
        from .pipeline import atomic_write, dumps

        atomic_write(args.out, dumps(traj.as_dict()))
    _print_json(traj.as_dict())
    return 0


def cmd_fixture(args):
    from .fixtures import TEMPLATES, generate_fixture

    templates = tuple(args.templates.split(",")) if args.templates else tuple(TEMPLATES)
    fx = generate_fixture(args.per_template, templates, args.noise, args.seed,
                          max_shift=args.max_shift,
                          day=datetime.strptime(args.day, "%Y-%m-%d"))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fx.dataset.to_long_csv(out)
    if args.truth:
        Path(args.truth).write_text(json.dumps(fx.truth, indent=2, sort_keys=True) + "\n",
                                    encoding="utf-8")
    _print_json({"out": str(out), "n_series": fx.dataset.n, "points": fx.dataset.d})
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="cluster", description="Load-profile clustering pipeline")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(sp):
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config field, e.g. cluster.k=5 (repeatable)")

    sp = sub.add_parser("run", help="cluster with a fixed k")
    with_config(sp)
    sp.add_argument("--output-dir")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("sweep", help="cluster over a range of k and suggest one")
    with_config(sp)
    sp.add_argument("--k-min", type=int)
    sp.add_argument("--k-max", type=int)
    sp.add_argument("--method", choices=("elbow", "best_silhouette"))
    sp.add_argument("--output-dir")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="validate a configuration and echo it with defaults")
    with_config(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("trajectory", help="cluster-membership codes across runs")
    sp.add_argument("--runs", required=True, action="append",
                    help="comma-separated run directories or labels files, in order")
    sp.add_argument("--out", help="also write the result to this JSON file")
    sp.set_defaults(func=cmd_trajectory)

    sp = sub.add_parser("fixture", help="write a synthetic long-format CSV")
    sp.add_argument("--out", required=True)
    sp.add_argument("--per-template", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--noise", type=float, default=0.05)
    sp.add_argument("--max-shift", type=int, default=0)
    sp.add_argument("--templates", help="comma-separated template names")
    sp.add_argument("--day", default="2017-01-18")
    sp.add_argument("--truth", help="write label -> template JSON here")
    sp.set_defaults(func=cmd_fixture)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except LoadClustError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001
        logger.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
