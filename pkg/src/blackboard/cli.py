"""Command line entry point.

    blackboard run --config sweep.ini [--master-seed N] [--out DIR] [--jobs N] [--tick-ns N]
    blackboard single --params params.ini --seed N --out DIR
    blackboard validate saves/3.txt
    blackboard replay saves/3.txt changes/

Exit codes: 0 success, 1 invalid config or file, 2 I/O error, 3 generation failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import persistence
from .harness import ConfigError, load_config, run_sweep, run_test
from .model import ModelError
from .netgen import GenerationError, GenerationParams
from .pathsearch import MAX_DEPTH
from .traversal import TICK_NS

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_GENERATION = 0, 1, 2, 3


def _cmd_run(args) -> int:
    config = load_config(
        args.config, master_seed=args.master_seed, out_dir=args.out,
        jobs=args.jobs, tick_ns=args.tick_ns,
    )
    averages = run_sweep(config)
    print(f"{len(averages)} combinations -> {config.out_dir / persistence.FINAL_DATASET}")
    return EXIT_OK


def _cmd_single(args) -> int:
    config = load_config(args.params)
    result = run_test(config.base, 0, 0, args.seed, args.out, tick_ns=args.tick_ns)
    for column, value in result.as_row().items():
        print(f"{column}: {value}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    network = persistence.load_network(args.save_file)
    network.validate()
    if network.shortest_path is not None:
        needed = len(network.containers) // 2
        if not needed <= len(network.shortest_path) <= MAX_DEPTH:
            raise ModelError(
                f"stored path has {len(network.shortest_path)} links, need at least {needed}"
            )
    print(
        f"ok: {len(network.facts)} facts, {len(network.generic_rules)} generic rules, "
        f"{len(network.containers)} containers, {len(network.links)} links"
    )
    return EXIT_OK


def _cmd_replay(args) -> int:
    save = Path(args.save_file)
    network = persistence.load_network(save)
    files = persistence.change_files(args.changes_dir, save.stem)
    records = 0
    for path in files:
        records += persistence.apply_changes(network, path.read_text(encoding="utf-8"))
    network.validate()
    print(f"{len(files)} change files, {records} fact records")
    print(persistence.network_digest(network))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blackboard", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a parameter sweep")
    run.add_argument("--config", required=True)
    run.add_argument("--master-seed", type=int)
    run.add_argument("--out", type=Path)
    run.add_argument("--jobs", type=int)
    run.add_argument("--tick-ns", type=int)
    run.set_defaults(func=_cmd_run)

    single = sub.add_parser("single", help="run one test")
    single.add_argument("--params", required=True)
    single.add_argument("--seed", type=int, required=True)
    single.add_argument("--out", type=Path, required=True)
    single.add_argument("--tick-ns", type=int, default=TICK_NS)
    single.set_defaults(func=_cmd_single)

    validate = sub.add_parser("validate", help="load a save file and check its invariants")
    validate.add_argument("save_file")
    validate.set_defaults(func=_cmd_validate)

    replay = sub.add_parser("replay", help="apply a test's change files and print a digest")
    replay.add_argument("save_file")
    replay.add_argument("changes_dir")
    replay.set_defaults(func=_cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GenerationError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
