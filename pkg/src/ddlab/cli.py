"""Command line front end: ``ddlab {classify,spectrum,norm,sweep} --config FILE --out DIR``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .errors import ConfigError
from .scenario import EXIT_ERROR, load_scenario, run_scenario

log = logging.getLogger("ddlab")

VERBS = {"classify": "classify", "spectrum": "spectrum", "norm": "norm_profile", "sweep": "sweep"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ddlab", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb)
        p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for randomized probe inputs (overrides the scenario)")
        p.add_argument("--force", action="store_true",
                       help="run spectrum checks even if the map is not classified compact")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        scenario = load_scenario(args.config)
    except (OSError, ConfigError) as exc:
        log.error("config %s: %s", args.config, exc)
        return EXIT_ERROR
    scenario = dataclasses.replace(scenario, experiment=VERBS[args.verb])
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    if args.verb == "sweep" and not scenario.sweep:
        log.error("config %s: sweep: missing", args.config)
        return EXIT_ERROR
    code = run_scenario(scenario, args.out, force=args.force)
    log.info("%s finished with exit code %d; artifacts in %s", args.verb, code, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
