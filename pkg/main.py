# Main entry point
#!/usr/bin/env python3
"""
Command line front end for elementary sigma-conjugate certificates over
odd orthogonal and odd unitary groups.

    python main.py random    --group ortho --ring zmod:5 --n 3 --seed 42
    python main.py decompose --group ortho --ring zmod:5 --seed 42 --kind i --i 1 --j 2 --k 1 --l 3
    python main.py verify    cert.json
    python main.py selftest
    python main.py level     --sigma sigma.json
"""

import argparse
import logging
import sys
from typing import List, Optional

from config.config import cfg
from src.cli.commands import EXIT_INPUT, RunConfig, run_command

logger = logging.getLogger(__name__)

COMMANDS = ("random", "decompose", "verify", "selftest", "level")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="main.py", description=__doc__.splitlines()[1])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("path", nargs="?", help="certificate file for verify")
    parser.add_argument("--group", choices=("ortho", "unitary"))
    parser.add_argument("--ring", help="zmod:m or quadext:m:d")
    parser.add_argument("--involution", choices=("id", "conj"))
    parser.add_argument("--lambda", dest="lam", help="coefficients of lambda, e.g. 1 or 1,2")
    parser.add_argument("--mu", help="coefficients of mu")
    parser.add_argument("--n", type=int)
    parser.add_argument("--delta", help="min, max or gens:x/y;...")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--len", dest="length", type=int, help="random word length")
    parser.add_argument("--kind")
    for name in ("i", "j", "k", "l"):
        parser.add_argument(f"--{name}", type=int)
    parser.add_argument("--a", help="J(Delta) parameter for unitary kinds iii, iv, viii")
    parser.add_argument("--sigma", help="element file written by the random command")
    parser.add_argument("--out", help="write JSON here instead of stdout")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--verbose", action="store_true")
    return parser


def run_config(args: argparse.Namespace) -> RunConfig:
    """Flags over environment defaults."""

    def pick(value, default):
        return default if value is None else value

    return RunConfig(
        group=pick(args.group, cfg.group),
        ring=pick(args.ring, cfg.ring),
        involution=pick(args.involution, cfg.involution),
        lam=pick(args.lam, cfg.lam),
        mu=pick(args.mu, cfg.mu),
        n=pick(args.n, cfg.n),
        delta=pick(args.delta, cfg.delta),
        seed=pick(args.seed, cfg.seed),
        length=pick(args.length, cfg.word_length),
        kind=args.kind,
        indices={name: getattr(args, name) for name in ("i", "j", "k", "l")},
        a=args.a,
        out=args.out,
        sigma=args.sigma,
        trials=pick(args.trials, cfg.trials),
        explicit_group=args.group is not None or args.ring is not None,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0

    level = logging.DEBUG if args.verbose else getattr(logging, cfg.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
    )

    if args.command == "verify" and not args.path:
        logger.error("verify needs a certificate path")
        return EXIT_INPUT
    return run_command(args.command, run_config(args), args.path)


if __name__ == "__main__":
    sys.exit(main())
