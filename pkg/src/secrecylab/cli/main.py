"""Command-line entry point."""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .. import __version__
from ..config import load_settings
from .handlers import EXIT_INVALID_CONFIG, HANDLERS
from .middleware import LoggingMiddleware

logger = logging.getLogger(__name__)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pb", type=float, help="Bob's BSC crossover probability")
    common.add_argument("--pe", type=float, help="Eve's BSC crossover probability")
    common.add_argument("--N", type=int, default=256, help="block length (power of two)")
    common.add_argument("--mu", type=int, default=64, help="output alphabet budget")
    common.add_argument("--list", type=int, default=16, help="SCL list size")
    common.add_argument("--frames", type=int, help="frames to simulate (simulate: 10000, reproduce: 0)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--scheme", choices=["polar", "pac", "ie"], default="polar")
    common.add_argument("--g", default="133", help="PAC generator polynomial in octal")
    common.add_argument("--out", help="output file or directory")
    common.add_argument("--k", type=int, help="number of message bits")
    common.add_argument("--fer-window", type=float, nargs=2, metavar=("LO", "HI"))
    common.add_argument("--eve-threshold", type=float)
    common.add_argument("--max-unfrozen", type=int)
    common.add_argument("--random-size", type=int)
    common.add_argument("--adaptive", action="store_true", help="stop early once 100 errors are counted")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secrecylab", description="Finite-blocklength wiretap coding lab")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_options()
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("construct", parents=[common], help="bit-channel bounds")
    sub.add_parser("design", parents=[common], help="choose information/random/frozen sets")
    sub.add_parser("bound", parents=[common], help="leakage and semantic-secrecy bounds")

    simulate = sub.add_parser("simulate", parents=[common], help="Monte Carlo FER")
    simulate.add_argument("--ie-b", type=int, help="secret bits per extractor block")
    simulate.add_argument("--ie-t", type=int, default=1, help="extractor payload blocks")

    ie_bound = sub.add_parser("ie-bound", parents=[common], help="extractor bounds")
    ie_bound.add_argument("--nu", type=float, default=0.1, help="Bob FER budget of the extractor code")
    ie_bound.add_argument("--b-over-n", type=float)
    ie_bound.add_argument("--block-fer", type=float, help="FER of one decoded block")
    ie_bound.add_argument("--ie-t", type=int, default=1, help="extractor payload blocks")

    verify = sub.add_parser("verify", parents=[common], help="exhaustive oracle checks")
    verify.add_argument("--full", action="store_true", help="include N=8 instances")

    reproduce = sub.add_parser("reproduce", parents=[common], help="regenerate tables and figures")
    reproduce.add_argument("target", choices=["table1", "table2", "fig3a", "fig3b"])
    reproduce.add_argument("--calibrate", action="store_true", help="calibrate Bob's unfrozen count by simulation")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        settings = load_settings(
            mu=args.mu,
            list_size=args.list,
            generator_octal=args.g,
            workers=args.workers,
            fer_window=tuple(args.fer_window) if args.fer_window else None,
            eve_threshold=args.eve_threshold,
        )
    except ValidationError as exc:
        print(json.dumps({"status": EXIT_INVALID_CONFIG, "error": str(exc), "kind": "ValidationError"}),
              file=sys.stderr)
        return EXIT_INVALID_CONFIG

    handler = HANDLERS[args.command](settings)
    middleware = LoggingMiddleware()
    status, payload = middleware.run(args.command, lambda: handler.execute(args))
    stream = sys.stdout if "error" not in payload else sys.stderr
    print(json.dumps(payload, indent=2, default=str), file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
