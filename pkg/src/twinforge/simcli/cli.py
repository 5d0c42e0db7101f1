"""Command-line entry point.

Subcommands: map, record, track (the three pipeline stages), replay
(re-run a recorded command log), and serve (live teleop bridge).
State logs are CSV with one row per step and the fixed column order
step,time,x,y,z,yaw,speed,vx,vy,yaw_rate,gear,rpm,throttle,steering,
brake,handbrake[,cross_track]; floats carry 17 significant digits so
repeated runs hash identically. Verbosity comes from the TWINFORGE_LOG
environment variable (DEBUG, INFO, WARNING, ERROR).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .runner import LOG_COLUMNS, replay, run_scenario
from .scenario import ScenarioError, load_scenario

log = logging.getLogger("twinforge")

_MODES = ("gym", "sim", "testbed", "twin")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out", default=None, help="output directory override")
    p.add_argument("--mode", choices=_MODES, default=None,
                   help="operational mode override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinforge",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"state log columns: {LOG_COLUMNS}[,cross_track]")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
            ("map", "drive and build the occupancy map (pipeline stage 1)"),
            ("record", "drive and record a reference trajectory (stage 2)"),
            ("track", "track a recorded trajectory autonomously (stage 3)")):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)

    p = sub.add_parser("replay", help="re-run a recorded command log")
    _add_common(p)
    p.add_argument("--commands", required=True, help="command log CSV")

    p = sub.add_parser("serve", help="run the sim with the WebSocket bridge")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8700)
    p.add_argument("--authority-timeout-ms", type=int, default=500,
                   help="teleop heartbeat timeout before safe stop")
    p.add_argument("--peer", default=None,
                   help="external peer endpoint for testbed/twin modes")
    p.add_argument("--rate", type=float, default=20.0,
                   help="state streaming rate, Hz")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("TWINFORGE_LOG", "WARNING").upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario, out_dir=args.out, mode=args.mode)
        if args.command in ("map", "record", "track"):
            scenario.stage = args.command
            result = run_scenario(scenario)
        elif args.command == "replay":
            scenario.stage = None
            result = replay(args.commands, scenario)
        else:  # serve
            from ..bridge import serve
            serve(scenario, host=args.host, port=args.port,
                  authority_timeout_ms=args.authority_timeout_ms,
                  peer=args.peer, rate_hz=args.rate)
            return 0
        for name, path in result.artifacts.items():
            log.info("artifact %s: %s", name, path)
            print(f"{name}: {path}")
        return result.exit_code
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
