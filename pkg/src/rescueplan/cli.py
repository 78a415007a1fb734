"""Command line front end.

Exit codes: 0 success (plan found, goal reached), 1 no plan exists or a
plan failed validation, 2 usage or input errors, 3 a search budget was
exhausted before an answer was proven.
"""

from __future__ import annotations

import argparse
import logging
import os
import socket
import sys

from .errors import EngineError
from .parser import parse_literals
from .planner import (
    DEFAULT_CONFIG,
    PlannerConfig,
    PlanResult,
    STATUS_EXHAUSTED,
    STATUS_KEEP,
    STATUS_PLAN,
    STATUS_UNSOLVABLE,
)
from .session import Session, load_scenario
from .terms import Variable, format_atom, format_program, format_term
from .worldmodel import ingest_site, load_tables
from .actions import format_ground_action

EXIT_OK = 0
EXIT_NO_PLAN = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3


def _require_file(flag: str, path: str) -> None:
    if not os.path.isfile(path):
        raise _InputError(f"{flag}: cannot read {path!r}")


class _InputError(Exception):
    pass


# ==== commands ==============================================================

def cmd_ingest(args) -> int:
    for flag, path in (("--regions", args.regions), ("--roads", args.roads),
                       ("--objects", args.objects)):
        _require_file(flag, path)
    program = ingest_site(*load_tables(args.regions, args.roads, args.objects))
    text = format_program(program)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _open_session(args, apply_events: bool = True) -> Session:
    if not os.path.isdir(args.scenario):
        raise _InputError(f"--scenario: no such directory {args.scenario!r}")
    session = load_scenario(args.scenario)
    if apply_events and getattr(args, "events", None):
        for record in _read_events(args.events):
            session.post_event(record)
    return session


def _read_events(path: str):
    _require_file("--events", path)
    from .worldmodel import parse_events
    with open(path, encoding="utf-8") as fh:
        return sorted(parse_events(fh.read(), path), key=lambda r: r.timestamp)


def _config(args) -> PlannerConfig:
    return PlannerConfig(
        max_depth=args.max_depth,
        max_expansions=args.max_expansions,
        time_budget_ms=args.time_budget_ms)


def _goal_literals(args, session: Session):
    if getattr(args, "goal", None):
        return parse_literals(args.goal, "--goal")
    if session.bundle.default_goal is not None:
        return session.bundle.default_goal
    raise _InputError("no goal: pass --goal or add goal.facts to the bundle")


def cmd_query(args) -> int:
    session = _open_session(args)
    literals = parse_literals(args.query, "--query")
    result = session.query(literals)
    order: list[str] = []
    for lit in literals:
        for term in lit.atom.args:
            if isinstance(term, Variable) and term.name not in order:
                order.append(term.name)
    lines = []
    for answer in result.answers:
        pairs = [f"{v}={format_term(answer.get(v))}" for v in order if answer.get(v)]
        lines.append(", ".join(pairs) if pairs else "true")
    for line in sorted(lines):
        print(line)
    print(f"answers: {len(result.answers)}")
    return EXIT_OK


def _print_plan_result(result: PlanResult) -> int:
    if result.status == STATUS_PLAN:
        steps = result.plan.steps
        print(f"plan: {len(steps)} steps")
        for i, step in enumerate(steps, start=1):
            print(f"{i}. {format_ground_action(step)}")
        code = EXIT_OK
    elif result.status == STATUS_UNSOLVABLE:
        print("unsolvable")
        code = EXIT_NO_PLAN
    else:
        print("exhausted")
        code = EXIT_EXHAUSTED
    s = result.stats
    print(f"stats: expanded={s.expanded} generated={s.generated} "
          f"elapsed_ms={s.elapsed_ms}")
    return code


def cmd_plan(args) -> int:
    session = _open_session(args)
    literals = _goal_literals(args, session)
    return _print_plan_result(session.request_plan(literals, _config(args)))


def cmd_simulate(args) -> int:
    """Tick loop: apply due events, keep the plan honest, run one step."""
    # events feed the loop tick by tick, never the session up front
    session = _open_session(args, apply_events=False)
    literals = _goal_literals(args, session)
    if getattr(args, "events", None):
        pending = list(_read_events(args.events))  # replaces the bundle timeline
    else:
        pending = list(session.bundle.timeline)
    config = _config(args)

    def stuck(t: int, status: str) -> int:
        print(f"STUCK@t={t}")
        return EXIT_NO_PLAN if status == STATUS_UNSOLVABLE else EXIT_EXHAUSTED

    planned = False
    t = 0
    while True:
        while pending and pending[0].timestamp <= t:
            event = pending.pop(0)
            session.post_event(event)
            print(f"EVENT@t={t} {event.op} {format_atom(event.fact)}")
        if not planned:
            result = session.request_plan(literals, config)
            planned = True
            if result.status != STATUS_PLAN:
                return stuck(t, result.status)
        elif session.dirty:
            outcome = session.replan(config)
            if outcome.status == STATUS_PLAN:
                print(f"REPLAN@t={t}")
            elif outcome.status != STATUS_KEEP:
                return stuck(t, outcome.status)
        if not session.remaining_steps:
            print("GOAL_REACHED")
            return EXIT_OK
        step, _, done = session.execute_step()
        print(f"EXEC@t={t} {format_ground_action(step)}")
        if done:
            print("GOAL_REACHED")
            return EXIT_OK
        t += 1


def cmd_serve(args) -> int:
    import uvicorn
    from .service import create_app

    if not os.path.isdir(args.scenario):
        raise _InputError(f"--scenario: no such directory {args.scenario!r}")
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise _InputError(f"--listen: expected HOST:PORT, got {args.listen!r}")
    port = int(port_text)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise _InputError(f"--listen: cannot bind {args.listen!r} ({exc})")
    finally:
        probe.close()

    ui_dir = args.ui
    if ui_dir and not os.path.isdir(ui_dir):
        raise _InputError(f"--ui: no such directory {ui_dir!r}")
    session = load_scenario(args.scenario)
    app = create_app(session, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


# ==== argument wiring =======================================================

def _add_planner_flags(sub) -> None:
    sub.add_argument("--max-depth", type=int, default=DEFAULT_CONFIG.max_depth)
    sub.add_argument("--max-expansions", type=int,
                     default=DEFAULT_CONFIG.max_expansions)
    sub.add_argument("--time-budget-ms", type=int,
                     default=DEFAULT_CONFIG.time_budget_ms)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rescueplan",
        description="Plan rescue resource movements on a damaged road network.")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="turn map CSV tables into a fact file")
    ingest.add_argument("--regions", required=True)
    ingest.add_argument("--roads", required=True)
    ingest.add_argument("--objects", required=True)
    ingest.add_argument("--out", required=True, help="output path, - for stdout")
    ingest.set_defaults(func=cmd_ingest)

    queryp = commands.add_parser("query", help="evaluate a query against a scenario")
    queryp.add_argument("--scenario", required=True)
    queryp.add_argument("--query", required=True)
    queryp.add_argument("--events", help="apply this event file before querying")
    queryp.set_defaults(func=cmd_query)

    planp = commands.add_parser("plan", help="search for a plan")
    planp.add_argument("--scenario", required=True)
    planp.add_argument("--goal")
    planp.add_argument("--events", help="apply this event file before planning")
    _add_planner_flags(planp)
    planp.set_defaults(func=cmd_plan)

    sim = commands.add_parser("simulate",
                              help="run plan execution against the event timeline")
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--goal")
    sim.add_argument("--events", help="override the bundle timeline")
    _add_planner_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    serve = commands.add_parser("serve", help="serve the scenario over HTTP")
    serve.add_argument("--scenario", required=True)
    serve.add_argument("--listen", default="127.0.0.1:8080")
    serve.add_argument("--ui", help="static console directory to serve at /")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
