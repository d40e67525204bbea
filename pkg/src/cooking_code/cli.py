"""Command line front end.

Every subcommand is a thin client over the library: simulate and replay
drive a session from a command script, the rest expose one tool each.

Exit codes for simulate: 0 the script ran (game-rule rejections included),
1 configuration problems, 2 the script broke the wire protocol, 3 an
unexpected internal failure. validate exits 0 only for a Correct delivery,
4 for any defect, 1 for unparseable input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from cooking_code.engine import (
    LAYOUT_PRESETS,
    BurgerStack,
    ConfigError,
    CookState,
    InventorySnapshot,
    PlacedItem,
    UnknownStationError,
    parse_layout,
    travel_cost,
)
from cooking_code.grading import grade
from cooking_code.orders import Ingredient, ParseError, ast_to_json, parse, render
from cooking_code.profiles import FileProfileStore, MemoryProfileStore
from cooking_code.progression import Unsatisfiable, generate_order
from cooking_code.session import (
    GameSession,
    LogError,
    SessionConfig,
    format_event,
    load_session_config,
    log_header,
    parse_log_header,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SCRIPT = 2
EXIT_PANIC = 3
EXIT_INCORRECT = 4

# error codes that mean the command stream itself is broken
PROTOCOL_ERROR_CODES = {"bad_request", "bad_seq", "not_joined", "headless_only"}


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_config(path: Optional[str]) -> SessionConfig:
    if path is None:
        return SessionConfig()
    return load_session_config(path)


def _apply_overrides(config: SessionConfig, args: argparse.Namespace) -> SessionConfig:
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "lang", None) is not None:
        changes["language"] = args.lang
    if changes:
        config = dataclasses.replace(config, **changes)
    return config


def _read_script(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    return Path(path).read_text(encoding="utf-8").splitlines()


# ---------------------------------------------------------------------------
# simulate / replay

def _run_session(config: SessionConfig, lines: Sequence[str], store) -> tuple[int, list[str]]:
    """Feed the command lines, printing events; returns (exit_code, consumed_lines)."""
    session = GameSession(config, store=store)
    consumed: list[str] = []
    saw_protocol_error = False
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        consumed.append(stripped)
        for event in session.handle_line(stripped):
            print(format_event(event))
            if event.get("type") == "error" and event.get("code") in PROTOCOL_ERROR_CODES:
                saw_protocol_error = True
    return (EXIT_SCRIPT if saw_protocol_error else EXIT_OK), consumed


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = _apply_overrides(_load_config(args.config), args)
        # scripts drive time explicitly, so the session always runs headless
        config = dataclasses.replace(config, headless=True)
        lines = _read_script(args.script)
    except (ConfigError, OSError) as exc:
        return _fail(str(exc), EXIT_CONFIG)
    store = FileProfileStore(args.data_dir) if args.data_dir else MemoryProfileStore()
    try:
        code, consumed = _run_session(config, lines, store)
    except Exception as exc:  # noqa: BLE001 - the contract maps panics to exit 3
        return _fail(f"internal failure: {exc!r}", EXIT_PANIC)
    if args.record:
        try:
            with open(args.record, "w", encoding="utf-8") as handle:
                handle.write(json.dumps(log_header(config), ensure_ascii=False) + "\n")
                for line in consumed:
                    handle.write(line + "\n")
        except OSError as exc:
            return _fail(f"cannot write log: {exc}", EXIT_CONFIG)
    return code


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        lines = Path(args.log).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        return _fail(str(exc), EXIT_CONFIG)
    if not lines:
        return _fail("log file is empty", EXIT_CONFIG)
    try:
        config = parse_log_header(lines[0])
    except (LogError, ConfigError) as exc:
        return _fail(str(exc), EXIT_CONFIG)
    try:
        code, _ = _run_session(config, lines[1:], MemoryProfileStore())
    except Exception as exc:  # noqa: BLE001
        return _fail(f"internal failure: {exc!r}", EXIT_PANIC)
    return code


# ---------------------------------------------------------------------------
# generate-orders

def cmd_generate_orders(args: argparse.Namespace) -> int:
    try:
        config = _apply_overrides(_load_config(args.config), args)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_CONFIG)
    import random

    rng = random.Random(config.seed)
    snapshot = config.engine.initial_inventory
    try:
        orders = [generate_order(args.level, snapshot, rng) for _ in range(args.count)]
    except Unsatisfiable as exc:
        return _fail(str(exc), EXIT_CONFIG)
    for index, order in enumerate(orders):
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "order_id": order.order_id,
                        "ast": ast_to_json(order),
                        "text": render(order, config.language),
                    },
                    ensure_ascii=False,
                )
            )
        else:
            if index:
                print()
            print(render(order, config.language))
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate

def _load_delivery(path: str) -> BurgerStack:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, list):
        raise ValueError("delivery file must be a JSON list")
    items = []
    for entry in data:
        if isinstance(entry, str):
            items.append(PlacedItem.fresh(Ingredient.from_token(entry)))
        elif isinstance(entry, dict):
            items.append(
                PlacedItem(
                    Ingredient.from_token(entry["ingredient"]),
                    CookState.from_json(entry.get("cook_state", "na")),
                )
            )
        else:
            raise ValueError(f"bad delivery entry: {entry!r}")
    return BurgerStack(tuple(items))


def cmd_validate(args: argparse.Namespace) -> int:
    lang = args.lang or "es"
    try:
        order_text = Path(args.order).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(str(exc), EXIT_CONFIG)
    try:
        order = parse(order_text)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        delivered = _load_delivery(args.delivery)
        if args.inventory:
            snapshot = InventorySnapshot.from_json(
                json.loads(Path(args.inventory).read_text(encoding="utf-8"))
            )
        else:
            snapshot = SessionConfig().engine.initial_inventory
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail(str(exc), EXIT_CONFIG)
    report = grade(order, snapshot, delivered, language=lang)
    print(json.dumps(report.to_json(), ensure_ascii=False, indent=2))
    return EXIT_OK if report.is_correct else EXIT_INCORRECT


# ---------------------------------------------------------------------------
# layout-cost

def _load_layout(spec: str):
    if spec in LAYOUT_PRESETS:
        return LAYOUT_PRESETS[spec]
    path = Path(spec)
    if path.exists():
        return parse_layout(json.loads(path.read_text(encoding="utf-8")))
    raise ConfigError(f"layout {spec!r} is neither a preset nor a file")


def _load_visits(path: str) -> list[str]:
    visits = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            visits.append(line)
    return visits


def cmd_layout_cost(args: argparse.Namespace) -> int:
    try:
        layout = _load_layout(args.layout)
        visits = _load_visits(args.visits)
        cost = travel_cost(visits, layout)
    except (ConfigError, UnknownStationError, OSError, json.JSONDecodeError, ValueError) as exc:
        return _fail(str(exc), EXIT_CONFIG)
    print(f"{cost:.4f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve

def cmd_serve(args: argparse.Namespace) -> int:
    try:
        config = _apply_overrides(_load_config(args.config), args)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_CONFIG)
    import uvicorn

    from cooking_code.server import ServerSettings, create_app

    settings = ServerSettings(
        session_config=config,
        data_dir=Path(args.data_dir) if args.data_dir else None,
        tick_interval=args.tick_interval,
        headless=args.headless,
    )
    app = create_app(settings)
    uvicorn.run(app, host=args.host, port=args.port, log_level=args.log_level)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cooking-code",
        description="Burger kitchen that teaches sequences, conditionals, and loops.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="session config JSON file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--lang", choices=("es", "en"), help="override the config language")

    p = sub.add_parser("simulate", help="run a command script against a fresh session")
    add_shared(p)
    p.add_argument("--script", required=True, help="command script file, or - for stdin")
    p.add_argument("--record", help="write a replayable session log to this file")
    p.add_argument("--data-dir", help="persist profiles in this directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", help="re-run a recorded session log")
    p.add_argument("log", help="session log produced by simulate --record")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("generate-orders", help="print randomly generated orders")
    add_shared(p)
    p.add_argument("--level", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_generate_orders)

    p = sub.add_parser("validate", help="grade a delivery against an order script")
    add_shared(p)
    p.add_argument("--order", required=True, help="order script file")
    p.add_argument("--delivery", required=True, help="JSON list of delivered items")
    p.add_argument("--inventory", help="JSON inventory snapshot the order was issued under")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("layout-cost", help="total travel distance over a station visit list")
    p.add_argument("--layout", required=True, help="preset name or layout JSON file")
    p.add_argument("--visits", required=True, help="file with one station name per line")
    p.set_defaults(func=cmd_layout_cost)

    p = sub.add_parser("serve", help="run the HTTP and WebSocket service")
    add_shared(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", help="persist profiles in this directory")
    p.add_argument("--tick-interval", type=float, default=0.1, help="seconds per tick in live mode")
    p.add_argument("--headless", action="store_true", help="no live clock; clients advance time")
    p.add_argument("--log-level", default="warning")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
