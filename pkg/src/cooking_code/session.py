"""One player's game session and its newline-delimited JSON wire protocol.

Clients send one command object per line, sequenced contiguously from 1:

    {"seq": 1, "type": "join", "player_id": "ana"}
    {"seq": 2, "type": "start_day"}
    {"seq": 3, "type": "grab", "ingredient": "queso"}

The session answers every command with zero or more event objects. Events
are plain dicts with a stable key order ("type" first, "tick" last), so a
rerun of the same config, seed, and command stream reproduces the event
stream byte for byte. Clients hold no authority: they render only what the
events say happened.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from cooking_code.engine import (
    ConfigError,
    CookBurnt,
    CookFinished,
    CookProgress,
    CookStarted,
    CookingSound,
    DayEnded,
    EngineConfig,
    EngineEvent,
    GameRuleError,
    InventoryChanged,
    KitchenEngine,
    SmokeVisible,
)
from cooking_code.grading import grade
from cooking_code.orders import (
    Ingredient,
    OrderAst,
    ParseError,
    ast_from_json,
    ast_to_json,
    parse,
    render,
)
from cooking_code.profiles import MemoryProfileStore, Profile, ProfileError, ProfileStore
from cooking_code.progression import (
    AchievementCatalog,
    Unsatisfiable,
    generate_order,
    level_for_day,
)

PROTOCOL_VERSION = 1
LOG_VERSION = 1


@dataclass(frozen=True)
class SessionConfig:
    engine: EngineConfig = field(default_factory=EngineConfig)
    seed: int = 0
    language: str = "es"
    player_id: str = "player-1"
    headless: bool = False
    orders: tuple[OrderAst, ...] = ()

    def to_json(self) -> dict:
        data = {
            "seed": self.seed,
            "language": self.language,
            "player_id": self.player_id,
            "headless": self.headless,
            "engine": self.engine.to_json(),
        }
        if self.orders:
            data["orders"] = [ast_to_json(order) for order in self.orders]
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "SessionConfig":
        if not isinstance(data, Mapping):
            raise ConfigError("session config must be a JSON object")
        language = str(data.get("language", "es"))
        if language not in ("es", "en"):
            raise ConfigError(f"language must be 'es' or 'en', got {language!r}")
        orders = []
        for raw in data.get("orders", []):
            if isinstance(raw, str):
                orders.append(parse(raw))
            else:
                orders.append(ast_from_json(raw))
        return cls(
            engine=EngineConfig.from_json(data.get("engine", {})),
            seed=int(data.get("seed", 0)),
            language=language,
            player_id=str(data.get("player_id", "player-1")),
            headless=bool(data.get("headless", False)),
            orders=tuple(orders),
        )


def load_session_config(path: str | Path) -> SessionConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return SessionConfig.from_json(data)


class GameSession:
    """Applies one client's command stream to a kitchen and narrates events."""

    def __init__(
        self,
        config: SessionConfig,
        store: Optional[ProfileStore] = None,
        catalog: Optional[AchievementCatalog] = None,
    ):
        self.config = config
        self.engine = KitchenEngine(config.engine)
        self.rng = random.Random(config.seed)
        self.store = store if store is not None else MemoryProfileStore()
        self.catalog = catalog if catalog is not None else AchievementCatalog.load_default()
        self.profile: Optional[Profile] = None
        self.expected_seq = 1
        self._scripted = deque(config.orders)

    # -- event shaping ------------------------------------------------------

    @property
    def tick(self) -> int:
        return self.engine.clock.tick

    def _event(self, type_: str, **payload) -> dict:
        out = {"type": type_}
        out.update(payload)
        out["tick"] = self.tick
        return out

    def _error(self, code: str, message: str, seq: Optional[int] = None, **extra) -> dict:
        payload: dict = {"code": code, "message": message}
        payload.update(extra)
        if seq is not None:
            payload["seq"] = seq
        return self._event("error", **payload)

    def _state_update(self) -> dict:
        state = self.engine.state_json()
        return self._event(
            "state_update",
            hand=state["hand"],
            plate=state["plate"],
            grill=state["grill"],
        )

    def _engine_events(self, events: Sequence[EngineEvent]) -> list[dict]:
        out = []
        for event in events:
            if isinstance(event, InventoryChanged):
                out.append(
                    {
                        "type": "inventory_update",
                        "ingredient": event.ingredient.token_es,
                        "count": event.count,
                        "tick": event.tick,
                    }
                )
            elif isinstance(event, CookStarted):
                out.append({"type": "cook_started", "tick": event.tick})
            elif isinstance(event, CookingSound):
                out.append({"type": "cooking_sound", "tick": event.tick})
            elif isinstance(event, CookProgress):
                out.append(
                    {"type": "cook_progress", "fraction": round(event.fraction, 6), "tick": event.tick}
                )
            elif isinstance(event, CookFinished):
                out.append({"type": "cook_finished", "tick": event.tick})
            elif isinstance(event, SmokeVisible):
                out.append({"type": "smoke_visible", "tick": event.tick})
            elif isinstance(event, CookBurnt):
                out.append({"type": "cook_burnt", "tick": event.tick})
            elif isinstance(event, DayEnded):
                out.extend(self._close_day(event))
        return out

    # -- wire entry points --------------------------------------------------

    def handle_line(self, line: str) -> list[dict]:
        line = line.strip()
        if not line:
            return []
        try:
            command = json.loads(line)
        except json.JSONDecodeError:
            return [self._error("bad_request", "line is not valid JSON")]
        return self.handle_command(command)

    def handle_command(self, command) -> list[dict]:
        if not isinstance(command, dict):
            return [self._error("bad_request", "command must be a JSON object")]
        seq = command.get("seq")
        if not isinstance(seq, int) or isinstance(seq, bool):
            return [self._error("bad_request", "command needs an integer 'seq'")]
        if seq != self.expected_seq:
            return [
                self._error(
                    "bad_seq",
                    f"expected seq {self.expected_seq}, got {seq}",
                    seq=seq,
                    expected=self.expected_seq,
                )
            ]
        # the slot is consumed even if the command turns out to be malformed
        self.expected_seq += 1
        type_ = command.get("type")
        if not isinstance(type_, str):
            return [self._error("bad_request", "command needs a string 'type'", seq=seq)]
        try:
            return self._dispatch(type_, command, seq)
        except GameRuleError as exc:
            return [self._error(exc.code, str(exc), seq=seq)]

    def _dispatch(self, type_: str, command: dict, seq: int) -> list[dict]:
        if type_ == "join":
            return self._cmd_join(command, seq)
        if self.profile is None:
            return [self._error("not_joined", "join before sending commands", seq=seq)]
        if type_ == "start_day":
            return self._cmd_start_day()
        if type_ == "end_day":
            return self._cmd_end_day()
        if type_ == "grab":
            return self._cmd_grab(command, seq)
        if type_ == "place":
            events = self.engine.place_on_plate()
            return self._engine_events(events) + [self._state_update()]
        if type_ == "cook":
            events = self.engine.start_cook()
            return self._engine_events(events) + [self._state_update()]
        if type_ == "take":
            events = self.engine.take_from_grill()
            return self._engine_events(events) + [self._state_update()]
        if type_ == "deliver":
            return self._cmd_deliver()
        if type_ == "advance_ticks":
            return self._cmd_advance_ticks(command, seq)
        return [self._error("bad_request", f"unknown command type {type_!r}", seq=seq)]

    # -- commands -----------------------------------------------------------

    def _cmd_join(self, command: dict, seq: int) -> list[dict]:
        player_id = command.get("player_id", self.config.player_id)
        if not isinstance(player_id, str) or not player_id:
            return [self._error("bad_request", "join needs a non-empty 'player_id'", seq=seq)]
        if self.profile is not None and self.profile.player_id != player_id:
            return [
                self._error(
                    "bad_request",
                    f"session already belongs to {self.profile.player_id!r}",
                    seq=seq,
                )
            ]
        if self.profile is None:
            try:
                self.profile = self.store.load_or_create(player_id)
            except ProfileError as exc:
                self.profile = None
                return [self._error("bad_request", f"profile unusable: {exc}", seq=seq)]
            self.store.save(self.profile)
        return [
            self._event(
                "session_started",
                player_id=player_id,
                language=self.config.language,
                protocol_version=PROTOCOL_VERSION,
                stats=self.profile.stats.to_json(),
            )
        ]

    def _cmd_start_day(self) -> list[dict]:
        self.engine.start_day()
        assert self.profile is not None
        self.profile.stats.record_day_start()
        self.store.save(self.profile)
        events = [
            self._event(
                "day_started",
                day_index=self.engine.clock.day_index,
                inventory=self.engine.inventory.current.to_json(),
            )
        ]
        events.extend(self._issue_next_order())
        return events

    def _cmd_end_day(self) -> list[dict]:
        _, engine_events = self.engine.end_day()
        return self._engine_events(engine_events)

    def _cmd_grab(self, command: dict, seq: int) -> list[dict]:
        token = command.get("ingredient")
        if not isinstance(token, str):
            return [self._error("bad_request", "grab needs an 'ingredient'", seq=seq)]
        try:
            ingredient = Ingredient.from_token(token)
        except ValueError:
            return [self._error("bad_request", f"unknown ingredient {token!r}", seq=seq)]
        events = self.engine.grab(ingredient)
        return self._engine_events(events) + [self._state_update()]

    def _cmd_deliver(self) -> list[dict]:
        request = self.engine.deliver()
        report = grade(
            request.order, request.snapshot, request.delivered, language=self.config.language
        )
        self.engine.add_day_score(report.score_delta)
        assert self.profile is not None
        newly = self.profile.stats.record_grade(
            request.order,
            report,
            self.catalog,
            at=(self.engine.clock.day_index, self.tick),
        )
        self.store.save(self.profile)
        events = [
            self._event(
                "grade_result",
                order_id=request.order.order_id,
                report=report.to_json(),
            )
        ]
        events.extend(self._achievement_events(newly))
        events.append(self._state_update())
        events.extend(self._issue_next_order())
        return events

    def _cmd_advance_ticks(self, command: dict, seq: int) -> list[dict]:
        if not self.config.headless:
            return [
                self._error(
                    "headless_only", "advance_ticks works only in headless sessions", seq=seq
                )
            ]
        ticks = command.get("ticks", 1)
        if not isinstance(ticks, int) or isinstance(ticks, bool) or ticks < 1:
            return [self._error("bad_request", "'ticks' must be a positive integer", seq=seq)]
        return self.advance_time(ticks)

    def advance_time(self, ticks: int) -> list[dict]:
        """Drive the clock; used by advance_ticks and by the live server loop."""
        events = self.engine.tick(ticks)
        return self._engine_events(events)

    # -- order issuance and day close ---------------------------------------

    def _issue_next_order(self) -> list[dict]:
        if not self.engine.day_active:
            return []
        if self._scripted:
            order = self._scripted.popleft()
        else:
            level = level_for_day(self.engine.clock.day_index)
            try:
                order = generate_order(level, self.engine.inventory.current, self.rng)
            except Unsatisfiable as exc:
                return [self._error("order_unavailable", str(exc))]
        snapshot = self.engine.issue_order(order)
        return [
            self._event(
                "order_issued",
                order_id=order.order_id,
                order_text=render(order, self.config.language),
                order_ast=ast_to_json(order),
                snapshot=snapshot.to_json(),
            )
        ]

    def _achievement_events(self, newly) -> list[dict]:
        language = self.config.language
        return [
            self._event(
                "achievement_unlocked",
                id=achievement.id,
                title=achievement.text("title", language),
                description=achievement.text("description", language),
            )
            for achievement in newly
        ]

    def _close_day(self, ended: DayEnded) -> list[dict]:
        assert self.profile is not None
        stats = self.engine.last_day_stats
        assert stats is not None and stats.day_index == ended.day_index
        newly = self.profile.stats.record_day_end(
            self.catalog, at=(ended.day_index, ended.tick)
        )
        self.store.save(self.profile)
        events = self._achievement_events(newly)
        events.append(
            self._event(
                "day_summary",
                day_index=stats.day_index,
                orders_completed=stats.orders_completed,
                day_score=stats.day_score,
            )
        )
        return events


# ---------------------------------------------------------------------------
# Session logs: a header line followed by the raw command lines, replayable
# into a byte-identical event stream.

def log_header(config: SessionConfig) -> dict:
    body = {"version": LOG_VERSION, "seed": config.seed, "config": config.to_json()}
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    checksum = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return {"type": "session_log", **body, "checksum": checksum}


class LogError(Exception):
    pass


def parse_log_header(line: str) -> SessionConfig:
    try:
        header = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LogError(f"log header is not valid JSON: {exc}") from exc
    if not isinstance(header, dict) or header.get("type") != "session_log":
        raise LogError("first log line must be a session_log header")
    body = {
        "version": header.get("version"),
        "seed": header.get("seed"),
        "config": header.get("config"),
    }
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    checksum = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    if header.get("checksum") != checksum:
        raise LogError("log header checksum mismatch")
    if header.get("version") != LOG_VERSION:
        raise LogError(f"unsupported log version {header.get('version')!r}")
    return SessionConfig.from_json(header["config"])


def run_command_stream(
    session: GameSession, lines: Sequence[str]
) -> list[dict]:
    events: list[dict] = []
    for line in lines:
        events.extend(session.handle_line(line))
    return events


def format_event(event: dict) -> str:
    """One event per line; key order is preserved, output is byte-stable."""
    return json.dumps(event, ensure_ascii=False, separators=(", ", ": "))
