"""Deterministic tick-based kitchen simulation.

One engine instance is one player's kitchen: ingredient containers with
per-day counts, a single grill slot, the plate being assembled, the workday
clock, and the station layout. All mutating calls must be serialized by the
caller (the session service does this); two engines given the same config and
action sequence produce identical event streams.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from cooking_code.orders import Ingredient, OrderAst


# ---------------------------------------------------------------------------
# Errors. Every game-rule violation has a stable wire code; the session maps
# them to error events instead of dropping the connection.

class GameRuleError(Exception):
    code = "game_rule"

    def __init__(self, message: str | None = None):
        super().__init__(message or self.__doc__ or self.code)


class GrabError(GameRuleError):
    code = "grab"


class EmptyContainerError(GrabError):
    """The container for that ingredient is empty."""

    code = "empty_container"


class HandFullError(GrabError):
    """Already holding an item; place it first."""

    code = "hand_full"


class PlaceError(GameRuleError):
    code = "place"


class NothingHeldError(PlaceError):
    """Nothing in hand to place."""

    code = "nothing_held"


class CookError(GameRuleError):
    code = "cook"


class NotMeatError(CookError):
    """Only raw meat goes on the grill."""

    code = "not_meat"


class GrillBusyError(CookError):
    """The grill already holds a patty."""

    code = "grill_busy"


class AlreadyCookedError(CookError):
    """That patty is already cooked."""

    code = "already_cooked"


class GrillEmptyError(CookError):
    """Nothing on the grill."""

    code = "grill_empty"


class DeliverError(GameRuleError):
    code = "deliver"


class NoActiveOrderError(DeliverError):
    """No order is active."""

    code = "no_active_order"


class EmptyStackError(DeliverError):
    """The plate is empty."""

    code = "empty_stack"


class DayNotActiveError(GameRuleError):
    """The workday has ended; start a new day first."""

    code = "day_not_active"


class DayActiveError(GameRuleError):
    """A workday is already running."""

    code = "day_active"


class UnknownStationError(ValueError):
    pass


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Inventory

class InventorySnapshot:
    """Immutable per-ingredient counts. Covers all six ingredients."""

    __slots__ = ("_counts",)

    def __init__(self, counts: Mapping[Ingredient, int]):
        full = {}
        for ing in Ingredient:
            value = int(counts.get(ing, 0))
            if value < 0:
                raise ValueError(f"negative count for {ing.token_es}: {value}")
            full[ing] = value
        self._counts = full

    def __getitem__(self, ingredient: Ingredient) -> int:
        return self._counts[ingredient]

    def get(self, ingredient: Ingredient, default: int = 0) -> int:
        return self._counts.get(ingredient, default)

    def __iter__(self):
        return iter(self._counts)

    def __eq__(self, other) -> bool:
        if isinstance(other, InventorySnapshot):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted((i.value, c) for i, c in self._counts.items())))

    def __repr__(self) -> str:
        inner = ", ".join(f"{i.token_es}={c}" for i, c in self._counts.items())
        return f"InventorySnapshot({inner})"

    def as_dict(self) -> dict[Ingredient, int]:
        return dict(self._counts)

    def to_json(self) -> dict[str, int]:
        return {ing.token_es: self._counts[ing] for ing in Ingredient}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "InventorySnapshot":
        counts = {}
        for token, value in data.items():
            counts[Ingredient.from_token(token)] = value
        return cls(counts)


DEFAULT_INITIAL_INVENTORY = {
    Ingredient.BOTTOM_BREAD: 20,
    Ingredient.TOP_BREAD: 20,
    Ingredient.MEAT: 15,
    Ingredient.CHEESE: 8,
    Ingredient.LETTUCE: 8,
    Ingredient.KETCHUP: 10,
}


class Inventory:
    """Live counts plus the per-day refill configuration.

    Conservation invariant: grabbed_today(i) + current(i) == initial_per_day(i)
    for every ingredient, at every step within a day.
    """

    def __init__(self, initial_per_day: InventorySnapshot):
        self.initial_per_day = initial_per_day
        self._current: dict[Ingredient, int] = initial_per_day.as_dict()
        self._grabbed: dict[Ingredient, int] = {ing: 0 for ing in Ingredient}

    @property
    def current(self) -> InventorySnapshot:
        return InventorySnapshot(self._current)

    def count(self, ingredient: Ingredient) -> int:
        return self._current[ingredient]

    def grabbed_today(self, ingredient: Ingredient) -> int:
        return self._grabbed[ingredient]

    def take(self, ingredient: Ingredient) -> int:
        """Remove one unit; returns the new count."""
        if self._current[ingredient] <= 0:
            raise EmptyContainerError(f"no {ingredient.token_es} left")
        self._current[ingredient] -= 1
        self._grabbed[ingredient] += 1
        return self._current[ingredient]

    def reset_for_new_day(self) -> None:
        self._current = self.initial_per_day.as_dict()
        self._grabbed = {ing: 0 for ing in Ingredient}


# ---------------------------------------------------------------------------
# Cooking and the plate

class CookState(Enum):
    RAW = "raw"
    COOKING = "cooking"
    COOKED = "cooked"
    BURNT = "burnt"
    NOT_APPLICABLE = "na"

    @classmethod
    def from_json(cls, value: str) -> "CookState":
        for state in cls:
            if state.value == value:
                return state
        raise ValueError(f"unknown cook state: {value!r}")


@dataclass(frozen=True)
class PlacedItem:
    """One item in hand or on the plate."""

    ingredient: Ingredient
    cook_state: CookState

    @classmethod
    def fresh(cls, ingredient: Ingredient) -> "PlacedItem":
        state = CookState.RAW if ingredient is Ingredient.MEAT else CookState.NOT_APPLICABLE
        return cls(ingredient, state)

    def to_json(self) -> dict:
        return {"ingredient": self.ingredient.token_es, "cook_state": self.cook_state.value}


@dataclass(frozen=True)
class BurgerStack:
    """A delivered plate: ordered items, frozen at delivery time."""

    items: tuple[PlacedItem, ...]
    delivered: bool = True


class GrillSlot:
    """The single patty on the grill and its cook progress."""

    def __init__(self):
        self.elapsed = 0
        self.state = CookState.COOKING

    def to_json(self) -> dict:
        return {"state": self.state.value, "elapsed": self.elapsed}


# ---------------------------------------------------------------------------
# Clock, layout, config

@dataclass
class WorkdayClock:
    tick: int = 0
    day_length_ticks: int = 300
    day_index: int = -1  # no day started yet


@dataclass(frozen=True)
class LayoutConfig:
    """Station positions in meters on the kitchen table plane."""

    name: str
    stations: Mapping[str, tuple[float, float]]

    def __post_init__(self):
        for station, (x, y) in self.stations.items():
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ConfigError(f"non-finite position for station {station!r}")

    def position(self, station: str) -> tuple[float, float]:
        try:
            return self.stations[station]
        except KeyError:
            raise UnknownStationError(f"unknown station: {station!r}") from None

    def to_json(self) -> dict:
        return {"stations": {name: list(pos) for name, pos in self.stations.items()}}


def container_station(ingredient: Ingredient) -> str:
    return f"container_{ingredient.token_es}"


def _layout(name: str, tray: tuple[float, float]) -> LayoutConfig:
    # One side of the table holds the containers, bread closest to the plate;
    # meat sits next to the grill; plate and ketchup bottle in the center.
    return LayoutConfig(
        name=name,
        stations={
            "plate": (0.0, 0.0),
            "ketchup_station": (0.3, 0.0),
            "order_display": (0.0, 0.9),
            "grill": (1.2, 0.3),
            container_station(Ingredient.BOTTOM_BREAD): (-0.4, 0.0),
            container_station(Ingredient.TOP_BREAD): (-0.4, 0.25),
            container_station(Ingredient.CHEESE): (-0.7, 0.1),
            container_station(Ingredient.LETTUCE): (-0.7, 0.35),
            container_station(Ingredient.KETCHUP): (-1.0, 0.2),
            container_station(Ingredient.MEAT): (0.9, 0.35),
            "tray": tray,
        },
    )


# The two shipped presets differ only in where the serving tray sits:
# directly in front of the assembly area, or off to the side.
LAYOUT_PRESETS = {
    "tray_front": _layout("tray_front", tray=(0.0, 0.5)),
    "tray_side": _layout("tray_side", tray=(1.6, -0.2)),
}


def travel_cost(visits: Sequence[str], layout: LayoutConfig) -> float:
    """Total Euclidean distance over consecutive station visits, starting at the plate."""
    position = layout.position("plate")
    total = 0.0
    for station in visits:
        nxt = layout.position(station)
        total += math.dist(position, nxt)
        position = nxt
    return total


@dataclass(frozen=True)
class EngineConfig:
    day_length_ticks: int = 300
    cook_ticks: int = 10
    burn_ticks: int = 30
    burnt_enabled: bool = True
    initial_inventory: InventorySnapshot = field(
        default_factory=lambda: InventorySnapshot(DEFAULT_INITIAL_INVENTORY)
    )
    layout: LayoutConfig = field(default_factory=lambda: LAYOUT_PRESETS["tray_front"])

    def __post_init__(self):
        if self.day_length_ticks < 1:
            raise ConfigError("day_length_ticks must be positive")
        if self.cook_ticks < 1:
            raise ConfigError("cook_ticks must be positive")
        if self.burn_ticks <= self.cook_ticks:
            raise ConfigError("burn_ticks must exceed cook_ticks")

    def to_json(self) -> dict:
        return {
            "day_length_ticks": self.day_length_ticks,
            "cook_ticks": self.cook_ticks,
            "burn_ticks": self.burn_ticks,
            "burnt_enabled": self.burnt_enabled,
            "initial_inventory": self.initial_inventory.to_json(),
            "layout": self.layout.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EngineConfig":
        kwargs: dict = {}
        if "day_length_ticks" in data:
            kwargs["day_length_ticks"] = int(data["day_length_ticks"])
        if "cook_ticks" in data:
            kwargs["cook_ticks"] = int(data["cook_ticks"])
        if "burn_ticks" in data:
            kwargs["burn_ticks"] = int(data["burn_ticks"])
        if "burnt_enabled" in data:
            kwargs["burnt_enabled"] = bool(data["burnt_enabled"])
        if "initial_inventory" in data:
            kwargs["initial_inventory"] = InventorySnapshot.from_json(data["initial_inventory"])
        if "layout" in data:
            kwargs["layout"] = parse_layout(data["layout"])
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


def parse_layout(spec) -> LayoutConfig:
    """A preset name or an inline {"stations": {...}} object."""
    if isinstance(spec, str):
        try:
            return LAYOUT_PRESETS[spec]
        except KeyError:
            raise ConfigError(f"unknown layout preset: {spec!r}") from None
    if isinstance(spec, Mapping) and "stations" in spec:
        stations = {}
        for name, pos in spec["stations"].items():
            x, y = float(pos[0]), float(pos[1])
            stations[str(name)] = (x, y)
        return LayoutConfig(name=str(spec.get("name", "custom")), stations=stations)
    raise ConfigError("layout must be a preset name or an object with 'stations'")


def load_engine_config(path: str | Path) -> EngineConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return EngineConfig.from_json(data)


# ---------------------------------------------------------------------------
# Events

@dataclass(frozen=True)
class EngineEvent:
    tick: int


@dataclass(frozen=True)
class CookStarted(EngineEvent):
    pass


@dataclass(frozen=True)
class CookingSound(EngineEvent):
    pass


@dataclass(frozen=True)
class CookProgress(EngineEvent):
    fraction: float


@dataclass(frozen=True)
class CookFinished(EngineEvent):
    pass


@dataclass(frozen=True)
class SmokeVisible(EngineEvent):
    pass


@dataclass(frozen=True)
class CookBurnt(EngineEvent):
    pass


@dataclass(frozen=True)
class InventoryChanged(EngineEvent):
    ingredient: Ingredient
    count: int


@dataclass(frozen=True)
class DayEnded(EngineEvent):
    day_index: int


@dataclass(frozen=True)
class DayStats:
    day_index: int
    orders_completed: int
    day_score: int


@dataclass(frozen=True)
class GradeRequest:
    """Handoff to grading: the order, its frozen snapshot, the delivered stack."""

    order: OrderAst
    snapshot: InventorySnapshot
    delivered: BurgerStack


# ---------------------------------------------------------------------------
# The engine

class KitchenEngine:
    """Single-kitchen state machine. Callers serialize mutating operations."""

    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        self.inventory = Inventory(self.config.initial_inventory)
        self.clock = WorkdayClock(day_length_ticks=self.config.day_length_ticks)
        self.hand: Optional[PlacedItem] = None
        self.grill: Optional[GrillSlot] = None
        self.plate: list[PlacedItem] = []
        self.active_order: Optional[OrderAst] = None
        self.order_snapshot: Optional[InventorySnapshot] = None
        self.day_active = False
        self.orders_completed_today = 0
        self.day_score_today = 0
        self.last_day_stats: Optional[DayStats] = None

    # -- day lifecycle ------------------------------------------------------

    def start_day(self) -> None:
        """Refill containers, clear plate/grill/hand, advance the day index."""
        if self.day_active:
            raise DayActiveError()
        self.inventory.reset_for_new_day()
        self.clock.tick = 0
        self.clock.day_index += 1
        self.plate.clear()
        self.grill = None
        self.hand = None
        self.active_order = None
        self.order_snapshot = None
        self.orders_completed_today = 0
        self.day_score_today = 0
        self.day_active = True

    def end_day(self) -> tuple[DayStats, list[EngineEvent]]:
        if not self.day_active:
            raise DayNotActiveError()
        return self._finish_day()

    def _finish_day(self) -> tuple[DayStats, list[EngineEvent]]:
        stats = DayStats(
            day_index=self.clock.day_index,
            orders_completed=self.orders_completed_today,
            day_score=self.day_score_today,
        )
        self.last_day_stats = stats
        self.day_active = False
        # the unfinished order (if any) dies with the day; its snapshot is stale
        self.active_order = None
        self.order_snapshot = None
        return stats, [DayEnded(tick=self.clock.tick, day_index=stats.day_index)]

    def _require_day(self) -> None:
        if not self.day_active:
            raise DayNotActiveError()

    # -- orders -------------------------------------------------------------

    def issue_order(self, order: OrderAst) -> InventorySnapshot:
        """Make the order active, freezing the inventory snapshot it is graded against."""
        self._require_day()
        self.active_order = order
        self.order_snapshot = self.inventory.current
        return self.order_snapshot

    # -- interactions -------------------------------------------------------

    def grab(self, ingredient: Ingredient) -> list[EngineEvent]:
        self._require_day()
        if self.hand is not None:
            raise HandFullError()
        count = self.inventory.take(ingredient)
        self.hand = PlacedItem.fresh(ingredient)
        return [InventoryChanged(tick=self.clock.tick, ingredient=ingredient, count=count)]

    def place_on_plate(self) -> list[EngineEvent]:
        self._require_day()
        if self.hand is None:
            raise NothingHeldError()
        self.plate.append(self.hand)
        self.hand = None
        return []

    def start_cook(self) -> list[EngineEvent]:
        self._require_day()
        if self.hand is None or self.hand.ingredient is not Ingredient.MEAT:
            raise NotMeatError()
        if self.hand.cook_state in (CookState.COOKED, CookState.BURNT):
            raise AlreadyCookedError()
        if self.grill is not None:
            raise GrillBusyError()
        self.grill = GrillSlot()
        self.hand = None
        return [
            CookStarted(tick=self.clock.tick),
            CookingSound(tick=self.clock.tick),
        ]

    def take_from_grill(self) -> list[EngineEvent]:
        self._require_day()
        if self.grill is None:
            raise GrillEmptyError()
        if self.hand is not None:
            raise HandFullError()
        state = self.grill.state
        # pulling the patty early discards partial progress
        if state is CookState.COOKING:
            state = CookState.RAW
        self.hand = PlacedItem(Ingredient.MEAT, state)
        self.grill = None
        return []

    def deliver(self) -> GradeRequest:
        self._require_day()
        if self.active_order is None or self.order_snapshot is None:
            raise NoActiveOrderError()
        if not self.plate:
            raise EmptyStackError()
        request = GradeRequest(
            order=self.active_order,
            snapshot=self.order_snapshot,
            delivered=BurgerStack(items=tuple(self.plate), delivered=True),
        )
        self.plate.clear()
        self.active_order = None
        self.order_snapshot = None
        self.orders_completed_today += 1
        return request

    def add_day_score(self, points: int) -> None:
        self.day_score_today += points

    # -- time ---------------------------------------------------------------

    def tick(self, n: int) -> list[EngineEvent]:
        """Advance the clock n ticks (n >= 1), driving cooking and the day boundary.

        Ticks past the end of the day are discarded; the day must be restarted
        explicitly. One CookProgress event is emitted per call while a patty
        is still cooking.
        """
        if n < 1:
            raise ValueError("tick count must be >= 1")
        self._require_day()
        events: list[EngineEvent] = []
        for _ in range(n):
            self.clock.tick += 1
            now = self.clock.tick
            if self.grill is not None and self.grill.state is CookState.COOKING:
                self.grill.elapsed += 1
                if self.grill.elapsed == self.config.cook_ticks:
                    self.grill.state = CookState.COOKED
                    events.append(CookFinished(tick=now))
                    events.append(SmokeVisible(tick=now))
            elif self.grill is not None and self.grill.state is CookState.COOKED:
                self.grill.elapsed += 1
                if self.config.burnt_enabled and self.grill.elapsed == self.config.burn_ticks:
                    self.grill.state = CookState.BURNT
                    events.append(CookBurnt(tick=now))
            if now >= self.clock.day_length_ticks:
                _, day_events = self._finish_day()
                events.extend(day_events)
                break
        if self.day_active and self.grill is not None and self.grill.state is CookState.COOKING:
            fraction = min(1.0, self.grill.elapsed / self.config.cook_ticks)
            events.append(CookProgress(tick=self.clock.tick, fraction=fraction))
        return events

    # -- introspection ------------------------------------------------------

    def state_json(self) -> dict:
        """Kitchen state snapshot for clients; field order is stable."""
        return {
            "hand": self.hand.to_json() if self.hand else None,
            "plate": [item.to_json() for item in self.plate],
            "grill": self.grill.to_json() if self.grill else None,
            "day_active": self.day_active,
            "day_index": self.clock.day_index,
            "tick": self.clock.tick,
        }


def check_conservation(engine: KitchenEngine) -> bool:
    """grabbed_today + current == initial_per_day for every ingredient."""
    inv = engine.inventory
    return all(
        inv.grabbed_today(ing) + inv.count(ing) == inv.initial_per_day[ing]
        for ing in Ingredient
    )
