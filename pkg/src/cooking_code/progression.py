"""Level schedule, random order generation, and achievement tracking.

Levels gate which language constructs appear in generated orders:
level 1 is plain sequences, level 2 adds conditionals, level 3 adds loops.
The schedule is by workday: level = min(3, 1 + day_index // 2).

Generated orders always expand to a well-formed burger under the inventory
snapshot they were generated against: bottom bread first, top bread last,
expanded length between 3 and 7, and every required count available.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional, Sequence

from cooking_code.engine import InventorySnapshot
from cooking_code.grading import GradeReport
from cooking_code.orders import (
    Block,
    If,
    Has,
    Ingredient,
    OrderAst,
    Put,
    Repeat,
    expand,
    required_counts,
)

MIN_EXPANDED_LEN = 3
MAX_EXPANDED_LEN = 7
MAX_LEVEL = 3
GENERATOR_ATTEMPTS = 64

MIDDLE_INGREDIENTS = (
    Ingredient.MEAT,
    Ingredient.CHEESE,
    Ingredient.LETTUCE,
    Ingredient.KETCHUP,
)

KIND_SEQUENTIAL = "sequential"
KIND_CONDITIONAL = "conditional"
KIND_ITERATIVE = "iterative"
KIND_DAY = "day"


class Unsatisfiable(Exception):
    """No valid order exists for this level under the given snapshot."""


def level_for_day(day_index: int) -> int:
    """Two workdays per level, capped at the top level."""
    if day_index < 0:
        raise ValueError("day_index must be >= 0")
    return min(MAX_LEVEL, 1 + day_index // 2)


def order_kind(order: OrderAst) -> str:
    """The most advanced construct in the order decides its kind."""
    if order.contains_repeat():
        return KIND_ITERATIVE
    if order.contains_if():
        return KIND_CONDITIONAL
    return KIND_SEQUENTIAL


def _middle_pool(snapshot: InventorySnapshot) -> list[Ingredient]:
    return [ing for ing in MIDDLE_INGREDIENTS if snapshot[ing] >= 1]


def _scarcest_two(snapshot: InventorySnapshot) -> list[Ingredient]:
    pool = _middle_pool(snapshot)
    pool.sort(key=lambda ing: (snapshot[ing], ing.token_es))
    return pool[:2] if len(pool) >= 2 else pool


def _candidate_blocks(level: int, snapshot: InventorySnapshot, rng: random.Random) -> list[Block]:
    pool = _middle_pool(snapshot)
    if not pool:
        raise Unsatisfiable("no middle ingredients in stock")
    middle: list[Block]
    if level == 1:
        count = rng.randint(1, 5)
        middle = [Put(rng.choice(pool)) for _ in range(count)]
    elif level == 2:
        count = rng.randint(0, 3)
        middle = [Put(rng.choice(pool)) for _ in range(count)]
        condition = rng.choice(_scarcest_two(snapshot))
        then_body: list[Block] = [Put(condition)]
        else_body: list[Block] = []
        if rng.random() < 0.5:
            else_body = [Put(rng.choice(pool))]
        node = If(Has(condition), then_body, else_body)
        middle.insert(rng.randint(0, len(middle)), node)
    else:
        count = rng.randint(0, 2)
        middle = [Put(rng.choice(pool)) for _ in range(count)]
        repeated = rng.choice(pool)
        loop = Repeat(rng.randint(2, 3), [Put(repeated)])
        middle.insert(rng.randint(0, len(middle)), loop)
        if rng.random() < 0.5:
            condition = rng.choice(_scarcest_two(snapshot))
            node = If(Has(condition), [Put(condition)], [])
            middle.insert(rng.randint(0, len(middle)), node)
    return [Put(Ingredient.BOTTOM_BREAD), *middle, Put(Ingredient.TOP_BREAD)]


def _valid(order: OrderAst, snapshot: InventorySnapshot, level: int) -> bool:
    stack = expand(order, snapshot)
    if not (MIN_EXPANDED_LEN <= len(stack) <= MAX_EXPANDED_LEN):
        return False
    if stack[0].ingredient is not Ingredient.BOTTOM_BREAD:
        return False
    if stack[-1].ingredient is not Ingredient.TOP_BREAD:
        return False
    for item in stack[1:-1]:
        if item.ingredient not in MIDDLE_INGREDIENTS:
            return False
    needed = required_counts(stack)
    for ingredient, count in needed.items():
        if count > snapshot[ingredient]:
            return False
    if level == 2 and not order.contains_if():
        return False
    if level == 3 and not order.contains_repeat():
        return False
    return True


def generate_order(
    level: int, snapshot: InventorySnapshot, rng: random.Random
) -> OrderAst:
    """Draw a valid order for the level, or raise Unsatisfiable.

    Deterministic for a given rng state. Construction is rejection-sampled:
    a bounded number of candidates are drawn and the first one whose
    expansion fits the inventory wins.
    """
    if not 1 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be 1..{MAX_LEVEL}, got {level}")
    if snapshot[Ingredient.BOTTOM_BREAD] < 1 or snapshot[Ingredient.TOP_BREAD] < 1:
        raise Unsatisfiable("no bread in stock")
    for _ in range(GENERATOR_ATTEMPTS):
        blocks = _candidate_blocks(level, snapshot, rng)
        order = OrderAst(tuple(blocks), order_id=f"{rng.getrandbits(32):08x}")
        if _valid(order, snapshot, level):
            return order
    raise Unsatisfiable(f"no valid level-{level} order found under this inventory")


# ---------------------------------------------------------------------------
# Achievements

@dataclass(frozen=True)
class AchievementDef:
    id: str
    kind: str
    threshold: int
    title: Mapping[str, str]
    description: Mapping[str, str]

    def text(self, which: str, language: str) -> str:
        table = self.title if which == "title" else self.description
        return table.get(language) or table.get("es") or next(iter(table.values()), "")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "threshold": self.threshold,
            "title": dict(self.title),
            "description": dict(self.description),
        }


class AchievementCatalog:
    def __init__(self, defs: Sequence[AchievementDef]):
        self.defs = tuple(defs)
        self._by_id = {d.id: d for d in self.defs}
        if len(self._by_id) != len(self.defs):
            raise ValueError("duplicate achievement ids")

    def __iter__(self):
        return iter(self.defs)

    def __len__(self) -> int:
        return len(self.defs)

    def get(self, achievement_id: str) -> Optional[AchievementDef]:
        return self._by_id.get(achievement_id)

    @classmethod
    def from_json(cls, data: Mapping) -> "AchievementCatalog":
        defs = []
        for raw in data["achievements"]:
            defs.append(
                AchievementDef(
                    id=str(raw["id"]),
                    kind=str(raw["kind"]),
                    threshold=int(raw["threshold"]),
                    title=dict(raw.get("title", {})),
                    description=dict(raw.get("description", {})),
                )
            )
        return cls(defs)

    @classmethod
    def load_default(cls) -> "AchievementCatalog":
        text = resources.files("cooking_code.data").joinpath("achievements.json").read_text(
            encoding="utf-8"
        )
        return cls.from_json(json.loads(text))


@dataclass
class PlayerStats:
    """Lifetime counters plus the unlock ledger. Mutated in place."""

    orders_delivered: int = 0
    orders_correct: int = 0
    score_total: int = 0
    correct_by_kind: dict = field(
        default_factory=lambda: {
            KIND_SEQUENTIAL: 0,
            KIND_CONDITIONAL: 0,
            KIND_ITERATIVE: 0,
        }
    )
    days_played: int = 0
    perfect_days: int = 0
    today_orders: int = 0
    today_incorrect: int = 0
    unlocked: dict = field(default_factory=dict)  # id -> {"day_index", "tick"}

    def counter_for_kind(self, kind: str) -> int:
        if kind == KIND_DAY:
            return self.perfect_days
        return self.correct_by_kind.get(kind, 0)

    def _check_unlocks(
        self, kind: str, catalog: AchievementCatalog, at: tuple[int, int]
    ) -> list[AchievementDef]:
        newly = []
        value = self.counter_for_kind(kind)
        for achievement in catalog:
            if achievement.kind != kind or achievement.id in self.unlocked:
                continue
            if value >= achievement.threshold:
                self.unlocked[achievement.id] = {"day_index": at[0], "tick": at[1]}
                newly.append(achievement)
        return newly

    def record_grade(
        self,
        order: OrderAst,
        report: GradeReport,
        catalog: AchievementCatalog,
        at: tuple[int, int],
    ) -> list[AchievementDef]:
        """Fold one graded delivery into the counters; returns fresh unlocks."""
        self.orders_delivered += 1
        self.today_orders += 1
        self.score_total += report.score_delta
        if not report.is_correct:
            self.today_incorrect += 1
            return []
        self.orders_correct += 1
        kind = order_kind(order)
        self.correct_by_kind[kind] = self.correct_by_kind.get(kind, 0) + 1
        return self._check_unlocks(kind, catalog, at)

    def record_day_start(self) -> None:
        self.days_played += 1
        self.today_orders = 0
        self.today_incorrect = 0

    def record_day_end(
        self, catalog: AchievementCatalog, at: tuple[int, int]
    ) -> list[AchievementDef]:
        """A day with at least one delivery and no misses counts as perfect."""
        newly: list[AchievementDef] = []
        if self.today_orders >= 1 and self.today_incorrect == 0:
            self.perfect_days += 1
            newly = self._check_unlocks(KIND_DAY, catalog, at)
        self.today_orders = 0
        self.today_incorrect = 0
        return newly

    def to_json(self) -> dict:
        return {
            "orders_delivered": self.orders_delivered,
            "orders_correct": self.orders_correct,
            "score_total": self.score_total,
            "correct_by_kind": dict(self.correct_by_kind),
            "days_played": self.days_played,
            "perfect_days": self.perfect_days,
            "today_orders": self.today_orders,
            "today_incorrect": self.today_incorrect,
            "unlocked": {k: dict(v) for k, v in self.unlocked.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PlayerStats":
        stats = cls()
        stats.orders_delivered = int(data.get("orders_delivered", 0))
        stats.orders_correct = int(data.get("orders_correct", 0))
        stats.score_total = int(data.get("score_total", 0))
        stats.correct_by_kind.update(
            {str(k): int(v) for k, v in data.get("correct_by_kind", {}).items()}
        )
        stats.days_played = int(data.get("days_played", 0))
        stats.perfect_days = int(data.get("perfect_days", 0))
        stats.today_orders = int(data.get("today_orders", 0))
        stats.today_incorrect = int(data.get("today_incorrect", 0))
        stats.unlocked = {
            str(k): {"day_index": int(v["day_index"]), "tick": int(v["tick"])}
            for k, v in data.get("unlocked", {}).items()
        }
        return stats
