"""Grading delivered burgers against the expanded order.

The verdict is exact-match: the delivered stack must have the same ingredient
sequence as the expansion, with every meat patty cooked (not raw, not burnt).
Anything else is incorrect and earns zero points; the report then classifies
the most instructive defect for the learner. Classification priority, highest
first: wrong cook state, wrong conditional branch, missing ingredient, extra
ingredient, wrong position. A longest-common-subsequence alignment is used
only to point at defect positions, never to award partial credit.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from cooking_code.engine import BurgerStack, CookState, InventorySnapshot, PlacedItem
from cooking_code.orders import (
    ExpectedItem,
    Ingredient,
    OrderAst,
    expand,
    expand_with_forced_branches,
    iter_if_nodes,
)

POINTS_BASE = 10
POINTS_IF_BONUS = 5
POINTS_REPEAT_BONUS = 5
MESSAGE_LIMIT = 120


class GradeCategory(Enum):
    CORRECT = "correct"
    WRONG_COOK_STATE = "wrong_cook_state"
    WRONG_CONDITIONAL_BRANCH = "wrong_conditional_branch"
    MISSING_INGREDIENT = "missing_ingredient"
    EXTRA_INGREDIENT = "extra_ingredient"
    WRONG_POSITION = "wrong_position"


@dataclass(frozen=True)
class Defect:
    """One flaw, positioned for the learner: index is 1-based.

    For missing items the index is the position in the expected stack and
    found is None; for extra items the index is the position in the delivered
    stack and expected is None. Cook-state defects spell the state after a
    colon, e.g. expected "carne:cooked", found "carne:raw".
    """

    index: int
    expected: Optional[str]
    found: Optional[str]

    def to_json(self) -> dict:
        return {"index": self.index, "expected": self.expected, "found": self.found}


@dataclass(frozen=True)
class GradeReport:
    category: GradeCategory
    defects: tuple[Defect, ...] = ()
    message: str = ""
    score_delta: int = 0

    @property
    def is_correct(self) -> bool:
        return self.category is GradeCategory.CORRECT

    def to_json(self) -> dict:
        return {
            "category": self.category.value,
            "defects": [d.to_json() for d in self.defects],
            "message": self.message,
            "score_delta": self.score_delta,
        }


def score_for(order: OrderAst) -> int:
    """Points for a correct delivery: base plus construct bonuses."""
    points = POINTS_BASE
    if order.contains_if():
        points += POINTS_IF_BONUS
    if order.contains_repeat():
        points += POINTS_REPEAT_BONUS
    return points


def _cook_ok(expected: ExpectedItem, placed: PlacedItem) -> bool:
    if expected.requires_cooked:
        return placed.cook_state is CookState.COOKED
    return True


def _ingredients(items: Sequence) -> list[Ingredient]:
    return [item.ingredient for item in items]


def _lcs_pairs(
    expected: Sequence[ExpectedItem], delivered: Sequence[PlacedItem]
) -> list[tuple[int, int]]:
    """Index pairs of a longest common subsequence, matching on ingredient."""
    n, m = len(expected), len(delivered)
    length = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if expected[i].ingredient is delivered[j].ingredient:
                length[i][j] = 1 + length[i + 1][j + 1]
            else:
                length[i][j] = max(length[i + 1][j], length[i][j + 1])
    pairs = []
    i = j = 0
    while i < n and j < m:
        if expected[i].ingredient is delivered[j].ingredient:
            pairs.append((i, j))
            i += 1
            j += 1
        elif length[i + 1][j] >= length[i][j + 1]:
            i += 1
        else:
            j += 1
    return pairs


def _cook_label(ingredient: Ingredient, state: CookState, language: str) -> str:
    return f"{ingredient.token(language)}:{state.value}"


_MESSAGES = {
    "es": {
        GradeCategory.CORRECT: "¡Perfecto! Hamburguesa correcta. +{points}",
        GradeCategory.WRONG_COOK_STATE: "La carne en la posición {index} está {state}, debe estar cocinada.",
        GradeCategory.WRONG_CONDITIONAL_BRANCH: "Revisa SI HAY {ingredient}: seguiste la rama equivocada.",
        GradeCategory.MISSING_INGREDIENT: "Falta {ingredient} en la posición {index}.",
        GradeCategory.EXTRA_INGREDIENT: "Sobra {ingredient} en la posición {index}.",
        GradeCategory.WRONG_POSITION: "Orden incorrecto: en la posición {index} va {ingredient}.",
    },
    "en": {
        GradeCategory.CORRECT: "Perfect! The burger is correct. +{points}",
        GradeCategory.WRONG_COOK_STATE: "The meat at position {index} is {state}; it must be cooked.",
        GradeCategory.WRONG_CONDITIONAL_BRANCH: "Check IF HAS {ingredient}: you followed the wrong branch.",
        GradeCategory.MISSING_INGREDIENT: "Missing {ingredient} at position {index}.",
        GradeCategory.EXTRA_INGREDIENT: "Extra {ingredient} at position {index}.",
        GradeCategory.WRONG_POSITION: "Wrong order: position {index} should be {ingredient}.",
    },
}

_STATE_WORDS = {
    "es": {
        CookState.RAW: "cruda",
        CookState.COOKING: "a medio cocinar",
        CookState.BURNT: "quemada",
        CookState.COOKED: "cocinada",
    },
    "en": {
        CookState.RAW: "raw",
        CookState.COOKING: "half cooked",
        CookState.BURNT: "burnt",
        CookState.COOKED: "cooked",
    },
}


def _message(category: GradeCategory, language: str, **kwargs) -> str:
    table = _MESSAGES.get(language, _MESSAGES["es"])
    text = table[category].format(**kwargs)
    return text[:MESSAGE_LIMIT]


def grade(
    order: OrderAst,
    snapshot: InventorySnapshot,
    delivered: BurgerStack,
    language: str = "es",
) -> GradeReport:
    """Grade one delivery against the order's snapshot-frozen expansion."""
    expected = expand(order, snapshot)
    items = delivered.items
    return _grade_expanded(order, snapshot, expected, items, language)


def _grade_expanded(
    order: OrderAst,
    snapshot: InventorySnapshot,
    expected: Sequence[ExpectedItem],
    items: Sequence[PlacedItem],
    language: str,
) -> GradeReport:
    exp_ings = _ingredients(expected)
    got_ings = _ingredients(items)

    if exp_ings == got_ings:
        cook_defects = [
            Defect(
                index=i + 1,
                expected=_cook_label(expected[i].ingredient, CookState.COOKED, language),
                found=_cook_label(items[i].ingredient, items[i].cook_state, language),
            )
            for i in range(len(items))
            if not _cook_ok(expected[i], items[i])
        ]
        if not cook_defects:
            points = score_for(order)
            return GradeReport(
                category=GradeCategory.CORRECT,
                defects=(),
                message=_message(GradeCategory.CORRECT, language, points=points),
                score_delta=points,
            )
        first = cook_defects[0]
        state = items[first.index - 1].cook_state
        return GradeReport(
            category=GradeCategory.WRONG_COOK_STATE,
            defects=tuple(cook_defects),
            message=_message(
                GradeCategory.WRONG_COOK_STATE,
                language,
                index=first.index,
                state=_STATE_WORDS[language if language in _STATE_WORDS else "es"][state],
            ),
            score_delta=0,
        )

    # sequence differs; check cook state on aligned pairs before shape defects
    pairs = _lcs_pairs(expected, items)
    cook_defects = [
        Defect(
            index=i + 1,
            expected=_cook_label(expected[i].ingredient, CookState.COOKED, language),
            found=_cook_label(items[j].ingredient, items[j].cook_state, language),
        )
        for i, j in pairs
        if not _cook_ok(expected[i], items[j])
    ]
    if cook_defects:
        first = cook_defects[0]
        aligned = dict(pairs)
        state = items[aligned[first.index - 1]].cook_state
        return GradeReport(
            category=GradeCategory.WRONG_COOK_STATE,
            defects=tuple(cook_defects),
            message=_message(
                GradeCategory.WRONG_COOK_STATE,
                language,
                index=first.index,
                state=_STATE_WORDS[language if language in _STATE_WORDS else "es"][state],
            ),
            score_delta=0,
        )

    branch_report = _check_flipped_branch(order, snapshot, got_ings, language, expected, items)
    if branch_report is not None:
        return branch_report

    # category comes from the multiset delta; the LCS only localizes defects.
    # equal multisets with a differing sequence mean misplaced items.
    missing_counter = Counter(exp_ings) - Counter(got_ings)
    extra_counter = Counter(got_ings) - Counter(exp_ings)
    matched_expected = {i for i, _ in pairs}
    matched_delivered = {j for _, j in pairs}
    missing = []
    remaining = Counter(missing_counter)
    for i in range(len(expected)):
        ingredient = expected[i].ingredient
        if i not in matched_expected and remaining[ingredient] > 0:
            remaining[ingredient] -= 1
            missing.append(
                Defect(index=i + 1, expected=ingredient.token(language), found=None)
            )
    extra = []
    remaining = Counter(extra_counter)
    for j in range(len(items)):
        ingredient = items[j].ingredient
        if j not in matched_delivered and remaining[ingredient] > 0:
            remaining[ingredient] -= 1
            extra.append(
                Defect(index=j + 1, expected=None, found=ingredient.token(language))
            )
    if missing_counter:
        first = missing[0]
        return GradeReport(
            category=GradeCategory.MISSING_INGREDIENT,
            defects=tuple(missing),
            message=_message(
                GradeCategory.MISSING_INGREDIENT,
                language,
                ingredient=first.expected,
                index=first.index,
            ),
            score_delta=0,
        )
    if extra_counter:
        first = extra[0]
        return GradeReport(
            category=GradeCategory.EXTRA_INGREDIENT,
            defects=tuple(extra),
            message=_message(
                GradeCategory.EXTRA_INGREDIENT,
                language,
                ingredient=first.found,
                index=first.index,
            ),
            score_delta=0,
        )

    # same multiset, same length, different order
    position_defects = [
        Defect(
            index=i + 1,
            expected=expected[i].ingredient.token(language),
            found=items[i].ingredient.token(language),
        )
        for i in range(len(expected))
        if expected[i].ingredient is not items[i].ingredient
    ]
    first = position_defects[0]
    return GradeReport(
        category=GradeCategory.WRONG_POSITION,
        defects=tuple(position_defects),
        message=_message(
            GradeCategory.WRONG_POSITION,
            language,
            index=first.index,
            ingredient=first.expected,
        ),
        score_delta=0,
    )


def _check_flipped_branch(
    order: OrderAst,
    snapshot: InventorySnapshot,
    got_ings: list[Ingredient],
    language: str,
    expected: Sequence[ExpectedItem],
    items: Sequence[PlacedItem],
) -> Optional[GradeReport]:
    """Detect a delivery that matches the expansion with exactly one If flipped.

    That shape means the learner read the conditional backwards, which is a
    more useful lesson than counting the ingredient delta it causes.
    """
    if_nodes = list(iter_if_nodes(order))
    for k, node in enumerate(if_nodes):
        natural = node.condition.holds(snapshot)
        flipped = expand_with_forced_branches(order, snapshot, {k: not natural})
        if _ingredients(flipped) == got_ings:
            pairs = _lcs_pairs(expected, items)
            matched_expected = {i for i, _ in pairs}
            matched_delivered = {j for _, j in pairs}
            defects = [
                Defect(index=i + 1, expected=expected[i].ingredient.token(language), found=None)
                for i in range(len(expected))
                if i not in matched_expected
            ] + [
                Defect(index=j + 1, expected=None, found=items[j].ingredient.token(language))
                for j in range(len(items))
                if j not in matched_delivered
            ]
            return GradeReport(
                category=GradeCategory.WRONG_CONDITIONAL_BRANCH,
                defects=tuple(defects),
                message=_message(
                    GradeCategory.WRONG_CONDITIONAL_BRANCH,
                    language,
                    ingredient=node.condition.ingredient.token(language),
                ),
                score_delta=0,
            )
    return None
