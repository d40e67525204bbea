"""Grading: exact-match verdict, defect classification priority, scoring."""

import random

import pytest

from cooking_code.engine import BurgerStack, CookState, InventorySnapshot, PlacedItem
from cooking_code.grading import GradeCategory, GradeReport, grade, score_for
from cooking_code.orders import Ingredient, expand, parse
from support import random_ast, random_counts

CHEESE_ORDER = (
    "PONER pan_inferior\nSI HAY queso\n  PONER queso\nFIN\nPONER carne\nPONER pan_superior"
)
DOUBLE_ORDER = "PONER pan_inferior\nREPETIR 2 VECES\n  PONER carne\nFIN\nPONER pan_superior"

WITH_CHEESE = InventorySnapshot({ing: 5 for ing in Ingredient})
WITHOUT_CHEESE = InventorySnapshot({**{ing: 5 for ing in Ingredient}, Ingredient.CHEESE: 0})

_STATES = {
    "cooked": CookState.COOKED,
    "raw": CookState.RAW,
    "burnt": CookState.BURNT,
    "cooking": CookState.COOKING,
}


def stack(*specs) -> BurgerStack:
    items = []
    for spec in specs:
        if isinstance(spec, tuple):
            token, state = spec
            items.append(PlacedItem(Ingredient.from_token(token), _STATES[state]))
        else:
            items.append(PlacedItem.fresh(Ingredient.from_token(spec)))
    return BurgerStack(tuple(items))


class TestCorrect:
    def test_cheese_branch_taken(self):
        report = grade(
            parse(CHEESE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", "queso", ("carne", "cooked"), "pan_superior"),
        )
        assert report.category is GradeCategory.CORRECT
        assert report.score_delta == 15
        assert report.defects == ()

    def test_cheese_branch_skipped(self):
        report = grade(
            parse(CHEESE_ORDER),
            WITHOUT_CHEESE,
            stack("pan_inferior", ("carne", "cooked"), "pan_superior"),
        )
        assert report.category is GradeCategory.CORRECT
        assert report.score_delta == 15

    def test_double_burger(self):
        report = grade(
            parse(DOUBLE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", ("carne", "cooked"), ("carne", "cooked"), "pan_superior"),
        )
        assert report.category is GradeCategory.CORRECT
        assert report.score_delta == 15

    def test_score_scales_with_constructs(self):
        assert score_for(parse("PONER carne")) == 10
        assert score_for(parse(CHEESE_ORDER)) == 15
        assert score_for(parse(DOUBLE_ORDER)) == 15
        both = parse(
            "PONER pan_inferior\n"
            "SI HAY queso\n  PONER queso\nFIN\n"
            "REPETIR 2 VECES\n  PONER carne\nFIN\n"
            "PONER pan_superior"
        )
        assert score_for(both) == 20

    def test_message_for_learner(self):
        report = grade(parse("PONER lechuga"), WITH_CHEESE, stack("lechuga"), language="en")
        assert report.category is GradeCategory.CORRECT
        assert "correct" in report.message.lower()


class TestWrongCookState:
    def test_raw_meat(self):
        report = grade(
            parse(CHEESE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", "queso", ("carne", "raw"), "pan_superior"),
        )
        assert report.category is GradeCategory.WRONG_COOK_STATE
        assert report.score_delta == 0
        assert report.defects[0].index == 3
        assert report.defects[0].expected == "carne:cooked"
        assert report.defects[0].found == "carne:raw"

    def test_burnt_meat(self):
        report = grade(
            parse("PONER carne"), WITH_CHEESE, stack(("carne", "burnt")), language="en"
        )
        assert report.category is GradeCategory.WRONG_COOK_STATE
        assert report.defects[0].found == "meat:burnt"

    def test_cook_state_outranks_missing(self):
        # one meat short AND the delivered one is raw: the cook defect wins
        report = grade(
            parse(DOUBLE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", ("carne", "raw"), "pan_superior"),
        )
        assert report.category is GradeCategory.WRONG_COOK_STATE

    def test_cook_state_outranks_extra(self):
        report = grade(
            parse("PONER carne"),
            WITH_CHEESE,
            stack(("carne", "raw"), "lechuga"),
        )
        assert report.category is GradeCategory.WRONG_COOK_STATE


class TestWrongConditionalBranch:
    def test_skipping_a_true_branch(self):
        # cheese was in stock; delivering without it matches the flipped branch
        report = grade(
            parse(CHEESE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", ("carne", "cooked"), "pan_superior"),
        )
        assert report.category is GradeCategory.WRONG_CONDITIONAL_BRANCH
        assert report.score_delta == 0
        assert "queso" in report.message

    def test_taking_a_false_branch(self):
        report = grade(
            parse(CHEESE_ORDER),
            WITHOUT_CHEESE,
            stack("pan_inferior", "queso", ("carne", "cooked"), "pan_superior"),
        )
        assert report.category is GradeCategory.WRONG_CONDITIONAL_BRANCH

    def test_else_branch_confusion(self):
        order = parse("SI HAY queso\n  PONER queso\nSINO\n  PONER lechuga\nFIN")
        report = grade(order, WITH_CHEESE, stack("lechuga"))
        assert report.category is GradeCategory.WRONG_CONDITIONAL_BRANCH

    def test_branch_outranks_missing_ingredient(self):
        report = grade(
            parse(CHEESE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", ("carne", "cooked"), "pan_superior"),
        )
        assert report.category is not GradeCategory.MISSING_INGREDIENT


class TestMissingIngredient:
    def test_one_meat_short(self):
        report = grade(
            parse(DOUBLE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", ("carne", "cooked"), "pan_superior"),
        )
        assert report.category is GradeCategory.MISSING_INGREDIENT
        assert len(report.defects) == 1
        defect = report.defects[0]
        assert defect.expected == "carne"
        assert defect.found is None
        assert defect.index == 3

    def test_forgot_the_top(self):
        report = grade(
            parse("PONER pan_inferior\nPONER queso\nPONER pan_superior"),
            WITH_CHEESE,
            stack("pan_inferior", "queso"),
        )
        assert report.category is GradeCategory.MISSING_INGREDIENT
        assert report.defects[0].index == 3
        assert report.defects[0].expected == "pan_superior"

    def test_empty_delivery(self):
        report = grade(parse("PONER queso"), WITH_CHEESE, BurgerStack(()))
        assert report.category is GradeCategory.MISSING_INGREDIENT
        assert report.defects[0].index == 1

    def test_missing_outranks_extra(self):
        # lettuce missing and ketchup added: report the missing one
        report = grade(
            parse("PONER pan_inferior\nPONER lechuga\nPONER pan_superior"),
            WITH_CHEESE,
            stack("pan_inferior", "ketchup", "pan_superior"),
        )
        assert report.category is GradeCategory.MISSING_INGREDIENT


class TestExtraIngredient:
    def test_extra_lettuce(self):
        report = grade(
            parse("PONER pan_inferior\nPONER pan_superior"),
            WITH_CHEESE,
            stack("pan_inferior", "lechuga", "pan_superior"),
        )
        assert report.category is GradeCategory.EXTRA_INGREDIENT
        defect = report.defects[0]
        assert defect.index == 2
        assert defect.expected is None
        assert defect.found == "lechuga"

    def test_doubled_cheese(self):
        report = grade(
            parse("PONER queso"),
            WITH_CHEESE,
            stack("queso", "queso"),
        )
        assert report.category is GradeCategory.EXTRA_INGREDIENT
        assert report.defects[0].index == 2


class TestWrongPosition:
    def test_swapped_middle(self):
        report = grade(
            parse(CHEESE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", ("carne", "cooked"), "queso", "pan_superior"),
        )
        assert report.category is GradeCategory.WRONG_POSITION
        assert {d.index for d in report.defects} == {2, 3}
        first = report.defects[0]
        assert first.expected == "queso"
        assert first.found == "carne"

    def test_inverted_buns(self):
        report = grade(
            parse("PONER pan_inferior\nPONER pan_superior"),
            WITH_CHEESE,
            stack("pan_superior", "pan_inferior"),
        )
        assert report.category is GradeCategory.WRONG_POSITION


class TestReportShape:
    def test_json_wire_format(self):
        report = grade(
            parse(DOUBLE_ORDER),
            WITH_CHEESE,
            stack("pan_inferior", ("carne", "cooked"), "pan_superior"),
        )
        data = report.to_json()
        assert data == {
            "category": "missing_ingredient",
            "defects": [{"index": 3, "expected": "carne", "found": None}],
            "message": data["message"],
            "score_delta": 0,
        }
        assert isinstance(data["message"], str) and data["message"]

    @pytest.mark.parametrize("language", ["es", "en"])
    def test_messages_fit_the_display(self, language):
        rng = random.Random(99)
        for _ in range(200):
            order = random_ast(rng)
            counts = random_counts(rng)
            expected = expand(order, counts)
            items = tuple(
                PlacedItem(
                    item.ingredient,
                    CookState.COOKED if item.requires_cooked else CookState.NOT_APPLICABLE,
                )
                for item in expected
            )
            # mutate half the deliveries so both verdicts appear
            if rng.random() < 0.5 and items:
                drop = rng.randrange(len(items))
                items = items[:drop] + items[drop + 1 :]
            report = grade(order, InventorySnapshot(counts), BurgerStack(items), language)
            assert len(report.message) <= 120
            assert report.score_delta >= 0


class TestProperties:
    def test_exact_expansion_always_correct(self):
        rng = random.Random(7003)
        graded = 0
        for _ in range(300):
            order = random_ast(rng)
            counts = random_counts(rng)
            expected = expand(order, counts)
            if not expected:
                continue
            items = tuple(
                PlacedItem(
                    item.ingredient,
                    CookState.COOKED if item.requires_cooked else CookState.NOT_APPLICABLE,
                )
                for item in expected
            )
            report = grade(order, InventorySnapshot(counts), BurgerStack(items))
            assert report.category is GradeCategory.CORRECT
            assert report.score_delta == score_for(order) >= 10
            graded += 1
        assert graded > 200

    def test_mutated_deliveries_never_correct(self):
        rng = random.Random(7004)
        checked = 0
        for _ in range(300):
            order = random_ast(rng)
            counts = random_counts(rng)
            expected = expand(order, counts)
            if not expected:
                continue
            items = [
                PlacedItem(
                    item.ingredient,
                    CookState.COOKED if item.requires_cooked else CookState.NOT_APPLICABLE,
                )
                for item in expected
            ]
            mutation = rng.choice(("drop", "dup", "swap", "uncook"))
            if mutation == "drop":
                items.pop(rng.randrange(len(items)))
            elif mutation == "dup":
                index = rng.randrange(len(items))
                items.insert(index, items[index])
            elif mutation == "swap":
                pairs = [
                    (a, a + 1)
                    for a in range(len(items) - 1)
                    if items[a].ingredient is not items[a + 1].ingredient
                ]
                if not pairs:
                    continue
                a, b = rng.choice(pairs)
                items[a], items[b] = items[b], items[a]
            else:
                meats = [i for i, item in enumerate(items) if item.ingredient is Ingredient.MEAT]
                if not meats:
                    continue
                index = rng.choice(meats)
                items[index] = PlacedItem(Ingredient.MEAT, CookState.RAW)
            report = grade(order, InventorySnapshot(counts), BurgerStack(tuple(items)))
            assert report.category is not GradeCategory.CORRECT, (
                f"mutation {mutation} slipped through"
            )
            assert report.score_delta == 0
            checked += 1
        assert checked > 200
