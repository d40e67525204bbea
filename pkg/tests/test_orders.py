"""Parser, printer, expansion, and JSON interchange for the order language."""

import json
import random

import pytest

from cooking_code.orders import (
    ExpectedItem,
    Has,
    If,
    Ingredient,
    OrderAst,
    ParseError,
    Put,
    Repeat,
    ast_from_json,
    ast_to_json,
    expand,
    expand_with_forced_branches,
    iter_if_nodes,
    parse,
    render,
    required_counts,
)
from support import (
    oracle_expand,
    oracle_forced_expand,
    random_ast,
    random_counts,
    stack_pairs,
    token_counts,
)

CHEESE_ORDER = (
    "PONER pan_inferior\n"
    "SI HAY queso\n"
    "  PONER queso\n"
    "FIN\n"
    "PONER carne\n"
    "PONER pan_superior"
)

DOUBLE_ORDER = (
    "PONER pan_inferior\n"
    "REPETIR 2 VECES\n"
    "  PONER carne\n"
    "FIN\n"
    "PONER pan_superior"
)

FULL_STOCK = {ing: 5 for ing in Ingredient}
NO_CHEESE = {**FULL_STOCK, Ingredient.CHEESE: 0}


class TestParse:
    def test_put_sequence(self):
        ast = parse("PONER pan_inferior\nPONER carne\nPONER pan_superior")
        assert ast == OrderAst(
            (
                Put(Ingredient.BOTTOM_BREAD),
                Put(Ingredient.MEAT),
                Put(Ingredient.TOP_BREAD),
            )
        )

    def test_cheese_conditional(self):
        ast = parse(CHEESE_ORDER)
        assert ast == OrderAst(
            (
                Put(Ingredient.BOTTOM_BREAD),
                If(Has(Ingredient.CHEESE), (Put(Ingredient.CHEESE),), ()),
                Put(Ingredient.MEAT),
                Put(Ingredient.TOP_BREAD),
            )
        )

    def test_double_burger(self):
        ast = parse(DOUBLE_ORDER)
        assert ast == OrderAst(
            (
                Put(Ingredient.BOTTOM_BREAD),
                Repeat(2, (Put(Ingredient.MEAT),)),
                Put(Ingredient.TOP_BREAD),
            )
        )

    def test_english_aliases_match_spanish(self):
        es = parse(CHEESE_ORDER)
        en = parse(
            "PUT bottom_bread\nIF HAS cheese\n  PUT cheese\nEND\nPUT meat\nPUT top_bread"
        )
        assert es == en

    def test_keywords_case_insensitive(self):
        mixed = parse("poner Pan_Inferior\nsi hay QUESO\n  Put cheese\nfin\nPONER pan_superior")
        plain = parse("PONER pan_inferior\nSI HAY queso\n  PONER queso\nFIN\nPONER pan_superior")
        assert mixed == plain

    def test_comments_and_blank_lines_ignored(self):
        text = (
            "# the whole line\n"
            "\n"
            "PONER pan_inferior  # trailing words\n"
            "   \n"
            "PONER pan_superior\n"
        )
        ast = parse(text)
        assert [b.ingredient for b in ast.blocks] == [
            Ingredient.BOTTOM_BREAD,
            Ingredient.TOP_BREAD,
        ]

    def test_else_branch(self):
        ast = parse("SI HAY queso\n  PONER queso\nSINO\n  PONER lechuga\nFIN")
        node = ast.blocks[0]
        assert node.then_body == (Put(Ingredient.CHEESE),)
        assert node.else_body == (Put(Ingredient.LETTUCE),)

    def test_nested_if_inside_repeat(self):
        ast = parse(
            "REPETIR 3 VECES\n"
            "  SI HAY ketchup\n"
            "    PONER ketchup\n"
            "  FIN\n"
            "FIN"
        )
        loop = ast.blocks[0]
        assert isinstance(loop, Repeat) and loop.count == 3
        assert isinstance(loop.body[0], If)

    def test_order_id_excluded_from_equality(self):
        assert parse("PONER carne", order_id="a") == parse("PONER carne", order_id="b")
        assert parse("PONER carne", order_id="a").order_id == "a"

    @pytest.mark.parametrize(
        "text, line, column, expected_token",
        [
            ("PONER piedra", 1, 7, "<ingredient>"),
            ("PONER pan_inferior\nponer nada", 2, 7, "<ingredient>"),
            ("SI queso\n  PONER queso\nFIN", 1, 4, "HAY"),
            ("REPETIR dos VECES\n  PONER carne\nFIN", 1, 9, "<integer>"),
            ("REPETIR 2\n  PONER carne\nFIN", 2, 3, "VECES"),
            ("hacer carne", 1, 1, "PONER"),
        ],
    )
    def test_errors_carry_position_and_expectation(self, text, line, column, expected_token):
        with pytest.raises(ParseError) as excinfo:
            parse(text)
        err = excinfo.value
        assert err.line == line, str(err)
        assert err.column == column, str(err)
        assert expected_token in err.expected

    def test_missing_fin_reported_at_end_of_input(self):
        with pytest.raises(ParseError) as excinfo:
            parse("SI HAY queso\n  PONER queso")
        err = excinfo.value
        assert err.line == 2
        assert "FIN" in err.expected
        assert "never closed" in err.message

    def test_empty_order_rejected(self):
        with pytest.raises(ParseError):
            parse("")
        with pytest.raises(ParseError):
            parse("# only a comment\n\n")

    def test_stray_fin_rejected(self):
        with pytest.raises(ParseError):
            parse("PONER carne\nFIN")

    def test_empty_repeat_body_rejected(self):
        with pytest.raises(ParseError):
            parse("REPETIR 2 VECES\nFIN")


class TestRender:
    def test_spanish_canonical_form(self):
        assert render(parse(CHEESE_ORDER)) == CHEESE_ORDER

    def test_english_form(self):
        ast = parse(DOUBLE_ORDER)
        assert render(ast, "en") == (
            "PUT bottom_bread\nREPEAT 2 TIMES\n  PUT meat\nEND\nPUT top_bread"
        )

    def test_else_and_nesting_indentation(self):
        ast = OrderAst(
            (
                If(
                    Has(Ingredient.CHEESE),
                    (Repeat(2, (Put(Ingredient.CHEESE),)),),
                    (Put(Ingredient.LETTUCE),),
                ),
            )
        )
        assert render(ast) == (
            "SI HAY queso\n"
            "  REPETIR 2 VECES\n"
            "    PONER queso\n"
            "  FIN\n"
            "SINO\n"
            "  PONER lechuga\n"
            "FIN"
        )

    @pytest.mark.parametrize("language", ["es", "en"])
    def test_round_trip_fuzz(self, language):
        rng = random.Random(1301)
        for case in range(300):
            ast = random_ast(rng)
            text = render(ast, language)
            again = parse(text)
            assert again == ast, f"case {case} failed round trip:\n{text}"


class TestExpand:
    def test_cheese_branch_taken_when_in_stock(self):
        stack = expand(parse(CHEESE_ORDER), FULL_STOCK)
        assert stack_pairs(stack) == [
            ("pan_inferior", False),
            ("queso", False),
            ("carne", True),
            ("pan_superior", False),
        ]

    def test_cheese_branch_skipped_when_out_of_stock(self):
        stack = expand(parse(CHEESE_ORDER), NO_CHEESE)
        assert stack_pairs(stack) == [
            ("pan_inferior", False),
            ("carne", True),
            ("pan_superior", False),
        ]

    def test_double_burger_two_cooked_meats(self):
        stack = expand(parse(DOUBLE_ORDER), FULL_STOCK)
        assert stack_pairs(stack) == [
            ("pan_inferior", False),
            ("carne", True),
            ("carne", True),
            ("pan_superior", False),
        ]

    def test_repeat_zero_contributes_nothing(self):
        ast = OrderAst((Repeat(0, (Put(Ingredient.MEAT),)),))
        assert expand(ast, FULL_STOCK) == ()

    def test_only_meat_requires_cooking(self):
        for ing in Ingredient:
            stack = expand(OrderAst((Put(ing),)), FULL_STOCK)
            assert stack[0].requires_cooked is (ing is Ingredient.MEAT)

    def test_condition_threshold_is_one_unit(self):
        ast = parse("SI HAY queso\n  PONER queso\nFIN")
        assert len(expand(ast, {**NO_CHEESE, Ingredient.CHEESE: 1})) == 1
        assert len(expand(ast, NO_CHEESE)) == 0

    def test_fuzz_matches_oracle(self):
        rng = random.Random(2207)
        for case in range(400):
            ast = random_ast(rng)
            counts = random_counts(rng)
            got = stack_pairs(expand(ast, counts))
            want = oracle_expand(ast_to_json(ast)["blocks"], token_counts(counts))
            assert got == want, f"case {case} diverged from oracle"

    def test_conditional_free_orders_ignore_snapshot(self):
        rng = random.Random(733)
        for _ in range(100):
            ast = random_ast(rng, allow_if=False)
            a = expand(ast, random_counts(rng))
            b = expand(ast, random_counts(rng))
            assert a == b

    def test_repeat_algebra(self):
        rng = random.Random(551)
        for _ in range(100):
            body = random_ast(rng).blocks
            count = rng.randint(0, 3)
            counts = random_counts(rng)
            whole = expand(OrderAst((Repeat(count, body) if body else Put(Ingredient.MEAT),)), counts)
            once = expand(OrderAst(body), counts)
            assert whole == once * count

    def test_required_counts(self):
        stack = expand(parse(DOUBLE_ORDER), FULL_STOCK)
        assert required_counts(stack) == {
            Ingredient.BOTTOM_BREAD: 1,
            Ingredient.MEAT: 2,
            Ingredient.TOP_BREAD: 1,
        }


class TestForcedBranches:
    def test_no_forcing_equals_plain_expansion(self):
        rng = random.Random(88)
        for _ in range(200):
            ast = random_ast(rng)
            counts = random_counts(rng)
            assert expand_with_forced_branches(ast, counts, {}) == expand(ast, counts)

    def test_forcing_natural_branches_is_identity(self):
        rng = random.Random(89)
        for _ in range(200):
            ast = random_ast(rng)
            counts = random_counts(rng)
            forced = {
                index: node.condition.holds(counts)
                for index, node in enumerate(iter_if_nodes(ast))
            }
            assert expand_with_forced_branches(ast, counts, forced) == expand(ast, counts)

    def test_fuzz_matches_forced_oracle(self):
        rng = random.Random(90)
        for case in range(300):
            ast = random_ast(rng)
            counts = random_counts(rng)
            if_count = sum(1 for _ in iter_if_nodes(ast))
            forced = {
                index: rng.random() < 0.5
                for index in range(if_count)
                if rng.random() < 0.7
            }
            got = stack_pairs(expand_with_forced_branches(ast, counts, forced))
            want = oracle_forced_expand(
                ast_to_json(ast)["blocks"], token_counts(counts), forced
            )
            assert got == want, f"case {case} diverged from forced oracle"

    def test_if_inside_repeat_keeps_one_index(self):
        # the loop runs twice but contains a single static If node: index 0
        ast = parse(
            "REPETIR 2 VECES\n"
            "  SI HAY queso\n"
            "    PONER queso\n"
            "  SINO\n"
            "    PONER lechuga\n"
            "  FIN\n"
            "FIN"
        )
        assert sum(1 for _ in iter_if_nodes(ast)) == 1
        flipped = expand_with_forced_branches(ast, FULL_STOCK, {0: False})
        assert stack_pairs(flipped) == [("lechuga", False), ("lechuga", False)]


class TestJsonInterchange:
    def test_exact_wire_shape(self):
        data = ast_to_json(parse(CHEESE_ORDER))
        assert data == {
            "blocks": [
                {"put": "pan_inferior"},
                {
                    "if": {
                        "has": "queso",
                        "then": [{"put": "queso"}],
                        "else": [],
                    }
                },
                {"put": "carne"},
                {"put": "pan_superior"},
            ]
        }

    def test_repeat_wire_shape(self):
        data = ast_to_json(parse(DOUBLE_ORDER))
        assert data["blocks"][1] == {
            "repeat": {"count": 2, "body": [{"put": "carne"}]}
        }

    def test_round_trip_fuzz(self):
        rng = random.Random(4040)
        for _ in range(300):
            ast = random_ast(rng)
            blob = json.dumps(ast_to_json(ast))
            again = ast_from_json(json.loads(blob))
            assert again == ast
            # serializing again must give the same bytes
            assert json.dumps(ast_to_json(again)) == blob

    def test_missing_else_key_accepted(self):
        ast = ast_from_json(
            {"blocks": [{"if": {"has": "queso", "then": [{"put": "queso"}]}}]}
        )
        assert ast.blocks[0].else_body == ()

    @pytest.mark.parametrize(
        "payload",
        [
            {"blocks": [{"jump": "queso"}]},
            {"blocks": [{"put": "piedra"}]},
            {"blocks": [{"repeat": {"count": True, "body": [{"put": "carne"}]}}]},
            {"blocks": [{"repeat": {"count": "2", "body": [{"put": "carne"}]}}]},
            {"blocks": "PONER carne"},
        ],
    )
    def test_malformed_json_rejected(self, payload):
        with pytest.raises(ValueError):
            ast_from_json(payload)

    def test_construct_detection(self):
        assert parse(CHEESE_ORDER).contains_if()
        assert not parse(CHEESE_ORDER).contains_repeat()
        assert parse(DOUBLE_ORDER).contains_repeat()
        assert not parse(DOUBLE_ORDER).contains_if()
        nested = parse("REPETIR 2 VECES\n  SI HAY queso\n    PONER queso\n  FIN\nFIN")
        assert nested.contains_if() and nested.contains_repeat()
