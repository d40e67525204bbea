"""Shared test helpers: a seeded AST fuzzer and an independent expansion oracle.

The oracle walks the JSON form of an order by direct recursion and shares no
code with the library (loops are unrolled by iterating the body, conditions
are read straight from a token-keyed count dict), so the two implementations
check each other.
"""

from __future__ import annotations

import random

from cooking_code.orders import Has, If, Ingredient, OrderAst, Put, Repeat

INGREDIENTS = tuple(Ingredient)
MEAT_TOKEN = "carne"


def random_block(rng: random.Random, depth: int, allow_if: bool, allow_repeat: bool):
    kinds = ["put", "put"]
    if depth < 2:
        if allow_if:
            kinds.append("if")
        if allow_repeat:
            kinds.append("repeat")
    kind = rng.choice(kinds)
    if kind == "put":
        return Put(rng.choice(INGREDIENTS))
    if kind == "if":
        then_body = (
            random_body(rng, depth + 1, allow_if, allow_repeat, 3)
            if rng.random() < 0.9
            else ()
        )
        else_body = (
            random_body(rng, depth + 1, allow_if, allow_repeat, 3)
            if rng.random() < 0.5
            else ()
        )
        return If(Has(rng.choice(INGREDIENTS)), then_body, else_body)
    return Repeat(rng.randint(0, 3), random_body(rng, depth + 1, allow_if, allow_repeat, 3))


def random_body(rng: random.Random, depth: int, allow_if: bool, allow_repeat: bool, max_len: int):
    return tuple(
        random_block(rng, depth, allow_if, allow_repeat)
        for _ in range(rng.randint(1, max_len))
    )


def random_ast(rng: random.Random, allow_if: bool = True, allow_repeat: bool = True) -> OrderAst:
    return OrderAst(random_body(rng, 0, allow_if, allow_repeat, 4))


def random_counts(rng: random.Random) -> dict[Ingredient, int]:
    return {ing: rng.randint(0, 5) for ing in Ingredient}


def token_counts(counts: dict[Ingredient, int]) -> dict[str, int]:
    return {ing.value: n for ing, n in counts.items()}


def oracle_expand(blocks: list[dict], counts: dict[str, int]) -> list[tuple[str, bool]]:
    """Reference expansion over JSON blocks: (token, requires_cooked) pairs."""
    out: list[tuple[str, bool]] = []
    for block in blocks:
        if "put" in block:
            token = block["put"]
            out.append((token, token == MEAT_TOKEN))
        elif "if" in block:
            node = block["if"]
            if counts.get(node["has"], 0) >= 1:
                out.extend(oracle_expand(node["then"], counts))
            else:
                out.extend(oracle_expand(node.get("else", []), counts))
        elif "repeat" in block:
            node = block["repeat"]
            for _ in range(node["count"]):
                out.extend(oracle_expand(node["body"], counts))
        else:
            raise AssertionError(f"bad block: {block!r}")
    return out


def oracle_forced_expand(
    blocks: list[dict], counts: dict[str, int], forced: dict[int, bool]
) -> list[tuple[str, bool]]:
    """Reference forced expansion; If nodes numbered by static preorder position."""
    counter = [0]

    def walk(blocks: list[dict]) -> list[tuple[str, bool]]:
        out: list[tuple[str, bool]] = []
        for block in blocks:
            if "put" in block:
                token = block["put"]
                out.append((token, token == MEAT_TOKEN))
            elif "if" in block:
                node = block["if"]
                index = counter[0]
                counter[0] += 1
                taken = forced.get(index, counts.get(node["has"], 0) >= 1)
                then_items = walk(node["then"])
                else_items = walk(node.get("else", []))
                out.extend(then_items if taken else else_items)
            elif "repeat" in block:
                node = block["repeat"]
                body = walk(node["body"])
                out.extend(body * node["count"])
            else:
                raise AssertionError(f"bad block: {block!r}")
        return out

    return walk(blocks)


def stack_pairs(stack) -> list[tuple[str, bool]]:
    return [(item.ingredient.value, item.requires_cooked) for item in stack]
