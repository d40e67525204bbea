"""The pseudocode order language: ingredients, blocks, parser, printer, expansion.

An order is a small program made of three block kinds:

    PONER <ingrediente>                  (PUT <ingredient>)
    SI HAY <ingrediente> ... SINO ... FIN   (IF HAS ... ELSE ... END)
    REPETIR <n> VECES ... FIN            (REPEAT <n> TIMES ... END)

Keywords are case-insensitive and the Spanish and English forms are accepted
interchangeably. ``#`` starts a comment that runs to end of line.

Expanding an order against an inventory snapshot yields the expected stack:
the exact ingredient sequence a correct burger must contain, with meat marked
as requiring cooking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Union

LANG_ES = "es"
LANG_EN = "en"


class Ingredient(Enum):
    """The closed set of ingredients. Values are the canonical Spanish tokens."""

    BOTTOM_BREAD = "pan_inferior"
    TOP_BREAD = "pan_superior"
    MEAT = "carne"
    CHEESE = "queso"
    LETTUCE = "lechuga"
    KETCHUP = "ketchup"

    @property
    def token_es(self) -> str:
        return self.value

    @property
    def token_en(self) -> str:
        return self.name.lower()

    def token(self, language: str) -> str:
        return self.token_es if language == LANG_ES else self.token_en

    @classmethod
    def from_token(cls, token: str) -> "Ingredient":
        """Resolve a canonical Spanish token or English alias, case-insensitively."""
        ing = _INGREDIENT_TOKENS.get(token.lower())
        if ing is None:
            raise ValueError(f"unknown ingredient: {token!r}")
        return ing


_INGREDIENT_TOKENS: dict[str, Ingredient] = {}
for _ing in Ingredient:
    _INGREDIENT_TOKENS[_ing.token_es] = _ing
    _INGREDIENT_TOKENS[_ing.token_en] = _ing


@dataclass(frozen=True)
class Put:
    ingredient: Ingredient


@dataclass(frozen=True)
class Has:
    """Condition: the referenced ingredient has at least one unit available."""

    ingredient: Ingredient

    def holds(self, snapshot: Mapping[Ingredient, int]) -> bool:
        return snapshot.get(self.ingredient, 0) >= 1


@dataclass(frozen=True)
class If:
    condition: Has
    then_body: tuple["Block", ...] = ()
    else_body: tuple["Block", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "then_body", tuple(self.then_body))
        object.__setattr__(self, "else_body", tuple(self.else_body))


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple["Block", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "body", tuple(self.body))
        if self.count < 0:
            raise ValueError("repeat count must be >= 0")
        if not self.body:
            raise ValueError("repeat body must not be empty")


Block = Union[Put, If, Repeat]


@dataclass(frozen=True)
class OrderAst:
    """A parsed order. ``order_id`` is bookkeeping and excluded from equality."""

    blocks: tuple[Block, ...]
    order_id: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))

    def contains_if(self) -> bool:
        return any(_tree_has(b, If) for b in self.blocks)

    def contains_repeat(self) -> bool:
        return any(_tree_has(b, Repeat) for b in self.blocks)


def _tree_has(block: Block, kind: type) -> bool:
    if isinstance(block, kind):
        return True
    if isinstance(block, If):
        return any(_tree_has(b, kind) for b in block.then_body + block.else_body)
    if isinstance(block, Repeat):
        return any(_tree_has(b, kind) for b in block.body)
    return False


@dataclass(frozen=True)
class ExpectedItem:
    """One layer of the expected stack. Meat must arrive cooked."""

    ingredient: Ingredient
    requires_cooked: bool

    @classmethod
    def of(cls, ingredient: Ingredient) -> "ExpectedItem":
        return cls(ingredient, requires_cooked=ingredient is Ingredient.MEAT)


ExpectedStack = tuple[ExpectedItem, ...]


# ---------------------------------------------------------------------------
# Parsing

KEYWORDS_ES = {
    "put": "PONER",
    "if": "SI",
    "has": "HAY",
    "else": "SINO",
    "repeat": "REPETIR",
    "times": "VECES",
    "end": "FIN",
}
KEYWORDS_EN = {
    "put": "PUT",
    "if": "IF",
    "has": "HAS",
    "else": "ELSE",
    "repeat": "REPEAT",
    "times": "TIMES",
    "end": "END",
}

_KEYWORD_OF_TOKEN = {}
for _kw, _tok in KEYWORDS_ES.items():
    _KEYWORD_OF_TOKEN[_tok] = _kw
for _kw, _tok in KEYWORDS_EN.items():
    _KEYWORD_OF_TOKEN[_tok] = _kw

_INT_RE = re.compile(r"^[0-9]+$")


class ParseError(Exception):
    """Syntax error with source position and the token set that was expected."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += " (expected: " + ", ".join(self.expected) + ")"
        super().__init__(detail)


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int

    @property
    def keyword(self) -> str | None:
        return _KEYWORD_OF_TOKEN.get(self.text.upper())


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        for match in re.finditer(r"\S+", body):
            tokens.append(_Token(match.group(), lineno, match.start() + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], source: str):
        self.tokens = tokens
        self.pos = 0
        # end-of-input position for error reporting
        lines = source.splitlines() or [""]
        self.eof_line = len(lines)
        self.eof_col = len(lines[-1]) + 1

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token | None:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None, expected: tuple[str, ...]) -> ParseError:
        if tok is None:
            return ParseError(message, self.eof_line, self.eof_col, expected)
        return ParseError(message, tok.line, tok.column, expected)

    def parse_order(self) -> tuple[Block, ...]:
        blocks = self.parse_blocks()
        if not blocks:
            raise self.fail("empty order", self.peek(), ("PONER", "SI", "REPETIR"))
        extra = self.peek()
        if extra is not None:
            raise self.fail(
                f"unexpected {extra.text!r}", extra, ("PONER", "SI", "REPETIR")
            )
        return blocks

    def parse_blocks(self) -> tuple[Block, ...]:
        """Zero or more blocks; stops at SINO/FIN or end of input."""
        blocks: list[Block] = []
        while True:
            tok = self.peek()
            if tok is None or tok.keyword in ("else", "end"):
                return tuple(blocks)
            blocks.append(self.parse_block())

    def parse_block(self) -> Block:
        tok = self.next()
        assert tok is not None
        kw = tok.keyword
        if kw == "put":
            return Put(self.parse_ingredient("PONER"))
        if kw == "if":
            return self.parse_if(tok)
        if kw == "repeat":
            return self.parse_repeat(tok)
        raise self.fail(f"unknown token {tok.text!r}", tok, ("PONER", "SI", "REPETIR"))

    def parse_ingredient(self, after: str) -> Ingredient:
        tok = self.next()
        if tok is None:
            raise self.fail(f"missing ingredient after {after}", None, ("<ingredient>",))
        try:
            return Ingredient.from_token(tok.text)
        except ValueError:
            raise self.fail(
                f"{tok.text!r} is not an ingredient", tok, ("<ingredient>",)
            ) from None

    def parse_if(self, opener: _Token) -> If:
        has_tok = self.next()
        if has_tok is None or has_tok.keyword != "has":
            raise self.fail("SI must be followed by HAY", has_tok or opener, ("HAY",))
        condition = Has(self.parse_ingredient("SI HAY"))
        then_body = self.parse_blocks()
        else_body: tuple[Block, ...] = ()
        tok = self.peek()
        if tok is not None and tok.keyword == "else":
            self.next()
            else_body = self.parse_blocks()
        closer = self.next()
        if closer is None or closer.keyword != "end":
            raise self.fail(
                f"SI opened at line {opener.line} is never closed", closer, ("FIN",)
            )
        return If(condition, then_body, else_body)

    def parse_repeat(self, opener: _Token) -> Repeat:
        count_tok = self.next()
        if count_tok is None or not _INT_RE.match(count_tok.text):
            raise self.fail("repeat count must be an integer", count_tok, ("<integer>",))
        count = int(count_tok.text)
        times_tok = self.next()
        if times_tok is None or times_tok.keyword != "times":
            raise self.fail("repeat count must be followed by VECES", times_tok, ("VECES",))
        body = self.parse_blocks()
        if not body:
            raise self.fail(
                "REPETIR body must contain at least one block",
                self.peek(),
                ("PONER", "SI", "REPETIR"),
            )
        closer = self.next()
        if closer is None or closer.keyword != "end":
            raise self.fail(
                f"REPETIR opened at line {opener.line} is never closed", closer, ("FIN",)
            )
        return Repeat(count, body)


def parse(text: str, order_id: str = "") -> OrderAst:
    """Parse order source text into an AST.

    Raises ParseError with line/column and the expected-token set on bad input.
    """
    parser = _Parser(_tokenize(text), text)
    return OrderAst(parser.parse_order(), order_id=order_id)


# ---------------------------------------------------------------------------
# Printing

def render(ast: OrderAst, language: str = LANG_ES) -> str:
    """Canonical source text: one header per line, two-space indents, FIN closers."""
    kw = KEYWORDS_ES if language == LANG_ES else KEYWORDS_EN
    lines: list[str] = []

    def emit(blocks: tuple[Block, ...], depth: int) -> None:
        pad = "  " * depth
        for block in blocks:
            if isinstance(block, Put):
                lines.append(f"{pad}{kw['put']} {block.ingredient.token(language)}")
            elif isinstance(block, If):
                cond = block.condition.ingredient.token(language)
                lines.append(f"{pad}{kw['if']} {kw['has']} {cond}")
                emit(block.then_body, depth + 1)
                if block.else_body:
                    lines.append(f"{pad}{kw['else']}")
                    emit(block.else_body, depth + 1)
                lines.append(f"{pad}{kw['end']}")
            elif isinstance(block, Repeat):
                lines.append(f"{pad}{kw['repeat']} {block.count} {kw['times']}")
                emit(block.body, depth + 1)
                lines.append(f"{pad}{kw['end']}")
            else:
                raise TypeError(f"not a block: {block!r}")

    emit(ast.blocks, 0)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Expansion

def expand(ast: OrderAst, snapshot: Mapping[Ingredient, int]) -> ExpectedStack:
    """Evaluate the order against a frozen inventory snapshot.

    Left-to-right; every condition sees the same snapshot (expansion never
    mutates it), so the result is a pure function of (ast, snapshot).
    """
    items: list[ExpectedItem] = []

    def walk(blocks: tuple[Block, ...]) -> None:
        for block in blocks:
            if isinstance(block, Put):
                items.append(ExpectedItem.of(block.ingredient))
            elif isinstance(block, If):
                walk(block.then_body if block.condition.holds(snapshot) else block.else_body)
            elif isinstance(block, Repeat):
                for _ in range(block.count):
                    walk(block.body)
            else:
                raise TypeError(f"not a block: {block!r}")

    walk(ast.blocks)
    return tuple(items)


def required_counts(stack: ExpectedStack) -> dict[Ingredient, int]:
    """Multiset of ingredients an expected stack consumes."""
    counts: dict[Ingredient, int] = {}
    for item in stack:
        counts[item.ingredient] = counts.get(item.ingredient, 0) + 1
    return counts


def iter_if_nodes(ast: OrderAst) -> Iterator[If]:
    """All If nodes in preorder; the index in this sequence names the node."""

    def walk(blocks: tuple[Block, ...]) -> Iterator[If]:
        for block in blocks:
            if isinstance(block, If):
                yield block
                yield from walk(block.then_body)
                yield from walk(block.else_body)
            elif isinstance(block, Repeat):
                yield from walk(block.body)

    return walk(ast.blocks)


def expand_with_forced_branches(
    ast: OrderAst,
    snapshot: Mapping[Ingredient, int],
    forced: Mapping[int, bool],
) -> ExpectedStack:
    """Expansion where selected If nodes (by preorder index) take a forced branch.

    Indices refer to static tree positions in iter_if_nodes order; an If inside
    a Repeat keeps one index, and every iteration takes the same branch (the
    condition is pure, so this matches plain expansion). Unforced conditions
    evaluate against the snapshot as usual. Used by grading to recognize a
    stack that matches the complementary branch of one If.
    """
    counter = [0]

    def walk(blocks: tuple[Block, ...]) -> list[ExpectedItem]:
        items: list[ExpectedItem] = []
        for block in blocks:
            if isinstance(block, Put):
                items.append(ExpectedItem.of(block.ingredient))
            elif isinstance(block, If):
                index = counter[0]
                counter[0] += 1
                taken = forced.get(index, block.condition.holds(snapshot))
                # walk both bodies so nested Ifs keep stable preorder indices
                then_items = walk(block.then_body)
                else_items = walk(block.else_body)
                items.extend(then_items if taken else else_items)
            elif isinstance(block, Repeat):
                body_items = walk(block.body)
                items.extend(body_items * block.count)
        return items

    return tuple(walk(ast.blocks))


# ---------------------------------------------------------------------------
# JSON interchange

def ast_to_json(ast: OrderAst) -> dict:
    return {"blocks": [_block_to_json(b) for b in ast.blocks]}


def _block_to_json(block: Block) -> dict:
    if isinstance(block, Put):
        return {"put": block.ingredient.token_es}
    if isinstance(block, If):
        return {
            "if": {
                "has": block.condition.ingredient.token_es,
                "then": [_block_to_json(b) for b in block.then_body],
                "else": [_block_to_json(b) for b in block.else_body],
            }
        }
    if isinstance(block, Repeat):
        return {
            "repeat": {
                "count": block.count,
                "body": [_block_to_json(b) for b in block.body],
            }
        }
    raise TypeError(f"not a block: {block!r}")


def ast_from_json(data: Mapping, order_id: str = "") -> OrderAst:
    blocks = data.get("blocks")
    if not isinstance(blocks, list):
        raise ValueError("order JSON must have a 'blocks' list")
    return OrderAst(tuple(_block_from_json(b) for b in blocks), order_id=order_id)


def _block_from_json(data: Mapping) -> Block:
    if not isinstance(data, Mapping):
        raise ValueError(f"block must be an object, got {data!r}")
    if "put" in data:
        return Put(Ingredient.from_token(data["put"]))
    if "if" in data:
        node = data["if"]
        return If(
            Has(Ingredient.from_token(node["has"])),
            tuple(_block_from_json(b) for b in node.get("then", [])),
            tuple(_block_from_json(b) for b in node.get("else", [])),
        )
    if "repeat" in data:
        node = data["repeat"]
        count = node["count"]
        if not isinstance(count, int) or isinstance(count, bool):
            raise ValueError("repeat count must be an integer")
        return Repeat(count, tuple(_block_from_json(b) for b in node["body"]))
    raise ValueError(f"unknown block kind: {sorted(data)!r}")
