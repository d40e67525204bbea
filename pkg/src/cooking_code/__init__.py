"""Cooking Code: a headless burger-kitchen game engine and session service.

Orders arrive as small block programs (put / if-has / repeat). The player
assembles burgers in a simulated kitchen with limited ingredients, gets
graded feedback per delivery, and progresses through achievements. All
simulation is deterministic given a config, a seed, and a command script.
"""

__version__ = "0.1.0"

from cooking_code.orders import (
    ExpectedItem,
    If,
    Ingredient,
    OrderAst,
    ParseError,
    Put,
    Repeat,
    expand,
    parse,
    render,
)

__all__ = [
    "ExpectedItem",
    "If",
    "Ingredient",
    "OrderAst",
    "ParseError",
    "Put",
    "Repeat",
    "expand",
    "parse",
    "render",
    "__version__",
]
