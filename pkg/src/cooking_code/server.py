"""HTTP and WebSocket service around the kitchen.

REST endpoints expose the stateless tools (parsing, rendering, grading,
order generation, layout costing, profile lookup). The WebSocket endpoint
speaks the session protocol: each connection owns one GameSession, frames
carry one JSON object each, and all connections share one profile store.

In live mode the server advances each session's clock on a fixed wall-time
interval; headless mode disables that loop and lets clients drive time with
advance_ticks.
"""

from __future__ import annotations

import asyncio
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel, Field, model_validator

from cooking_code import __version__
from cooking_code.engine import (
    LAYOUT_PRESETS,
    BurgerStack,
    ConfigError,
    CookState,
    InventorySnapshot,
    PlacedItem,
    parse_layout,
    travel_cost,
)
from cooking_code.grading import grade
from cooking_code.orders import (
    Ingredient,
    ParseError,
    ast_from_json,
    ast_to_json,
    parse,
    render,
)
from cooking_code.profiles import FileProfileStore, MemoryProfileStore, ProfileStore
from cooking_code.progression import AchievementCatalog, Unsatisfiable, generate_order
from cooking_code.session import GameSession, SessionConfig, format_event


@dataclass
class ServerSettings:
    session_config: SessionConfig = field(default_factory=SessionConfig)
    data_dir: Optional[Path] = None
    tick_interval: float = 0.1
    headless: bool = False


class ParseBody(BaseModel):
    text: str
    order_id: str = ""


class RenderBody(BaseModel):
    ast: dict
    language: str = "es"


class GenerateBody(BaseModel):
    level: int = Field(ge=1, le=3)
    seed: int = 0
    count: int = Field(default=1, ge=1, le=100)
    inventory: Optional[dict] = None


class DeliveredItem(BaseModel):
    ingredient: str
    cook_state: str = "na"

    @model_validator(mode="before")
    @classmethod
    def _coerce_token(cls, value: object) -> object:
        # Bare token shorthand, same as the CLI delivery format.
        if isinstance(value, str):
            return {"ingredient": value}
        return value


class GradeBody(BaseModel):
    order_text: Optional[str] = None
    order_ast: Optional[dict] = None
    inventory: Optional[dict] = None
    delivered: list[DeliveredItem]
    language: str = "es"


class LayoutCostBody(BaseModel):
    layout: object
    visits: list[str]


def _default_inventory(settings: ServerSettings) -> InventorySnapshot:
    return settings.session_config.engine.initial_inventory


def create_app(settings: Optional[ServerSettings] = None) -> FastAPI:
    settings = settings or ServerSettings()
    app = FastAPI(title="cooking-code", version=__version__)
    store: ProfileStore
    if settings.data_dir is not None:
        store = FileProfileStore(settings.data_dir)
    else:
        store = MemoryProfileStore()
    catalog = AchievementCatalog.load_default()
    app.state.settings = settings
    app.state.store = store
    app.state.catalog = catalog

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/config")
    def config() -> dict:
        # Report the config a WS session will actually run with.
        effective = replace(settings.session_config, headless=settings.headless)
        return effective.to_json()

    @app.get("/layouts")
    def layouts() -> dict:
        return {name: preset.to_json() for name, preset in LAYOUT_PRESETS.items()}

    @app.get("/achievements")
    def achievements() -> dict:
        return {"achievements": [a.to_json() for a in catalog]}

    @app.post("/parse")
    def parse_order(body: ParseBody) -> dict:
        try:
            ast = parse(body.text, order_id=body.order_id)
        except ParseError as exc:
            raise HTTPException(
                status_code=422,
                detail={
                    "message": str(exc),
                    "line": exc.line,
                    "column": exc.column,
                    "expected": list(exc.expected),
                },
            ) from exc
        return {"ast": ast_to_json(ast)}

    @app.post("/render")
    def render_order(body: RenderBody) -> dict:
        try:
            ast = ast_from_json(body.ast)
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if body.language not in ("es", "en"):
            raise HTTPException(status_code=422, detail="language must be 'es' or 'en'")
        return {"text": render(ast, language=body.language)}

    @app.post("/orders/generate")
    def orders_generate(body: GenerateBody) -> dict:
        if body.inventory is not None:
            try:
                snapshot = InventorySnapshot.from_json(body.inventory)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
        else:
            snapshot = _default_inventory(settings)
        rng = random.Random(body.seed)
        orders = []
        try:
            for _ in range(body.count):
                order = generate_order(body.level, snapshot, rng)
                orders.append(
                    {
                        "order_id": order.order_id,
                        "ast": ast_to_json(order),
                        "text": render(order, settings.session_config.language),
                    }
                )
        except Unsatisfiable as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {"orders": orders}

    @app.post("/grade")
    def grade_delivery(body: GradeBody) -> dict:
        if (body.order_text is None) == (body.order_ast is None):
            raise HTTPException(
                status_code=422, detail="provide exactly one of order_text or order_ast"
            )
        try:
            if body.order_text is not None:
                order = parse(body.order_text)
            else:
                order = ast_from_json(body.order_ast)
        except ParseError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if body.inventory is not None:
            snapshot = InventorySnapshot.from_json(body.inventory)
        else:
            snapshot = _default_inventory(settings)
        try:
            items = tuple(
                PlacedItem(
                    Ingredient.from_token(item.ingredient),
                    CookState.from_json(item.cook_state),
                )
                for item in body.delivered
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        report = grade(order, snapshot, BurgerStack(items), language=body.language)
        return report.to_json()

    @app.post("/layout-cost")
    def layout_cost(body: LayoutCostBody) -> dict:
        try:
            layout = parse_layout(body.layout)
            cost = travel_cost(body.visits, layout)
        except (ConfigError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {"layout": layout.name, "cost": cost}

    @app.get("/profiles/{player_id}")
    def get_profile(player_id: str) -> dict:
        profile = store.load(player_id)
        if profile is None:
            raise HTTPException(status_code=404, detail=f"no profile for {player_id!r}")
        return profile.to_json()

    @app.websocket("/ws")
    async def ws_session(websocket: WebSocket) -> None:
        await websocket.accept()
        config = replace(settings.session_config, headless=settings.headless)
        session = GameSession(config, store=store, catalog=catalog)
        lock = asyncio.Lock()

        async def tick_loop() -> None:
            while True:
                await asyncio.sleep(settings.tick_interval)
                async with lock:
                    if not session.engine.day_active:
                        continue
                    events = session.advance_time(1)
                for event in events:
                    await websocket.send_text(format_event(event))

        ticker: Optional[asyncio.Task] = None
        if not settings.headless:
            ticker = asyncio.create_task(tick_loop())
        try:
            while True:
                line = await websocket.receive_text()
                async with lock:
                    events = session.handle_line(line)
                for event in events:
                    await websocket.send_text(format_event(event))
        except WebSocketDisconnect:
            pass
        finally:
            if ticker is not None:
                ticker.cancel()

    return app
