"""HTTP endpoints and the WebSocket session."""

import json

import pytest
from fastapi.testclient import TestClient

from cooking_code import __version__
from cooking_code.engine import EngineConfig, InventorySnapshot, travel_cost, LAYOUT_PRESETS
from cooking_code.orders import Ingredient, parse
from cooking_code.server import ServerSettings, create_app
from cooking_code.session import SessionConfig

CHEESE_ORDER = (
    "PONER pan_inferior\nSI HAY queso\n  PONER queso\nFIN\nPONER carne\nPONER pan_superior"
)


@pytest.fixture()
def client():
    settings = ServerSettings(
        session_config=SessionConfig(
            engine=EngineConfig(day_length_ticks=60),
            seed=11,
            orders=(parse(CHEESE_ORDER),),
        ),
        headless=True,
    )
    with TestClient(create_app(settings)) as test_client:
        yield test_client


class TestRest:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body == {"status": "ok", "version": __version__}

    def test_config_echo(self, client):
        body = client.get("/config").json()
        assert body["seed"] == 11
        assert body["engine"]["day_length_ticks"] == 60

    def test_parse_good(self, client):
        body = client.post("/parse", json={"text": "PONER carne"}).json()
        assert body == {"ast": {"blocks": [{"put": "carne"}]}}

    def test_parse_error_carries_position(self, client):
        response = client.post("/parse", json={"text": "PONER piedra"})
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert detail["line"] == 1
        assert detail["column"] == 7
        assert "<ingredient>" in detail["expected"]

    def test_render_both_languages(self, client):
        ast = {"blocks": [{"put": "carne"}]}
        assert client.post("/render", json={"ast": ast}).json()["text"] == "PONER carne"
        english = client.post("/render", json={"ast": ast, "language": "en"}).json()
        assert english["text"] == "PUT meat"

    def test_render_rejects_bad_ast(self, client):
        response = client.post("/render", json={"ast": {"blocks": [{"zap": 1}]}})
        assert response.status_code == 422

    def test_generate_deterministic(self, client):
        payload = {"level": 2, "seed": 77, "count": 4}
        first = client.post("/orders/generate", json=payload).json()
        second = client.post("/orders/generate", json=payload).json()
        assert first == second
        assert len(first["orders"]) == 4
        for row in first["orders"]:
            assert "SI HAY" in row["text"]

    def test_generate_unsatisfiable(self, client):
        response = client.post(
            "/orders/generate",
            json={"level": 1, "seed": 1, "inventory": {"pan_inferior": 1}},
        )
        assert response.status_code == 409

    def test_grade_correct(self, client):
        response = client.post(
            "/grade",
            json={
                "order_text": CHEESE_ORDER,
                "delivered": [
                    {"ingredient": "pan_inferior"},
                    {"ingredient": "queso"},
                    {"ingredient": "carne", "cook_state": "cooked"},
                    {"ingredient": "pan_superior"},
                ],
            },
        )
        body = response.json()
        assert body["category"] == "correct"
        assert body["score_delta"] == 15

    def test_grade_wrong_cook_state(self, client):
        body = client.post(
            "/grade",
            json={
                "order_text": "PONER carne",
                "delivered": [{"ingredient": "carne", "cook_state": "raw"}],
                "language": "en",
            },
        ).json()
        assert body["category"] == "wrong_cook_state"
        assert body["defects"][0]["found"] == "meat:raw"

    def test_grade_needs_exactly_one_order_form(self, client):
        response = client.post("/grade", json={"delivered": []})
        assert response.status_code == 422
        response = client.post(
            "/grade",
            json={
                "order_text": "PONER carne",
                "order_ast": {"blocks": [{"put": "carne"}]},
                "delivered": [],
            },
        )
        assert response.status_code == 422

    def test_layouts_listing(self, client):
        body = client.get("/layouts").json()
        assert set(body) == {"tray_front", "tray_side"}
        assert "tray" in body["tray_front"]["stations"]

    def test_layout_cost_endpoint(self, client):
        visits = ["grill", "plate", "tray"]
        body = client.post(
            "/layout-cost", json={"layout": "tray_front", "visits": visits}
        ).json()
        assert body["cost"] == pytest.approx(
            travel_cost(visits, LAYOUT_PRESETS["tray_front"])
        )

    def test_layout_cost_unknown_station(self, client):
        response = client.post(
            "/layout-cost", json={"layout": "tray_front", "visits": ["sofa"]}
        )
        assert response.status_code == 422

    def test_achievement_catalog(self, client):
        body = client.get("/achievements").json()
        assert len(body["achievements"]) == 7

    def test_profile_404(self, client):
        assert client.get("/profiles/nadie").status_code == 404


def send(ws, payload: dict, expect: int) -> list:
    ws.send_text(json.dumps(payload))
    return [json.loads(ws.receive_text()) for _ in range(expect)]


class TestWebSocket:
    def test_full_session_over_the_wire(self, client):
        with client.websocket_connect("/ws") as ws:
            events = send(ws, {"seq": 1, "type": "join", "player_id": "ana"}, expect=1)
            assert events[0]["type"] == "session_started"
            events = send(ws, {"seq": 2, "type": "start_day"}, expect=2)
            assert [e["type"] for e in events] == ["day_started", "order_issued"]
            assert events[1]["order_text"] == CHEESE_ORDER
            events = send(ws, {"seq": 3, "type": "grab", "ingredient": "queso"}, expect=2)
            assert events[0] == {
                "type": "inventory_update",
                "ingredient": "queso",
                "count": 7,
                "tick": 0,
            }
            events = send(ws, {"seq": 4, "type": "nonsense"}, expect=1)
            assert events[0]["code"] == "bad_request"
            events = send(ws, {"seq": 5, "type": "advance_ticks", "ticks": 100}, expect=1)
            assert events[0]["type"] == "day_summary"
        # the shared store kept the joined profile
        profile = client.get("/profiles/ana").json()
        assert profile["player_id"] == "ana"

    def test_bad_seq_over_the_wire(self, client):
        with client.websocket_connect("/ws") as ws:
            events = send(ws, {"seq": 4, "type": "join"}, expect=1)
            assert events[0]["code"] == "bad_seq"
            events = send(ws, {"seq": 1, "type": "join", "player_id": "b"}, expect=1)
            assert events[0]["type"] == "session_started"

    def test_two_connections_are_independent_sessions(self, client):
        with client.websocket_connect("/ws") as first:
            with client.websocket_connect("/ws") as second:
                a = send(first, {"seq": 1, "type": "join", "player_id": "ana"}, expect=1)
                b = send(second, {"seq": 1, "type": "join", "player_id": "bruno"}, expect=1)
                assert a[0]["player_id"] == "ana"
                assert b[0]["player_id"] == "bruno"


class TestLiveMode:
    def test_clock_advances_without_client_commands(self):
        settings = ServerSettings(
            session_config=SessionConfig(
                engine=EngineConfig(day_length_ticks=20),
                orders=(parse(CHEESE_ORDER),),
            ),
            headless=False,
            tick_interval=0.005,
        )
        with TestClient(create_app(settings)) as live:
            with live.websocket_connect("/ws") as ws:
                send(ws, {"seq": 1, "type": "join", "player_id": "ana"}, expect=1)
                send(ws, {"seq": 2, "type": "start_day"}, expect=2)
                # advance_ticks is for headless sessions; live time is server-driven
                events = send(ws, {"seq": 3, "type": "advance_ticks", "ticks": 5}, expect=1)
                assert events[0]["code"] == "headless_only"
                event = json.loads(ws.receive_text())
                while event["type"] != "day_summary":
                    event = json.loads(ws.receive_text())
                assert event["day_index"] == 0
                assert event["tick"] == 20
