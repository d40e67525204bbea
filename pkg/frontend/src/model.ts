// Pure view model.  State is derived solely from server events plus local
// hover, never from what the client sent: the server is the only authority.

import {
  OrderAst,
  PlacedItem,
  PlayerStatsJson,
  ServerEvent,
} from "./protocol.js";

export type GrillView =
  | { occupied: false }
  | { occupied: true; item: PlacedItem; fraction: number; smoke: boolean };

export interface TvView {
  message: string;
  messageTone: "neutral" | "good" | "bad";
  dayScore: number;
  xp: number;
}

export interface OrderView {
  orderId: string;
  text: string;
  ast: OrderAst;
}

export interface Toast {
  text: string;
  tone: "error" | "info" | "achievement";
}

export interface KitchenView {
  connected: boolean;
  playerId: string;
  language: "es" | "en";
  dayIndex: number | null;
  dayActive: boolean;
  tick: number;
  dayLengthTicks: number;
  inventory: Record<string, number>;
  hand: PlacedItem | null;
  plate: PlacedItem[];
  grill: GrillView;
  order: OrderView | null;
  tv: TvView;
  stats: PlayerStatsJson | null;
  toasts: Toast[];
  // Count of events applied, handy for tests and debug overlays.
  eventCount: number;
}

export function initialView(language: "es" | "en" = "es"): KitchenView {
  return {
    connected: false,
    playerId: "",
    language,
    dayIndex: null,
    dayActive: false,
    tick: 0,
    dayLengthTicks: 300,
    inventory: {},
    hand: null,
    plate: [],
    grill: { occupied: false },
    order: null,
    tv: { message: "", messageTone: "neutral", dayScore: 0, xp: 0 },
    stats: null,
    toasts: [],
    eventCount: 0,
  };
}

const MAX_TOASTS = 4;

function pushToast(view: KitchenView, toast: Toast): void {
  view.toasts = [...view.toasts.slice(-(MAX_TOASTS - 1)), toast];
}

// Reduce one server event into a new view.  Input view is not mutated.
export function reduce(prev: KitchenView, event: ServerEvent): KitchenView {
  const view: KitchenView = { ...prev, toasts: prev.toasts.slice() };
  view.eventCount = prev.eventCount + 1;
  if ("tick" in event && typeof event.tick === "number") {
    view.tick = event.tick;
  }
  switch (event.type) {
    case "session_started":
      view.connected = true;
      view.playerId = event.player_id;
      view.language = event.language === "en" ? "en" : "es";
      view.stats = event.stats;
      view.tv = { ...view.tv, xp: event.stats.score_total };
      break;
    case "day_started":
      view.dayIndex = event.day_index;
      view.dayActive = true;
      view.inventory = { ...event.inventory };
      view.hand = null;
      view.plate = [];
      view.grill = { occupied: false };
      view.tv = { ...view.tv, dayScore: 0 };
      break;
    case "order_issued":
      view.order = {
        orderId: event.order_id,
        text: event.order_text,
        ast: event.order_ast,
      };
      break;
    case "order_unavailable":
      view.order = null;
      pushToast(view, { text: event.reason, tone: "info" });
      break;
    case "inventory_update":
      view.inventory = { ...view.inventory, [event.ingredient]: event.count };
      break;
    case "state_update":
      view.hand = event.hand;
      view.plate = event.plate.slice();
      if (event.grill === null) {
        view.grill = { occupied: false };
      } else {
        const prevGrill = prev.grill;
        view.grill = {
          occupied: true,
          item: event.grill,
          fraction: prevGrill.occupied ? prevGrill.fraction : 0,
          smoke: prevGrill.occupied ? prevGrill.smoke : false,
        };
      }
      break;
    case "cook_started":
      if (view.grill.occupied) {
        view.grill = { ...view.grill, fraction: 0, smoke: false };
      }
      break;
    case "cook_progress":
      if (view.grill.occupied) {
        view.grill = { ...view.grill, fraction: event.fraction };
      }
      break;
    case "cook_finished":
      if (view.grill.occupied) {
        view.grill = {
          ...view.grill,
          fraction: 1,
          item: { ...view.grill.item, cook_state: "cooked" },
        };
      }
      break;
    case "smoke_visible":
      if (view.grill.occupied) {
        view.grill = { ...view.grill, smoke: true };
      }
      break;
    case "cook_burnt":
      if (view.grill.occupied) {
        view.grill = {
          ...view.grill,
          item: { ...view.grill.item, cook_state: "burnt" },
        };
      }
      break;
    case "cooking_sound":
      break;
    case "grade_result": {
      const good = event.report.category === "correct";
      view.tv = {
        message: event.report.message,
        messageTone: good ? "good" : "bad",
        dayScore: view.tv.dayScore + event.report.score_delta,
        xp: view.tv.xp + event.report.score_delta,
      };
      break;
    }
    case "achievement_unlocked":
      pushToast(view, { text: `${event.title}: ${event.description}`, tone: "achievement" });
      break;
    case "day_summary":
      view.dayActive = false;
      view.order = null;
      view.tv = { ...view.tv, dayScore: event.day_score };
      break;
    case "error":
      pushToast(view, { text: `${event.code}: ${event.message}`, tone: "error" });
      view.tv = { ...view.tv, message: event.message, messageTone: "bad" };
      break;
  }
  return view;
}

export function reduceAll(view: KitchenView, events: ServerEvent[]): KitchenView {
  return events.reduce(reduce, view);
}
