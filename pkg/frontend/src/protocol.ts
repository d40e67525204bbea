// Wire types for the kitchen session protocol. One JSON object per
// WebSocket text frame; commands carry a contiguous seq starting at 1.

export type IngredientToken =
  | "pan_inferior"
  | "pan_superior"
  | "carne"
  | "queso"
  | "lechuga"
  | "ketchup";

export const INGREDIENTS: IngredientToken[] = [
  "pan_inferior",
  "pan_superior",
  "carne",
  "queso",
  "lechuga",
  "ketchup",
];

export const INGREDIENT_LABELS: Record<"es" | "en", Record<IngredientToken, string>> = {
  es: {
    pan_inferior: "pan inferior",
    pan_superior: "pan superior",
    carne: "carne",
    queso: "queso",
    lechuga: "lechuga",
    ketchup: "ketchup",
  },
  en: {
    pan_inferior: "bottom bread",
    pan_superior: "top bread",
    carne: "meat",
    queso: "cheese",
    lechuga: "lettuce",
    ketchup: "ketchup",
  },
};

export type CookStateToken = "na" | "raw" | "cooking" | "cooked" | "burnt";

export interface PlacedItem {
  ingredient: IngredientToken;
  cook_state: CookStateToken;
}

// Order AST, exactly as the server serializes it.
export type OrderBlock =
  | { put: string }
  | { if: { has: string; then: OrderBlock[]; else?: OrderBlock[] } }
  | { repeat: { count: number; body: OrderBlock[] } };

export interface OrderAst {
  blocks: OrderBlock[];
}

// Client -> server commands.  join carries player_id; the rest only seq+type.
export type Command =
  | { type: "join"; player_id: string }
  | { type: "start_day" }
  | { type: "end_day" }
  | { type: "grab"; ingredient: string }
  | { type: "place" }
  | { type: "cook" }
  | { type: "take" }
  | { type: "deliver" }
  | { type: "discard" }
  | { type: "advance_ticks"; ticks: number };

export type SequencedCommand = Command & { seq: number };

// Server -> client events.  Every event has type first and tick last.
export interface PlayerStatsJson {
  orders_delivered: number;
  orders_correct: number;
  score_total: number;
  correct_by_kind: Record<string, number>;
  days_played: number;
  perfect_days: number;
  today_orders: number;
  today_incorrect: number;
  unlocked: Record<string, unknown>;
}

export interface GradeReportJson {
  category: string;
  defects: { index: number; expected: string | null; found: string | null }[];
  message: string;
  score_delta: number;
}

export type ServerEvent =
  | { type: "session_started"; player_id: string; language: string; protocol_version: number; stats: PlayerStatsJson; tick: number }
  | { type: "day_started"; day_index: number; inventory: Record<string, number>; tick: number }
  | { type: "order_issued"; order_id: string; order_text: string; order_ast: OrderAst; snapshot: Record<string, number>; tick: number }
  | { type: "order_unavailable"; reason: string; tick: number }
  | { type: "inventory_update"; ingredient: string; count: number; tick: number }
  | { type: "state_update"; hand: PlacedItem | null; plate: PlacedItem[]; grill: PlacedItem | null; tick: number }
  | { type: "cook_started"; tick: number }
  | { type: "cooking_sound"; tick: number }
  | { type: "cook_progress"; fraction: number; tick: number }
  | { type: "cook_finished"; tick: number }
  | { type: "smoke_visible"; tick: number }
  | { type: "cook_burnt"; tick: number }
  | { type: "grade_result"; order_id: string; report: GradeReportJson; tick: number }
  | { type: "achievement_unlocked"; id: string; title: string; description: string; tick: number }
  | { type: "day_summary"; day_index: number; orders_completed: number; day_score: number; tick: number }
  | { type: "error"; code: string; message: string; seq?: number; expected?: number; tick: number };

export function parseEvent(raw: string): ServerEvent | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const t = (data as { type?: unknown }).type;
  if (typeof t !== "string") return null;
  return data as ServerEvent;
}

export function encodeCommand(cmd: SequencedCommand): string {
  // seq first to match the wire logs the server tooling writes.
  const { seq, ...rest } = cmd;
  return JSON.stringify({ seq, ...rest });
}
