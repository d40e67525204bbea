// DOM shell: builds the kitchen, renders the view model after every server
// event, and turns pointer gestures into sequenced commands.  No game rule
// lives here; a click only proposes an action and the server answers.

import { renderOrderHtml, Lang } from "./blocks.js";
import { SessionClient, ConnectionStatus } from "./client.js";
import { KitchenView, initialView, reduce } from "./model.js";
import { INGREDIENT_LABELS, ServerEvent } from "./protocol.js";

export type Stations = Record<string, [number, number]>;

export interface AppOptions {
  client: SessionClient | null;
  stations: Stations;
  language?: Lang;
  dayLengthTicks?: number;
  // Spectator mode attaches no handlers; the view still renders from events.
  spectator?: boolean;
  width?: number;
  height?: number;
}

export interface Transform {
  scale: number;
  offsetX: number;
  offsetY: number;
  apply(x: number, y: number): [number, number];
}

// Uniform-scale affine map from kitchen coordinates to screen pixels.
// y is flipped because layout y grows away from the player while screen y
// grows downward.
export function makeTransform(
  stations: Stations,
  width: number,
  height: number,
  margin = 60,
): Transform {
  const xs = Object.values(stations).map((p) => p[0]);
  const ys = Object.values(stations).map((p) => p[1]);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const offsetX = margin - minX * scale + ((width - 2 * margin) - spanX * scale) / 2;
  const offsetY = margin + maxY * scale + ((height - 2 * margin) - spanY * scale) / 2;
  return {
    scale,
    offsetX,
    offsetY,
    apply(x: number, y: number): [number, number] {
      return [x * scale + offsetX, -y * scale + offsetY];
    },
  };
}

function el(doc: Document, tag: string, className: string, id?: string): HTMLElement {
  const node = doc.createElement(tag);
  node.className = className;
  if (id) node.id = id;
  return node;
}

const STATE_ICONS: Record<string, string> = {
  na: "",
  raw: "·",
  cooking: "~",
  cooked: "✓",
  burnt: "✗",
};

export class KitchenApp {
  readonly root: HTMLElement;
  private readonly doc: Document;
  private readonly opts: AppOptions;
  private view: KitchenView;
  private lang: Lang;
  private hover: string | null = null;
  private dragFromHand = false;
  private readonly stationEls = new Map<string, HTMLElement>();

  constructor(root: HTMLElement, opts: AppOptions) {
    this.root = root;
    this.doc = root.ownerDocument;
    this.opts = opts;
    this.lang = opts.language ?? "es";
    this.view = initialView(this.lang);
    if (opts.dayLengthTicks) this.view.dayLengthTicks = opts.dayLengthTicks;
    this.build();
    this.render();
  }

  // Entry point for every server event; the only path that mutates state.
  handleEvent(event: ServerEvent): void {
    this.view = reduce(this.view, event);
    this.render();
  }

  handleStatus(status: ConnectionStatus): void {
    const banner = this.root.querySelector("#reconnect-banner") as HTMLElement | null;
    if (banner) {
      banner.style.display = status === "reconnecting" ? "block" : "none";
    }
  }

  currentView(): KitchenView {
    return this.view;
  }

  setLanguage(lang: Lang): void {
    this.lang = lang;
    this.render();
  }

  private send(cmd: Parameters<SessionClient["send"]>[0]): void {
    const client = this.opts.client;
    if (client === null) return;
    try {
      client.send(cmd);
    } catch {
      // Not connected: the reconnect banner is already up; swallow.
    }
  }

  private build(): void {
    const doc = this.doc;
    const width = this.opts.width ?? 900;
    const height = this.opts.height ?? 560;
    this.root.classList.add("kitchen-root");

    const banner = el(doc, "div", "reconnect-banner", "reconnect-banner");
    banner.textContent = this.lang === "es" ? "Reconectando…" : "Reconnecting…";
    banner.style.display = "none";
    this.root.appendChild(banner);

    const header = el(doc, "header", "topbar");
    const title = el(doc, "span", "title");
    title.textContent = "Cooking Code";
    const clock = el(doc, "span", "clock", "clock");
    const day = el(doc, "span", "day", "day-indicator");
    const startBtn = el(doc, "button", "btn", "btn-start-day");
    startBtn.textContent = this.lang === "es" ? "Empezar día" : "Start day";
    const endBtn = el(doc, "button", "btn", "btn-end-day");
    endBtn.textContent = this.lang === "es" ? "Terminar día" : "End day";
    const langBtn = el(doc, "button", "btn", "lang-toggle");
    langBtn.textContent = "ES/EN";
    header.append(title, day, clock, startBtn, endBtn, langBtn);
    this.root.appendChild(header);

    const main = el(doc, "div", "main");
    const kitchen = el(doc, "div", "kitchen", "kitchen");
    kitchen.style.width = `${width}px`;
    kitchen.style.height = `${height}px`;
    main.appendChild(kitchen);

    const transform = makeTransform(this.opts.stations, width, height);
    for (const [name, [x, y]] of Object.entries(this.opts.stations)) {
      const [px, py] = transform.apply(x, y);
      const station = el(doc, "div", "station", `station-${name}`);
      station.style.left = `${Math.round(px)}px`;
      station.style.top = `${Math.round(py)}px`;
      station.dataset.station = name;
      if (name.startsWith("container_")) {
        const token = name.slice("container_".length);
        station.classList.add("container");
        station.dataset.ingredient = token;
        const label = el(doc, "span", "label");
        label.textContent = token;
        const badge = el(doc, "span", "count-badge");
        badge.textContent = "0";
        const overlay = el(doc, "div", "overlay");
        station.append(label, badge, overlay);
      } else {
        const label = el(doc, "span", "label");
        label.textContent = name.replace(/_/g, " ");
        station.append(label);
        if (name === "grill") {
          const smoke = el(doc, "div", "smoke", "smoke");
          smoke.style.display = "none";
          smoke.textContent = "💨";
          const progress = el(doc, "div", "cook-progress", "cook-progress");
          station.append(smoke, progress);
        }
        if (name === "plate") {
          station.append(el(doc, "div", "stack", "plate-stack"));
        }
        if (name === "tray") {
          station.classList.add("tray");
          const bell = el(doc, "span", "bell");
          bell.textContent = "🔔";
          station.append(bell);
        }
      }
      kitchen.appendChild(station);
      this.stationEls.set(name, station);
    }

    const hand = el(doc, "div", "hand", "hand");
    kitchen.appendChild(hand);

    const side = el(doc, "aside", "side");
    const orderPanel = el(doc, "section", "panel order-panel", "order-panel");
    orderPanel.innerHTML = `<h2>${this.lang === "es" ? "Pedido" : "Order"}</h2><div id="order-blocks"></div>`;
    const tv = el(doc, "section", "panel tv-panel", "tv-panel");
    tv.innerHTML =
      `<h2>TV</h2>` +
      `<div class="tv-message" id="tv-message"></div>` +
      `<div class="tv-scores"><span id="tv-day-score"></span> <span id="tv-xp"></span></div>`;
    const toasts = el(doc, "div", "toasts", "toasts");
    side.append(orderPanel, tv, toasts);
    main.appendChild(side);
    this.root.appendChild(main);

    if (!this.opts.spectator) this.attachHandlers(startBtn, endBtn, langBtn);
  }

  private attachHandlers(startBtn: HTMLElement, endBtn: HTMLElement, langBtn: HTMLElement): void {
    startBtn.addEventListener("click", () => this.send({ type: "start_day" }));
    endBtn.addEventListener("click", () => this.send({ type: "end_day" }));
    langBtn.addEventListener("click", () => this.setLanguage(this.lang === "es" ? "en" : "es"));

    for (const [name, station] of this.stationEls) {
      if (station.classList.contains("container")) {
        const token = station.dataset.ingredient as string;
        station.addEventListener("pointerenter", () => {
          this.hover = name;
          station.classList.add("hover");
        });
        station.addEventListener("pointerleave", () => {
          if (this.hover === name) this.hover = null;
          station.classList.remove("hover");
        });
        station.addEventListener("click", () => this.send({ type: "grab", ingredient: token }));
      }
    }

    const plate = this.stationEls.get("plate");
    plate?.addEventListener("click", () => this.send({ type: "place" }));

    // Drag the held patty onto the grill, or click the grill: while holding
    // something the gesture proposes cook, otherwise take.  The server still
    // decides whether either is legal.
    const grill = this.stationEls.get("grill");
    const hand = this.root.querySelector("#hand") as HTMLElement | null;
    hand?.addEventListener("pointerdown", () => {
      this.dragFromHand = true;
    });
    this.root.addEventListener("pointerup", () => {
      // Reset after the click event for this gesture has fired.
      setTimeout(() => {
        this.dragFromHand = false;
      }, 0);
    });
    grill?.addEventListener("pointerup", () => {
      if (this.dragFromHand) {
        this.dragFromHand = false;
        this.send({ type: "cook" });
      }
    });
    grill?.addEventListener("click", () => {
      if (this.dragFromHand) return; // the pointerup path already sent cook
      if (this.view.hand !== null) {
        this.send({ type: "cook" });
      } else {
        this.send({ type: "take" });
      }
    });

    const tray = this.stationEls.get("tray");
    tray?.addEventListener("click", () => this.send({ type: "deliver" }));
  }

  // Pulls every dynamic bit of DOM from the current view.  Called only after
  // a server event; pointer handlers never touch the DOM directly.
  private render(): void {
    const v = this.view;
    const q = (sel: string) => this.root.querySelector(sel) as HTMLElement | null;

    const clock = q("#clock");
    if (clock) clock.textContent = `⏱ ${v.tick}/${v.dayLengthTicks}`;
    const day = q("#day-indicator");
    if (day) {
      day.textContent =
        v.dayIndex === null
          ? this.lang === "es" ? "sin día" : "no day"
          : `${this.lang === "es" ? "Día" : "Day"} ${v.dayIndex + 1}${v.dayActive ? "" : " ✔"}`;
    }

    for (const [name, station] of this.stationEls) {
      if (!station.classList.contains("container")) continue;
      const token = station.dataset.ingredient as string;
      const badge = station.querySelector(".count-badge") as HTMLElement | null;
      if (badge) badge.textContent = String(v.inventory[token] ?? 0);
      const label = station.querySelector(".label") as HTMLElement | null;
      if (label) {
        const labels = INGREDIENT_LABELS[this.lang] as Record<string, string>;
        label.textContent = labels[token] ?? token;
      }
    }

    const hand = q("#hand");
    if (hand) {
      if (v.hand === null) {
        hand.textContent = this.lang === "es" ? "mano vacía" : "empty hand";
        hand.classList.remove("holding");
      } else {
        const labels = INGREDIENT_LABELS[this.lang] as Record<string, string>;
        const icon = STATE_ICONS[v.hand.cook_state] ?? "";
        hand.textContent = `✋ ${labels[v.hand.ingredient] ?? v.hand.ingredient} ${icon}`.trim();
        hand.classList.add("holding");
      }
    }

    const stack = q("#plate-stack");
    if (stack) {
      stack.innerHTML = v.plate
        .map(
          (item, i) =>
            `<div class="layer layer-${item.ingredient}" data-index="${i}">` +
            `${item.ingredient}${item.cook_state !== "na" ? `:${item.cook_state}` : ""}</div>`,
        )
        .reverse()
        .join("");
    }

    const grillEl = this.stationEls.get("grill");
    if (grillEl) {
      const smoke = grillEl.querySelector(".smoke") as HTMLElement | null;
      const progress = grillEl.querySelector(".cook-progress") as HTMLElement | null;
      if (v.grill.occupied) {
        grillEl.classList.add("occupied");
        grillEl.classList.toggle("burnt", v.grill.item.cook_state === "burnt");
        if (smoke) smoke.style.display = v.grill.smoke ? "block" : "none";
        if (progress) progress.style.width = `${Math.round(v.grill.fraction * 100)}%`;
      } else {
        grillEl.classList.remove("occupied", "burnt");
        if (smoke) smoke.style.display = "none";
        if (progress) progress.style.width = "0%";
      }
    }

    const blocks = q("#order-blocks");
    if (blocks) {
      blocks.innerHTML = v.order === null ? "" : renderOrderHtml(v.order.ast, this.lang);
    }

    const tvMessage = q("#tv-message");
    if (tvMessage) {
      tvMessage.textContent = v.tv.message;
      tvMessage.className = `tv-message tone-${v.tv.messageTone}`;
    }
    const dayScore = q("#tv-day-score");
    if (dayScore) dayScore.textContent = `${this.lang === "es" ? "Día" : "Day"}: ${v.tv.dayScore}`;
    const xp = q("#tv-xp");
    if (xp) xp.textContent = `XP: ${v.tv.xp}`;

    const toasts = q("#toasts");
    if (toasts) {
      toasts.innerHTML = v.toasts
        .map((t) => `<div class="toast toast-${t.tone}"></div>`)
        .join("");
      // textContent per node to keep arbitrary server text inert.
      Array.from(toasts.children).forEach((node, i) => {
        (node as HTMLElement).textContent = v.toasts[i]?.text ?? "";
      });
    }
  }
}

export function createApp(root: HTMLElement, opts: AppOptions): KitchenApp {
  return new KitchenApp(root, opts);
}
