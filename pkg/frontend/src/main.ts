// Browser entry point.  Reads ?server=ws://host:port&lang=es&player=name,
// pulls the kitchen layout from the service, then opens the session socket.

import { createApp, Stations } from "./app.js";
import { SessionClient } from "./client.js";
import { Lang } from "./blocks.js";

function restBase(serverUrl: string): string {
  return serverUrl.replace(/^ws/, "http").replace(/\/ws\/?$/, "");
}

function wsUrl(serverUrl: string): string {
  return serverUrl.endsWith("/ws") ? serverUrl : `${serverUrl.replace(/\/$/, "")}/ws`;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? `ws://${window.location.hostname}:8000`;
  const lang = (params.get("lang") === "en" ? "en" : "es") as Lang;
  const player = params.get("player") ?? "player-1";

  const root = document.getElementById("app");
  if (root === null) throw new Error("missing #app element");

  let stations: Stations;
  let dayLengthTicks = 300;
  try {
    const res = await fetch(`${restBase(server)}/config`);
    const config = await res.json();
    stations = config.engine.layout.stations as Stations;
    dayLengthTicks = config.engine.day_length_ticks ?? 300;
  } catch {
    root.textContent = `cannot reach ${restBase(server)}/config`;
    return;
  }

  const client = new SessionClient({
    url: wsUrl(server),
    playerId: player,
    socketFactory: (url) => new WebSocket(url),
    onEvent: (event) => app.handleEvent(event),
    onStatus: (status) => app.handleStatus(status),
  });
  const app = createApp(root, { client, stations, language: lang, dayLengthTicks });
  client.connect();
}

boot();
