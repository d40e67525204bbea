// Renders an order AST as nested colored blocks, the way the tickets show
// them: PUT rows, IF with indented lanes, REPEAT with a count badge.
// Returns an HTML string so it can be unit-tested without a DOM.

import { INGREDIENT_LABELS, IngredientToken, OrderAst, OrderBlock } from "./protocol.js";

export type Lang = "es" | "en";

const KEYWORDS: Record<Lang, { put: string; ifHas: string; else: string; times: (n: number) => string }> = {
  es: {
    put: "PONER",
    ifHas: "SI HAY",
    else: "SINO",
    times: (n) => `${n} VECES`,
  },
  en: {
    put: "PUT",
    ifHas: "IF HAS",
    else: "ELSE",
    times: (n) => `${n} TIMES`,
  },
};

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function ingredientLabel(token: string, lang: Lang): string {
  const labels = INGREDIENT_LABELS[lang] as Record<string, string>;
  return labels[token] ?? token;
}

function renderBlock(block: OrderBlock, lang: Lang): string {
  const kw = KEYWORDS[lang];
  if ("put" in block) {
    const token = String(block.put);
    return (
      `<div class="block block-put" data-block="put" data-ingredient="${escapeHtml(token)}">` +
      `<span class="kw">${kw.put}</span> ` +
      `<span class="ing ing-${escapeHtml(token)}">${escapeHtml(ingredientLabel(token, lang))}</span>` +
      `</div>`
    );
  }
  if ("if" in block) {
    const node = block.if;
    const thenLane = renderBlocks(node.then ?? [], lang);
    const elseBlocks = node.else ?? [];
    const elseLane =
      elseBlocks.length > 0
        ? `<div class="lane-label">${kw.else}</div><div class="lane lane-else">${renderBlocks(elseBlocks, lang)}</div>`
        : "";
    return (
      `<div class="block block-if" data-block="if" data-has="${escapeHtml(String(node.has))}">` +
      `<div class="block-head"><span class="kw">${kw.ifHas}</span> ` +
      `<span class="ing">${escapeHtml(ingredientLabel(String(node.has), lang))}</span></div>` +
      `<div class="lane lane-then">${thenLane}</div>` +
      elseLane +
      `</div>`
    );
  }
  if ("repeat" in block) {
    const node = block.repeat;
    return (
      `<div class="block block-repeat" data-block="repeat" data-count="${Number(node.count)}">` +
      `<div class="block-head"><span class="badge">${escapeHtml(kw.times(Number(node.count)))}</span></div>` +
      `<div class="lane lane-body">${renderBlocks(node.body ?? [], lang)}</div>` +
      `</div>`
    );
  }
  return `<div class="block block-error">?</div>`;
}

function renderBlocks(blocks: OrderBlock[], lang: Lang): string {
  return blocks.map((b) => renderBlock(b, lang)).join("");
}

// Main entry: tolerant of malformed input, renders a visible error block
// instead of throwing so a bad ticket never blanks the order panel.
export function renderOrderHtml(ast: unknown, lang: Lang = "es"): string {
  if (
    typeof ast !== "object" ||
    ast === null ||
    !Array.isArray((ast as OrderAst).blocks)
  ) {
    return `<div class="block block-error">${lang === "es" ? "pedido ilegible" : "unreadable order"}</div>`;
  }
  try {
    return `<div class="order-blocks">${renderBlocks((ast as OrderAst).blocks, lang)}</div>`;
  } catch {
    return `<div class="block block-error">${lang === "es" ? "pedido ilegible" : "unreadable order"}</div>`;
  }
}

export function ingredientButtonLabel(token: IngredientToken, lang: Lang): string {
  return ingredientLabel(token, lang);
}
