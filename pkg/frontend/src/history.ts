/** Session history of submitted what-if queries.
 *
 * Each entry pairs the exact request body sent with the response received,
 * newest first, capped at 50 entries. The comparison view lays entries out
 * side by side so scenario means and intervals can be read against each
 * other; the numbers shown are the stored responses, untouched.
 */

import { escapeAttr, escapeXml, interval, verbatim } from "./format.js";
import type { WhatIfRequestBody, WhatIfResponse } from "./types.js";

export const HISTORY_LIMIT = 50;

export interface HistoryEntry {
  request: WhatIfRequestBody;
  response: WhatIfResponse;
}

export class QueryHistory {
  private items: HistoryEntry[] = [];

  push(request: WhatIfRequestBody, response: WhatIfResponse): void {
    this.items.unshift({ request, response });
    if (this.items.length > HISTORY_LIMIT) {
      this.items.length = HISTORY_LIMIT;
    }
  }

  entries(): readonly HistoryEntry[] {
    return this.items;
  }

  get length(): number {
    return this.items.length;
  }

  clear(): void {
    this.items = [];
  }
}

function describePins(request: WhatIfRequestBody): string {
  const names = Object.keys(request.pinning);
  return names.length === 0 ? "no pins" : `pins: ${names.join(", ")}`;
}

function renderCell(entry: HistoryEntry, index: number): string {
  const { request, response } = entry;
  return `<div class="comparison-cell" data-index="${index}"`
    + ` data-receiver-id="${escapeAttr(request.receiver_id)}"`
    + ` data-t="${escapeAttr(verbatim(request.t))}"`
    + ` data-seed="${escapeAttr(verbatim(request.seed))}"`
    + ` data-mean="${escapeAttr(verbatim(response.mean))}"`
    + ` data-lo="${escapeAttr(verbatim(response["q2.5"]))}"`
    + ` data-hi="${escapeAttr(verbatim(response["q97.5"]))}">`
    + `<p class="scenario">${escapeXml(request.receiver_id)}`
    + ` at t=${escapeXml(verbatim(request.t))}s,`
    + ` ${escapeXml(describePins(request))}</p>`
    + `<p class="value"><span class="mean">`
    + `${escapeXml(verbatim(response.mean))}</span>`
    + ` <span class="interval">`
    + `${escapeXml(interval(response["q2.5"], response["q97.5"]))}</span></p>`
    + `</div>`;
}

/** Side-by-side view of stored scenarios, newest first. */
export function renderComparison(history: QueryHistory): string {
  const cells = history.entries()
    .map((entry, index) => renderCell(entry, index))
    .join("");
  const body = cells === ""
    ? `<p class="empty">no what-if queries yet</p>`
    : cells;
  return `<div class="comparison" data-count="${history.length}">`
    + body + `</div>`;
}
