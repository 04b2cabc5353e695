/** What-if result panel: posterior mean, 95% interval, seeds, and the
 * service-computed 20-bin draw histogram.
 *
 * Bar heights are scaled to fit the chart; the counts and bin edges
 * themselves are echoed verbatim in data attributes and the readout text.
 */

import { escapeAttr, escapeXml, interval, verbatim } from "./format.js";
import type { WhatIfResponse } from "./types.js";

const WIDTH = 400;
const HEIGHT = 160;
const PAD = 20;

function renderBars(counts: number[], edges: number[]): string {
  const peak = Math.max(1, ...counts);
  const innerW = WIDTH - 2 * PAD;
  const innerH = HEIGHT - 2 * PAD;
  const lo = edges[0] ?? 0;
  const hi = edges[edges.length - 1] ?? 1;
  const span = hi - lo || 1;
  return counts
    .map((count, i) => {
      const left = edges[i] ?? lo;
      const right = edges[i + 1] ?? hi;
      const x = PAD + ((left - lo) / span) * innerW;
      const w = ((right - left) / span) * innerW;
      const h = (count / peak) * innerH;
      return `<rect class="bin" x="${x}" y="${HEIGHT - PAD - h}"`
        + ` width="${w}" height="${h}"`
        + ` data-count="${escapeAttr(verbatim(count))}"`
        + ` data-left="${escapeAttr(verbatim(left))}"`
        + ` data-right="${escapeAttr(verbatim(right))}"/>`;
    })
    .join("");
}

function pinningList(pinning: Record<string, number>): string {
  const items = Object.entries(pinning)
    .map(([name, value]) =>
      `<li data-pin="${escapeAttr(name)}" data-value="`
      + `${escapeAttr(verbatim(value))}">`
      + `${escapeXml(name)} = ${escapeXml(verbatim(value))}</li>`)
    .join("");
  return items === ""
    ? `<p class="no-pins">no covariates pinned</p>`
    : `<ul class="pins">${items}</ul>`;
}

/** Render one what-if response. All numbers shown are the service's own. */
export function renderWhatIfSummary(result: WhatIfResponse): string {
  const histogram = `<svg class="draw-histogram" viewBox="0 0 ${WIDTH} `
    + `${HEIGHT}">${renderBars(result.histogram.counts,
                               result.histogram.edges)}</svg>`;
  return `<div class="whatif-result"`
    + ` data-game="${escapeAttr(result.game_id)}"`
    + ` data-play="${escapeAttr(result.play_id)}"`
    + ` data-receiver-id="${escapeAttr(result.receiver_id)}"`
    + ` data-t="${escapeAttr(verbatim(result.t))}"`
    + ` data-mean="${escapeAttr(verbatim(result.mean))}"`
    + ` data-lo="${escapeAttr(verbatim(result["q2.5"]))}"`
    + ` data-hi="${escapeAttr(verbatim(result["q97.5"]))}">`
    + `<p class="readout">`
    + `EHCP <span class="mean">${escapeXml(verbatim(result.mean))}</span>`
    + ` 95% <span class="interval">`
    + `${escapeXml(interval(result["q2.5"], result["q97.5"]))}</span>`
    + ` at t=<span class="t">${escapeXml(verbatim(result.t))}</span>s`
    + ` (M=<span class="m">${escapeXml(verbatim(result.M))}</span>,`
    + ` ${escapeXml(result.mode)})</p>`
    + `<p class="seeds">seeds: imputation `
    + `<span class="imputation-seed">`
    + `${escapeXml(verbatim(result.seeds.imputation_seed))}</span>,`
    + ` fit <span class="fit-seed">`
    + `${escapeXml(verbatim(result.seeds.fit_seed))}</span></p>`
    + pinningList(result.pinning)
    + histogram
    + `</div>`;
}

/** Render 422 details as inline messages next to their fields. */
export function renderFieldErrors(byField: Record<string, string>): string {
  const items = Object.entries(byField)
    .map(([field, msg]) =>
      `<li class="field-error" data-field="${escapeAttr(field)}">`
      + `<strong>${escapeXml(field)}</strong>: ${escapeXml(msg)}</li>`)
    .join("");
  return `<ul class="field-errors" role="alert">${items}</ul>`;
}
