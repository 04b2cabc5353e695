/** Completion probability trajectory chart: posterior mean line with the
 * 95% band, one layer per receiver.
 *
 * Every point carries its service-reported numbers verbatim in data
 * attributes; only the pixel placement is computed here. The chart spans
 * the play from snap to arrival on a fixed 0..1 probability axis.
 */

import { escapeAttr, escapeXml, verbatim } from "./format.js";
import type { TrajectoryPayload, TrajectoryReport } from "./types.js";

const WIDTH = 480;
const HEIGHT = 240;
const PAD = 30;

interface Scale {
  x(t: number): number;
  y(p: number): number;
}

function makeScale(tMax: number): Scale {
  const span = tMax > 0 ? tMax : 1;
  return {
    x: (t) => PAD + (t / span) * (WIDTH - 2 * PAD),
    y: (p) => HEIGHT - PAD - p * (HEIGHT - 2 * PAD),
  };
}

function bandPath(points: TrajectoryPayload["points"], scale: Scale): string {
  const upper = points.map(
    (pt) => `${scale.x(pt.t)},${scale.y(pt["q97.5"])}`);
  const lower = [...points].reverse().map(
    (pt) => `${scale.x(pt.t)},${scale.y(pt["q2.5"])}`);
  return [...upper, ...lower].join(" ");
}

function meanPath(points: TrajectoryPayload["points"], scale: Scale): string {
  return points.map((pt) => `${scale.x(pt.t)},${scale.y(pt.mean)}`).join(" ");
}

function renderLayer(trajectory: TrajectoryPayload, scale: Scale,
                     selected: boolean): string {
  const cls = selected ? "trajectory selected" : "trajectory";
  const markers = trajectory.points
    .map((pt) =>
      `<circle class="trajectory-point" cx="${scale.x(pt.t)}"`
      + ` cy="${scale.y(pt.mean)}" r="2"`
      + ` data-receiver-id="${escapeAttr(trajectory.receiver_id)}"`
      + ` data-t="${escapeAttr(verbatim(pt.t))}"`
      + ` data-mean="${escapeAttr(verbatim(pt.mean))}"`
      + ` data-lo="${escapeAttr(verbatim(pt["q2.5"]))}"`
      + ` data-hi="${escapeAttr(verbatim(pt["q97.5"]))}"/>`)
    .join("");
  const notices = trajectory.notices
    .map((note) => `<desc>${escapeXml(note)}</desc>`)
    .join("");
  return `<g class="${cls}" data-receiver-id="`
    + `${escapeAttr(trajectory.receiver_id)}"`
    + ` data-seed="${escapeAttr(verbatim(trajectory.seed))}">`
    + `<polygon class="band" points="${bandPath(trajectory.points, scale)}"/>`
    + `<polyline class="mean" fill="none" points="`
    + `${meanPath(trajectory.points, scale)}"/>`
    + markers + notices + "</g>";
}

function axes(scale: Scale, tMax: number): string {
  const x0 = scale.x(0);
  const y0 = scale.y(0);
  const y1 = scale.y(1);
  return `<line class="axis" x1="${x0}" y1="${y0}" x2="${scale.x(tMax)}"`
    + ` y2="${y0}"/>`
    + `<line class="axis" x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}"/>`;
}

/** Render the trajectory report, highlighting one receiver's layer. */
export function renderTrajectories(report: TrajectoryReport,
                                   selectedReceiver: string | null = null,
                                   ): string {
  if (!Array.isArray(report.trajectories)) {
    return `<div class="error-panel" role="alert">`
      + `<strong>Could not render trajectories</strong>`
      + `<p>report payload has no trajectory list</p></div>`;
  }
  const tMax = Math.max(
    report.arrival_time,
    ...report.trajectories.flatMap((tr) => tr.points.map((pt) => pt.t)));
  const scale = makeScale(tMax);
  const layers = report.trajectories
    .map((tr) => renderLayer(tr, scale, tr.receiver_id === selectedReceiver))
    .join("");
  const throwLine = `<line class="throw-time" x1="${scale.x(report.throw_time)}"`
    + ` y1="${scale.y(0)}" x2="${scale.x(report.throw_time)}"`
    + ` y2="${scale.y(1)}" data-throw-time="`
    + `${escapeAttr(verbatim(report.throw_time))}"/>`;
  const fitted = report.actual_fitted === null ? "" :
    `<circle class="actual-fitted" cx="${scale.x(report.arrival_time)}"`
    + ` cy="${scale.y(report.actual_fitted.mean)}" r="3"`
    + ` data-receiver-id="${escapeAttr(report.actual_fitted.receiver_id)}"`
    + ` data-caught="${escapeAttr(verbatim(report.actual_fitted.caught))}"`
    + ` data-mean="${escapeAttr(verbatim(report.actual_fitted.mean))}"`
    + ` data-lo="${escapeAttr(verbatim(report.actual_fitted["q2.5"]))}"`
    + ` data-hi="${escapeAttr(verbatim(report.actual_fitted["q97.5"]))}"/>`;
  return `<svg class="trajectory-chart" viewBox="0 0 ${WIDTH} ${HEIGHT}"`
    + ` data-mode="${escapeAttr(report.mode)}"`
    + ` data-m="${escapeAttr(verbatim(report.M))}"`
    + ` data-seed="${escapeAttr(verbatim(report.seed))}"`
    + ` data-imputation-seed="`
    + `${escapeAttr(verbatim(report.seeds.imputation_seed))}"`
    + ` data-fit-seed="${escapeAttr(verbatim(report.seeds.fit_seed))}">`
    + axes(scale, tMax) + layers + throwLine + fitted + "</svg>";
}
