/** Field view: tracks, ball path, event markers, and the scrub cursor,
 * rendered as an SVG string in data coordinates.
 *
 * The viewBox is the field itself, 120 yards by 53.3, with aspect ratio
 * preserved, so every shape is positioned in yards and never rescaled by
 * hand. SVG's y axis points down while field y points up, so y values are
 * flipped once, here and nowhere else. Route runners are emitted as
 * selectable elements carrying data-receiver-id; the host page attaches
 * one delegated click handler instead of per-element listeners.
 */

import { escapeAttr, escapeXml } from "./format.js";
import type { FrameRow, PlayDetail } from "./types.js";

export const FIELD_LENGTH = 120;
export const FIELD_WIDTH = 53.3;
export const FRAME_RATE_HZ = 10;

function flipY(y: number): number {
  return FIELD_WIDTH - y;
}

function tag(name: string, attrs: Record<string, string | number>,
             body = ""): string {
  const parts = Object.entries(attrs)
    .map(([key, value]) => `${key}="${escapeAttr(value)}"`)
    .join(" ");
  return body === ""
    ? `<${name} ${parts}/>`
    : `<${name} ${parts}>${body}</${name}>`;
}

/** Visible fallback for a payload the renderer cannot draw. */
export function renderErrorPanel(message: string): string {
  return `<div class="error-panel" role="alert">`
    + `<strong>Could not render play</strong>`
    + `<p>${escapeXml(message)}</p></div>`;
}

/** Why `payload` cannot be drawn as a play, or null if it can. */
export function describePayloadProblem(payload: unknown): string | null {
  if (payload === null || typeof payload !== "object") {
    return "play payload is not an object";
  }
  const play = payload as Partial<PlayDetail>;
  if (!play.meta || typeof play.meta !== "object") {
    return "play payload has no meta block";
  }
  if (!Array.isArray(play.timeline) || play.timeline.length !== 4) {
    return "play payload has no snap/throw/arrival timeline";
  }
  if (!play.tracks || typeof play.tracks !== "object") {
    return "play payload has no tracks";
  }
  if (!Array.isArray(play.route_runners)) {
    return "play payload has no route runner list";
  }
  for (const [entity, frames] of Object.entries(play.tracks)) {
    if (!Array.isArray(frames) || frames.length === 0) {
      return `track for ${entity} is empty`;
    }
    for (const row of frames) {
      if (!Array.isArray(row) || row.length !== 9) {
        return `track for ${entity} has a malformed frame row`;
      }
      if (!Number.isFinite(row[0]) || !Number.isFinite(row[2])
          || !Number.isFinite(row[3])) {
        return `track for ${entity} has non-numeric coordinates`;
      }
    }
  }
  return null;
}

function frameAt(frames: FrameRow[], frameIndex: number): FrameRow {
  let best = frames[0]!;
  for (const row of frames) {
    if (row[0] <= frameIndex && row[0] >= best[0]) {
      best = row;
    }
  }
  return best;
}

function sideOf(play: PlayDetail, frames: FrameRow[]): string {
  const team = frames[0]![8];
  if (team === "ball") {
    return "ball";
  }
  const offense = play.meta.offense_is_home ? "home" : "away";
  return team === offense ? "offense" : "defense";
}

function trackPoints(frames: FrameRow[]): string {
  return frames
    .map((row) => `${row[2]},${flipY(row[3])}`)
    .join(" ");
}

export interface FieldOptions {
  /** Route runner to highlight as selected. */
  selectedReceiver?: string | null;
  /** Scrub cursor position, an absolute frame index at 10 Hz. */
  frameIndex?: number;
}

function fieldBackground(): string {
  const lines: string[] = [
    tag("rect", {
      class: "turf", x: 0, y: 0,
      width: FIELD_LENGTH, height: FIELD_WIDTH,
    }),
  ];
  for (let x = 10; x <= 110; x += 10) {
    lines.push(tag("line", {
      class: "yard-line", x1: x, y1: 0, x2: x, y2: FIELD_WIDTH,
    }));
  }
  return lines.join("");
}

function eventMarkers(play: PlayDetail): string {
  const [snap, throwFrame, arrival] = play.timeline;
  const outcome = play.timeline[3];
  const ball = play.tracks["ball"];
  if (!ball) {
    return "";
  }
  const events: [number, string][] = [
    [snap, "snap"],
    [throwFrame, "throw"],
    [arrival, `arrival:${outcome}`],
  ];
  return events
    .map(([frame, label]) => {
      const row = frameAt(ball, frame);
      return tag("circle", {
        class: "event-marker",
        "data-event": label,
        "data-frame": frame,
        cx: row[2], cy: flipY(row[3]), r: 0.8,
      });
    })
    .join("");
}

function scrubCursor(play: PlayDetail, frameIndex: number): string {
  const dots = Object.entries(play.tracks).map(([entity, frames]) => {
    const row = frameAt(frames, frameIndex);
    return tag("circle", {
      class: `cursor ${sideOf(play, frames)}`,
      "data-entity": entity,
      "data-frame": frameIndex,
      cx: row[2], cy: flipY(row[3]),
      r: entity === "ball" ? 0.4 : 0.7,
    });
  });
  return `<g class="scrub" data-frame="${escapeAttr(frameIndex)}">`
    + dots.join("") + "</g>";
}

function renderTracks(play: PlayDetail, selected: string | null): string {
  const runners = new Set(play.route_runners);
  return Object.entries(play.tracks)
    .map(([entity, frames]) => {
      const side = sideOf(play, frames);
      const attrs: Record<string, string | number> = {
        class: `track ${side}`,
        "data-entity": entity,
        points: trackPoints(frames),
        fill: "none",
      };
      if (runners.has(entity)) {
        attrs["class"] = `track offense route selectable`
          + (entity === selected ? " selected" : "");
        attrs["data-receiver-id"] = entity;
        attrs["role"] = "button";
        attrs["tabindex"] = 0;
      }
      if (entity === play.passer_id) {
        attrs["class"] += " passer";
      }
      const title = tag("title", {}, escapeXml(entity));
      return tag("polyline", attrs, title);
    })
    .join("");
}

/** Render the play, or an error panel when the payload cannot be drawn.
 * Never returns an empty string. */
export function renderField(payload: unknown,
                            options: FieldOptions = {}): string {
  const problem = describePayloadProblem(payload);
  if (problem !== null) {
    return renderErrorPanel(problem);
  }
  const play = payload as PlayDetail;
  const selected = options.selectedReceiver ?? null;
  const frameIndex = options.frameIndex ?? play.timeline[0];
  const body = [
    fieldBackground(),
    renderTracks(play, selected),
    eventMarkers(play),
    scrubCursor(play, frameIndex),
  ].join("");
  return `<svg class="field" viewBox="0 0 ${FIELD_LENGTH} ${FIELD_WIDTH}" `
    + `preserveAspectRatio="xMidYMid meet" `
    + `data-game="${escapeAttr(play.meta.game_id)}" `
    + `data-play="${escapeAttr(play.meta.play_id)}">${body}</svg>`;
}

/** Frame index bounds for the scrubber, snap to last tracked frame. */
export function scrubRange(play: PlayDetail): { min: number; max: number } {
  let max = play.timeline[0];
  for (const frames of Object.values(play.tracks)) {
    for (const row of frames) {
      if (row[0] > max) {
        max = row[0];
      }
    }
  }
  return { min: play.timeline[0], max };
}
