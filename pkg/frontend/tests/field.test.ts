import { describe, expect, it } from "vitest";

import {
  describePayloadProblem,
  FIELD_WIDTH,
  renderErrorPanel,
  renderField,
  scrubRange,
} from "../src/field.js";
import { ARRIVAL_FRAME, makePlay, SNAP_FRAME } from "./fixtures.js";

function attrOf(element: string, name: string): string {
  const match = element.match(new RegExp(`${name}="([^"]*)"`));
  if (!match) {
    throw new Error(`attribute ${name} not on ${element}`);
  }
  return match[1]!;
}

function findAll(html: string, pattern: RegExp): string[] {
  return [...html.matchAll(new RegExp(pattern, "g"))].map((m) => m[0]);
}

describe("field rendering", () => {
  const play = makePlay();

  it("draws in data coordinates with the aspect ratio preserved", () => {
    const svg = renderField(play);
    expect(svg).toContain(`viewBox="0 0 120 53.3"`);
    expect(svg).toContain(`preserveAspectRatio="xMidYMid meet"`);
  });

  it("renders one track per entity including the ball path", () => {
    const svg = renderField(play);
    const tracks = findAll(svg, /<polyline [^>]*class="track[^"]*"/);
    expect(tracks).toHaveLength(6);
    expect(svg).toMatch(/class="track ball"[^>]*data-entity="ball"/);
  });

  it("flips y once so field y=30 lands at 53.3-30 in svg space", () => {
    const svg = renderField(play);
    const route = findAll(svg, /<polyline [^>]*data-receiver-id="20"[^>]*>/);
    const firstPoint = attrOf(route[0]!, "points").split(" ")[0];
    expect(firstPoint).toBe(`42,${FIELD_WIDTH - 30}`);
  });

  it("marks each route runner selectable and clickable by id", () => {
    const svg = renderField(play);
    const selectable = findAll(svg, /<polyline [^>]*selectable[^>]*>/);
    expect(selectable).toHaveLength(2);
    const ids = selectable.map((el) => attrOf(el, "data-receiver-id"));
    expect(ids.sort()).toEqual(["20", "21"]);
    for (const el of selectable) {
      expect(attrOf(el, "role")).toBe("button");
    }
  });

  it("highlights only the selected receiver", () => {
    const svg = renderField(play, { selectedReceiver: "21" });
    const selected = findAll(svg,
      /<polyline [^>]*class="[^"]*selected[^"]*"[^>]*>/);
    expect(selected).toHaveLength(1);
    expect(attrOf(selected[0]!, "data-receiver-id")).toBe("21");
  });

  it("does not make the passer or defenders selectable", () => {
    const svg = renderField(play);
    for (const entity of ["10", "30", "31", "ball"]) {
      const el = findAll(svg,
        new RegExp(`<polyline [^>]*data-entity="${entity}"[^>]*>`));
      expect(el[0]).not.toContain("selectable");
      expect(el[0]).not.toContain("data-receiver-id");
    }
  });

  it("places snap, throw, and arrival markers on the ball path", () => {
    const svg = renderField(play);
    const markers = findAll(svg, /<circle class="event-marker"[^>]*\/>/);
    expect(markers).toHaveLength(3);
    const events = markers.map((el) => attrOf(el, "data-event"));
    expect(events).toEqual(["snap", "throw", "arrival:pass_outcome_caught"]);
  });

  it("aligns the scrub cursor with the arrival marker at arrival", () => {
    const svg = renderField(play, { frameIndex: ARRIVAL_FRAME });
    const marker = findAll(svg,
      /<circle class="event-marker"[^>]*data-event="arrival:[^>]*\/>/)[0]!;
    const cursor = findAll(svg,
      /<circle class="cursor ball"[^>]*\/>/)[0]!;
    expect(attrOf(cursor, "cx")).toBe(attrOf(marker, "cx"));
    expect(attrOf(cursor, "cy")).toBe(attrOf(marker, "cy"));
    expect(attrOf(cursor, "data-frame")).toBe(String(ARRIVAL_FRAME));
  });

  it("draws a cursor dot for every entity at the scrubbed frame", () => {
    const svg = renderField(play, { frameIndex: 10 });
    const dots = findAll(svg, /<circle class="cursor [^>]*\/>/);
    expect(dots).toHaveLength(6);
  });

  it("defaults the cursor to the snap frame", () => {
    const svg = renderField(play);
    expect(svg).toContain(`<g class="scrub" data-frame="${SNAP_FRAME}">`);
  });
});

describe("malformed payloads", () => {
  it.each<[string, unknown, RegExp]>([
    ["null", null, /not an object/],
    ["missing meta", { timeline: [1, 2, 3, "x"], tracks: {} }, /meta/],
    ["missing timeline", { ...makePlay(), timeline: undefined }, /timeline/],
    ["missing tracks", { ...makePlay(), tracks: undefined }, /tracks/],
    ["empty track", { ...makePlay(), tracks: { "20": [] } }, /empty/],
    ["short frame row",
     { ...makePlay(), tracks: { "20": [[1, "20", 3]] } }, /malformed frame/],
    ["string coordinates",
     { ...makePlay(),
       tracks: { "20": [[1, "20", "x", "y", 0, 0, 0, "", "home"]] } },
     /non-numeric/],
    ["route runners not a list",
     { ...makePlay(), route_runners: "20" }, /route runner/],
  ])("renders a visible error panel for %s", (_label, payload, why) => {
    expect(describePayloadProblem(payload)).toMatch(why);
    const html = renderField(payload);
    expect(html.length).toBeGreaterThan(0);
    expect(html).toContain(`class="error-panel"`);
    expect(html).toContain(`role="alert"`);
    expect(html).not.toContain("<svg");
  });

  it("escapes markup in the error message", () => {
    const html = renderErrorPanel(`<script>alert("x")</script>`);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("accepts the canned play payload", () => {
    expect(describePayloadProblem(makePlay())).toBeNull();
  });
});

describe("scrubRange", () => {
  it("spans snap to the last tracked frame", () => {
    expect(scrubRange(makePlay())).toEqual({ min: SNAP_FRAME, max: 30 });
  });
});
