import fc from "fast-check";
import { describe, expect, it } from "vitest";

import { renderFieldErrors, renderWhatIfSummary } from "../src/histogram.js";
import { renderTrajectories } from "../src/trajectory.js";
import { makeTrajectoryReport, makeWhatIfResponse } from "./fixtures.js";

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

describe("trajectory overlay", () => {
  const report = makeTrajectoryReport();

  it("renders one layer per receiver with its band and mean line", () => {
    const svg = renderTrajectories(report, "20");
    const layers = findAll(svg, /<g class="trajectory[^"]*"[^>]*>/);
    expect(layers).toHaveLength(2);
    expect(findAll(svg, /<polygon class="band"/)).toHaveLength(2);
    expect(findAll(svg, /<polyline class="mean"/)).toHaveLength(2);
    const selected = layers.filter((el) => el.includes("selected"));
    expect(selected).toHaveLength(1);
    expect(attrOf(selected[0]!, "data-receiver-id")).toBe("20");
  });

  it("carries every service value verbatim on its point", () => {
    const svg = renderTrajectories(report);
    for (const trajectory of report.trajectories) {
      for (const point of trajectory.points) {
        const needle = `data-receiver-id="${trajectory.receiver_id}"`
          + ` data-t="${String(point.t)}"`;
        const el = findAll(svg, new RegExp(
          `<circle class="trajectory-point"[^>]*${needle}[^>]*/>`))[0];
        expect(el, needle).toBeDefined();
        expect(attrOf(el!, "data-mean")).toBe(String(point.mean));
        expect(attrOf(el!, "data-lo")).toBe(String(point["q2.5"]));
        expect(attrOf(el!, "data-hi")).toBe(String(point["q97.5"]));
      }
    }
  });

  it("echoes the report seeds and settings on the chart root", () => {
    const svg = renderTrajectories(report);
    expect(attrOf(svg, "data-imputation-seed")).toBe("0");
    expect(attrOf(svg, "data-fit-seed")).toBe("9");
    expect(attrOf(svg, "data-m")).toBe("40");
    expect(attrOf(svg, "data-mode")).toBe("joint-donor");
  });

  it("shows the fitted value for the actual throw verbatim", () => {
    const svg = renderTrajectories(report);
    const fitted = findAll(svg, /<circle class="actual-fitted"[^>]*\/>/)[0]!;
    expect(attrOf(fitted, "data-mean")).toBe("0.71038572910473");
    expect(attrOf(fitted, "data-caught")).toBe("1");
  });

  it("omits the fitted marker when the service sends null", () => {
    const svg = renderTrajectories({ ...report, actual_fitted: null });
    expect(svg).not.toContain("actual-fitted");
  });

  it("keeps receiver notices in the markup", () => {
    const svg = renderTrajectories(report);
    expect(svg).toContain("<desc>receiver off screen after 1.5s</desc>");
  });

  it("falls back to an error panel when the payload has no list", () => {
    const html = renderTrajectories(
      { ...report, trajectories: undefined as never });
    expect(html).toContain(`class="error-panel"`);
    expect(html).toContain("no trajectory list");
  });
});

describe("what-if summary", () => {
  const result = makeWhatIfResponse();

  it("shows mean, interval, t, and seeds exactly as served", () => {
    const html = renderWhatIfSummary(result);
    expect(html).toContain(
      `<span class="mean">0.30000000000000004</span>`);
    expect(html).toContain(
      `[0.12859372011935716, 0.6293817492017353]`);
    expect(html).toContain(`<span class="t">0.7</span>`);
    expect(html).toContain(`<span class="imputation-seed">4</span>`);
    expect(html).toContain(`<span class="fit-seed">9</span>`);
    expect(attrOf(html, "data-mean")).toBe("0.30000000000000004");
    expect(attrOf(html, "data-lo")).toBe("0.12859372011935716");
    expect(attrOf(html, "data-hi")).toBe("0.6293817492017353");
  });

  it("renders the 20 service-computed bins with verbatim counts", () => {
    const html = renderWhatIfSummary(result);
    const bars = findAll(html, /<rect class="bin"[^>]*\/>/);
    expect(bars).toHaveLength(20);
    const counts = bars.map((el) => attrOf(el, "data-count"));
    expect(counts).toEqual(result.histogram.counts.map(String));
    expect(attrOf(bars[0]!, "data-left")).toBe("0");
    expect(attrOf(bars[19]!, "data-right")).toBe("1");
  });

  it("lists pinned covariates with their exact values", () => {
    const html = renderWhatIfSummary(result);
    expect(html).toContain("air_seconds = 1.3000000000000003");
    const bare = renderWhatIfSummary({ ...result, pinning: {} });
    expect(bare).toContain("no covariates pinned");
  });

  it("renders any response's numbers without alteration", () => {
    fc.assert(
      fc.property(
        fc.double({ noNaN: true, noDefaultInfinity: true }),
        fc.double({ noNaN: true, noDefaultInfinity: true }),
        fc.double({ noNaN: true, noDefaultInfinity: true }),
        (mean, lo, hi) => {
          const html = renderWhatIfSummary({
            ...result, mean, "q2.5": lo, "q97.5": hi,
          });
          expect(attrOf(html, "data-mean")).toBe(String(mean));
          expect(attrOf(html, "data-lo")).toBe(String(lo));
          expect(attrOf(html, "data-hi")).toBe(String(hi));
        },
      ),
      { numRuns: 200 },
    );
  });

  it("renders identical markup for identical responses", () => {
    expect(renderWhatIfSummary(makeWhatIfResponse()))
      .toBe(renderWhatIfSummary(makeWhatIfResponse()));
  });
});

describe("field error list", () => {
  it("renders one inline message per rejected field", () => {
    const html = renderFieldErrors({
      "pinning.quarter": "'quarter' is not an imputable covariate",
      t: "t is before the snap (must be >= 0)",
    });
    const items = findAll(html, /<li class="field-error"[^>]*>/);
    expect(items).toHaveLength(2);
    expect(html).toContain(`data-field="pinning.quarter"`);
    expect(html).toContain("is not an imputable covariate");
    expect(html).toContain(`data-field="t"`);
    expect(html).toContain("before the snap");
  });

  it("escapes service text before inlining it", () => {
    const html = renderFieldErrors({ t: `<img src=x onerror="p()">` });
    expect(html).not.toContain("<img");
    expect(html).toContain("&lt;img");
  });
});
