/** Canned service payloads and a routing fetch mock.
 *
 * Shapes mirror the query service exactly; the numbers are deliberately
 * awkward doubles so any client-side rounding or re-derivation shows up
 * as a mismatch in the verbatim checks.
 */

import type { FetchLike } from "../src/api.js";
import type {
  FrameRow,
  PlayDetail,
  TrajectoryReport,
  WhatIfResponse,
} from "../src/types.js";

function walk(entity: string, side: string, startX: number, startY: number,
              dx: number, dy: number, frames: number,
              events: Record<number, string> = {}): FrameRow[] {
  const rows: FrameRow[] = [];
  for (let i = 1; i <= frames; i += 1) {
    rows.push([
      i, entity,
      startX + dx * (i - 1), startY + dy * (i - 1),
      Math.hypot(dx, dy) * 10, Math.hypot(dx, dy),
      0.0, events[i] ?? "", side,
    ]);
  }
  return rows;
}

export const SNAP_FRAME = 1;
export const THROW_FRAME = 12;
export const ARRIVAL_FRAME = 25;

export const MISSING_COVARIATES = [
  "air_seconds", "pass_distance",
  "receiver_defender_euclid_arrival", "receiver_defender_path_arrival",
  "ball_receiver_euclid_arrival",
];

export function makePlay(): PlayDetail {
  const events = {
    [SNAP_FRAME]: "ball_snap",
    [THROW_FRAME]: "pass_forward",
    [ARRIVAL_FRAME]: "pass_outcome_caught",
  };
  return {
    meta: {
      game_id: "2017090700",
      play_id: "68",
      quarter: 1,
      clock_seconds: 900.0,
      down: 1,
      yards_to_go: 10,
      home_score_pre: 0,
      visitor_score_pre: 0,
      offense_is_home: true,
      pass_result: "C",
      pass_length: 12.0,
      description: "(15:00) pass short right complete",
    },
    timeline: [SNAP_FRAME, THROW_FRAME, ARRIVAL_FRAME,
               "pass_outcome_caught"],
    targeted_receiver: "20",
    tracks: {
      "10": walk("10", "home", 40, 26.65, -0.1, 0, 30, events),
      "20": walk("20", "home", 42, 30, 0.8, 0.2, 30, events),
      "21": walk("21", "home", 42, 20, 0.7, -0.3, 30, events),
      "30": walk("30", "away", 48, 30.5, 0.75, 0.18, 30, events),
      "31": walk("31", "away", 48, 19.5, 0.65, -0.28, 30, events),
      "ball": walk("ball", "ball", 40, 26.65, 0.9, 0.1, 30, events),
    },
    passer_id: "10",
    route_runners: ["20", "21"],
    throw_time: 1.1,
    arrival_time: 2.4,
    observable_covariates: ["quarter", "down", "yards_to_go"],
    missing_covariates: MISSING_COVARIATES,
  };
}

export function makeTrajectoryReport(): TrajectoryReport {
  const mk = (receiver: string, offset: number) => ({
    receiver_id: receiver,
    points: [0.0, 0.5, 1.0, 1.5, 2.0].map((t, i) => ({
      t,
      mean: 0.31857394857201 + offset + 0.01 * i,
      "q2.5": 0.10293857102935 + offset + 0.01 * i,
      "q97.5": 0.58392057382911 + offset + 0.01 * i,
      M: 40,
      mode: "joint-donor",
      seed: 0,
    })),
    notices: receiver === "21" ? ["receiver off screen after 1.5s"] : [],
    seed: 0,
  });
  return {
    game_id: "2017090700",
    play_id: "68",
    passer_id: "10",
    targeted_receiver: "20",
    throw_time: 1.1,
    arrival_time: 2.4,
    M: 40,
    mode: "joint-donor",
    seed: 0,
    trajectories: [mk("20", 0.0), mk("21", 0.05)],
    actual_fitted: {
      receiver_id: "20",
      caught: 1,
      mean: 0.71038572910473,
      "q2.5": 0.52017392857114,
      "q97.5": 0.86329105728391,
    },
    seeds: { imputation_seed: 0, fit_seed: 9 },
  };
}

export function makeWhatIfResponse(): WhatIfResponse {
  const counts = [0, 0, 1, 2, 4, 7, 11, 14, 17, 13,
                  10, 8, 6, 4, 2, 1, 0, 0, 0, 0];
  const edges = Array.from({ length: 21 }, (_, i) => i * 0.05);
  return {
    mean: 0.30000000000000004,
    "q2.5": 0.12859372011935716,
    "q97.5": 0.6293817492017353,
    M: 40,
    mode: "joint-donor",
    seed: 4,
    game_id: "2017090700",
    play_id: "68",
    receiver_id: "20",
    t: 0.7,
    play_duration: 2.4,
    pinning: { air_seconds: 1.3000000000000003 },
    histogram: { counts, edges },
    seeds: { imputation_seed: 4, fit_seed: 9 },
  };
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

/** Route requests by URL substring; records every call it serves. */
export function routingFetch(routes: Record<string, () => Response>,
                             calls: RecordedCall[] = []): FetchLike {
  return (url, init) => {
    calls.push({ url, ...(init !== undefined ? { init } : {}) });
    for (const [needle, make] of Object.entries(routes)) {
      if (url.includes(needle)) {
        return Promise.resolve(make());
      }
    }
    return Promise.resolve(jsonResponse({ detail: "no route" }, 404));
  };
}
