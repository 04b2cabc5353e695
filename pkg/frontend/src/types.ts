/** Payload shapes of the EHCP query service, mirrored field for field.
 *
 * The client never computes statistics: every number it shows comes out of
 * one of these structures unchanged, so the types double as the contract
 * that the pass-through tests pin down.
 */

export interface PlaySummary {
  game_id: string;
  play_id: string;
  pass_result: string;
  targeted_receiver: string | null;
  throw_time: number;
  arrival_time: number;
}

export interface PlayIndex {
  plays: PlaySummary[];
  count: number;
}

/** One tracked entity state at one 10 Hz frame:
 * [frame_index, entity_id, x, y, speed, step_distance, direction,
 *  event_tag, team_side]. */
export type FrameRow = [
  number,
  string,
  number,
  number,
  number,
  number,
  number,
  string,
  string,
];

export interface PlayMeta {
  game_id: string;
  play_id: string;
  quarter: number;
  clock_seconds: number;
  down: number;
  yards_to_go: number;
  home_score_pre: number;
  visitor_score_pre: number;
  offense_is_home: boolean;
  pass_result: string;
  pass_length: number | null;
  description: string | null;
}

export interface PlayDetail {
  meta: PlayMeta;
  /** [snap_frame, throw_frame, arrival_frame, outcome_tag] */
  timeline: [number, number, number, string];
  targeted_receiver: string | null;
  tracks: Record<string, FrameRow[]>;
  passer_id: string | null;
  route_runners: string[];
  throw_time: number;
  arrival_time: number;
  observable_covariates: string[];
  missing_covariates: string[];
}

export interface EstimateSummary {
  mean: number;
  "q2.5": number;
  "q97.5": number;
  M: number;
  mode: string;
  seed: number;
  draws?: number[];
}

export interface TrajectoryPointPayload extends EstimateSummary {
  t: number;
}

export interface TrajectoryPayload {
  receiver_id: string;
  points: TrajectoryPointPayload[];
  notices: string[];
  seed: number;
}

export interface SeedsEcho {
  imputation_seed: number;
  fit_seed: number;
}

export interface TrajectoryReport {
  game_id: string;
  play_id: string;
  passer_id: string | null;
  targeted_receiver: string | null;
  throw_time: number;
  arrival_time: number;
  M: number;
  mode: string;
  seed: number;
  trajectories: TrajectoryPayload[];
  actual_fitted: {
    receiver_id: string;
    caught: number;
    mean: number;
    "q2.5": number;
    "q97.5": number;
  } | null;
  seeds: SeedsEcho;
}

export interface WhatIfRequestBody {
  game_id: string;
  play_id: string;
  receiver_id: string;
  t: number;
  pinning: Record<string, number>;
  M: number;
  mode: "joint-donor" | "per-group";
  seed: number;
  include_draws: boolean;
}

export interface WhatIfResponse extends EstimateSummary {
  game_id: string;
  play_id: string;
  receiver_id: string;
  t: number;
  play_duration: number;
  pinning: Record<string, number>;
  histogram: { counts: number[]; edges: number[] };
  seeds: SeedsEcho;
}

export interface FieldError {
  /** e.g. ["body", "pinning", "air_seconds"] */
  loc: (string | number)[];
  msg: string;
}
