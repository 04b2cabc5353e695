/** What-if request state and its URL serialization.
 *
 * The state is the single source of truth for the request body: the body
 * sent to the service is a field-for-field mirror of it, and the URL form
 * round-trips back to a state that produces the identical body. Pin order
 * is preserved through both directions so serialized bodies compare equal
 * byte for byte.
 */

import type { PlayDetail, WhatIfRequestBody } from "./types.js";

export type Mode = "joint-donor" | "per-group";

export const MODES: readonly Mode[] = ["joint-donor", "per-group"];

export interface WhatIfRequestState {
  gameId: string;
  playId: string;
  receiverId: string;
  t: number;
  pinning: Record<string, number>;
  M: number;
  mode: Mode;
  seed: number;
}

export function defaultState(play: PlayDetail): WhatIfRequestState {
  const receiver = play.targeted_receiver ?? play.route_runners[0] ?? "";
  return {
    gameId: play.meta.game_id,
    playId: play.meta.play_id,
    receiverId: receiver,
    t: play.throw_time,
    pinning: {},
    M: 40,
    mode: "joint-donor",
    seed: 0,
  };
}

export function buildRequestBody(state: WhatIfRequestState): WhatIfRequestBody {
  return {
    game_id: state.gameId,
    play_id: state.playId,
    receiver_id: state.receiverId,
    t: state.t,
    pinning: { ...state.pinning },
    M: state.M,
    mode: state.mode,
    seed: state.seed,
    include_draws: false,
  };
}

/** Slider bound: the service scores hypothetical throws up to the pass
 * arrival, which the play payload reports directly. */
export function playDuration(play: PlayDetail): number {
  return play.arrival_time;
}

/** Check the state against the play it targets. Returns one message per
 * violated constraint; an empty list means the state is submittable. */
export function validateState(state: WhatIfRequestState,
                              play: PlayDetail): string[] {
  const errors: string[] = [];
  if (state.gameId !== play.meta.game_id || state.playId !== play.meta.play_id) {
    errors.push("state targets a different play than the one loaded");
  }
  if (!play.route_runners.includes(state.receiverId)) {
    errors.push(`receiver ${state.receiverId} is not a route runner on this play`);
  }
  if (!Number.isFinite(state.t) || state.t < 0) {
    errors.push("t must be a non-negative number of seconds after the snap");
  } else if (state.t > playDuration(play)) {
    errors.push(`t exceeds the play duration (${playDuration(play)}s)`);
  }
  const allowed = new Set(play.missing_covariates);
  for (const key of Object.keys(state.pinning)) {
    if (!allowed.has(key)) {
      errors.push(`${key} is not a pinnable covariate on this play`);
    } else if (!Number.isFinite(state.pinning[key])) {
      errors.push(`pinned value for ${key} must be a finite number`);
    }
  }
  if (!Number.isInteger(state.M) || state.M < 1) {
    errors.push("M must be a positive integer");
  }
  if (!MODES.includes(state.mode)) {
    errors.push(`mode must be one of ${MODES.join(", ")}`);
  }
  if (!Number.isInteger(state.seed)) {
    errors.push("seed must be an integer");
  }
  return errors;
}

// URL serialization. Numbers travel as their default string conversion,
// which Number() inverts exactly for every finite double, so a state that
// survives the round trip builds a byte-identical request body.

export function stateToUrl(state: WhatIfRequestState): string {
  const params = new URLSearchParams();
  params.set("game", state.gameId);
  params.set("play", state.playId);
  params.set("receiver", state.receiverId);
  params.set("t", String(state.t));
  params.set("M", String(state.M));
  params.set("mode", state.mode);
  params.set("seed", String(state.seed));
  for (const [name, value] of Object.entries(state.pinning)) {
    params.append("pin", `${name}:${String(value)}`);
  }
  return "?" + params.toString();
}

export class UrlStateError extends Error {}

function requireParam(params: URLSearchParams, name: string): string {
  const value = params.get(name);
  if (value === null) {
    throw new UrlStateError(`missing query parameter ${name}`);
  }
  return value;
}

function parseNumber(text: string, name: string): number {
  if (text.trim() === "") {
    throw new UrlStateError(`query parameter ${name} is empty`);
  }
  const value = Number(text);
  if (Number.isNaN(value)) {
    throw new UrlStateError(`query parameter ${name} is not a number: ${text}`);
  }
  return value;
}

export function stateFromUrl(url: string): WhatIfRequestState {
  const hashAt = url.indexOf("#");
  const trimmed = hashAt >= 0 ? url.slice(0, hashAt) : url;
  const queryAt = trimmed.indexOf("?");
  const params = new URLSearchParams(
    queryAt >= 0 ? trimmed.slice(queryAt + 1) : trimmed);
  const mode = requireParam(params, "mode");
  if (!(MODES as readonly string[]).includes(mode)) {
    throw new UrlStateError(`query parameter mode is not one of `
      + `${MODES.join(", ")}: ${mode}`);
  }
  // null prototype so hostile pin names like __proto__ stay plain data
  const pinning: Record<string, number> = Object.create(null);
  for (const entry of params.getAll("pin")) {
    const sep = entry.lastIndexOf(":");
    if (sep <= 0 || sep === entry.length - 1) {
      throw new UrlStateError(`malformed pin parameter: ${entry}`);
    }
    const name = entry.slice(0, sep);
    pinning[name] = parseNumber(entry.slice(sep + 1), `pin ${name}`);
  }
  return {
    gameId: requireParam(params, "game"),
    playId: requireParam(params, "play"),
    receiverId: requireParam(params, "receiver"),
    t: parseNumber(requireParam(params, "t"), "t"),
    pinning,
    M: parseNumber(requireParam(params, "M"), "M"),
    mode: mode as Mode,
    seed: parseNumber(requireParam(params, "seed"), "seed"),
  };
}
