/** Browser wiring: binds the pure renderers to the page and keeps the
 * what-if state, the form controls, and the URL in sync.
 *
 * Everything statistical arrives over HTTP; this module only routes
 * events, swaps innerHTML, and mirrors state into the address bar.
 */

import { ApiClient, isAbort, ValidationError } from "./api.js";
import { renderErrorPanel, renderField, scrubRange } from "./field.js";
import { renderFieldErrors, renderWhatIfSummary } from "./histogram.js";
import { QueryHistory, renderComparison } from "./history.js";
import {
  buildRequestBody,
  defaultState,
  playDuration,
  stateFromUrl,
  stateToUrl,
  UrlStateError,
  validateState,
  type WhatIfRequestState,
} from "./state.js";
import { renderTrajectories } from "./trajectory.js";
import type { PlayDetail, TrajectoryReport } from "./types.js";

interface Elements {
  playSelect: HTMLSelectElement;
  field: HTMLElement;
  scrubber: HTMLInputElement;
  trajectoryPanel: HTMLElement;
  form: HTMLFormElement;
  receiverSelect: HTMLSelectElement;
  tInput: HTMLInputElement;
  mInput: HTMLInputElement;
  modeSelect: HTMLSelectElement;
  seedInput: HTMLInputElement;
  pinPanel: HTMLElement;
  errorPanel: HTMLElement;
  resultPanel: HTMLElement;
  comparisonPanel: HTMLElement;
}

function grab(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing page element #${id}`);
  }
  return el;
}

export class App {
  private play: PlayDetail | null = null;
  private report: TrajectoryReport | null = null;
  private state: WhatIfRequestState | null = null;
  private readonly history = new QueryHistory();

  constructor(private readonly api: ApiClient,
              private readonly el: Elements) {}

  async start(): Promise<void> {
    const index = await this.api.listPlays();
    this.el.playSelect.innerHTML = index.plays
      .map((p) => `<option value="${p.game_id}/${p.play_id}">`
        + `${p.game_id}/${p.play_id} (${p.pass_result})</option>`)
      .join("");
    this.el.playSelect.addEventListener("change",
      () => void this.onPlayChosen());
    this.el.field.addEventListener("click", (ev) => this.onFieldClick(ev));
    this.el.scrubber.addEventListener("input", () => this.redrawField());
    this.el.form.addEventListener("submit", (ev) => {
      ev.preventDefault();
      void this.onSubmit();
    });
    for (const input of [this.el.receiverSelect, this.el.tInput,
                         this.el.mInput, this.el.modeSelect,
                         this.el.seedInput]) {
      input.addEventListener("change", () => this.readForm());
    }
    const fromUrl = this.tryStateFromLocation();
    if (fromUrl !== null) {
      this.el.playSelect.value = `${fromUrl.gameId}/${fromUrl.playId}`;
      await this.onPlayChosen(fromUrl);
    } else if (index.plays.length > 0) {
      await this.onPlayChosen();
    }
  }

  private tryStateFromLocation(): WhatIfRequestState | null {
    if (!window.location.search) {
      return null;
    }
    try {
      return stateFromUrl(window.location.search);
    } catch (err) {
      if (err instanceof UrlStateError) {
        return null;
      }
      throw err;
    }
  }

  private async onPlayChosen(restored?: WhatIfRequestState): Promise<void> {
    const [gameId, playId] = this.el.playSelect.value.split("/");
    if (!gameId || !playId) {
      return;
    }
    try {
      this.play = await this.api.getPlay(gameId, playId);
    } catch (err) {
      this.el.field.innerHTML = renderErrorPanel(String(err));
      return;
    }
    this.state = restored ?? defaultState(this.play);
    const range = scrubRange(this.play);
    this.el.scrubber.min = String(range.min);
    this.el.scrubber.max = String(range.max);
    this.el.scrubber.value = String(range.min);
    this.writeForm();
    this.redrawField();
    this.syncUrl();
    try {
      this.report = await this.api.getTrajectories(gameId, playId);
      this.redrawTrajectories();
    } catch (err) {
      this.el.trajectoryPanel.innerHTML = renderErrorPanel(String(err));
    }
  }

  private onFieldClick(ev: Event): void {
    const target = ev.target as Element | null;
    const route = target?.closest("[data-receiver-id]");
    const receiver = route?.getAttribute("data-receiver-id");
    if (receiver && this.state) {
      this.state.receiverId = receiver;
      this.writeForm();
      this.redrawField();
      this.redrawTrajectories();
      this.syncUrl();
    }
  }

  private redrawField(): void {
    if (!this.play) {
      return;
    }
    this.el.field.innerHTML = renderField(this.play, {
      selectedReceiver: this.state?.receiverId ?? null,
      frameIndex: Number(this.el.scrubber.value),
    });
  }

  private redrawTrajectories(): void {
    if (this.report) {
      this.el.trajectoryPanel.innerHTML = renderTrajectories(
        this.report, this.state?.receiverId ?? null);
    }
  }

  private writeForm(): void {
    if (!this.play || !this.state) {
      return;
    }
    this.el.receiverSelect.innerHTML = this.play.route_runners
      .map((rid) => `<option value="${rid}">${rid}</option>`)
      .join("");
    this.el.receiverSelect.value = this.state.receiverId;
    this.el.tInput.value = String(this.state.t);
    this.el.tInput.max = String(playDuration(this.play));
    this.el.mInput.value = String(this.state.M);
    this.el.modeSelect.value = this.state.mode;
    this.el.seedInput.value = String(this.state.seed);
    this.writePins();
  }

  private writePins(): void {
    if (!this.play || !this.state) {
      return;
    }
    this.el.pinPanel.innerHTML = this.play.missing_covariates
      .map((name) => {
        const pinned = this.state!.pinning[name];
        const value = pinned === undefined ? "" : String(pinned);
        return `<label>${name} <input type="number" step="any"`
          + ` data-pin-input="${name}" value="${value}"></label>`;
      })
      .join("");
    for (const input of
         this.el.pinPanel.querySelectorAll<HTMLInputElement>("[data-pin-input]")) {
      input.addEventListener("change", () => {
        const name = input.getAttribute("data-pin-input");
        if (!name || !this.state) {
          return;
        }
        if (input.value.trim() === "") {
          delete this.state.pinning[name];
        } else {
          this.state.pinning[name] = Number(input.value);
        }
        this.syncUrl();
      });
    }
  }

  private readForm(): void {
    if (!this.state) {
      return;
    }
    this.state.receiverId = this.el.receiverSelect.value;
    this.state.t = Number(this.el.tInput.value);
    this.state.M = Number(this.el.mInput.value);
    this.state.mode =
      this.el.modeSelect.value as WhatIfRequestState["mode"];
    this.state.seed = Number(this.el.seedInput.value);
    this.redrawField();
    this.redrawTrajectories();
    this.syncUrl();
  }

  private syncUrl(): void {
    if (this.state) {
      window.history.replaceState(null, "", stateToUrl(this.state));
    }
  }

  private async onSubmit(): Promise<void> {
    if (!this.play || !this.state) {
      return;
    }
    this.el.errorPanel.innerHTML = "";
    const problems = validateState(this.state, this.play);
    if (problems.length > 0) {
      this.el.errorPanel.innerHTML = renderFieldErrors(
        Object.fromEntries(problems.map((msg, i) => [`check ${i + 1}`, msg])));
      return;
    }
    const body = buildRequestBody(this.state);
    try {
      const result = await this.api.submitWhatIf(body);
      this.history.push(body, result);
      this.el.resultPanel.innerHTML = renderWhatIfSummary(result);
      this.el.comparisonPanel.innerHTML = renderComparison(this.history);
    } catch (err) {
      if (isAbort(err)) {
        return;
      }
      if (err instanceof ValidationError) {
        this.el.errorPanel.innerHTML = renderFieldErrors(err.byField());
      } else {
        this.el.errorPanel.innerHTML = renderErrorPanel(String(err));
      }
    }
  }
}

export function mount(baseUrl: string): App {
  const api = new ApiClient(baseUrl, (url, init) => fetch(url, init));
  const app = new App(api, {
    playSelect: grab("play-select") as HTMLSelectElement,
    field: grab("field"),
    scrubber: grab("scrubber") as HTMLInputElement,
    trajectoryPanel: grab("trajectory-panel"),
    form: grab("whatif-form") as HTMLFormElement,
    receiverSelect: grab("receiver-select") as HTMLSelectElement,
    tInput: grab("t-input") as HTMLInputElement,
    mInput: grab("m-input") as HTMLInputElement,
    modeSelect: grab("mode-select") as HTMLSelectElement,
    seedInput: grab("seed-input") as HTMLInputElement,
    pinPanel: grab("pin-panel"),
    errorPanel: grab("error-panel"),
    resultPanel: grab("result-panel"),
    comparisonPanel: grab("comparison-panel"),
  });
  void app.start();
  return app;
}
