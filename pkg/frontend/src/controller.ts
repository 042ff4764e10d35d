/** Request scheduling: 150 ms debounce per user change, at most one in-flight
 * request per pane with latest-wins, and a blink clock that re-requests the
 * corrected pane every half period with strictly increasing t_ms. */

import { ApiClient } from "./api.js";
import { buildPaneRequest, DEBOUNCE_MS } from "./state.js";
import { PaneName, ProcessRequestBody, ViewerState } from "./types.js";

export interface PaneUpdate {
  pane: PaneName;
  png: Uint8Array;
  timingMs: number;
}

export interface ControllerHooks {
  onPanes: (updates: PaneUpdate[]) => void;
  onError: (message: string) => void;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
}

interface InFlight {
  generation: number;
}

export class ViewerController {
  private state: ViewerState | null = null;
  private imageBase64: string | null = null;
  private debounceHandle: unknown = null;
  private blinkHandle: unknown = null;
  private generation = 0;
  private inFlight: InFlight | null = null;
  private pendingRefresh = false;
  private lastBlinkT = -1;

  private readonly now: () => number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;
  private readonly clearTimer: (handle: unknown) => void;

  constructor(
    private readonly api: ApiClient,
    private readonly hooks: ControllerHooks,
  ) {
    this.now = hooks.now ?? (() => Date.now());
    this.setTimer = hooks.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = hooks.clearTimer ?? ((h) => clearTimeout(h as ReturnType<typeof setTimeout>));
  }

  /** Called by the view on every control change or new source image. */
  update(state: ViewerState, imageBase64: string | null): void {
    this.state = state;
    this.imageBase64 = imageBase64;
    this.generation++; // any in-flight response is now stale and will be dropped
    this.scheduleRefresh();
    this.configureBlink();
  }

  /** Debounced: collapses bursts of slider changes into one request pair. */
  private scheduleRefresh(): void {
    if (this.debounceHandle !== null) {
      this.clearTimer(this.debounceHandle);
    }
    this.debounceHandle = this.setTimer(() => {
      this.debounceHandle = null;
      void this.refresh();
    }, DEBOUNCE_MS);
  }

  /** Issue both pane requests; stale responses (superseded by a newer
   * generation) are dropped so panes always show the latest state. */
  async refresh(tMs = 0): Promise<void> {
    if (this.state === null || this.imageBase64 === null) {
      return;
    }
    if (this.inFlight !== null) {
      this.pendingRefresh = true;
      return;
    }
    const generation = ++this.generation;
    this.inFlight = { generation };
    const simulated = buildPaneRequest(this.state, this.imageBase64, "simulated");
    const corrected = buildPaneRequest(this.state, this.imageBase64, "corrected", tMs);
    try {
      const [simRes, corRes] = await Promise.all([
        this.api.process(simulated),
        this.api.process(corrected),
      ]);
      if (generation === this.generation) {
        // atomic pane update: both panes swap together
        this.hooks.onPanes([
          { pane: "simulated", png: this.decode(simRes.image), timingMs: simRes.timing_ms },
          { pane: "corrected", png: this.decode(corRes.image), timingMs: corRes.timing_ms },
        ]);
      }
    } catch (err) {
      // keep prior panes; surface the failure
      this.hooks.onError(err instanceof Error ? err.message : String(err));
    } finally {
      this.inFlight = null;
      if (this.pendingRefresh) {
        this.pendingRefresh = false;
        void this.refresh();
      }
    }
  }

  private decode(b64: string): Uint8Array {
    if (typeof Buffer !== "undefined") {
      return new Uint8Array(Buffer.from(b64, "base64"));
    }
    const binary = atob(b64);
    const out = new Uint8Array(binary.length);
    for (let i = 0; i < binary.length; i++) {
      out[i] = binary.charCodeAt(i);
    }
    return out;
  }

  /** Blink: re-request at each half-period boundary with advancing t_ms. */
  private configureBlink(): void {
    if (this.blinkHandle !== null) {
      this.clearTimer(this.blinkHandle);
      this.blinkHandle = null;
    }
    if (this.state === null || !this.state.blinkEnabled) {
      return;
    }
    const half = Math.max(1, this.state.blinkPeriodMs / 2);
    const tick = () => {
      const t = this.nextBlinkT();
      void this.refresh(t);
      this.blinkHandle = this.setTimer(tick, half);
    };
    this.blinkHandle = this.setTimer(tick, half);
  }

  /** Strictly increasing blink clock even if the wall clock stalls. */
  nextBlinkT(): number {
    const t = Math.max(this.now(), this.lastBlinkT + 1);
    this.lastBlinkT = t;
    return t;
  }

  buildRequests(tMs = 0): { simulated: ProcessRequestBody; corrected: ProcessRequestBody } | null {
    if (this.state === null || this.imageBase64 === null) {
      return null;
    }
    return {
      simulated: buildPaneRequest(this.state, this.imageBase64, "simulated"),
      corrected: buildPaneRequest(this.state, this.imageBase64, "corrected", tMs),
    };
  }

  stop(): void {
    if (this.debounceHandle !== null) {
      this.clearTimer(this.debounceHandle);
      this.debounceHandle = null;
    }
    if (this.blinkHandle !== null) {
      this.clearTimer(this.blinkHandle);
      this.blinkHandle = null;
    }
  }
}
