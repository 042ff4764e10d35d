/** Viewer state: defaults, validation against the capability document,
 * persistence with schema migration, and the state -> request mapping.
 *
 * The mapping is total (every valid state yields requests) and injective for
 * the documented controls: any change to kind, severity, an operator toggle,
 * an operator parameter, layout or blink settings changes at least one
 * request body.
 */

import { Capabilities, PaneName, ProcessRequestBody, RecipeEntry, ViewerState } from "./types.js";

export const STATE_VERSION = 1;
export const STORAGE_KEY = "cvdkit-viewer-state";
export const DEBOUNCE_MS = 150;

export function defaultState(): ViewerState {
  return {
    version: STATE_VERSION,
    kind: "protanopia",
    severity: 1.0,
    recipe: [],
    layout: "side_by_side",
    blinkEnabled: false,
    blinkPeriodMs: 1000,
    lastTimingMs: null,
    sourceName: null,
  };
}

export function isAnomalous(caps: Capabilities, kind: string): boolean {
  return caps.anomalous_kinds.includes(kind);
}

export interface ValidationResult {
  state: ViewerState;
  warnings: string[];
}

/** Drop anything the capability document does not know about. */
export function validateAgainstCapabilities(state: ViewerState, caps: Capabilities): ValidationResult {
  const warnings: string[] = [];
  const out: ViewerState = { ...state, recipe: [...state.recipe] };

  if (!caps.deficiency_kinds.includes(out.kind)) {
    warnings.push(`unknown deficiency kind '${out.kind}' reset to protanopia`);
    out.kind = "protanopia";
  }
  if (!isAnomalous(caps, out.kind)) {
    out.severity = 1.0; // dichromacies and monochromacy are full severity
  }
  if (!caps.layouts.includes(out.layout)) {
    warnings.push(`unknown layout '${out.layout}' reset to side_by_side`);
    out.layout = "side_by_side";
  }
  const kept: RecipeEntry[] = [];
  for (const entry of out.recipe) {
    const info = caps.operators[entry.op];
    if (!info) {
      warnings.push(`dropped unknown operator '${entry.op}' from saved recipe`);
      continue;
    }
    const params: Record<string, unknown> = {};
    for (const [key, value] of Object.entries(entry.params)) {
      if (key in info.params) {
        params[key] = value;
      } else {
        warnings.push(`dropped unknown parameter '${entry.op}.${key}'`);
      }
    }
    kept.push({ op: entry.op, params });
  }
  out.recipe = kept;
  return { state: out, warnings };
}

export function serialize(state: ViewerState): string {
  return JSON.stringify(state);
}

export interface RestoreResult {
  state: ViewerState;
  reset: boolean;
  notice: string | null;
}

/** Parse stored state; corrupt or older-schema payloads reset to defaults. */
export function deserialize(raw: string | null): RestoreResult {
  if (raw === null) {
    return { state: defaultState(), reset: false, notice: null };
  }
  let parsed: unknown;
  try {
    parsed = JSON.parse(raw);
  } catch {
    return { state: defaultState(), reset: true, notice: "stored profile was corrupt; reset to defaults" };
  }
  if (typeof parsed !== "object" || parsed === null) {
    return { state: defaultState(), reset: true, notice: "stored profile was corrupt; reset to defaults" };
  }
  const obj = parsed as Partial<ViewerState>;
  if (obj.version !== STATE_VERSION) {
    return {
      state: defaultState(),
      reset: true,
      notice: `stored profile schema v${String(obj.version)} is not v${STATE_VERSION}; reset to defaults`,
    };
  }
  const base = defaultState();
  const state: ViewerState = {
    version: STATE_VERSION,
    kind: typeof obj.kind === "string" ? obj.kind : base.kind,
    severity: typeof obj.severity === "number" ? Math.min(1, Math.max(0, obj.severity)) : base.severity,
    recipe: Array.isArray(obj.recipe)
      ? obj.recipe
          .filter((e): e is RecipeEntry => typeof e === "object" && e !== null && typeof e.op === "string")
          .map((e) => ({ op: e.op, params: typeof e.params === "object" && e.params !== null ? e.params : {} }))
      : base.recipe,
    layout: typeof obj.layout === "string" ? obj.layout : base.layout,
    blinkEnabled: typeof obj.blinkEnabled === "boolean" ? obj.blinkEnabled : base.blinkEnabled,
    blinkPeriodMs: typeof obj.blinkPeriodMs === "number" && obj.blinkPeriodMs > 0 ? obj.blinkPeriodMs : base.blinkPeriodMs,
    lastTimingMs: typeof obj.lastTimingMs === "number" ? obj.lastTimingMs : null,
    sourceName: typeof obj.sourceName === "string" ? obj.sourceName : null,
  };
  return { state, reset: false, notice: null };
}

export function saveProfile(storage: Pick<Storage, "setItem">, state: ViewerState): void {
  storage.setItem(STORAGE_KEY, serialize(state));
}

export function restoreProfile(storage: Pick<Storage, "getItem">): RestoreResult {
  return deserialize(storage.getItem(STORAGE_KEY));
}

/** Recipe the corrected pane sends: enabled operators plus a trailing blink
 * step when blink mode is on. */
export function effectiveRecipe(state: ViewerState): RecipeEntry[] {
  const steps = state.recipe.map((e) => ({ op: e.op, params: { ...e.params } }));
  if (state.blinkEnabled) {
    steps.push({ op: "blink", params: { period_ms: state.blinkPeriodMs } });
  }
  return steps;
}

/** Build the request body for one pane. The simulated pane carries the
 * profile and no recipe; the corrected pane carries the recipe (profile
 * attached so profile-driven operators can run). Both are single layout so
 * each pane is one whole, byte-exact service response. */
export function buildPaneRequest(
  state: ViewerState,
  imageBase64: string,
  pane: PaneName,
  tMs = 0,
): ProcessRequestBody {
  if (pane === "simulated") {
    return {
      image: imageBase64,
      profile: { kind: state.kind, severity: state.severity },
      recipe: [],
      layout: "single",
      t_ms: 0,
    };
  }
  const recipe = effectiveRecipe(state);
  return {
    image: imageBase64,
    profile: recipe.length > 0 ? { kind: state.kind, severity: state.severity } : null,
    recipe,
    layout: "single",
    t_ms: tMs,
  };
}
