/** Shared types for the viewer: service schemas and persisted state. */

export interface OperatorInfo {
  params: Record<string, unknown>;
  profile_required: boolean;
}

export interface Capabilities {
  version: string;
  deficiency_kinds: string[];
  anomalous_kinds: string[];
  operators: Record<string, OperatorInfo>;
  layouts: string[];
  augment: { bands: string[]; mix: number; uv_color: number[]; ir_color: number[] };
  defaults: { layout: string; gutter_px: number };
}

export interface RecipeEntry {
  op: string;
  params: Record<string, unknown>;
}

/** Full persisted viewer state (schema versioned for migrations). */
export interface ViewerState {
  version: number;
  kind: string;
  severity: number;
  recipe: RecipeEntry[];
  layout: string;
  blinkEnabled: boolean;
  blinkPeriodMs: number;
  lastTimingMs: number | null;
  sourceName: string | null;
}

export interface ProcessRequestBody {
  image: string;
  profile: { kind: string; severity: number } | null;
  recipe: RecipeEntry[];
  layout: string;
  t_ms: number;
}

export interface ProcessResponseBody {
  image: string;
  timing_ms: number;
  applied: unknown;
}

export type PaneName = "simulated" | "corrected";
