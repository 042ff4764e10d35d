/** DOM layer: builds controls from the capability document, renders panes.
 *
 * Every pane image element shows one verbatim service response (or the
 * untouched source for the original pane); the view never touches pixel
 * values. The layout control picks which panes are visible.
 */

import { ApiClient, bytesToBase64 } from "./api.js";
import { PaneUpdate, ViewerController } from "./controller.js";
import {
  defaultState,
  isAnomalous,
  restoreProfile,
  saveProfile,
  validateAgainstCapabilities,
} from "./state.js";
import { Capabilities, RecipeEntry, ViewerState } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export class ViewerView {
  private caps: Capabilities | null = null;
  private state: ViewerState = defaultState();
  private imageBase64: string | null = null;
  private controller: ViewerController | null = null;
  private paneUrls: Partial<Record<string, string>> = {};

  private banner!: HTMLDivElement;
  private controls!: HTMLFieldSetElement;
  private timing!: HTMLSpanElement;
  private panes: Record<string, { figure: HTMLElement; img: HTMLImageElement }> = {};

  constructor(
    private readonly root: HTMLElement,
    private readonly storage: Storage,
    private readonly api: ApiClient,
  ) {}

  async init(): Promise<void> {
    this.banner = el("div", { class: "banner", hidden: "hidden" });
    this.root.appendChild(this.banner);

    this.controls = el("fieldset", { class: "controls" });
    this.controls.disabled = true;
    this.root.appendChild(this.controls);

    const paneRow = el("div", { class: "panes" });
    for (const name of ["original", "simulated", "corrected"]) {
      const figure = el("figure", { class: `pane pane-${name}` });
      const img = el("img", { alt: name });
      figure.appendChild(img);
      figure.appendChild(el("figcaption", {}, name));
      paneRow.appendChild(figure);
      this.panes[name] = { figure, img };
    }
    this.root.appendChild(paneRow);
    this.timing = el("span", { class: "timing" });
    this.root.appendChild(this.timing);

    try {
      this.caps = await this.api.getCapabilities();
    } catch {
      this.showBanner("processing service unreachable; controls disabled");
      return;
    }

    const restored = restoreProfile(this.storage);
    if (restored.notice) {
      this.showBanner(restored.notice);
    }
    const validated = validateAgainstCapabilities(restored.state, this.caps);
    for (const warning of validated.warnings) {
      this.showBanner(warning);
    }
    this.state = validated.state;

    this.controller = new ViewerController(this.api, {
      onPanes: (updates) => this.renderPanes(updates),
      onError: (message) => this.showBanner(`request failed: ${message}`),
    });

    this.buildControls(this.caps);
    this.controls.disabled = false;
    this.applyLayout();
  }

  private showBanner(message: string): void {
    this.banner.hidden = false;
    this.banner.textContent = message;
  }

  private commit(): void {
    if (!this.caps) return;
    if (!isAnomalous(this.caps, this.state.kind)) {
      this.state.severity = 1.0;
    }
    saveProfile(this.storage, this.state);
    this.applyLayout();
    this.controller?.update(this.state, this.imageBase64);
  }

  private buildControls(caps: Capabilities): void {
    const sourceRow = el("div", { class: "row" });
    const fileInput = el("input", { type: "file", accept: "image/png" });
    fileInput.addEventListener("change", () => {
      const file = fileInput.files?.[0];
      if (file) {
        void file.arrayBuffer().then((buf) => {
          this.setSource(new Uint8Array(buf), file.name);
        });
      }
    });
    const cameraButton = el("button", { type: "button" }, "camera snapshot");
    cameraButton.addEventListener("click", () => void this.grabCameraFrame());
    sourceRow.append(el("label", {}, "image "), fileInput, cameraButton);
    this.controls.appendChild(sourceRow);

    const profileRow = el("div", { class: "row" });
    const kindSelect = el("select");
    for (const kind of caps.deficiency_kinds) {
      kindSelect.appendChild(el("option", { value: kind }, kind));
    }
    kindSelect.value = this.state.kind;
    const severity = el("input", {
      type: "range", min: "0", max: "1", step: "0.05", value: String(this.state.severity),
    });
    const severityLabel = el("span", {}, this.state.severity.toFixed(2));
    const syncSeverity = () => {
      const anomalous = isAnomalous(caps, this.state.kind);
      severity.disabled = !anomalous;
      if (!anomalous) {
        severity.value = "1";
        severityLabel.textContent = "1.00 (fixed)";
      } else {
        severity.value = String(this.state.severity);
        severityLabel.textContent = this.state.severity.toFixed(2);
      }
    };
    kindSelect.addEventListener("change", () => {
      this.state.kind = kindSelect.value;
      syncSeverity();
      this.commit();
    });
    severity.addEventListener("input", () => {
      this.state.severity = Number(severity.value);
      severityLabel.textContent = this.state.severity.toFixed(2);
      this.commit();
    });
    profileRow.append(el("label", {}, "deficiency "), kindSelect,
      el("label", {}, " severity "), severity, severityLabel);
    this.controls.appendChild(profileRow);
    syncSeverity();

    const layoutRow = el("div", { class: "row" });
    const layoutSelect = el("select");
    for (const layout of caps.layouts) {
      layoutSelect.appendChild(el("option", { value: layout }, layout));
    }
    layoutSelect.value = this.state.layout;
    layoutSelect.addEventListener("change", () => {
      this.state.layout = layoutSelect.value;
      this.commit();
    });
    const blink = el("input", { type: "checkbox" });
    blink.checked = this.state.blinkEnabled;
    const blinkPeriod = el("input", {
      type: "number", min: "100", step: "100", value: String(this.state.blinkPeriodMs),
    });
    blink.addEventListener("change", () => {
      this.state.blinkEnabled = blink.checked;
      this.commit();
    });
    blinkPeriod.addEventListener("change", () => {
      const value = Number(blinkPeriod.value);
      if (value > 0) {
        this.state.blinkPeriodMs = value;
        this.commit();
      }
    });
    layoutRow.append(el("label", {}, "layout "), layoutSelect,
      el("label", {}, " blink "), blink, el("label", {}, " period ms "), blinkPeriod);
    this.controls.appendChild(layoutRow);

    const opsBox = el("div", { class: "operators" });
    opsBox.appendChild(el("h3", {}, "correction operators"));
    for (const [name, info] of Object.entries(caps.operators)) {
      if (name === "blink") continue; // blink has its own dedicated control
      opsBox.appendChild(this.buildOperatorRow(name, info.params));
    }
    this.controls.appendChild(opsBox);
  }

  private buildOperatorRow(name: string, defaults: Record<string, unknown>): HTMLElement {
    const row = el("div", { class: "row op-row" });
    const toggle = el("input", { type: "checkbox" });
    const existing = this.state.recipe.find((e) => e.op === name);
    toggle.checked = existing !== undefined;
    const paramInputs: Record<string, HTMLInputElement> = {};

    const readParams = (): Record<string, unknown> => {
      const params: Record<string, unknown> = {};
      for (const [key, input] of Object.entries(paramInputs)) {
        const fallback = defaults[key];
        if (Array.isArray(fallback)) {
          const parts = input.value.split(",").map((v) => Number(v.trim()));
          if (parts.length === 3 && parts.every((v) => Number.isFinite(v))) {
            params[key] = parts;
          }
        } else {
          const value = Number(input.value);
          if (Number.isFinite(value)) {
            params[key] = value;
          }
        }
      }
      return params;
    };

    const sync = () => {
      const others = this.state.recipe.filter((e) => e.op !== name);
      if (toggle.checked) {
        const entry: RecipeEntry = { op: name, params: readParams() };
        this.state.recipe = [...others, entry];
      } else {
        this.state.recipe = others;
      }
      this.commit();
    };

    toggle.addEventListener("change", sync);
    row.append(toggle, el("label", {}, ` ${name} `));
    for (const [key, fallback] of Object.entries(defaults)) {
      const initial = existing?.params[key] ?? fallback;
      const input = el("input", {
        type: Array.isArray(fallback) ? "text" : "number",
        value: Array.isArray(initial) ? (initial as number[]).join(",") : String(initial),
        step: "any",
        class: "param",
      });
      input.addEventListener("change", () => {
        if (toggle.checked) sync();
      });
      paramInputs[key] = input;
      row.append(el("label", { class: "param-label" }, `${key}=`), input);
    }
    return row;
  }

  private setSource(bytes: Uint8Array, name: string): void {
    this.imageBase64 = bytesToBase64(bytes);
    this.state.sourceName = name;
    const url = URL.createObjectURL(new Blob([bytes.slice().buffer], { type: "image/png" }));
    this.swapPane("original", url);
    this.commit();
  }

  /** Snapshot-based camera capture: grab one frame, encode, process. */
  private async grabCameraFrame(): Promise<void> {
    try {
      const stream = await navigator.mediaDevices.getUserMedia({ video: true });
      const video = document.createElement("video");
      video.srcObject = stream;
      await video.play();
      const canvas = document.createElement("canvas");
      canvas.width = video.videoWidth;
      canvas.height = video.videoHeight;
      canvas.getContext("2d")?.drawImage(video, 0, 0);
      stream.getTracks().forEach((t) => t.stop());
      const blob: Blob | null = await new Promise((resolve) => canvas.toBlob(resolve, "image/png"));
      if (blob) {
        this.setSource(new Uint8Array(await blob.arrayBuffer()), "camera");
      }
    } catch (err) {
      this.showBanner(`camera unavailable: ${err instanceof Error ? err.message : String(err)}`);
    }
  }

  private swapPane(name: string, url: string): void {
    const old = this.paneUrls[name];
    if (old) {
      URL.revokeObjectURL(old);
    }
    this.paneUrls[name] = url;
    this.panes[name].img.src = url;
  }

  private renderPanes(updates: PaneUpdate[]): void {
    // both panes swap in the same tick
    for (const update of updates) {
      const url = URL.createObjectURL(new Blob([update.png.slice().buffer], { type: "image/png" }));
      this.swapPane(update.pane, url);
    }
    const last = updates[updates.length - 1];
    if (last) {
      this.state.lastTimingMs = last.timingMs;
      this.timing.textContent = `server ${last.timingMs.toFixed(1)} ms`;
      saveProfile(this.storage, this.state);
    }
  }

  private applyLayout(): void {
    const visible: Record<string, string[]> = {
      single: ["corrected"],
      side_by_side: ["original", "corrected"],
      triptych: ["original", "simulated", "corrected"],
    };
    const show = visible[this.state.layout] ?? visible.side_by_side;
    for (const [name, pane] of Object.entries(this.panes)) {
      pane.figure.hidden = !show.includes(name);
    }
  }
}
