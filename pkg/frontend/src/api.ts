/** Thin client for the processing service. The viewer never manipulates
 * pixel values itself: every displayed pane is a verbatim service response. */

import { Capabilities, ProcessRequestBody, ProcessResponseBody } from "./types.js";

export function bytesToBase64(bytes: Uint8Array): string {
  if (typeof Buffer !== "undefined") {
    return Buffer.from(bytes).toString("base64");
  }
  let binary = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(binary);
}

export function base64ToBytes(data: string): Uint8Array {
  if (typeof Buffer !== "undefined") {
    return new Uint8Array(Buffer.from(data, "base64"));
  }
  const binary = atob(data);
  const out = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) {
    out[i] = binary.charCodeAt(i);
  }
  return out;
}

export class ServiceError extends Error {
  constructor(
    message: string,
    public readonly code: string | null = null,
    public readonly status: number | null = null,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async getCapabilities(): Promise<Capabilities> {
    const response = await this.fetchFn(`${this.baseUrl}/capabilities`);
    if (!response.ok) {
      throw new ServiceError(`capabilities failed: HTTP ${response.status}`, null, response.status);
    }
    return (await response.json()) as Capabilities;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchFn(`${this.baseUrl}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  /** POST one frame; resolves to the raw response (image still base64). */
  async process(body: ProcessRequestBody): Promise<ProcessResponseBody> {
    const response = await this.fetchFn(`${this.baseUrl}/process`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      let code: string | null = null;
      let message = `process failed: HTTP ${response.status}`;
      try {
        const err = (await response.json()) as { code?: string; message?: string };
        code = err.code ?? null;
        if (err.message) message = err.message;
      } catch {
        /* non-JSON error body */
      }
      throw new ServiceError(message, code, response.status);
    }
    return (await response.json()) as ProcessResponseBody;
  }

  /** Convenience: process and return the PNG bytes of the pane. */
  async processPng(body: ProcessRequestBody): Promise<Uint8Array> {
    return base64ToBytes((await this.process(body)).image);
  }
}
