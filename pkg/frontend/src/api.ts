/** Thin fetch client for the analysis service.
 *
 * Every computed result comes from the service; the UI never derives scores,
 * edges, or address spans on its own.
 */

import type {
  AnalysisResultWire,
  FieldError,
  SweepResultWire,
  UploadReply,
} from "./types.js";

export class ServiceError extends Error {
  status: number;
  details: FieldError[];

  constructor(status: number, message: string, details: FieldError[] = []) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
    this.details = details;
  }
}

async function fail(response: Response): Promise<never> {
  let message = `request failed with status ${response.status}`;
  let details: FieldError[] = [];
  try {
    const body = await response.json();
    const err = body?.error;
    if (typeof err?.message === "string") message = err.message;
    if (Array.isArray(err?.details)) {
      details = err.details;
      if (typeof err?.message !== "string") {
        message = details.map((d) => `${d.field}: ${d.message}`).join("; ");
      }
    }
  } catch {
    // non-JSON body, keep the status message
  }
  throw new ServiceError(response.status, message, details);
}

export class ServiceClient {
  baseUrl: string;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async health(): Promise<{ status: string }> {
    const response = await fetch(`${this.baseUrl}/health`);
    if (!response.ok) await fail(response);
    return response.json();
  }

  async upload(file: Blob, filename: string): Promise<UploadReply> {
    const form = new FormData();
    form.append("file", file, filename);
    const response = await fetch(`${this.baseUrl}/binaries`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) await fail(response);
    return response.json();
  }

  async analyze(
    binaryId: string,
    params: Record<string, unknown>,
    signal?: AbortSignal,
  ): Promise<AnalysisResultWire> {
    const response = await fetch(`${this.baseUrl}/binaries/${binaryId}/analyze`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(params),
      signal,
    });
    if (!response.ok) await fail(response);
    return response.json();
  }

  async sweep(
    binaryId: string,
    parameter: string,
    values: (number | string)[],
    params: Record<string, unknown>,
    topN = 1,
    signal?: AbortSignal,
  ): Promise<SweepResultWire> {
    const response = await fetch(`${this.baseUrl}/binaries/${binaryId}/sweep`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ parameter, values, params, topN }),
      signal,
    });
    if (!response.ok) await fail(response);
    return response.json();
  }

  graphUrl(binaryId: string, rank: number, format: "json" | "dot" = "json"): string {
    return `${this.baseUrl}/binaries/${binaryId}/candidates/${rank}/graph?format=${format}`;
  }

  async graphDot(binaryId: string, rank: number): Promise<string> {
    const response = await fetch(this.graphUrl(binaryId, rank, "dot"));
    if (!response.ok) await fail(response);
    return response.text();
  }
}
