// Typed client for the session service. The UI performs no search logic
// of its own: every state change comes from these endpoints.

import { Choice, DatasetSummary, SessionResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string
  ) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "Content-Type": "application/json" },
    ...init
  });
  if (!response.ok) {
    let code = "http_error";
    let message = `request failed with status ${response.status}`;
    try {
      const body = await response.json();
      code = body.code ?? code;
      message = body.message ?? JSON.stringify(body);
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ApiError(response.status, code, message);
  }
  return response.json() as Promise<T>;
}

export function listDatasets(): Promise<{ datasets: DatasetSummary[] }> {
  return request("/v1/datasets");
}

export function createSession(
  datasetId: string,
  strategy: string,
  alpha: number,
  seed = 0
): Promise<SessionResponse> {
  return request("/v1/sessions", {
    method: "POST",
    body: JSON.stringify({ dataset_id: datasetId, strategy, alpha, seed })
  });
}

export function getSession(sessionId: string): Promise<SessionResponse> {
  return request(`/v1/sessions/${sessionId}`);
}

export function postAnswer(
  sessionId: string,
  choice: Choice,
  seq: number
): Promise<SessionResponse> {
  return request(`/v1/sessions/${sessionId}/answer`, {
    method: "POST",
    body: JSON.stringify({ choice, seq })
  });
}
