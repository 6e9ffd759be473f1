// Thin typed client for the session service. All statistics shown in the
// console come from these responses; the client never computes its own.

export interface ConfigPayload {
  p0: number;
  p1: number;
  alpha: number;
  beta: number;
  n_max: number;
  k_star: number;
}

export interface StateRecord {
  n_seen: number;
  defects: number;
  log_lr: number;
  verdict: string;
}

export interface CreateResponse {
  id: string;
  created_at: number;
  config: ConfigPayload;
  state: StateRecord;
  log_a: number;
  log_b: number;
}

export interface SessionView {
  id: string;
  created_at: number;
  config: ConfigPayload;
  state: StateRecord;
  events: { result: string; ts: number }[];
  trajectory: number[];
  log_a: number;
  log_b: number;
}

export interface ResultResponse extends StateRecord {
  likelihood_ratio: number;
  log_a: number;
  log_b: number;
}

export interface FieldError {
  field: string | null;
  message: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: FieldError,
  ) {
    super(detail.message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const detail: FieldError = body?.error ?? {
      field: null,
      message: `request failed with status ${response.status}`,
    };
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export function createSession(config: ConfigPayload): Promise<CreateResponse> {
  return request<CreateResponse>("/sessions", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(config),
  });
}

export function getSession(id: string): Promise<SessionView> {
  return request<SessionView>(`/sessions/${id}`);
}

export function recordResult(
  id: string,
  result: "pass" | "defect",
): Promise<ResultResponse> {
  return request<ResultResponse>(`/sessions/${id}/results`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ result }),
  });
}

export function undoLast(id: string): Promise<ResultResponse> {
  return request<ResultResponse>(`/sessions/${id}/undo`, { method: "POST" });
}
