// View-model for a live session. Every number here mirrors a service
// response; the only derivation is pairing each log-likelihood value with
// its 1-based step index for the chart.

import type { ConfigPayload, ResultResponse, SessionView, StateRecord } from "./api.js";

export interface TrajectoryPoint {
  step: number;
  logLr: number;
}

export interface SessionViewModel {
  id: string;
  config: ConfigPayload;
  state: StateRecord;
  trajectory: TrajectoryPoint[];
  logA: number;
  logB: number;
  eventCount: number;
}

export function viewModelFromSession(view: SessionView): SessionViewModel {
  return {
    id: view.id,
    config: view.config,
    state: view.state,
    trajectory: view.trajectory.map((logLr, i) => ({ step: i + 1, logLr })),
    logA: view.log_a,
    logB: view.log_b,
    eventCount: view.events.length,
  };
}

export function appendResult(
  vm: SessionViewModel,
  response: ResultResponse,
): SessionViewModel {
  const state: StateRecord = {
    n_seen: response.n_seen,
    defects: response.defects,
    log_lr: response.log_lr,
    verdict: response.verdict,
  };
  return {
    ...vm,
    state,
    trajectory: [...vm.trajectory, { step: response.n_seen, logLr: response.log_lr }],
    eventCount: vm.eventCount + 1,
  };
}

export function rollBack(vm: SessionViewModel, response: ResultResponse): SessionViewModel {
  const state: StateRecord = {
    n_seen: response.n_seen,
    defects: response.defects,
    log_lr: response.log_lr,
    verdict: response.verdict,
  };
  return {
    ...vm,
    state,
    trajectory: vm.trajectory.slice(0, -1),
    eventCount: vm.eventCount - 1,
  };
}

export type BannerKind = "none" | "accept" | "reject" | "continue";

export interface Banner {
  kind: BannerKind;
  label: string;
}

export function bannerFor(verdict: string): Banner {
  switch (verdict) {
    case "accept":
      return { kind: "accept", label: "ACCEPT — inspection complete" };
    case "truncated_accept":
      return { kind: "accept", label: "ACCEPT (at sample ceiling) — inspection complete" };
    case "reject":
      return { kind: "reject", label: "REJECT — inspection complete" };
    case "truncated_reject":
      return { kind: "reject", label: "REJECT (at sample ceiling) — inspection complete" };
    default:
      return { kind: "continue", label: "Inspecting — keep recording items" };
  }
}

export interface ConfigInput {
  p0: string;
  p1: string;
  alpha: string;
  beta: string;
  n_max: string;
  k_star: string;
}

export interface ValidationError {
  field: keyof ConfigInput;
  message: string;
}

// Mirrors the service's own rules so obviously-bad input never leaves the
// browser; the service remains the authority on anything subtler.
export function validateConfig(
  input: ConfigInput,
): { config: ConfigPayload; error: null } | { config: null; error: ValidationError } {
  const bad = (field: keyof ConfigInput, message: string) => ({
    config: null,
    error: { field, message },
  });
  const numbers: Record<string, number> = {};
  for (const field of ["p0", "p1", "alpha", "beta"] as const) {
    const value = Number(input[field]);
    if (!Number.isFinite(value) || value <= 0 || value >= 1) {
      return bad(field, `${field} must be a number in (0, 1)`);
    }
    numbers[field] = value;
  }
  if (numbers.p1 <= numbers.p0) {
    return bad("p1", "p1 must exceed p0");
  }
  const nMax = Number(input.n_max);
  if (!Number.isInteger(nMax) || nMax < 1) {
    return bad("n_max", "n_max must be an integer >= 1");
  }
  const kStar = Number(input.k_star);
  if (!Number.isInteger(kStar) || kStar < 0 || kStar > nMax) {
    return bad("k_star", "k_star must be an integer in [0, n_max]");
  }
  return {
    config: {
      p0: numbers.p0,
      p1: numbers.p1,
      alpha: numbers.alpha,
      beta: numbers.beta,
      n_max: nMax,
      k_star: kStar,
    },
    error: null,
  };
}

// Display helper: the chart and readout stay in log units; the toggle only
// changes how the current value is printed.
export function formatStatistic(logLr: number, showRatio: boolean): string {
  if (!showRatio) {
    return `log Λ = ${logLr.toFixed(4)}`;
  }
  const ratio = Math.exp(logLr);
  if (ratio !== 0 && (ratio < 1e-4 || ratio > 1e4)) {
    return `Λ = ${ratio.toExponential(3)}`;
  }
  return `Λ = ${ratio.toFixed(4)}`;
}
