import assert from "node:assert/strict";
import { test } from "node:test";

import type { ResultResponse, SessionView } from "../src/api.js";
import {
  appendResult,
  bannerFor,
  formatStatistic,
  rollBack,
  validateConfig,
  viewModelFromSession,
} from "../src/model.js";

const CASE_CONFIG = {
  p0: 0.1,
  p1: 0.15,
  alpha: 0.05,
  beta: 0.05,
  n_max: 139,
  k_star: 21,
};

const LOG_B = Math.log(19);

function sessionView(trajectory: number[], verdict = "continue"): SessionView {
  return {
    id: "abc123",
    created_at: 0,
    config: CASE_CONFIG,
    state: {
      n_seen: trajectory.length,
      defects: 0,
      log_lr: trajectory[trajectory.length - 1] ?? 0,
      verdict,
    },
    events: trajectory.map((_, i) => ({ result: "pass", ts: i })),
    trajectory,
    log_a: -LOG_B,
    log_b: LOG_B,
  };
}

test("view model pairs each trajectory value with its 1-based step", () => {
  const vm = viewModelFromSession(sessionView([-0.05, -0.11, 0.29]));
  assert.deepEqual(
    vm.trajectory.map((p) => p.step),
    [1, 2, 3],
  );
  assert.equal(vm.trajectory.length, vm.state.n_seen);
  assert.equal(vm.trajectory.at(-1)?.logLr, vm.state.log_lr);
  assert.equal(vm.logA, -LOG_B);
  assert.equal(vm.logB, LOG_B);
});

test("appendResult extends the trajectory and adopts the returned state", () => {
  const vm = viewModelFromSession(sessionView([-0.057]));
  const response: ResultResponse = {
    n_seen: 2,
    defects: 1,
    log_lr: 0.348,
    verdict: "continue",
    likelihood_ratio: Math.exp(0.348),
    log_a: -LOG_B,
    log_b: LOG_B,
  };
  const next = appendResult(vm, response);
  assert.equal(next.trajectory.length, 2);
  assert.deepEqual(next.trajectory[1], { step: 2, logLr: 0.348 });
  assert.equal(next.eventCount, 2);
  assert.equal(vm.trajectory.length, 1, "original is untouched");
});

test("rollBack drops the last point", () => {
  const vm = viewModelFromSession(sessionView([-0.057, 0.348]));
  const response: ResultResponse = {
    n_seen: 1,
    defects: 0,
    log_lr: -0.057,
    verdict: "continue",
    likelihood_ratio: Math.exp(-0.057),
    log_a: -LOG_B,
    log_b: LOG_B,
  };
  const next = rollBack(vm, response);
  assert.equal(next.trajectory.length, 1);
  assert.equal(next.eventCount, 1);
});

test("banner mapping covers every verdict", () => {
  assert.equal(bannerFor("continue").kind, "continue");
  assert.equal(bannerFor("accept").kind, "accept");
  assert.equal(bannerFor("truncated_accept").kind, "accept");
  assert.equal(bannerFor("reject").kind, "reject");
  assert.equal(bannerFor("truncated_reject").kind, "reject");
});

test("validation accepts the prefilled defaults", () => {
  const checked = validateConfig({
    p0: "0.1",
    p1: "0.15",
    alpha: "0.05",
    beta: "0.05",
    n_max: "139",
    k_star: "21",
  });
  assert.equal(checked.error, null);
  assert.deepEqual(checked.config, CASE_CONFIG);
});

test("validation mirrors the service's p1 > p0 rule", () => {
  const checked = validateConfig({
    p0: "0.2",
    p1: "0.1",
    alpha: "0.05",
    beta: "0.05",
    n_max: "10",
    k_star: "5",
  });
  assert.equal(checked.config, null);
  assert.equal(checked.error?.field, "p1");
});

test("validation rejects non-numeric and out-of-range fields", () => {
  const base = {
    p0: "0.1",
    p1: "0.15",
    alpha: "0.05",
    beta: "0.05",
    n_max: "139",
    k_star: "21",
  };
  assert.equal(validateConfig({ ...base, alpha: "lots" }).error?.field, "alpha");
  assert.equal(validateConfig({ ...base, beta: "1.5" }).error?.field, "beta");
  assert.equal(validateConfig({ ...base, n_max: "0" }).error?.field, "n_max");
  assert.equal(validateConfig({ ...base, n_max: "13.5" }).error?.field, "n_max");
  assert.equal(validateConfig({ ...base, k_star: "140" }).error?.field, "k_star");
});

test("statistic formatting switches between log and ratio display", () => {
  assert.equal(formatStatistic(0, false), "log Λ = 0.0000");
  assert.equal(formatStatistic(0, true), "Λ = 1.0000");
  assert.match(formatStatistic(-60, true), /e-27/); // exp(-60) ~ 8.76e-27
});
