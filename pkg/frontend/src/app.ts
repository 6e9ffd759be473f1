// DOM wiring for the inspector console: a config form that creates a
// session, and a live screen where each physical item is recorded with one
// tap. Every click round-trips to the service before the screen changes;
// verdicts are never shown speculatively.

import { ApiError, createSession, getSession, recordResult, undoLast } from "./api.js";
import { renderChart } from "./chart.js";
import {
  appendResult,
  bannerFor,
  formatStatistic,
  rollBack,
  validateConfig,
  viewModelFromSession,
  type ConfigInput,
  type SessionViewModel,
} from "./model.js";

type El<T extends HTMLElement> = T;

function el<T extends HTMLElement>(id: string): El<T> {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

interface ConsoleState {
  vm: SessionViewModel | null;
  inFlight: boolean;
  showRatio: boolean;
}

const state: ConsoleState = { vm: null, inFlight: false, showRatio: false };

// Exposed for scripted harnesses to await request settlement.
declare global {
  interface Window {
    __console: { state: ConsoleState; ready: () => boolean };
  }
}

function sessionIdFromHash(): string | null {
  const match = window.location.hash.match(/^#\/session\/([0-9a-f]+)$/);
  return match ? match[1] : null;
}

function showScreen(name: "form" | "live"): void {
  el("form-screen").hidden = name !== "form";
  el("live-screen").hidden = name !== "live";
}

function setFieldError(field: string | null, message: string | null): void {
  for (const node of document.querySelectorAll<HTMLElement>(".field-error")) {
    node.textContent = "";
  }
  if (field && message) {
    const target = document.getElementById(`error-${field}`);
    if (target) target.textContent = message;
  }
}

function setServiceBanner(message: string | null): void {
  const banner = el("service-banner");
  banner.hidden = message === null;
  el("service-banner-text").textContent = message ?? "";
}

function readForm(): ConfigInput {
  return {
    p0: el<HTMLInputElement>("input-p0").value,
    p1: el<HTMLInputElement>("input-p1").value,
    alpha: el<HTMLInputElement>("input-alpha").value,
    beta: el<HTMLInputElement>("input-beta").value,
    n_max: el<HTMLInputElement>("input-n_max").value,
    k_star: el<HTMLInputElement>("input-k_star").value,
  };
}

function renderLive(): void {
  const vm = state.vm;
  if (!vm) return;
  el("n-seen").textContent = String(vm.state.n_seen);
  el("defects").textContent = String(vm.state.defects);
  el("statistic").textContent = formatStatistic(vm.state.log_lr, state.showRatio);
  el("boundaries").textContent =
    `accept ≤ ${vm.logA.toFixed(4)} · reject ≥ ${vm.logB.toFixed(4)} · ceiling ${vm.config.n_max}`;
  el("session-id").textContent = vm.id;
  el("trajectory-length").textContent = String(vm.trajectory.length);

  const banner = bannerFor(vm.state.verdict);
  const bannerNode = el("banner");
  bannerNode.textContent = banner.label;
  bannerNode.className = `banner banner-${banner.kind}`;

  const decided = banner.kind !== "continue";
  el<HTMLButtonElement>("pass-btn").disabled = state.inFlight || decided;
  el<HTMLButtonElement>("defect-btn").disabled = state.inFlight || decided;
  el<HTMLButtonElement>("undo-btn").disabled = state.inFlight || vm.eventCount === 0;

  renderChart(el<HTMLCanvasElement>("chart"), vm);
}

async function guarded(action: () => Promise<void>): Promise<void> {
  if (state.inFlight) return;
  state.inFlight = true;
  renderLive();
  try {
    await action();
    setServiceBanner(null);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      // Another path already decided the session; refresh to show it.
      await refreshFromServer();
    } else if (err instanceof ApiError) {
      setServiceBanner(`Service error: ${err.detail.message}`);
    } else {
      setServiceBanner("Service unreachable — state unchanged, retry when it is back.");
    }
  } finally {
    state.inFlight = false;
    renderLive();
  }
}

async function refreshFromServer(): Promise<void> {
  const vm = state.vm;
  if (!vm) return;
  state.vm = viewModelFromSession(await getSession(vm.id));
}

async function onRecord(result: "pass" | "defect"): Promise<void> {
  await guarded(async () => {
    const vm = state.vm;
    if (!vm) return;
    state.vm = appendResult(vm, await recordResult(vm.id, result));
  });
}

async function onUndo(): Promise<void> {
  await guarded(async () => {
    const vm = state.vm;
    if (!vm) return;
    state.vm = rollBack(vm, await undoLast(vm.id));
  });
}

async function onCreate(event: Event): Promise<void> {
  event.preventDefault();
  const checked = validateConfig(readForm());
  if (checked.error) {
    setFieldError(checked.error.field, checked.error.message);
    return;
  }
  setFieldError(null, null);
  try {
    const created = await createSession(checked.config);
    setServiceBanner(null);
    window.location.hash = `#/session/${created.id}`;
    state.vm = viewModelFromSession(await getSession(created.id));
    showScreen("live");
    renderLive();
  } catch (err) {
    if (err instanceof ApiError && err.status === 400 && err.detail.field) {
      setFieldError(err.detail.field, err.detail.message);
    } else if (err instanceof ApiError) {
      setServiceBanner(`Service error: ${err.detail.message}`);
    } else {
      setServiceBanner("Service unreachable — check the server and retry.");
    }
  }
}

async function boot(): Promise<void> {
  el("create-form").addEventListener("submit", (event) => void onCreate(event));
  el("pass-btn").addEventListener("click", () => void onRecord("pass"));
  el("defect-btn").addEventListener("click", () => void onRecord("defect"));
  el("undo-btn").addEventListener("click", () => void onUndo());
  el("retry-btn").addEventListener("click", () => void boot());
  el<HTMLInputElement>("ratio-toggle").addEventListener("change", (event) => {
    state.showRatio = (event.target as HTMLInputElement).checked;
    renderLive();
  });

  const sessionId = sessionIdFromHash();
  if (sessionId) {
    try {
      state.vm = viewModelFromSession(await getSession(sessionId));
      setServiceBanner(null);
      showScreen("live");
      renderLive();
      return;
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        window.location.hash = "";
      } else {
        setServiceBanner("Service unreachable — retry once it is back.");
        return;
      }
    }
  }
  showScreen("form");
}

window.__console = {
  state,
  ready: () => !state.inFlight,
};

void boot();
