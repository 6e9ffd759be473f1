// Scripted end-to-end run of the built console against a real service
// process: fill the prefilled form, create a session, click Pass 52 times,
// watch the accept banner appear, then reload mid-session and check the
// rebuilt view matches. jsdom supplies the DOM; fetch is bridged to the
// live server.

import assert from "node:assert/strict";
import { after, before, test } from "node:test";
import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import net from "node:net";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { JSDOM } from "jsdom";

const FRONTEND_DIR = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..", "..");
const REPO_ROOT = path.resolve(FRONTEND_DIR, "..");
const DIST = path.join(REPO_ROOT, "frontend", "dist");

const LOG_B = Math.log(19);

let service: ChildProcess | null = null;
let base = "";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = net.createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address && typeof address === "object") {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

async function waitForHealth(url: string): Promise<void> {
  const deadline = Date.now() + 20_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${url}/healthz`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 60));
  }
  throw new Error("service did not come up");
}

before(async () => {
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  const dataDir = mkdtempSync(path.join(os.tmpdir(), "console-e2e-"));
  service = spawn(
    "python3",
    ["-m", "lotsampler.cli", "serve", "--port", String(port), "--data-dir", dataDir],
    {
      cwd: REPO_ROOT,
      env: { ...process.env, PYTHONPATH: path.join(REPO_ROOT, "src") },
      stdio: "ignore",
    },
  );
  await waitForHealth(base);
});

after(() => {
  service?.kill();
});

interface Console {
  dom: JSDOM;
  el: (id: string) => HTMLElement;
}

function openConsole(url: string): Console {
  const html = readFileSync(path.join(DIST, "index.html"), "utf-8");
  const bundle = readFileSync(path.join(DIST, "app.js"), "utf-8");
  const dom = new JSDOM(html, { url, runScripts: "outside-only" });
  const { window } = dom;
  // Bridge relative fetches from the page to the live service.
  (window as unknown as { fetch: typeof fetch }).fetch = ((input: unknown, init?: RequestInit) =>
    fetch(new URL(String(input), base).toString(), init)) as typeof fetch;
  window.eval(bundle);
  const el = (id: string) => {
    const node = window.document.getElementById(id);
    assert.ok(node, `missing #${id}`);
    return node as HTMLElement;
  };
  return { dom, el };
}

async function settled(dom: JSDOM, predicate: () => boolean): Promise<void> {
  const deadline = Date.now() + 10_000;
  const hooks = dom.window as unknown as {
    __console?: { ready: () => boolean };
  };
  while (Date.now() < deadline) {
    if (hooks.__console && hooks.__console.ready() && predicate()) return;
    await new Promise((r) => setTimeout(r, 10));
  }
  throw new Error("console did not settle");
}

test("52 consecutive passes produce the accept banner at step 52", async () => {
  const console_ = openConsole("http://localhost/");
  const { dom, el } = console_;

  // Form screen is visible with the worked defaults prefilled.
  await settled(dom, () => !el("form-screen").hidden);
  assert.equal((el("input-p0") as HTMLInputElement).value, "0.1");
  assert.equal((el("input-n_max") as HTMLInputElement).value, "139");

  (el("create-btn") as HTMLButtonElement).click();
  await settled(dom, () => !el("live-screen").hidden);

  // Boundary readout shows the symmetric ±ln(19) lines.
  assert.match(el("boundaries").textContent ?? "", /accept ≤ -2\.9444/);
  assert.match(el("boundaries").textContent ?? "", /reject ≥ 2\.9444/);

  for (let i = 1; i <= 52; i++) {
    (el("pass-btn") as HTMLButtonElement).click();
    await settled(dom, () => el("n-seen").textContent === String(i));
    const banner = el("banner");
    if (i < 52) {
      assert.ok(banner.className.includes("banner-continue"), `step ${i}`);
    }
  }

  assert.ok(el("banner").className.includes("banner-accept"));
  assert.match(el("banner").textContent ?? "", /ACCEPT/);
  assert.equal(el("trajectory-length").textContent, "52");
  assert.equal((el("pass-btn") as HTMLButtonElement).disabled, true);
  assert.equal((el("defect-btn") as HTMLButtonElement).disabled, true);

  const sessionId = el("session-id").textContent ?? "";
  assert.match(sessionId, /^[0-9a-f]+$/);

  // Reload mid-run: a fresh page over the same hash rebuilds the view.
  const reloaded = openConsole(`http://localhost/#/session/${sessionId}`);
  await settled(reloaded.dom, () => !reloaded.el("live-screen").hidden);
  assert.equal(reloaded.el("n-seen").textContent, "52");
  assert.equal(reloaded.el("trajectory-length").textContent, "52");
  assert.ok(reloaded.el("banner").className.includes("banner-accept"));
  assert.equal((reloaded.el("pass-btn") as HTMLButtonElement).disabled, true);
});

test("reload mid-session reconstructs the identical continuing view", async () => {
  const first = openConsole("http://localhost/");
  await settled(first.dom, () => !first.el("form-screen").hidden);
  (first.el("create-btn") as HTMLButtonElement).click();
  await settled(first.dom, () => !first.el("live-screen").hidden);

  const script: ("pass-btn" | "defect-btn")[] = [
    "pass-btn", "defect-btn", "pass-btn", "pass-btn", "defect-btn",
  ];
  for (let i = 0; i < script.length; i++) {
    (first.el(script[i]) as HTMLButtonElement).click();
    await settled(first.dom, () => first.el("n-seen").textContent === String(i + 1));
  }
  const sessionId = first.el("session-id").textContent ?? "";
  const statistic = first.el("statistic").textContent;
  const defects = first.el("defects").textContent;

  const second = openConsole(`http://localhost/#/session/${sessionId}`);
  await settled(second.dom, () => !second.el("live-screen").hidden);
  assert.equal(second.el("n-seen").textContent, "5");
  assert.equal(second.el("defects").textContent, defects);
  assert.equal(second.el("statistic").textContent, statistic);
  assert.equal(second.el("trajectory-length").textContent, "5");
  assert.equal((second.el("pass-btn") as HTMLButtonElement).disabled, false);
});

test("undo is enabled only when the event log is non-empty and matches a fresh view", async () => {
  const page = openConsole("http://localhost/");
  await settled(page.dom, () => !page.el("form-screen").hidden);
  (page.el("create-btn") as HTMLButtonElement).click();
  await settled(page.dom, () => !page.el("live-screen").hidden);

  assert.equal((page.el("undo-btn") as HTMLButtonElement).disabled, true);

  (page.el("defect-btn") as HTMLButtonElement).click();
  await settled(page.dom, () => page.el("n-seen").textContent === "1");
  assert.equal((page.el("undo-btn") as HTMLButtonElement).disabled, false);

  (page.el("undo-btn") as HTMLButtonElement).click();
  await settled(page.dom, () => page.el("n-seen").textContent === "0");
  assert.equal((page.el("undo-btn") as HTMLButtonElement).disabled, true);
  assert.equal(page.el("trajectory-length").textContent, "0");

  // The rolled-back view agrees with what a fresh GET renders.
  const sessionId = page.el("session-id").textContent ?? "";
  const fresh = openConsole(`http://localhost/#/session/${sessionId}`);
  await settled(fresh.dom, () => !fresh.el("live-screen").hidden);
  assert.equal(fresh.el("n-seen").textContent, "0");
  assert.equal(fresh.el("trajectory-length").textContent, "0");
});

test("client-side validation blocks bad input without a request", async () => {
  const page = openConsole("http://localhost/");
  await settled(page.dom, () => !page.el("form-screen").hidden);
  (page.el("input-p1") as HTMLInputElement).value = "0.05"; // below p0
  (page.el("create-btn") as HTMLButtonElement).click();
  await new Promise((r) => setTimeout(r, 100));
  assert.match(page.el("error-p1").textContent ?? "", /p1 must exceed p0/);
  assert.ok(!page.el("form-screen").hidden, "stays on the form");
});

test("service-down path shows the retry banner and leaves state untouched", async () => {
  const page = openConsole("http://localhost/");
  await settled(page.dom, () => !page.el("form-screen").hidden);
  (page.el("create-btn") as HTMLButtonElement).click();
  await settled(page.dom, () => !page.el("live-screen").hidden);

  // Point the page's fetch at a dead port.
  (page.dom.window as unknown as { fetch: typeof fetch }).fetch = (() =>
    Promise.reject(new TypeError("connection refused"))) as unknown as typeof fetch;

  (page.el("pass-btn") as HTMLButtonElement).click();
  await settled(page.dom, () => !page.el("service-banner").hidden);
  assert.equal(page.el("n-seen").textContent, "0", "state untouched");
  assert.equal((page.el("pass-btn") as HTMLButtonElement).disabled, false, "re-enabled");
});
