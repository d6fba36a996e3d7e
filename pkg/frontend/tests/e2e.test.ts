// @vitest-environment jsdom
//
// End-to-end: a real campnet service process backs the UI. The test drives
// the query builder exactly as a user would (search, click suggestions,
// set controls, submit) and then reads the rendered partition view.

import { ChildProcess, spawn } from "node:child_process";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App, createApp } from "../src/main.js";

const PORT = 8877;
const BASE = `http://127.0.0.1:${PORT}`;
const HERE = path.dirname(fileURLToPath(import.meta.url));
const SNAPSHOT = path.resolve(HERE, "../../tests/golden/song_snapshot.json");

const SU_FAMILY = [3767, 3768, 3769];
const WANG_SIDE = [1762, 1384, 1460];

let service: ChildProcess;

async function waitFor<T>(probe: () => T | null | undefined, what: string,
                          timeoutMs = 8000): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value !== null && value !== undefined) return value;
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
}

beforeAll(async () => {
  service = spawn("python3",
    ["-m", "campnet.cli", "serve", "--snapshot", SNAPSHOT, "--port", String(PORT)],
    { stdio: "ignore" });
  const deadline = Date.now() + 25_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/api/stats`);
      if (response.ok) break;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) throw new Error("campnet service did not start");
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}, 30_000);

afterAll(() => {
  service?.kill();
});

function bootApp(): App {
  document.body.innerHTML = '<main id="app"></main>';
  return createApp(document.getElementById("app")!, new ApiClient(BASE));
}

async function addSeedViaSearch(query: string, expectId: number): Promise<void> {
  const input = document.getElementById("person-search") as HTMLInputElement;
  input.value = query;
  input.dispatchEvent(new window.Event("input", { bubbles: true }));
  const suggestion = await waitFor(
    () => document.querySelector<HTMLElement>(
      `.suggestion[data-person-id="${expectId}"]`),
    `suggestion for ${query}`);
  suggestion.click();
  await waitFor(
    () => document.querySelector(`.chip[data-seed="${expectId}"]`),
    `seed chip ${expectId}`);
}

function readGroups(): Map<number, number> {
  const assignment = new Map<number, number>();
  document.querySelectorAll<SVGCircleElement>("circle[data-node]").forEach((c) => {
    assignment.set(Number(c.dataset.node), Number(c.dataset.group));
  });
  return assignment;
}

function expectFixtureCamps(): void {
  const groups = readGroups();
  expect(groups.size).toBe(6);
  expect(new Set(groups.values()).size).toBe(2);
  const su = new Set(SU_FAMILY.map((id) => groups.get(id)));
  const wang = new Set(WANG_SIDE.map((id) => groups.get(id)));
  expect(su.size).toBe(1);
  expect(wang.size).toBe(1);
  expect([...su][0]).not.toBe([...wang][0]);
  // the legend mirrors the two groups
  expect(document.querySelectorAll(".legend-entry").length).toBe(2);
}

describe("explorer end-to-end against a live service", () => {
  it("typeahead suggests people from the service", async () => {
    const app = bootApp();
    const input = document.getElementById("person-search") as HTMLInputElement;
    input.value = "wang";
    input.dispatchEvent(new window.Event("input", { bubbles: true }));
    const suggestion = await waitFor(
      () => document.querySelector<HTMLElement>(".suggestion"), "wang suggestion");
    expect(suggestion.textContent).toContain("Wang Anshi");
    expect(app.builder.state.seeds).toEqual([]);
  });

  it("rejects an over-cap depth client-side", () => {
    const app = bootApp();
    app.builder.state.seeds.push(1762);
    app.builder.state.depth = 9;
    app.submit();
    const message = document.getElementById("validation")!;
    expect(message.textContent).toMatch(/depth must be between 0 and 4/);
  });

  it("submits the Eight-Masters query and renders the two camps", async () => {
    const app = bootApp();
    await addSeedViaSearch("su shi", 3767);
    await addSeedViaSearch("wang anshi", 1762);
    await addSeedViaSearch("ouyang", 1384);
    await addSeedViaSearch("zeng", 1460);
    await addSeedViaSearch("su zhe", 3768);
    await addSeedViaSearch("su xun", 3769);

    const depth = document.getElementById("depth") as HTMLSelectElement;
    depth.value = "0";
    depth.dispatchEvent(new window.Event("change", { bubbles: true }));
    const algorithm = document.getElementById("algorithm") as HTMLSelectElement;
    algorithm.value = "community";
    algorithm.dispatchEvent(new window.Event("change", { bubbles: true }));
    const seed = document.getElementById("seed") as HTMLInputElement;
    seed.value = "7";
    seed.dispatchEvent(new window.Event("change", { bubbles: true }));

    (document.getElementById("submit") as HTMLButtonElement).click();
    await app.idle();
    await waitFor(() => document.querySelector(".report-view"), "report view");

    // three tabs, partition view carries exactly the fixture's two camps
    expect(document.querySelectorAll(".tab").length).toBe(3);
    expectFixtureCamps();

    // centrality table is sortable client-side
    const header = await waitFor(
      () => document.querySelector<HTMLElement>('th[data-measure="betweenness"]'),
      "betweenness header");
    header.click();
    const firstRow = document.querySelector<HTMLElement>("tbody tr")!;
    expect(firstRow.dataset.personId).toBe("1762"); // Wang Anshi bridges the camps

    // pair cards show the mixed Wang-Ouyang evidence with a positive net sign
    const card = document.querySelector<HTMLElement>('.pair-card[data-pair="1384-1762"]')!;
    expect(card.querySelector(".net-sign")!.textContent).toBe("positive");

    // the permalink encodes the whole query (seeds in click order)
    expect(window.location.search).toContain("seeds=3767%2C1762%2C1384%2C1460%2C3768%2C3769");
    expect(window.location.search).toContain("algorithm=community");
    expect(window.location.search).toContain("seed=7");
  }, 30_000);

  it("reloading the permalink reproduces the view", async () => {
    // the previous test pushed the query into window.location; boot fresh
    expect(window.location.search).toContain("algorithm=community");
    const app = bootApp();
    await app.idle();
    await waitFor(() => document.querySelector(".report-view"), "report view");
    expectFixtureCamps();
    expect(app.builder.state.seed).toBe(7);
  }, 30_000);

  it("surfaces service errors inline with a retry control", async () => {
    window.history.pushState(null, "", "?seeds=424242&depth=0&algorithm=community&seed=1");
    const app = bootApp();
    await app.idle();
    const panel = await waitFor(
      () => document.querySelector<HTMLElement>(".error-panel"), "error panel");
    expect(panel.querySelector(".error-message")!.textContent).toMatch(/unknown node/);
    expect(panel.querySelector(".retry")).not.toBeNull();
    window.history.pushState(null, "", "?");
  });
});
