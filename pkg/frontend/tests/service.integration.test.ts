/**
 * End-to-end checks against the real planner service: the page's serializer
 * and schemas meet the live validator, not a mock of it.
 */
import { spawn, type ChildProcess } from "node:child_process";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { PlannerClient } from "../src/api";
import { renderAlternatives, renderMotorhomeOptions } from "../src/render";
import {
  ErrorBodySchema,
  HealthSchema,
  MotorhomeResponseSchema,
  RouteResponseSchema,
} from "../src/schemas";
import { serializeForm } from "../src/serialize";
import {
  beginPlacing,
  initialForm,
  placePin,
  setKind,
  submitEnabled,
  toggleMode,
} from "../src/state";
import { mulberry32, randomForm } from "./fuzz";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const GRAPH = path.resolve(HERE, "../../fixtures/demo_graph.json");
const PORT = 18000 + (process.pid % 10_000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForHealth(): Promise<void> {
  const deadline = Date.now() + 20_000;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/health`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("planner service did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "intermodal.cli", "serve", "--graph", GRAPH, "--port", String(PORT)],
    { cwd: path.resolve(HERE, "../.."), stdio: "ignore" },
  );
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
});

async function post(pathname: string, body: unknown): Promise<{ status: number; json: unknown }> {
  const resp = await fetch(`${BASE}${pathname}`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  return { status: resp.status, json: await resp.json() };
}

function demoForm() {
  // exact demo node coordinates, so snapping is a no-op
  let form = placePin(initialForm(), { lat: 48.2, lon: 16.336 }); // w1
  form = placePin(form, { lat: 48.205, lon: 16.378 }); // e2
  // bike and car wait at the origin, as in the demo fixture
  form = placePin(beginPlacing(form, "bike"), { lat: 48.2, lon: 16.336 });
  form = placePin(beginPlacing(form, "car"), { lat: 48.2, lon: 16.336 });
  return form;
}

describe("live service", () => {
  it("health passes the schema and the map can project its bbox", async () => {
    const health = HealthSchema.parse(await (await fetch(`${BASE}/health`)).json());
    expect(health.nodes).toBeGreaterThan(0);
    expect(health.bbox).not.toBeNull();
    const [minLat, , maxLat] = health.bbox!;
    expect(maxLat).toBeGreaterThan(minLat);
  });

  it("never answers 400 to a request serialized from a submittable form", async () => {
    let submitted = 0;
    for (let seed = 1; seed <= 120; seed++) {
      const form = randomForm(mulberry32(seed));
      if (!submitEnabled(form)) continue;
      submitted++;
      const planned = serializeForm(form);
      const { status, json } = await post(planned.path, planned.body);
      expect(
        status,
        `seed ${seed} got ${status}: ${JSON.stringify(json).slice(0, 200)}`,
      ).not.toBe(400);
      if (status !== 200) {
        // out-of-range pins legitimately fail to snap; nothing else is allowed
        const err = ErrorBodySchema.parse(json);
        expect(["snap_failed", "unreachable"]).toContain(err.error.kind);
      }
    }
    expect(submitted).toBeGreaterThan(25);
  });

  it("returns three alternatives for the demo trip and renders exactly three cards", async () => {
    const planned = serializeForm(demoForm());
    const { status, json } = await post(planned.path, planned.body);
    expect(status).toBe(200);
    const body = RouteResponseSchema.parse(json);
    expect(body.alternatives.length).toBe(3);
    const html = renderAlternatives(body);
    expect(html.split('<article class="card').length - 1).toBe(3);
  });

  it("disabling a mode yields alternatives free of that mode", async () => {
    for (const dropped of ["car", "pt", "bike"] as const) {
      const planned = serializeForm(toggleMode(demoForm(), dropped));
      const { status, json } = await post(planned.path, planned.body);
      expect(status).toBe(200);
      const body = RouteResponseSchema.parse(json);
      expect(body.alternatives.length).toBeGreaterThan(0);
      for (const alt of body.alternatives) {
        for (const leg of alt.legs) {
          expect(leg.mode, `mode ${dropped} was disabled`).not.toBe(dropped);
        }
      }
    }
  });

  it("plans motorhome arrivals as at most three labeled options", async () => {
    let form = placePin(initialForm(), { lat: 48.198, lon: 16.33 }); // camp
    form = placePin(form, { lat: 48.205, lon: 16.378 }); // e2
    form = setKind(form, "motorhome");
    const planned = serializeForm(form);
    const { status, json } = await post(planned.path, planned.body);
    expect(status).toBe(200);
    const body = MotorhomeResponseSchema.parse(json);
    expect(body.options.length).toBeGreaterThan(0);
    expect(body.options.length).toBeLessThanOrEqual(3);
    const labels = body.options.map((o) => o.label);
    expect(new Set(labels).size).toBe(labels.length);
    const html = renderMotorhomeOptions(body);
    expect(html.split('<article class="card').length - 1).toBe(body.options.length);
    expect(html.split('class="badge risk"').length - 1).toBe(
      body.options.filter((o) => o.risk_flag).length,
    );
  });

  it("reports which pin failed to snap so the map can badge it", async () => {
    let form = placePin(initialForm(), { lat: 48.2, lon: 16.336 });
    form = placePin(form, { lat: 48.5, lon: 16.9 }); // far outside the city
    const planned = serializeForm(form);
    const { status, json } = await post(planned.path, planned.body);
    expect(status).toBe(422);
    const err = ErrorBodySchema.parse(json);
    expect(err.error.kind).toBe("snap_failed");
    expect(err.error.where).toBe("destination");
    expect(err.error.distance_m).toBeGreaterThan(500);
  });

  it("client drops a response that lands after a newer submit", async () => {
    const client = new PlannerClient(BASE);
    const a = client.submit(serializeForm(demoForm()));
    const b = client.submit(serializeForm(toggleMode(demoForm(), "car")));
    const [first, second] = await Promise.all([a, b]);
    expect(first.stale).toBe(true);
    expect(second.stale).toBe(false);
    if (!second.stale) {
      expect(second.result.ok).toBe(true);
    }
  });
});
