import { describe, expect, it } from "vitest";
import { MotorhomeRequestSchema, RouteRequestSchema } from "../src/schemas";
import { serializeForm, vehicleOrder } from "../src/serialize";
import {
  beginPlacing,
  initialForm,
  placePin,
  setDeparture,
  setKind,
  setObjective,
  submitEnabled,
  toggleMode,
  type PlannerForm,
} from "../src/state";
import { mulberry32, randomForm } from "./fuzz";

describe("every submittable form serializes to a schema-valid request", () => {
  it("holds across 500 random transition walks", () => {
    let submittable = 0;
    for (let seed = 1; seed <= 500; seed++) {
      const form = randomForm(mulberry32(seed));
      if (!submitEnabled(form)) continue;
      submittable++;
      const planned = serializeForm(form);
      const schema = planned.kind === "route" ? RouteRequestSchema : MotorhomeRequestSchema;
      const parsed = schema.safeParse(planned.body);
      expect(parsed.success, `seed ${seed}: ${JSON.stringify(parsed)}`).toBe(true);
    }
    // The walk must actually exercise the interesting region.
    expect(submittable).toBeGreaterThan(100);
  });
});

describe("route requests", () => {
  function submittable(): PlannerForm {
    let form = placePin(initialForm(), { lat: 48.2, lon: 16.336 });
    return placePin(form, { lat: 48.205, lon: 16.378 });
  }

  it("serializes pins as lat/lon and modes as the enabled set", () => {
    let form = toggleMode(submittable(), "car");
    form = toggleMode(form, "motorhome");
    const planned = serializeForm(form);
    if (planned.kind !== "route") throw new Error("expected a route request");
    expect(planned.body.origin).toEqual({ lat: 48.2, lon: 16.336 });
    expect(planned.body.modes).toEqual(["walk", "bike", "pt"]);
    expect(planned.body.vehicles).toBeUndefined();
  });

  it("includes one vehicle per placed pin, ids keyed by kind", () => {
    let form = beginPlacing(submittable(), "bike");
    form = placePin(form, { lat: 48.201, lon: 16.34 });
    form = beginPlacing(form, "car");
    form = placePin(form, { lat: 48.206, lon: 16.366 });
    const planned = serializeForm(form);
    if (planned.kind !== "route") throw new Error("expected a route request");
    expect(vehicleOrder(form)).toEqual(["bike", "car"]);
    expect(planned.body.vehicles).toEqual([
      { id: "bike1", kind: "bike", location: { lat: 48.201, lon: 16.34 } },
      { id: "car1", kind: "car", location: { lat: 48.206, lon: 16.366 } },
    ]);
  });

  it("carries objective and departure through", () => {
    let form = setObjective(submittable(), "shortest_distance");
    form = setDeparture(form, "2026-08-17T09:30");
    const planned = serializeForm(form);
    if (planned.kind !== "route") throw new Error("expected a route request");
    expect(planned.body.objective).toBe("shortest_distance");
    expect(planned.body.departure_time).toBe("2026-08-17T09:30");
  });

  it("refuses to serialize an unsubmittable form", () => {
    expect(() => serializeForm(initialForm())).toThrow(/origin/);
  });
});

describe("motorhome requests", () => {
  it("sends exactly one motorhome parked at the origin", () => {
    let form = placePin(initialForm(), { lat: 48.198, lon: 16.33 });
    form = placePin(form, { lat: 48.205, lon: 16.378 });
    form = setKind(form, "motorhome");
    const planned = serializeForm(form);
    if (planned.kind !== "motorhome") throw new Error("expected a motorhome request");
    expect(planned.path).toBe("/motorhome");
    expect(planned.body.vehicles).toEqual([
      { id: "mh1", kind: "motorhome", location: { lat: 48.198, lon: 16.33 } },
    ]);
    // No plain-route fields sneak in; the service rejects unknown keys.
    expect("modes" in planned.body).toBe(false);
    expect("objective" in planned.body).toBe(false);
  });

  it("derives egress modes from the enabled toggles", () => {
    let form = placePin(initialForm(), { lat: 48.198, lon: 16.33 });
    form = placePin(form, { lat: 48.205, lon: 16.378 });
    form = setKind(form, "motorhome");
    form = toggleMode(form, "bike");
    form = toggleMode(form, "car");
    const planned = serializeForm(form);
    if (planned.kind !== "motorhome") throw new Error("expected a motorhome request");
    expect(planned.body.egress_modes).toEqual(["walk", "pt"]);
  });
});
