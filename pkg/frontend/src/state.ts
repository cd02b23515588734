/**
 * Planner form state and its transitions.
 *
 * Everything in this module is a pure function from state to state; the
 * DOM layer owns the single mutable reference.  That keeps the invariants
 * (submit gating, pin placement cycling) testable without a browser.
 */
import type { ModeName, VehicleKindName } from "./schemas";
import { MODES, VEHICLE_KINDS } from "./schemas";

export interface LatLon {
  lat: number;
  lon: number;
}

/** Which pin a map click will drop next. */
export type PinKey = "origin" | "destination" | VehicleKindName;

export type RequestKind = "route" | "motorhome";

export interface PlannerForm {
  pins: Partial<Record<PinKey, LatLon>>;
  modes: Record<ModeName, boolean>;
  objective: "fastest_time" | "shortest_distance";
  departure: string | null;
  kind: RequestKind;
  /** Pin the next map click places; null means clicks are inert. */
  placing: PinKey | null;
}

export const PIN_KEYS: readonly PinKey[] = ["origin", "destination", ...VEHICLE_KINDS];

export function initialForm(): PlannerForm {
  return {
    pins: {},
    modes: { walk: true, bike: true, car: true, motorhome: true, pt: true },
    objective: "fastest_time",
    departure: null,
    kind: "route",
    placing: "origin",
  };
}

/** Map clicks cycle origin -> destination -> inert. */
export function placePin(form: PlannerForm, at: LatLon): PlannerForm {
  if (form.placing === null) return form;
  const next: PinKey | null =
    form.placing === "origin" ? "destination" : form.placing === "destination" ? null : null;
  return { ...form, pins: { ...form.pins, [form.placing]: at }, placing: next };
}

/** Arm the next click to drop a specific pin, e.g. from a vehicle button. */
export function beginPlacing(form: PlannerForm, key: PinKey): PlannerForm {
  return { ...form, placing: key };
}

export function dragPin(form: PlannerForm, key: PinKey, at: LatLon): PlannerForm {
  if (!(key in form.pins)) return form;
  return { ...form, pins: { ...form.pins, [key]: at } };
}

export function clearPin(form: PlannerForm, key: PinKey): PlannerForm {
  if (!(key in form.pins)) return form;
  const pins = { ...form.pins };
  delete pins[key];
  return { ...form, pins };
}

export function toggleMode(form: PlannerForm, mode: ModeName): PlannerForm {
  return { ...form, modes: { ...form.modes, [mode]: !form.modes[mode] } };
}

export function setObjective(form: PlannerForm, objective: PlannerForm["objective"]): PlannerForm {
  return { ...form, objective };
}

export function setDeparture(form: PlannerForm, departure: string | null): PlannerForm {
  return { ...form, departure: departure || null };
}

export function setKind(form: PlannerForm, kind: RequestKind): PlannerForm {
  return { ...form, kind };
}

export function enabledModes(form: PlannerForm): ModeName[] {
  return MODES.filter((m) => form.modes[m]);
}

/** Submit is allowed once origin, destination, and at least one mode are set. */
export function submitEnabled(form: PlannerForm): boolean {
  return form.pins.origin !== undefined &&
    form.pins.destination !== undefined &&
    enabledModes(form).length > 0;
}
