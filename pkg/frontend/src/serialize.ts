/**
 * Turn a planner form into the exact JSON body the service expects.
 *
 * Dropped pins always serialize as lat/lon pairs; the service snaps them
 * to graph nodes itself, so the page never needs to know node ids.
 */
import type { MotorhomeRequest, RouteRequest, VehicleKindName } from "./schemas";
import { EGRESS_MODES, VEHICLE_KINDS } from "./schemas";
import type { LatLon, PlannerForm } from "./state";
import { enabledModes, submitEnabled } from "./state";

export type PlannedRequest =
  | { kind: "route"; path: "/route"; body: RouteRequest }
  | { kind: "motorhome"; path: "/motorhome"; body: MotorhomeRequest };

function point(at: LatLon): { lat: number; lon: number } {
  return { lat: at.lat, lon: at.lon };
}

/** Vehicle kinds in the order they appear in the request's vehicles array. */
export function vehicleOrder(form: PlannerForm): VehicleKindName[] {
  if (form.kind === "motorhome") return ["motorhome"];
  return VEHICLE_KINDS.filter((kind) => form.pins[kind] !== undefined);
}

export function serializeForm(form: PlannerForm): PlannedRequest {
  if (!submitEnabled(form)) {
    throw new Error("form is not submittable: needs origin, destination, and a mode");
  }
  const origin = point(form.pins.origin!);
  const destination = point(form.pins.destination!);

  if (form.kind === "motorhome") {
    // The trip starts behind the wheel, so the vehicle sits at the origin
    // regardless of where its own pin is parked on the map.
    const body: MotorhomeRequest = {
      origin,
      destination,
      vehicles: [{ id: "mh1", kind: "motorhome", location: origin }],
    };
    const egress = EGRESS_MODES.filter((m) => form.modes[m]);
    if (egress.length > 0) body.egress_modes = egress;
    if (form.departure) body.departure_time = form.departure;
    return { kind: "motorhome", path: "/motorhome", body };
  }

  const body: RouteRequest = {
    origin,
    destination,
    modes: enabledModes(form) as RouteRequest["modes"],
    objective: form.objective,
  };
  const vehicles = vehicleOrder(form).map((kind) => ({
    id: `${kind}1`,
    kind,
    location: point(form.pins[kind]!),
  }));
  if (vehicles.length > 0) body.vehicles = vehicles;
  if (form.departure) body.departure_time = form.departure;
  return { kind: "route", path: "/route", body };
}
