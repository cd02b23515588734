/**
 * Zod mirrors of the planner service's request and response shapes.
 *
 * The request schemas are deliberately exact twins of the server-side
 * validators (strict objects, same field names, same constraints), so a
 * request that parses here is one the service will accept.  The response
 * schemas are looser where the service may grow fields, but strict enough
 * to catch a mangled payload before it reaches the renderer.
 */
import { z } from "zod";

export const MODES = ["walk", "bike", "car", "motorhome", "pt"] as const;
export const VEHICLE_KINDS = ["bike", "car", "motorhome"] as const;
export const EGRESS_MODES = ["walk", "bike", "car", "pt"] as const;

export type ModeName = (typeof MODES)[number];
export type VehicleKindName = (typeof VEHICLE_KINDS)[number];

const ModeSchema = z.enum(MODES);

export const LocationSchema = z.union([
  z.strictObject({ node: z.string().min(1) }),
  z.strictObject({ lat: z.number().gte(-90).lte(90), lon: z.number().gte(-180).lte(180) }),
]);

export const VehicleSchema = z.strictObject({
  id: z.string().min(1),
  kind: z.enum(VEHICLE_KINDS),
  location: LocationSchema,
});

export const SwitchCostsSchema = z.strictObject({
  pickup_s: z.partialRecord(z.enum(VEHICLE_KINDS), z.number().nonnegative()).optional(),
  park_s: z.partialRecord(z.enum(VEHICLE_KINDS), z.number().nonnegative()).optional(),
  board_s: z.number().nonnegative().optional(),
});

export const ProfileSchema = z.strictObject({
  id: z.string().min(1),
  multipliers: z.partialRecord(ModeSchema, z.number().gte(1).lte(100)),
});

export const RouteRequestSchema = z.strictObject({
  origin: LocationSchema,
  destination: LocationSchema,
  modes: z.array(ModeSchema).nonempty(),
  vehicles: z.array(VehicleSchema).optional(),
  objective: z.enum(["fastest_time", "shortest_distance"]).optional(),
  departure_time: z.string().optional(),
  switch_costs: SwitchCostsSchema.optional(),
  profiles: z.array(ProfileSchema).optional(),
});

export const MotorhomeRequestSchema = z.strictObject({
  origin: LocationSchema,
  destination: LocationSchema,
  vehicles: z.array(VehicleSchema).nonempty(),
  egress_modes: z.array(z.enum(EGRESS_MODES)).optional(),
  departure_time: z.string().optional(),
  switch_costs: SwitchCostsSchema.optional(),
  profile: ProfileSchema.optional(),
});

export type RouteRequest = z.infer<typeof RouteRequestSchema>;
export type MotorhomeRequest = z.infer<typeof MotorhomeRequestSchema>;

// --- responses ---------------------------------------------------------

const TotalsSchema = z.object({
  duration_s: z.number(),
  distance_m: z.number(),
  perceived_cost: z.number(),
  profile_id: z.string(),
});

const LegSchema = z.object({
  mode: ModeSchema,
  nodes: z.array(z.string()).min(2),
  distance_m: z.number(),
  in_motion_s: z.number(),
  transfer_s: z.number(),
  transit_line: z.string().nullable().optional(),
  vehicle_id: z.string().nullable().optional(),
});

const GeometrySchema = z.record(z.string(), z.tuple([z.number(), z.number()]));

export const AlternativeSchema = z.object({
  // a trip whose ends snap to the same node legitimately has zero legs
  legs: z.array(LegSchema),
  totals: TotalsSchema,
  mode_changes: z.number().int().nonnegative(),
  by_mode: z.partialRecord(
    ModeSchema,
    z.object({ duration_s: z.number(), distance_m: z.number() }),
  ),
  warnings: z.array(z.string()),
});

export const RouteResponseSchema = z.object({
  origin_node: z.string(),
  destination_node: z.string(),
  alternatives: z.array(AlternativeSchema),
  geometry: GeometrySchema,
});

export const MotorhomeOptionSchema = z.object({
  label: z.string(),
  legs: z.array(LegSchema),
  totals: TotalsSchema,
  parking_node: z.string().nullable(),
  risk_flag: z.boolean(),
});

export const MotorhomeResponseSchema = z.object({
  origin_node: z.string(),
  destination_node: z.string(),
  options: z.array(MotorhomeOptionSchema),
  geometry: GeometrySchema,
});

export const HealthSchema = z.object({
  name: z.string(),
  nodes: z.number().int(),
  edges: z.number().int(),
  overrides: z.number().int(),
  // [min_lat, min_lon, max_lat, max_lon]
  bbox: z.tuple([z.number(), z.number(), z.number(), z.number()]).nullable(),
});

export const ProfilesResponseSchema = z.object({
  profiles: z.array(ProfileSchema).nonempty(),
});

export const ErrorBodySchema = z.object({
  error: z.object({
    kind: z.string(),
    detail: z.string(),
    fields: z.array(z.object({ loc: z.string(), msg: z.string() })).optional(),
    where: z.string().optional(),
    distance_m: z.number().optional(),
  }),
});

export type Alternative = z.infer<typeof AlternativeSchema>;
export type RouteResponse = z.infer<typeof RouteResponseSchema>;
export type MotorhomeOption = z.infer<typeof MotorhomeOptionSchema>;
export type MotorhomeResponse = z.infer<typeof MotorhomeResponseSchema>;
export type Health = z.infer<typeof HealthSchema>;
export type ProfilesResponse = z.infer<typeof ProfilesResponseSchema>;
export type ErrorBody = z.infer<typeof ErrorBodySchema>;
