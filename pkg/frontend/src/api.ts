/**
 * Fetch wrapper for the planner service.
 *
 * Every submit gets a sequence number; when a response lands after a newer
 * submit has gone out, it is reported stale and the caller drops it.  That
 * keeps a slow early answer from overwriting a fast later one.
 */
import type { ErrorBody, Health, MotorhomeResponse, RouteResponse } from "./schemas";
import {
  ErrorBodySchema,
  HealthSchema,
  MotorhomeResponseSchema,
  RouteResponseSchema,
} from "./schemas";
import type { PlannedRequest } from "./serialize";

export type SubmitResult =
  | { ok: true; kind: "route"; body: RouteResponse }
  | { ok: true; kind: "motorhome"; body: MotorhomeResponse }
  | { ok: false; status: number; body: ErrorBody };

export type Submitted = { stale: false; result: SubmitResult } | { stale: true };

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

function networkError(detail: string): SubmitResult {
  return { ok: false, status: 0, body: { error: { kind: "network", detail } } };
}

export class PlannerClient {
  private seq = 0;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async health(): Promise<Health> {
    const resp = await this.fetchImpl(`${this.baseUrl}/health`);
    return HealthSchema.parse(await resp.json());
  }

  async submit(planned: PlannedRequest): Promise<Submitted> {
    const mySeq = ++this.seq;
    let result: SubmitResult;
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}${planned.path}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(planned.body),
      });
      const payload: unknown = await resp.json();
      if (resp.ok) {
        result =
          planned.kind === "route"
            ? { ok: true, kind: "route", body: RouteResponseSchema.parse(payload) }
            : { ok: true, kind: "motorhome", body: MotorhomeResponseSchema.parse(payload) };
      } else {
        const parsed = ErrorBodySchema.safeParse(payload);
        result = parsed.success
          ? { ok: false, status: resp.status, body: parsed.data }
          : {
              ok: false,
              status: resp.status,
              body: { error: { kind: "bad_response", detail: "unrecognized error payload" } },
            };
      }
    } catch (exc) {
      result = networkError(exc instanceof Error ? exc.message : String(exc));
    }
    if (mySeq !== this.seq) return { stale: true };
    return { stale: false, result };
  }
}
