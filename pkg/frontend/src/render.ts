/**
 * Pure rendering: response JSON in, HTML strings out.
 *
 * No DOM access and no state lives here, so the same response always
 * renders to the same markup and tests can diff plain strings.
 */
import type {
  Alternative,
  ErrorBody,
  ModeName,
  MotorhomeOption,
  MotorhomeResponse,
  RouteResponse,
} from "./schemas";
import { MODES } from "./schemas";

export const MODE_COLORS: Record<ModeName, string> = {
  walk: "#2e7d32",
  bike: "#ef6c00",
  car: "#c62828",
  motorhome: "#6a1b9a",
  pt: "#1565c0",
};

export const MODE_LABELS: Record<ModeName, string> = {
  walk: "Walk",
  bike: "Bike",
  car: "Car",
  motorhome: "Motorhome",
  pt: "Transit",
};

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function fmtDuration(seconds: number): string {
  const total = Math.round(seconds);
  const h = Math.floor(total / 3600);
  const m = Math.floor((total % 3600) / 60);
  const s = total % 60;
  if (h > 0) return m > 0 ? `${h} h ${m} min` : `${h} h`;
  if (m > 0) return s > 0 ? `${m} min ${s} s` : `${m} min`;
  return `${s} s`;
}

export function fmtDistance(meters: number): string {
  if (meters >= 1000) {
    const km = meters / 1000;
    return `${km >= 10 ? km.toFixed(1) : km.toFixed(2)} km`;
  }
  return `${Math.round(meters)} m`;
}

function legSummary(legs: Alternative["legs"]): string {
  const parts = legs.map((leg) => {
    const name = leg.transit_line ? escapeHtml(leg.transit_line) : MODE_LABELS[leg.mode];
    return `<span class="leg" style="color:${MODE_COLORS[leg.mode]}">${name} ${fmtDistance(leg.distance_m)}</span>`;
  });
  return parts.join('<span class="sep"> &rsaquo; </span>');
}

function byModeRows(byMode: Alternative["by_mode"]): string {
  const rows = MODES.filter((m) => byMode[m] !== undefined).map((m) => {
    const slice = byMode[m]!;
    return (
      `<tr><td><span class="dot" style="background:${MODE_COLORS[m]}"></span>${MODE_LABELS[m]}</td>` +
      `<td>${fmtDuration(slice.duration_s)}</td><td>${fmtDistance(slice.distance_m)}</td></tr>`
    );
  });
  return `<table class="by-mode"><tbody>${rows.join("")}</tbody></table>`;
}

function warningItems(warnings: string[]): string {
  if (warnings.length === 0) return "";
  const items = warnings.map((w) => `<li class="warning">${escapeHtml(w)}</li>`).join("");
  return `<ul class="warnings">${items}</ul>`;
}

function alternativeCard(alt: Alternative, index: number): string {
  const changes =
    alt.mode_changes === 1 ? "1 mode change" : `${alt.mode_changes} mode changes`;
  return (
    `<article class="card" data-index="${index}">` +
    `<header><span class="duration">${fmtDuration(alt.totals.duration_s)}</span>` +
    `<span class="distance">${fmtDistance(alt.totals.distance_m)}</span>` +
    `<span class="changes">${changes}</span></header>` +
    `<p class="legs">${legSummary(alt.legs)}</p>` +
    byModeRows(alt.by_mode) +
    warningItems(alt.warnings) +
    `</article>`
  );
}

/** One card per alternative, in the order the service ranked them. */
export function renderAlternatives(body: RouteResponse): string {
  if (body.alternatives.length === 0) {
    return `<p class="no-route">No route found between the chosen points.</p>`;
  }
  return body.alternatives.map((alt, i) => alternativeCard(alt, i)).join("");
}

function optionCard(opt: MotorhomeOption, index: number): string {
  const risk = opt.risk_flag ? `<span class="badge risk">at own risk</span>` : "";
  const parking = opt.parking_node
    ? `<p class="parking">Parks at <strong>${escapeHtml(opt.parking_node)}</strong></p>`
    : "";
  return (
    `<article class="card option" data-index="${index}">` +
    `<header><span class="label">${escapeHtml(opt.label)}</span>${risk}</header>` +
    `<p class="stats"><span class="duration">${fmtDuration(opt.totals.duration_s)}</span>` +
    `<span class="distance">${fmtDistance(opt.totals.distance_m)}</span></p>` +
    parking +
    `<p class="legs">${legSummary(opt.legs)}</p>` +
    `</article>`
  );
}

export function renderMotorhomeOptions(body: MotorhomeResponse): string {
  if (body.options.length === 0) {
    return `<p class="no-route">No motorhome journey found between the chosen points.</p>`;
  }
  return body.options.map((opt, i) => optionCard(opt, i)).join("");
}

export function renderError(body: ErrorBody, status: number): string {
  const err = body.error;
  if (err.fields && err.fields.length > 0) {
    const items = err.fields
      .map((f) => `<li><code>${escapeHtml(f.loc)}</code>: ${escapeHtml(f.msg)}</li>`)
      .join("");
    return `<div class="error"><p>${escapeHtml(err.detail)}</p><ul class="fields">${items}</ul></div>`;
  }
  if (err.kind === "unreachable") {
    return `<p class="no-route">${escapeHtml(err.detail)}</p>`;
  }
  const where = err.where ? ` <span class="where">(${escapeHtml(err.where)})</span>` : "";
  return `<div class="error"><p>${escapeHtml(err.detail)}${where}</p><p class="status">HTTP ${status}</p></div>`;
}

export interface Polyline {
  mode: ModeName;
  color: string;
  /** [lat, lon] per node along the leg. */
  points: [number, number][];
}

/** Per-leg polylines in draw order; missing geometry entries are skipped. */
export function legPolylines(
  legs: { mode: ModeName; nodes: string[] }[],
  geometry: Record<string, [number, number]>,
): Polyline[] {
  const lines: Polyline[] = [];
  for (const leg of legs) {
    const points = leg.nodes
      .map((id) => geometry[id])
      .filter((p): p is [number, number] => p !== undefined);
    if (points.length >= 2) {
      lines.push({ mode: leg.mode, color: MODE_COLORS[leg.mode], points });
    }
  }
  return lines;
}
