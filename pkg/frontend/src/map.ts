/**
 * SVG map: a lat/lon projection over the graph's bounding box plus pure
 * string rendering of polylines and pins.  Pointer handling stays in the
 * DOM layer; everything here is deterministic and testable.
 */
import type { Polyline } from "./render";
import type { LatLon, PinKey } from "./state";

export interface Projection {
  width: number;
  height: number;
  toXY(at: LatLon): { x: number; y: number };
  toLatLon(x: number, y: number): LatLon;
}

/** bbox is [min_lat, min_lon, max_lat, max_lon]; pad keeps pins off the rim. */
export function makeProjection(
  bbox: [number, number, number, number],
  width = 720,
  height = 480,
  pad = 24,
): Projection {
  const [minLat, minLon, maxLat, maxLon] = bbox;
  const latSpan = Math.max(maxLat - minLat, 1e-9);
  const lonSpan = Math.max(maxLon - minLon, 1e-9);
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  return {
    width,
    height,
    toXY(at: LatLon) {
      const x = pad + ((at.lon - minLon) / lonSpan) * innerW;
      // screen y grows downward, latitude grows upward
      const y = pad + ((maxLat - at.lat) / latSpan) * innerH;
      return { x, y };
    },
    toLatLon(x: number, y: number) {
      const lon = minLon + ((x - pad) / innerW) * lonSpan;
      const lat = maxLat - ((y - pad) / innerH) * latSpan;
      return { lat, lon };
    },
  };
}

const PIN_GLYPHS: Record<PinKey, string> = {
  origin: "A",
  destination: "B",
  bike: "b",
  car: "c",
  motorhome: "m",
};

const PIN_COLORS: Record<PinKey, string> = {
  origin: "#1b5e20",
  destination: "#b71c1c",
  bike: "#ef6c00",
  car: "#c62828",
  motorhome: "#6a1b9a",
};

function fmt(v: number): string {
  return v.toFixed(1);
}

function polylineSvg(proj: Projection, line: Polyline): string {
  const points = line.points
    .map(([lat, lon]) => {
      const { x, y } = proj.toXY({ lat, lon });
      return `${fmt(x)},${fmt(y)}`;
    })
    .join(" ");
  return `<polyline points="${points}" fill="none" stroke="${line.color}" stroke-width="3" stroke-linecap="round" opacity="0.85"/>`;
}

function pinSvg(proj: Projection, key: PinKey, at: LatLon, badge: boolean): string {
  const { x, y } = proj.toXY(at);
  const ring = badge
    ? `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="16" fill="none" stroke="#d32f2f" stroke-width="2" stroke-dasharray="4 3"/>` +
      `<text x="${fmt(x + 14)}" y="${fmt(y - 12)}" class="snap-badge" fill="#d32f2f">!</text>`
    : "";
  return (
    `<g class="pin" data-pin="${key}" transform="translate(${fmt(x)},${fmt(y)})">` +
    `<circle r="9" fill="${PIN_COLORS[key]}" stroke="#fff" stroke-width="2"/>` +
    `<text y="4" text-anchor="middle" fill="#fff" font-size="10" font-weight="bold">${PIN_GLYPHS[key]}</text>` +
    `</g>` +
    ring
  );
}

export interface MapView {
  polylines: Polyline[];
  pins: Partial<Record<PinKey, LatLon>>;
  /** Pin to mark with a snap-failure badge, if any. */
  badged: PinKey | null;
}

/** Inner SVG markup for the map; the containing <svg> element lives in the page. */
export function renderMapContents(proj: Projection, view: MapView): string {
  const lines = view.polylines.map((line) => polylineSvg(proj, line)).join("");
  const pins = (Object.entries(view.pins) as [PinKey, LatLon][])
    .map(([key, at]) => pinSvg(proj, key, at, view.badged === key))
    .join("");
  return (
    `<rect width="${proj.width}" height="${proj.height}" fill="var(--map-bg, #eef3ee)"/>` +
    lines +
    pins
  );
}
