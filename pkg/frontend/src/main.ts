/**
 * DOM wiring: owns the mutable form reference, routes events through the
 * pure transition functions, and repaints from (form, last result) alone.
 */
import { PlannerClient, type SubmitResult } from "./api";
import { makeProjection, renderMapContents, type Projection } from "./map";
import { legPolylines, renderAlternatives, renderError, renderMotorhomeOptions } from "./render";
import { MODES, type ModeName } from "./schemas";
import { serializeForm, vehicleOrder } from "./serialize";
import {
  beginPlacing,
  clearPin,
  dragPin,
  initialForm,
  placePin,
  setDeparture,
  setKind,
  setObjective,
  submitEnabled,
  toggleMode,
  type PinKey,
  type PlannerForm,
  type RequestKind,
} from "./state";

const client = new PlannerClient("");

let form: PlannerForm = initialForm();
let last: SubmitResult | null = null;
let badged: PinKey | null = null;
let proj: Projection | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const mapSvg = el<HTMLElement>("map") as unknown as SVGSVGElement;
const cards = el<HTMLElement>("cards");
const hint = el<HTMLElement>("hint");
const submitBtn = el<HTMLButtonElement>("submit");

/** Map a snap failure's `where` back to the pin that caused it. */
function badgedPin(where: string | undefined, order: readonly PinKey[]): PinKey | null {
  if (where === "origin" || where === "destination") return where;
  const match = where?.match(/^vehicles\[(\d+)\]/);
  if (match) return order[Number(match[1])] ?? null;
  return null;
}

function currentPolylines() {
  if (!last || !last.ok) return [];
  const routes = last.kind === "route" ? last.body.alternatives : last.body.options;
  const geometry = last.body.geometry;
  return routes.flatMap((r) => legPolylines(r.legs, geometry));
}

function hintText(): string {
  if (form.placing) {
    const names: Record<PinKey, string> = {
      origin: "origin",
      destination: "destination",
      bike: "bike",
      car: "car",
      motorhome: "motorhome",
    };
    return `Click the map to place the ${names[form.placing]} pin.`;
  }
  if (!submitEnabled(form)) return "Set origin, destination, and at least one mode.";
  return "Drag pins to adjust, then plan.";
}

function repaint(): void {
  if (proj) {
    mapSvg.innerHTML = renderMapContents(proj, {
      polylines: currentPolylines(),
      pins: form.pins,
      badged,
    });
  }
  submitBtn.disabled = !submitEnabled(form);
  hint.textContent = hintText();
  for (const mode of MODES) {
    el<HTMLInputElement>(`mode-${mode}`).checked = form.modes[mode];
  }
  for (const key of ["bike", "car", "motorhome"] as const) {
    const pin = form.pins[key];
    el<HTMLElement>(`${key}-status`).textContent = pin
      ? `${pin.lat.toFixed(4)}, ${pin.lon.toFixed(4)}`
      : "not placed";
  }
  el<HTMLInputElement>("objective-time").disabled = form.kind === "motorhome";
  el<HTMLInputElement>("objective-distance").disabled = form.kind === "motorhome";

  if (!last) {
    cards.innerHTML = "";
  } else if (last.ok) {
    cards.innerHTML =
      last.kind === "route" ? renderAlternatives(last.body) : renderMotorhomeOptions(last.body);
  } else {
    cards.innerHTML = renderError(last.body, last.status);
  }
}

function update(next: PlannerForm): void {
  form = next;
  repaint();
}

async function submit(): Promise<void> {
  if (!submitEnabled(form)) return;
  const planned = serializeForm(form);
  const order = planned.kind === "motorhome" ? (["motorhome"] as const) : vehicleOrder(form);
  submitBtn.classList.add("busy");
  const outcome = await client.submit(planned);
  if (outcome.stale) return;
  submitBtn.classList.remove("busy");
  last = outcome.result;
  badged = !outcome.result.ok
    ? badgedPin(outcome.result.body.error.where, order)
    : null;
  repaint();
}

// --- map interaction -----------------------------------------------------

function svgPoint(event: PointerEvent | MouseEvent): { x: number; y: number } {
  const rect = mapSvg.getBoundingClientRect();
  const scaleX = (proj?.width ?? rect.width) / rect.width;
  const scaleY = (proj?.height ?? rect.height) / rect.height;
  return { x: (event.clientX - rect.left) * scaleX, y: (event.clientY - rect.top) * scaleY };
}

let dragging: { key: PinKey; moved: boolean } | null = null;

mapSvg.addEventListener("pointerdown", (event) => {
  const pinEl = (event.target as Element).closest("[data-pin]");
  if (pinEl) {
    dragging = { key: pinEl.getAttribute("data-pin") as PinKey, moved: false };
    mapSvg.setPointerCapture(event.pointerId);
  }
});

mapSvg.addEventListener("pointermove", (event) => {
  if (!dragging || !proj) return;
  dragging.moved = true;
  const { x, y } = svgPoint(event);
  update(dragPin(form, dragging.key, proj.toLatLon(x, y)));
});

mapSvg.addEventListener("pointerup", (event) => {
  if (dragging) {
    const wasDrag = dragging.moved;
    dragging = null;
    mapSvg.releasePointerCapture(event.pointerId);
    if (wasDrag) return;
  }
  if (!proj) return;
  const { x, y } = svgPoint(event);
  update(placePin(form, proj.toLatLon(x, y)));
});

// --- panel wiring ---------------------------------------------------------

for (const mode of MODES) {
  el<HTMLInputElement>(`mode-${mode}`).addEventListener("change", () => {
    update(toggleMode(form, mode as ModeName));
  });
}

for (const key of ["origin", "destination", "bike", "car", "motorhome"] as const) {
  el<HTMLButtonElement>(`place-${key}`).addEventListener("click", () => {
    update(beginPlacing(form, key));
  });
}

for (const key of ["bike", "car", "motorhome"] as const) {
  el<HTMLButtonElement>(`clear-${key}`).addEventListener("click", () => {
    update(clearPin(form, key));
  });
}

el<HTMLInputElement>("objective-time").addEventListener("change", () => {
  update(setObjective(form, "fastest_time"));
});
el<HTMLInputElement>("objective-distance").addEventListener("change", () => {
  update(setObjective(form, "shortest_distance"));
});

for (const kind of ["route", "motorhome"] as const) {
  el<HTMLInputElement>(`kind-${kind}`).addEventListener("change", () => {
    update(setKind(form, kind as RequestKind));
  });
}

el<HTMLInputElement>("departure").addEventListener("change", (event) => {
  update(setDeparture(form, (event.target as HTMLInputElement).value));
});

submitBtn.addEventListener("click", () => void submit());

// --- boot -----------------------------------------------------------------

client
  .health()
  .then((health) => {
    if (health.bbox) {
      proj = makeProjection(health.bbox);
      mapSvg.setAttribute("viewBox", `0 0 ${proj.width} ${proj.height}`);
    }
    el<HTMLElement>("graph-name").textContent =
      `${health.name} · ${health.nodes} nodes · ${health.edges} edges`;
    repaint();
  })
  .catch(() => {
    hint.textContent = "Planner service unreachable; is it running?";
  });

repaint();
