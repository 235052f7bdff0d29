/**
 * Parameter sidebar: every simulation knob, grouped by engine, each change
 * emitted as one set_params frame. Out-of-range input is clamped and the
 * clamped value written back into the control so the user sees it.
 */

import type { ClientMessage } from "./protocol";
import type { SessionStore } from "./store";

export interface ParamSpec {
  key: string;
  label: string;
  kind: "number" | "bool" | "select" | "number-or-auto";
  min?: number;
  max?: number;
  step?: number;
  integer?: boolean;
  options?: string[];
  group: string;
}

export const PARAM_SPECS: ParamSpec[] = [
  { key: "engine", label: "engine", kind: "select", options: ["annealed", "continuous"], group: "engine" },
  { key: "alpha", label: "alpha", kind: "number", min: 0, max: 1, step: 0.01, group: "annealed" },
  { key: "alpha_min", label: "alpha min", kind: "number", min: 1e-6, max: 1, step: 0.0005, group: "annealed" },
  { key: "alpha_decay", label: "alpha decay", kind: "number", min: 0, max: 1, step: 0.001, group: "annealed" },
  { key: "alpha_target", label: "alpha target", kind: "number", min: 0, max: 1, step: 0.01, group: "annealed" },
  { key: "velocity_damping", label: "velocity damping", kind: "number", min: 0, max: 0.99, step: 0.01, group: "annealed" },
  { key: "repulsion_strength", label: "repulsion", kind: "number", min: -2000, max: -0.01, step: 1, group: "forces" },
  { key: "theta", label: "theta (accuracy)", kind: "number", min: 0, max: 2, step: 0.05, group: "forces" },
  { key: "link_strength", label: "link strength", kind: "number-or-auto", min: 0.001, max: 10, step: 0.05, group: "forces" },
  { key: "link_rest_length", label: "link length", kind: "number", min: 0.1, max: 1000, step: 1, group: "forces" },
  { key: "link_iterations", label: "link iterations", kind: "number", min: 1, max: 10, step: 1, integer: true, group: "forces" },
  { key: "center_strength", label: "centering", kind: "number", min: 0, max: 1, step: 0.01, group: "forces" },
  { key: "collide_enabled", label: "collide", kind: "bool", group: "collide" },
  { key: "collide_padding", label: "collide padding", kind: "number", min: 0, max: 100, step: 0.5, group: "collide" },
  { key: "collide_iterations", label: "collide iterations", kind: "number", min: 1, max: 10, step: 1, integer: true, group: "collide" },
  { key: "time_step", label: "time step", kind: "number", min: 0.1, max: 100, step: 0.5, group: "continuous" },
  { key: "spring_coefficient", label: "spring coefficient", kind: "number", min: 1e-5, max: 1, step: 1e-4, group: "continuous" },
  { key: "drag_coefficient", label: "drag", kind: "number", min: 0, max: 1, step: 0.005, group: "continuous" },
  { key: "gravity_strength", label: "gravity (repel)", kind: "number", min: -100, max: -0.0001, step: 0.1, group: "continuous" },
  { key: "stop_epsilon", label: "stop threshold", kind: "number", min: 1e-4, max: 10, step: 0.005, group: "continuous" },
];

export function clampParam(spec: ParamSpec, value: number): number {
  let v = value;
  if (spec.min !== undefined) v = Math.max(spec.min, v);
  if (spec.max !== undefined) v = Math.min(spec.max, v);
  if (spec.integer) v = Math.round(v);
  return v;
}

type Send = (msg: ClientMessage) => void;

export function buildSidebar(container: HTMLElement, store: SessionStore, send: Send): void {
  container.textContent = "";
  const title = document.createElement("h1");
  title.textContent = "layoutlab";
  const status = document.createElement("div");
  status.className = "status";
  container.append(title, status);

  const refreshStatus = () => {
    status.textContent = `phase: ${store.phase} | nodes: ${store.nodeCount}`;
  };
  store.on("phase", refreshStatus);
  store.on("init", refreshStatus);
  refreshStatus();

  const groups = new Map<string, HTMLFieldSetElement>();
  const groupOf = (name: string): HTMLFieldSetElement => {
    let fs = groups.get(name);
    if (!fs) {
      fs = document.createElement("fieldset");
      const legend = document.createElement("legend");
      legend.textContent = name;
      fs.append(legend);
      groups.set(name, fs);
      container.append(fs);
    }
    return fs;
  };

  const writeBack = new Map<string, (value: unknown) => void>();

  for (const spec of PARAM_SPECS) {
    const row = document.createElement("label");
    const name = document.createElement("span");
    name.textContent = spec.label;
    row.append(name);

    if (spec.kind === "select") {
      const select = document.createElement("select");
      for (const option of spec.options ?? []) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option;
        select.append(el);
      }
      select.addEventListener("change", () => {
        send({ type: "set_params", params: { [spec.key]: select.value } });
      });
      writeBack.set(spec.key, (v) => { select.value = String(v); });
      row.append(select);
    } else if (spec.kind === "bool") {
      const box = document.createElement("input");
      box.type = "checkbox";
      box.addEventListener("change", () => {
        send({ type: "set_params", params: { [spec.key]: box.checked } });
      });
      writeBack.set(spec.key, (v) => { box.checked = Boolean(v); });
      row.append(box);
    } else {
      const input = document.createElement("input");
      input.type = "number";
      if (spec.step !== undefined) input.step = String(spec.step);
      if (spec.kind === "number-or-auto") input.placeholder = "auto";
      input.addEventListener("change", () => {
        if (spec.kind === "number-or-auto" && input.value.trim() === "") {
          send({ type: "set_params", params: { [spec.key]: null } });
          return;
        }
        const parsed = Number(input.value);
        if (!Number.isFinite(parsed)) {
          input.value = "";
          return;
        }
        const clamped = clampParam(spec, parsed);
        if (clamped !== parsed) input.value = String(clamped); // visible clamp
        send({ type: "set_params", params: { [spec.key]: clamped } });
      });
      writeBack.set(spec.key, (v) => {
        input.value = v === null || v === undefined ? "" : String(v);
      });
      row.append(input);
    }
    groupOf(spec.group).append(row);
  }

  const syncFromParams = () => {
    for (const [key, setter] of writeBack) {
      if (key in store.params) setter(store.params[key]);
    }
  };
  store.on("params", syncFromParams);
  syncFromParams();
}
