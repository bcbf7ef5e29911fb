// DOM wiring: the setup form, the canvas board, the budget meter, overlay
// toggles, the status banner, and the transcript download link.

import { GameClient } from "./api.js";
import { GameController } from "./controller.js";
import { Viewport, validateForm, formatEdge } from "./model.js";
import { render } from "./render.js";

const SERVICE = (window as any).PERCDUEL_SERVICE ?? "http://127.0.0.1:8642";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("board");
  const ctx = canvas.getContext("2d")!;
  const vp = new Viewport(canvas.width, canvas.height);
  const controller = new GameController(new GameClient(SERVICE), {
    onError: (msg) => { el("error").textContent = msg; },
    onHashMismatch: () => { el("error").textContent = "state hash mismatch!"; },
  });
  const vm = controller.vm;

  const redraw = () => {
    render(ctx, vp, vm);
    el("banner").textContent = vm.banner();
    const meter = vm.budgetMeter();
    el("budget").textContent =
      `budget ${meter.used}+${meter.selected} of ${meter.cap} (left ${meter.left})`;
    const v = vm.state?.potentials;
    el("potentials").textContent = v ? `v=${v.v} w=${v.w}` : "";
  };

  el<HTMLButtonElement>("start").addEventListener("click", async () => {
    const variant = el<HTMLSelectElement>("variant").value;
    const m = Number(el<HTMLInputElement>("m").value);
    const b = Number(el<HTMLInputElement>("b").value);
    const c = Number(el<HTMLInputElement>("c").value);
    const s = Number(el<HTMLInputElement>("s").value);
    const breaker = el<HTMLSelectElement>("breaker").value;
    const problem = validateForm(variant, m, s, breaker);
    el("error").textContent = problem ?? "";
    if (problem) return;
    const polluted = el<HTMLInputElement>("polluted").checked;
    const req: any = { variant, m, b, c, s, breaker };
    if (polluted) {
      req.board = {
        window: [-50, -50, 50, 50],
        p: Number(el<HTMLInputElement>("p").value),
        seed: Number(el<HTMLInputElement>("seed").value),
      };
      req.origin_policy = "scan_adversarial";
    }
    const state = await controller.start(req);
    vp.centerX = state.origin[0];
    vp.centerY = state.origin[1];
    redraw();
  });

  el<HTMLButtonElement>("submit").addEventListener("click", async () => {
    try {
      await controller.submit();
    } catch {
      /* 400s keep the selection; the error banner already shows the rule */
    }
    redraw();
  });

  el<HTMLAnchorElement>("download").addEventListener("click", async (ev) => {
    ev.preventDefault();
    const text = await controller.downloadTranscript();
    const blob = new Blob([text], { type: "text/plain" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "game-transcript.txt";
    a.click();
  });

  for (const key of ["freeBoundary", "classes", "gates", "boxes", "scope", "pairing"] as const) {
    const box = document.getElementById(`ov-${key}`) as HTMLInputElement | null;
    box?.addEventListener("change", () => {
      vm.overlays[key] = box.checked;
      redraw();
    });
  }

  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.addEventListener("mousedown", (ev) => {
    dragging = true;
    lastX = ev.offsetX;
    lastY = ev.offsetY;
  });
  canvas.addEventListener("mouseup", (ev) => {
    dragging = false;
    const edge = vp.pickEdge(ev.offsetX, ev.offsetY);
    if (edge) {
      vm.toggle(edge);
      redraw();
    }
  });
  canvas.addEventListener("mousemove", (ev) => {
    if (dragging && (ev.buttons & 1)) {
      vp.pan(ev.offsetX - lastX, ev.offsetY - lastY);
      lastX = ev.offsetX;
      lastY = ev.offsetY;
      redraw();
      return;
    }
    const edge = vp.pickEdge(ev.offsetX, ev.offsetY);
    vm.hoverEdge = edge;
    const cls = edge ? vm.classOf(edge) : undefined;
    el("hover").textContent = edge
      ? `${formatEdge(edge)}${cls ? ` (${cls})` : ""}`
      : "";
    redraw();
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    vp.zoom(ev.deltaY < 0 ? 1.15 : 1 / 1.15, ev.offsetX, ev.offsetY);
    redraw();
  });

  redraw();
}

main();
