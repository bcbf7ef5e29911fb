// Canvas drawing: a pure function of the view-model and viewport.

import { BoardViewModel, Viewport, Edge, endpoints, parseEdge } from "./model.js";

const COLORS: Record<string, string> = {
  maker: "#4aa3df",
  breaker: "#c0392b",
  "open-unclaimed": "#b8b8b8",
  closed: "#ededed",
  "off-board": "#fafafa",
  good: "#2ecc71",
  bad: "#e67e22",
  awful: "#8e44ad",
  gate: "#f1c40f",
  selection: "#1f618d",
  partner: "#16a085",
};

function drawEdge(ctx: CanvasRenderingContext2D, vp: Viewport, e: Edge,
                  color: string, width: number): void {
  const [[ax, ay], [bx, by]] = endpoints(e);
  const [px, py] = vp.toScreen(ax, ay);
  const [qx, qy] = vp.toScreen(bx, by);
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.lineTo(qx, qy);
  ctx.stroke();
}

function drawBox(ctx: CanvasRenderingContext2D, vp: Viewport,
                 box: [number, number, number, number], color: string): void {
  const [xmin, ymin, xmax, ymax] = box;
  const [px, py] = vp.toScreen(xmin - 0.25, ymax + 0.25);
  const [qx, qy] = vp.toScreen(xmax + 0.25, ymin - 0.25);
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.setLineDash([6, 4]);
  ctx.strokeRect(px, py, qx - px, qy - py);
  ctx.setLineDash([]);
}

export function render(ctx: CanvasRenderingContext2D, vp: Viewport,
                       vm: BoardViewModel): void {
  ctx.clearRect(0, 0, vp.width, vp.height);
  const state = vm.state;
  if (!state) return;

  const [wx0, wy1] = vp.toWorld(0, 0);
  const [wx1, wy0] = vp.toWorld(vp.width, vp.height);
  const xlo = Math.floor(wx0) - 1;
  const xhi = Math.ceil(wx1) + 1;
  const ylo = Math.floor(wy0) - 1;
  const yhi = Math.ceil(wy1) + 1;

  // Base lattice within the visible rectangle.
  for (let x = xlo; x <= xhi; x++) {
    for (let y = ylo; y <= yhi; y++) {
      for (const e of [["H", x, y], ["V", x, y]] as Edge[]) {
        const st = vm.edgeState(e);
        if (st === "off-board") continue;
        const cls = vm.overlays.classes ? vm.classOf(e) : undefined;
        const color = cls ? COLORS[cls] : COLORS[st];
        const width = st === "maker" || st === "breaker" ? 4 : cls ? 3 : 1.5;
        drawEdge(ctx, vp, e, color, width);
      }
    }
  }

  // Strategy geometry overlays.
  const diag = state.diagnostics ?? {};
  if (vm.overlays.boxes) {
    for (const key of ["B1", "B2", "A", "A_prime"] as const) {
      const box = diag[key];
      if (box) drawBox(ctx, vp, box as [number, number, number, number], "#7f8c8d");
    }
  }
  if (vm.overlays.scope && diag.scope) {
    drawBox(ctx, vp, diag.scope as [number, number, number, number], "#2980b9");
  }
  if (vm.overlays.gates) {
    for (const key of ["G1", "G2"] as const) {
      for (const raw of (diag[key] ?? []) as [string, number, number][]) {
        drawEdge(ctx, vp, raw as Edge, COLORS.gate, 5);
      }
    }
  }

  // Selection and pairing-partner highlight on top.
  for (const token of vm.selection) {
    drawEdge(ctx, vp, parseEdge(token), COLORS.selection, 5);
  }
  const partner = vm.pairingPartner();
  if (partner) drawEdge(ctx, vp, partner, COLORS.partner, 5);

  // Origin marker.
  const [ox, oy] = vp.toScreen(state.origin[0], state.origin[1]);
  ctx.fillStyle = "#000";
  ctx.beginPath();
  ctx.arc(ox, oy, 5, 0, 2 * Math.PI);
  ctx.fill();
}
