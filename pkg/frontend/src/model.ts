// Board view-model: edge parsing, canonical hashing, viewport math, edge
// states and overlays, and the Maker selection with its budget meter.
//
// The view-model never evaluates rules; it mirrors the service state and
// proves it by recomputing the canonical state hash over its own copy.

import type { GameStatePayload, BoardPayload } from "./api.js";

export type Edge = [string, number, number]; // ["H"|"V", x, y]

export function parseEdge(token: string): Edge {
  const parts = token.split(" ");
  if (parts.length !== 3 || (parts[0] !== "H" && parts[0] !== "V")) {
    throw new Error(`bad edge token: ${token}`);
  }
  return [parts[0], Number(parts[1]), Number(parts[2])];
}

export function formatEdge(e: Edge): string {
  return `${e[0]} ${e[1]} ${e[2]}`;
}

export function endpoints(e: Edge): [[number, number], [number, number]] {
  const [orient, x, y] = e;
  return orient === "H"
    ? [[x, y], [x + 1, y]]
    : [[x, y], [x, y + 1]];
}

// Canonical order is lexicographic on (orientation, y, x).
export function edgeSortKey(a: Edge, b: Edge): number {
  if (a[0] !== b[0]) return a[0] < b[0] ? -1 : 1;
  if (a[2] !== b[2]) return a[2] - b[2];
  return a[1] - b[1];
}

export function sortEdgeTokens(tokens: string[]): string[] {
  return tokens
    .map(parseEdge)
    .sort(edgeSortKey)
    .map(formatEdge);
}

// The owner-corner pairing used only to highlight the partner of a hovered
// edge; the strategy itself runs server-side.
export function barrierPair(origin: [number, number], e: Edge): Edge | null {
  const [orient, x, y] = e;
  const rx = x - origin[0];
  const ry = y - origin[1];
  if (orient === "H") {
    if (ry === 0) return null;
    const ox = rx >= 0 ? rx + 1 : rx;
    const py = ry > 0 ? ry - 1 : ry;
    return ["V", ox + origin[0], py + origin[1]];
  }
  if (rx === 0) return null;
  const oy = ry >= 0 ? ry + 1 : ry;
  const px = rx > 0 ? rx - 1 : rx;
  return ["H", px + origin[0], oy + origin[1]];
}

// Python's repr() of a float is its shortest round-trip decimal, which
// String(n) also produces, except that repr keeps a trailing ".0" on
// integral floats.
export function pythonFloat(n: number): string {
  return Number.isInteger(n) ? `${n}.0` : String(n);
}

export function boardId(board: "lattice" | BoardPayload): string {
  if (board === "lattice") return "lattice";
  const [xmin, ymin, xmax, ymax] = board.window;
  return (
    `BOARD v1 window=${xmin},${ymin},${xmax},${ymax} ` +
    `p=${pythonFloat(board.p)} seed=${board.seed}`
  );
}

export function canonicalStateString(s: GameStatePayload): string {
  const parts = [
    s.variant,
    `${s.bias.m},${s.bias.b},${s.bias.c},${s.bias.s}`,
    `${s.origin[0]},${s.origin[1]}`,
    sortEdgeTokens(s.maker).join(";"),
    sortEdgeTokens(s.breaker).join(";"),
    String(s.round),
    s.status,
    boardId(s.board),
  ];
  return parts.join("|");
}

export async function stateHash(s: GameStatePayload): Promise<string> {
  const bytes = new TextEncoder().encode(canonicalStateString(s));
  const digest = await crypto.subtle.digest("SHA-256", bytes);
  return [...new Uint8Array(digest)]
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}

// ---------------------------------------------------------------------------
// Viewport: pan/zoom over lattice coordinates.

export class Viewport {
  scale = 24; // pixels per lattice step
  centerX = 0;
  centerY = 0;

  constructor(public width: number, public height: number) {}

  toScreen(x: number, y: number): [number, number] {
    return [
      this.width / 2 + (x - this.centerX) * this.scale,
      this.height / 2 - (y - this.centerY) * this.scale,
    ];
  }

  toWorld(px: number, py: number): [number, number] {
    return [
      this.centerX + (px - this.width / 2) / this.scale,
      this.centerY - (py - this.height / 2) / this.scale,
    ];
  }

  pan(dxPixels: number, dyPixels: number): void {
    this.centerX -= dxPixels / this.scale;
    this.centerY += dyPixels / this.scale;
  }

  zoom(factor: number, atPx?: number, atPy?: number): void {
    const anchor = atPx !== undefined && atPy !== undefined
      ? this.toWorld(atPx, atPy)
      : [this.centerX, this.centerY];
    this.scale = Math.min(96, Math.max(4, this.scale * factor));
    if (atPx !== undefined && atPy !== undefined) {
      const after = this.toWorld(atPx, atPy);
      this.centerX += anchor[0] - after[0];
      this.centerY += anchor[1] - after[1];
    }
  }

  // Nearest edge to a screen point, for thick-segment hit targets.
  pickEdge(px: number, py: number, tolerancePx = 8): Edge | null {
    const [wx, wy] = this.toWorld(px, py);
    const candidates: Edge[] = [];
    const bx = Math.floor(wx);
    const by = Math.floor(wy);
    for (let x = bx - 1; x <= bx + 1; x++) {
      for (let y = by - 1; y <= by + 1; y++) {
        candidates.push(["H", x, y], ["V", x, y]);
      }
    }
    let best: Edge | null = null;
    let bestDist = tolerancePx / this.scale;
    for (const e of candidates) {
      const [[ax, ay], [bx2, by2]] = endpoints(e);
      const mx = (ax + bx2) / 2;
      const my = (ay + by2) / 2;
      const along = e[0] === "H" ? Math.abs(wx - mx) <= 0.5 : Math.abs(wy - my) <= 0.5;
      const across = e[0] === "H" ? Math.abs(wy - my) : Math.abs(wx - mx);
      if (along && across < bestDist) {
        bestDist = across;
        best = e;
      }
    }
    return best;
  }
}

// ---------------------------------------------------------------------------
// Edge states and overlays.

export type EdgeState =
  | "maker"
  | "breaker"
  | "open-unclaimed"
  | "closed"
  | "off-board";

export interface Overlays {
  freeBoundary: boolean;
  classes: boolean;
  gates: boolean;
  boxes: boolean;
  scope: boolean;
  pairing: boolean;
}

export const defaultOverlays: Overlays = {
  freeBoundary: true,
  classes: true,
  gates: true,
  boxes: true,
  scope: true,
  pairing: true,
};

export class BoardViewModel {
  state: GameStatePayload | null = null;
  selection = new Set<string>();
  overlays: Overlays = { ...defaultOverlays };
  hoverEdge: Edge | null = null;
  lastError = "";

  private makerSet = new Set<string>();
  private breakerSet = new Set<string>();
  private openSet: Set<string> | null = null;

  load(state: GameStatePayload): void {
    this.state = state;
    this.makerSet = new Set(state.maker);
    this.breakerSet = new Set(state.breaker);
    this.openSet = state.board === "lattice" ? null : new Set(state.board.open);
    for (const token of [...this.selection]) {
      if (this.makerSet.has(token) || this.breakerSet.has(token)) {
        this.selection.delete(token);
      }
    }
  }

  async verifyHash(): Promise<boolean> {
    if (!this.state) return false;
    return (await stateHash(this.state)) === this.state.state_hash;
  }

  edgeState(e: Edge): EdgeState {
    const token = formatEdge(e);
    if (this.makerSet.has(token)) return "maker";
    if (this.breakerSet.has(token)) return "breaker";
    if (this.openSet === null) return "open-unclaimed";
    if (this.state && this.state.board !== "lattice") {
      const [xmin, ymin, xmax, ymax] = this.state.board.window;
      const [[ax, ay], [bx, by]] = endpoints(e);
      const inside =
        ax >= xmin && ax <= xmax && ay >= ymin && ay <= ymax &&
        bx >= xmin && bx <= xmax && by >= ymin && by <= ymax;
      if (!inside) return "off-board";
    }
    return this.openSet.has(token) ? "open-unclaimed" : "closed";
  }

  // Optimistic highlighting only: claimable and within this round's budget.
  selectable(e: Edge): boolean {
    if (!this.state || this.state.status !== "ongoing") return false;
    if (this.edgeState(e) !== "open-unclaimed") return false;
    if (this.state.variant === "unlimited") {
      return this.selection.size < this.state.bias.m + (this.state.round === 0 ? this.state.bias.c : 0);
    }
    return this.selection.size < this.state.budget.headroom;
  }

  toggle(e: Edge): void {
    const token = formatEdge(e);
    if (this.selection.has(token)) {
      this.selection.delete(token);
    } else if (this.selectable(e)) {
      this.selection.add(token);
    }
  }

  budgetMeter(): { cap: number; used: number; selected: number; left: number } {
    const b = this.state?.budget ?? { cap: 0, used: 0, headroom: 0 };
    return {
      cap: b.cap,
      used: b.used,
      selected: this.selection.size,
      left: b.headroom - this.selection.size,
    };
  }

  classOf(e: Edge): string | undefined {
    return this.state?.classes?.[formatEdge(e)];
  }

  pairingPartner(): Edge | null {
    if (!this.state || !this.overlays.pairing || !this.hoverEdge) return null;
    if (this.state.variant !== "unlimited") return null;
    return barrierPair(this.state.origin, this.hoverEdge);
  }

  banner(): string {
    if (!this.state) return "no session";
    const { status, round } = this.state;
    if (status === "ongoing") return `round ${round + 1}: your move`;
    if (status === "breaker_won") return `Breaker won in round ${round}`;
    if (status === "forfeit_by_breaker") return `Breaker forfeited in round ${round}`;
    return `${status} at round ${round}`;
  }
}

// Inline form validation for the strategy-3 bias bound.
export function validateForm(variant: string, m: number, s: number, breaker: string): string | null {
  if (breaker === "strategy3") {
    if (m < 29) return "strategy3 needs m >= 29";
    if (s < 0 || s > (m - 22) / 14) {
      return `strategy3 needs 0 <= s <= (m - 22)/14 = ${((m - 22) / 14).toFixed(2)}`;
    }
    if (variant !== "box_limited") return "strategy3 plays the box-limited game";
  }
  if (breaker === "strategy4" && variant !== "limited") {
    return "strategy4 plays the limited game";
  }
  return null;
}
