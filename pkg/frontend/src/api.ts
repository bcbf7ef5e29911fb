// Typed client for the game service. All rules live server-side; this file
// only moves JSON.

export interface BoardSpec {
  window: [number, number, number, number]; // xmin, ymin, xmax, ymax
  p: number;
  seed: number;
}

export interface NewGameRequest {
  variant: string;
  m: number;
  b: number;
  c: number;
  s: number;
  breaker: string;
  board?: BoardSpec;
  origin?: [number, number];
  origin_policy?: string;
}

export interface BoardPayload {
  window: [number, number, number, number];
  p: number;
  seed: number;
  open: string[];
}

export interface Diagnostics {
  [key: string]: unknown;
  d?: number;
  scope?: [number, number, number, number];
  B1?: [number, number, number, number] | null;
  B2?: [number, number, number, number] | null;
  A?: [number, number, number, number] | null;
  A_prime?: [number, number, number, number] | null;
  G1?: [string, number, number][];
  G2?: [string, number, number][];
}

export interface GameStatePayload {
  session: string;
  variant: string;
  bias: { m: number; b: number; c: number; s: number };
  origin: [number, number];
  round: number;
  status: string;
  maker: string[];
  breaker: string[];
  last_breaker_move: string[];
  budget: { cap: number; used: number; headroom: number };
  state_hash: string;
  board: "lattice" | BoardPayload;
  free_boundary?: string[];
  classes?: Record<string, string>;
  potentials?: { v: number; w: number };
  diagnostics?: Diagnostics;
  diagnostics_history?: Record<string, Diagnostics>;
}

export class ServiceError extends Error {
  constructor(public status: number, public detail: string) {
    super(`service ${status}: ${detail}`);
  }
}

async function expectJson(res: Response): Promise<any> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      detail = body.detail ?? detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ServiceError(res.status, detail);
  }
  return res.json();
}

export class GameClient {
  constructor(private base: string) {}

  async createGame(req: NewGameRequest): Promise<GameStatePayload> {
    const res = await fetch(`${this.base}/games`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
    return expectJson(res);
  }

  async getGame(session: string): Promise<GameStatePayload> {
    return expectJson(await fetch(`${this.base}/games/${session}`));
  }

  async makerMove(session: string, edges: string[]): Promise<GameStatePayload> {
    const res = await fetch(`${this.base}/games/${session}/maker-move`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ edges }),
    });
    return expectJson(res);
  }

  async transcript(session: string): Promise<string> {
    const res = await fetch(`${this.base}/games/${session}/transcript`);
    if (!res.ok) throw new ServiceError(res.status, res.statusText);
    return res.text();
  }

  async deleteGame(session: string): Promise<void> {
    await fetch(`${this.base}/games/${session}`, { method: "DELETE" });
  }
}
