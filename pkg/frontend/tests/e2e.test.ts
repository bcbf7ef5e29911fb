// Scripted end-to-end session against the real Python service: play a
// (1,1) polluted game as Maker to completion against strategy5, verify the
// view-model's recomputed hash matches the service hash on every state,
// then download the transcript and replay it offline to the same outcome.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { GameClient } from "../src/api.js";
import { GameController } from "../src/controller.js";
import { stateHash, sortEdgeTokens, parseEdge, endpoints } from "../src/model.js";

const PORT = 8740 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;
let service: ChildProcess;

async function waitForService(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const res = await fetch(`${BASE}/games/none`);
      if (res.status === 404) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  service = spawn("python3", ["-m", "percduel.cli", "serve",
                              "--port", String(PORT)],
                  { stdio: "ignore" });
  await waitForService();
}, 30_000);

afterAll(() => {
  service?.kill();
});

describe("end-to-end polluted game vs strategy5", () => {
  it("plays to completion with matching hashes and an exact offline replay",
     async () => {
    const hashChecks: boolean[] = [];
    const controller = new GameController(new GameClient(BASE), {
      onHashMismatch: () => hashChecks.push(false),
      onState: () => hashChecks.push(true),
    });

    let state = await controller.start({
      variant: "unlimited", m: 1, b: 1, c: 0, s: 0,
      breaker: "strategy5",
      board: { window: [-15, -15, 15, 15], p: 0.55, seed: 7 },
      origin_policy: "scan_adversarial",
    });
    expect(state.status).toBe("ongoing");
    expect(state.board).not.toBe("lattice");
    const open = state.board === "lattice" ? [] : state.board.open;

    // Maker grows from the origin: always claim an unclaimed open edge
    // touching the played region, or any open edge when stuck.
    const reached = new Set<string>([state.origin.join(",")]);
    let rounds = 0;
    while (state.status === "ongoing" && rounds < 3000) {
      const claimed = new Set([...state.maker, ...state.breaker]);
      let pick: string | undefined;
      for (const token of sortEdgeTokens(open)) {
        if (claimed.has(token)) continue;
        const [a, b] = endpoints(parseEdge(token));
        if (reached.has(a.join(",")) || reached.has(b.join(","))) {
          pick = token;
          break;
        }
      }
      if (!pick) pick = sortEdgeTokens(open).find((t) => !claimed.has(t));
      if (!pick) break;
      const [a, b] = endpoints(parseEdge(pick));
      reached.add(a.join(","));
      reached.add(b.join(","));
      state = await controller.submit([pick]);
      rounds += 1;
    }
    expect(state.status).toBe("breaker_won");
    expect(controller.hashFailures).toBe(0);
    expect(hashChecks.length).toBeGreaterThan(2);

    // Every rendered state hash matched the service's; spot-check once more.
    expect(await stateHash(state)).toBe(state.state_hash);

    // Download the transcript and replay it offline through the CLI.
    const text = await controller.downloadTranscript();
    expect(text.startsWith("GAME v1 variant=unlimited")).toBe(true);
    expect(text.trim().endsWith(`round=${state.round}`)).toBe(true);
    const dir = mkdtempSync(join(tmpdir(), "percduel-"));
    const file = join(dir, "transcript.txt");
    writeFileSync(file, text);
    const replayed = spawnSync(
      "python3", ["-m", "percduel.cli", "replay", "--transcript", file],
      { encoding: "utf-8" });
    expect(replayed.status).toBe(0);
    const out = replayed.stdout;
    expect(out).toContain(`OUTCOME breaker_won round=${state.round}`);
    const offlineHash = out.match(/STATE_HASH (\w+)/)?.[1];
    expect(offlineHash).toBe(state.state_hash);

    await controller.end();
  }, 120_000);

  it("surfaces rule names on illegal moves and keeps the selection",
     async () => {
    const controller = new GameController(new GameClient(BASE));
    const state = await controller.start({
      variant: "limited", m: 1, b: 2, c: 0, s: 0, breaker: "strategy4",
    });
    expect(state.status).toBe("ongoing");
    await controller.submit(["H 0 0"]);
    await expect(controller.submit(["H 0 0"])).rejects.toThrow(/claimed/);
    expect(controller.vm.lastError).toContain("claimed");
    await controller.end();
  }, 30_000);
});
