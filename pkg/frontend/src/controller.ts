// Session flow: one active game per tab, all server calls sequential.
// The controller feeds the view-model and checks the state-hash invariant
// after every server response.

import { GameClient, NewGameRequest, GameStatePayload, ServiceError } from "./api.js";
import { BoardViewModel, sortEdgeTokens } from "./model.js";

export interface ControllerEvents {
  onState?: (state: GameStatePayload) => void;
  onError?: (message: string) => void;
  onHashMismatch?: (got: string, expected: string) => void;
}

export class GameController {
  readonly vm = new BoardViewModel();
  session: string | null = null;
  hashFailures = 0;

  constructor(private client: GameClient, private events: ControllerEvents = {}) {}

  private async accept(state: GameStatePayload): Promise<GameStatePayload> {
    this.vm.load(state);
    if (!(await this.vm.verifyHash())) {
      this.hashFailures += 1;
      this.events.onHashMismatch?.(
        "local-recompute-differs", state.state_hash);
    }
    this.events.onState?.(state);
    return state;
  }

  async start(req: NewGameRequest): Promise<GameStatePayload> {
    const state = await this.client.createGame(req);
    this.session = state.session;
    this.vm.selection.clear();
    return this.accept(state);
  }

  async refresh(): Promise<GameStatePayload> {
    if (!this.session) throw new Error("no session");
    return this.accept(await this.client.getGame(this.session));
  }

  /** Submit the current selection (or an explicit move) as Maker. */
  async submit(edges?: string[]): Promise<GameStatePayload> {
    if (!this.session) throw new Error("no session");
    const move = edges ?? sortEdgeTokens([...this.vm.selection]);
    try {
      const state = await this.client.makerMove(this.session, move);
      this.vm.selection.clear();
      this.vm.lastError = "";
      return await this.accept(state);
    } catch (err) {
      if (err instanceof ServiceError && err.status === 400) {
        // Keep the selection so the human can correct it.
        this.vm.lastError = err.detail;
        this.events.onError?.(err.detail);
      }
      throw err;
    }
  }

  async downloadTranscript(): Promise<string> {
    if (!this.session) throw new Error("no session");
    return this.client.transcript(this.session);
  }

  async end(): Promise<void> {
    if (this.session) {
      await this.client.deleteGame(this.session);
      this.session = null;
    }
  }
}
