/**
 * Session state machine, UI-agnostic.
 *
 * One controller drives one evaluator's pass: fetch the next item,
 * collect a score for every displayed position, advance only when the
 * item is complete. Server rejections (422) surface inline against the
 * position that caused them; transport failures become a retryable
 * error state.
 */

import { ApiError, EvalApi, ScoringItem } from "./api.js";
import { assertBlind } from "./blindness.js";

export interface ScoringState {
  kind: "scoring";
  item: ScoringItem;
  /** position -> accepted value, server-confirmed */
  scores: Map<number, number>;
  /** inline rejection from the last submit, if any */
  error: { position: number; detail: string } | null;
  submitting: boolean;
}

export type ControllerState =
  | { kind: "loading" }
  | ScoringState
  | { kind: "done"; scored: number; total: number }
  | { kind: "failed"; message: string };

export type StateListener = (state: ControllerState) => void;

export class SessionController {
  private _state: ControllerState = { kind: "loading" };
  private listeners: StateListener[] = [];

  constructor(
    private readonly api: EvalApi,
    readonly evaluator: string,
  ) {}

  get state(): ControllerState {
    return this._state;
  }

  onChange(listener: StateListener): void {
    this.listeners.push(listener);
  }

  private setState(state: ControllerState): void {
    this._state = state;
    for (const listener of this.listeners) {
      listener(state);
    }
  }

  /** Fetch the next item (or the done marker) from the service. */
  async start(): Promise<void> {
    this.setState({ kind: "loading" });
    let next;
    try {
      next = assertBlind(await this.api.next(this.evaluator));
    } catch (err) {
      this.setState({ kind: "failed", message: describe(err) });
      return;
    }
    if (next.done) {
      this.setState({ kind: "done", scored: next.scored, total: next.total });
      return;
    }
    const scores = new Map<number, number>();
    for (const [pos, value] of Object.entries(next.positions_scored)) {
      scores.set(Number(pos), value);
    }
    this.setState({
      kind: "scoring",
      item: next,
      scores,
      error: null,
      submitting: false,
    });
  }

  /** Positions of the current item still waiting for a score. */
  remaining(): number[] {
    if (this._state.kind !== "scoring") {
      return [];
    }
    const { item, scores } = this._state;
    const out: number[] = [];
    for (let pos = 0; pos < item.outputs.length; pos++) {
      if (!scores.has(pos)) {
        out.push(pos);
      }
    }
    return out;
  }

  /**
   * Submit one score. Resolves true when the server accepted it.
   * A 422 leaves the item on screen with the detail pinned to the
   * offending position; the session never advances past an item with
   * unscored positions.
   */
  async submit(position: number, value: number): Promise<boolean> {
    if (this._state.kind !== "scoring" || this._state.submitting) {
      return false;
    }
    const scoring = this._state;
    const { item } = scoring;
    if (position < 0 || position >= item.outputs.length) {
      this.setState({
        ...scoring,
        error: { position, detail: `no output at position ${position}` },
      });
      return false;
    }
    this.setState({ ...scoring, submitting: true, error: null });
    try {
      await this.api.score({
        session_id: item.session_id,
        item_id: item.item_id,
        position,
        value,
      });
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.setState({
          ...scoring,
          submitting: false,
          error: { position, detail: err.detail },
        });
        return false;
      }
      this.setState({ kind: "failed", message: describe(err) });
      return false;
    }
    const scores = new Map(scoring.scores);
    scores.set(position, value);
    if (scores.size >= item.outputs.length) {
      // item complete: advance to the next one
      await this.start();
      return true;
    }
    this.setState({
      ...scoring,
      scores,
      submitting: false,
      error: null,
    });
    return true;
  }

  /** Re-fetch after a transport failure. */
  async retry(): Promise<void> {
    if (this._state.kind === "failed") {
      await this.start();
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    return err.message;
  }
  if (err instanceof Error) {
    return err.message;
  }
  return String(err);
}
