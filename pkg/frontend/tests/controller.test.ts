import { describe, expect, it } from "vitest";

import { EvalApi } from "../src/api.js";
import { SessionController } from "../src/controller.js";

/** In-memory stand-in for the evaluation service, one evaluator. */
class FakeService {
  scores = new Map<string, number>();
  nextCalls = 0;
  scoreCalls = 0;

  constructor(
    private readonly items: Array<{ item_id: string; outputs: string[] }>,
    public failNextTransport = 0,
  ) {}

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }

  fetch = async (input: string | URL | Request, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    if (url.includes("/api/session/")) {
      this.nextCalls += 1;
      if (this.failNextTransport > 0) {
        this.failNextTransport -= 1;
        throw new TypeError("fetch failed");
      }
      let scored = 0;
      for (const item of this.items) {
        const done = item.outputs.every((_, pos) =>
          this.scores.has(`${item.item_id}:${pos}`),
        );
        if (done) {
          scored += 1;
          continue;
        }
        const positions_scored: Record<string, number> = {};
        item.outputs.forEach((_, pos) => {
          const v = this.scores.get(`${item.item_id}:${pos}`);
          if (v !== undefined) {
            positions_scored[String(pos)] = v;
          }
        });
        return this.json({
          done: false,
          session_id: "fake-session",
          item_id: item.item_id,
          source_text: `source for ${item.item_id}`,
          outputs: item.outputs,
          scored,
          total: this.items.length,
          positions_scored,
        });
      }
      return this.json({
        done: true,
        session_id: "fake-session",
        scored,
        total: this.items.length,
      });
    }
    if (url.includes("/api/score")) {
      this.scoreCalls += 1;
      const body = JSON.parse(String(init?.body)) as {
        item_id: string;
        position: number;
        value: number;
      };
      if (!Number.isInteger(body.value) || body.value < 0 || body.value > 4) {
        return this.json(
          { detail: `invalid Likert value: ${body.value}` },
          422,
        );
      }
      this.scores.set(`${body.item_id}:${body.position}`, body.value);
      return this.json({
        ok: true,
        item_id: body.item_id,
        position: body.position,
        value: body.value,
      });
    }
    return this.json({ detail: "not found" }, 404);
  };
}

function makeController(service: FakeService): SessionController {
  return new SessionController(new EvalApi("http://fake", service.fetch), "ev1");
}

const THREE_ITEMS = [
  { item_id: "it0", outputs: ["a0", "b0"] },
  { item_id: "it1", outputs: ["a1", "b1"] },
  { item_id: "it2", outputs: ["a2", "b2"] },
];

describe("SessionController", () => {
  it("walks a whole session item by item and finishes done", async () => {
    const service = new FakeService(THREE_ITEMS);
    const controller = makeController(service);
    await controller.start();

    for (let i = 0; i < 3; i++) {
      expect(controller.state.kind).toBe("scoring");
      if (controller.state.kind !== "scoring") {
        return;
      }
      expect(controller.state.item.item_id).toBe(`it${i}`);
      expect(controller.remaining()).toEqual([0, 1]);
      await controller.submit(0, 3);
      expect(controller.remaining()).toEqual([1]);
      await controller.submit(1, 1);
    }
    expect(controller.state).toEqual({ kind: "done", scored: 3, total: 3 });
    expect(service.scoreCalls).toBe(6);
  });

  it("does not advance while positions remain unscored", async () => {
    const service = new FakeService(THREE_ITEMS);
    const controller = makeController(service);
    await controller.start();
    expect(service.nextCalls).toBe(1);

    await controller.submit(0, 2);
    // still the same item, no second /next call
    expect(service.nextCalls).toBe(1);
    expect(controller.state.kind).toBe("scoring");
    if (controller.state.kind === "scoring") {
      expect(controller.state.item.item_id).toBe("it0");
    }

    await controller.submit(1, 4);
    expect(service.nextCalls).toBe(2);
  });

  it("surfaces a 422 inline against the submitted position", async () => {
    const service = new FakeService(THREE_ITEMS);
    const controller = makeController(service);
    await controller.start();

    const accepted = await controller.submit(1, 9);
    expect(accepted).toBe(false);
    expect(controller.state.kind).toBe("scoring");
    if (controller.state.kind === "scoring") {
      expect(controller.state.error).toEqual({
        position: 1,
        detail: "invalid Likert value: 9",
      });
      // nothing was recorded, the item did not advance
      expect(controller.state.scores.size).toBe(0);
    }

    // a valid score afterwards clears the inline error
    await controller.submit(1, 2);
    if (controller.state.kind === "scoring") {
      expect(controller.state.error).toBeNull();
      expect(controller.state.scores.get(1)).toBe(2);
    }
  });

  it("rejects out-of-range positions locally", async () => {
    const service = new FakeService(THREE_ITEMS);
    const controller = makeController(service);
    await controller.start();

    const accepted = await controller.submit(7, 3);
    expect(accepted).toBe(false);
    expect(service.scoreCalls).toBe(0);
    if (controller.state.kind === "scoring") {
      expect(controller.state.error?.position).toBe(7);
    }
  });

  it("turns transport failure into a retryable failed state", async () => {
    const service = new FakeService(THREE_ITEMS, 1);
    const controller = makeController(service);
    await controller.start();

    expect(controller.state.kind).toBe("failed");
    if (controller.state.kind === "failed") {
      expect(controller.state.message).toContain("fetch failed");
    }

    await controller.retry();
    expect(controller.state.kind).toBe("scoring");
  });

  it("resumes partially scored items from positions_scored", async () => {
    const service = new FakeService(THREE_ITEMS);
    service.scores.set("it0:0", 4);
    const controller = makeController(service);
    await controller.start();

    expect(controller.remaining()).toEqual([1]);
    await controller.submit(1, 0);
    if (controller.state.kind === "scoring") {
      expect(controller.state.item.item_id).toBe("it1");
    }
  });

  it("fails loudly if the service ever leaks session internals", async () => {
    const service = new FakeService(THREE_ITEMS);
    const leaky = async (input: string | URL | Request, init?: RequestInit) => {
      const res = await service.fetch(input, init);
      const body = await res.json();
      body.permutations = { it0: [1, 0] };
      return new Response(JSON.stringify(body), { status: 200 });
    };
    const controller = new SessionController(
      new EvalApi("http://fake", leaky),
      "ev1",
    );
    await controller.start();
    expect(controller.state.kind).toBe("failed");
    if (controller.state.kind === "failed") {
      expect(controller.state.message).toContain("forbidden key");
    }
  });
});
