/** Typed client for the evaluation service's HTTP API. */

export interface ScoringItem {
  done: false;
  session_id: string;
  item_id: string;
  source_text: string;
  outputs: string[];
  scored: number;
  total: number;
  positions_scored: Record<string, number>;
}

export interface SessionDone {
  done: true;
  session_id: string;
  scored: number;
  total: number;
}

export type NextResponse = ScoringItem | SessionDone;

export interface ScoreRequest {
  session_id: string;
  item_id: string;
  position: number;
  value: number;
}

export interface ScoreAck {
  ok: true;
  item_id: string;
  position: number;
  value: number;
}

/** Non-2xx response; `detail` carries the server's explanation. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function parseDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string") {
      return body.detail;
    }
    return JSON.stringify(body);
  } catch {
    return res.statusText || `status ${res.status}`;
  }
}

export class EvalApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) {
      throw new ApiError(res.status, await parseDetail(res));
    }
    return (await res.json()) as T;
  }

  next(evaluator: string): Promise<NextResponse> {
    return this.request<NextResponse>(
      `/api/session/${encodeURIComponent(evaluator)}/next`,
    );
  }

  score(req: ScoreRequest): Promise<ScoreAck> {
    return this.request<ScoreAck>("/api/score", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }
}
