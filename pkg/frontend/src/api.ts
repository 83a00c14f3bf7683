/** Typed client for the engine's HTTP service.
 *
 * Every view in the designer goes through this module; nothing in the UI
 * talks to the engine any other way, and nothing here recomputes what the
 * engine already reports.
 */

import type {
  CvaReportDocument,
  DealDocument,
  FeatureReport,
  RunStatus,
  SimulateResponse,
  TranchingRow,
  ValidationResult,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class EngineError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "EngineError";
  }
}

export interface SimulateOptions {
  /** Full document to simulate; defaults to the server-side draft. */
  deal?: DealDocument;
  scenarios?: number;
  seed?: number;
}

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
}

async function readError(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: string };
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return response.statusText;
  }
}

export class EngineClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) {
      throw new EngineError(await readError(response), response.status);
    }
    return (await response.json()) as T;
  }

  async getDeal(): Promise<DealDocument> {
    return this.getJson<DealDocument>("/deal");
  }

  /** Upload a draft.  A 400 is a validation verdict, not a failure. */
  async putDeal(doc: DealDocument): Promise<ValidationResult> {
    const response = await this.fetchImpl(this.baseUrl + "/deal", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
    if (response.status === 200 || response.status === 400) {
      return (await response.json()) as ValidationResult;
    }
    throw new EngineError(await readError(response), response.status);
  }

  async simulate(options: SimulateOptions = {}): Promise<SimulateResponse> {
    const body: Record<string, unknown> = {};
    if (options.deal !== undefined) body.deal = options.deal;
    if (options.scenarios !== undefined) body.scenarios = options.scenarios;
    if (options.seed !== undefined) body.seed = options.seed;
    const response = await this.fetchImpl(this.baseUrl + "/simulate", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok && response.status !== 500) {
      throw new EngineError(await readError(response), response.status);
    }
    return (await response.json()) as SimulateResponse;
  }

  async runStatus(runId: string): Promise<RunStatus> {
    return this.getJson<RunStatus>(`/runs/${runId}/status`);
  }

  /** Poll the status resource until the run settles or the timeout hits. */
  async pollRun(runId: string, options: PollOptions = {}): Promise<RunStatus> {
    const interval = options.intervalMs ?? 250;
    const deadline = Date.now() + (options.timeoutMs ?? 60_000);
    for (;;) {
      const status = await this.runStatus(runId);
      if (status.state !== "pending") return status;
      if (Date.now() >= deadline) {
        throw new EngineError(`run ${runId} still pending`, 408);
      }
      await new Promise((resolve) => setTimeout(resolve, interval));
    }
  }

  async tranching(runId: string): Promise<TranchingRow[]> {
    const doc = await this.getJson<{ rows: TranchingRow[] }>(`/runs/${runId}/tranching`);
    return doc.rows;
  }

  async ndm(runId: string): Promise<Record<string, number>[]> {
    const doc = await this.getJson<{ rows: Record<string, number>[] }>(`/runs/${runId}/ndm`);
    return doc.rows;
  }

  async features(runId: string): Promise<FeatureReport> {
    return this.getJson<FeatureReport>(`/runs/${runId}/features`);
  }

  async cva(runId: string): Promise<CvaReportDocument> {
    return this.getJson<CvaReportDocument>(`/runs/${runId}/cva`);
  }
}
