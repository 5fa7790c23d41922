/** Thin client over the exploration API, with job polling. */

import {
  DatasetInfo,
  DetectResult,
  JobStatus,
  LayoutResponse,
  Mode,
  SampleDetail,
  ScoreRow,
  SessionInfo,
  Split,
  ZoomResponse,
} from "./types.js";

export interface LayoutParams {
  split: Split;
  mode: Mode;
  k: number;
  seed: number;
  categories?: string[];
  max_side?: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function expectOk(resp: Response): Promise<Response> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const doc = await resp.json();
      detail = typeof doc.detail === "string" ? doc.detail : JSON.stringify(doc.detail ?? doc);
    } catch {
      /* plain-text body */
    }
    throw new ApiError(resp.status, detail);
  }
  return resp;
}

export class ApiClient {
  constructor(readonly baseUrl: string, readonly pollMs = 150) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await expectOk(await fetch(`${this.baseUrl}${path}`));
    return (await resp.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const resp = await expectOk(
      await fetch(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
    return (await resp.json()) as T;
  }

  async pollJob<T>(jobId: string, timeoutMs = 300_000): Promise<T> {
    const deadline = Date.now() + timeoutMs;
    while (Date.now() < deadline) {
      const doc = await this.getJson<JobStatus>(`/api/jobs/${jobId}`);
      if (doc.status === "done") return doc.result as T;
      if (doc.status === "error") throw new Error(`job failed: ${doc.error}`);
      await new Promise((r) => setTimeout(r, this.pollMs));
    }
    throw new Error(`job ${jobId} timed out`);
  }

  listDatasets(): Promise<DatasetInfo[]> {
    return this.getJson("/api/datasets");
  }

  createSession(dataset: string): Promise<SessionInfo> {
    return this.postJson("/api/sessions", { dataset });
  }

  async detect(sessionId: string, nModels: number): Promise<DetectResult> {
    const job = await this.postJson<JobStatus>(`/api/sessions/${sessionId}/detect`, {
      n_models: nModels,
    });
    return this.pollJob<DetectResult>(job.job_id);
  }

  async layout(sessionId: string, params: LayoutParams): Promise<LayoutResponse> {
    const job = await this.postJson<JobStatus>(`/api/sessions/${sessionId}/layout`, params);
    return this.pollJob<LayoutResponse>(job.job_id);
  }

  zoom(
    sessionId: string,
    layoutId: string,
    nodeId: number,
    gridIndex: number,
    region: [number, number, number, number],
  ): Promise<ZoomResponse> {
    return this.postJson(`/api/sessions/${sessionId}/layouts/${layoutId}/zoom`, {
      region,
      node_id: nodeId,
      grid_index: gridIndex,
    });
  }

  scores(sessionId: string, split: Split, categories?: string[]): Promise<ScoreRow[]> {
    const params = new URLSearchParams({ split });
    if (categories && categories.length) params.set("categories", categories.join(","));
    return this.getJson(`/api/sessions/${sessionId}/scores?${params}`);
  }

  sampleDetail(sessionId: string, sampleId: number): Promise<SampleDetail> {
    return this.getJson(`/api/sessions/${sessionId}/samples/${sampleId}/detail`);
  }

  imageUrl(dataset: string, sampleId: number): string {
    return `${this.baseUrl}/api/samples/${dataset}/${sampleId}/image`;
  }

  saliencyUrl(dataset: string, sampleId: number): string {
    return `${this.baseUrl}/api/samples/${dataset}/${sampleId}/saliency`;
  }
}
