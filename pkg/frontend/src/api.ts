/** Typed client for the gateway API.
 *
 * The fetch function is injected so tests can substitute a stub transport;
 * the UI itself never computes search, planning or validation results.
 */

import type {
  ApiErrorDoc,
  DatasetDoc,
  PipelineDoc,
  PlanResponse,
  PrimitiveDoc,
  ProblemDoc,
  SearchResult,
  ValidationDoc,
  VocabDoc,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly doc: ApiErrorDoc) {
    super(`${doc.code}: ${doc.detail}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let doc: ApiErrorDoc;
  try {
    doc = (await response.json()) as ApiErrorDoc;
  } catch {
    doc = { status: response.status, code: "HTTP_ERROR", detail: response.statusText };
  }
  throw new ApiError(doc);
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
    private readonly baseUrl: string = "",
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async postText(path: string, body: unknown): Promise<string> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return response.text();
  }

  searchUrl(kind: string, query: string, filters: Record<string, string[]>,
            page: number, pageSize: number): string {
    const params = new URLSearchParams();
    if (query.trim()) params.set("q", query.trim());
    for (const field of Object.keys(filters).sort()) {
      for (const value of [...filters[field]].sort()) {
        params.append(`filter.${field}`, value);
      }
    }
    params.set("page", String(page));
    params.set("page_size", String(pageSize));
    return `/${kind}?${params.toString()}`;
  }

  search(kind: "primitives" | "datasets" | "problems", query: string,
         filters: Record<string, string[]>, page = 1,
         pageSize = 20): Promise<SearchResult> {
    return this.getJson<SearchResult>(
      this.searchUrl(kind, query, filters, page, pageSize));
  }

  getPrimitive(id: string): Promise<PrimitiveDoc> {
    return this.getJson<PrimitiveDoc>(`/primitives/${encodeURIComponent(id)}`);
  }

  getDataset(id: string): Promise<DatasetDoc> {
    return this.getJson<DatasetDoc>(`/datasets/${encodeURIComponent(id)}`);
  }

  getProblem(id: string): Promise<ProblemDoc> {
    return this.getJson<ProblemDoc>(`/problems/${encodeURIComponent(id)}`);
  }

  getVocab(): Promise<VocabDoc> {
    return this.getJson<VocabDoc>("/vocab");
  }

  plan(datasetId: string, problemId: string, k = 5,
       maxDepth = 5): Promise<PlanResponse> {
    return this.postJson<PlanResponse>("/plan", {
      dataset_id: datasetId,
      problem_id: problemId,
      k,
      max_depth: maxDepth,
    });
  }

  validate(pipeline: PipelineDoc): Promise<ValidationDoc> {
    return this.postJson<ValidationDoc>("/pipelines/validate", { pipeline });
  }

  dockerfile(pipeline: PipelineDoc): Promise<string> {
    return this.postText("/pipelines/dockerfile", pipeline);
  }

  manifest(pipeline: PipelineDoc): Promise<string> {
    return this.postText("/pipelines/manifest", pipeline);
  }
}
