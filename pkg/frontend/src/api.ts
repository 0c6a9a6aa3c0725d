import type { RecommendRequest, Suggestion, TemplateInfo } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

/** Thin client for the recommendation service. */
export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(readonly baseUrl: string, fetchImpl?: FetchLike) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  async recommend(request: RecommendRequest): Promise<Suggestion[]> {
    const body = (await this.post("/recommend", request)) as {
      recommendations: Suggestion[];
    };
    return body.recommendations;
  }

  async templates(): Promise<TemplateInfo[]> {
    const body = (await this.get("/templates")) as { templates: TemplateInfo[] };
    return body.templates;
  }

  private async get(path: string): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path);
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`);
    }
    return this.decode(response);
  }

  private async post(path: string, payload: unknown): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch (err) {
      throw new ApiError(`service unreachable: ${String(err)}`);
    }
    return this.decode(response);
  }

  private async decode(response: Response): Promise<unknown> {
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // keep the status text
      }
      throw new ApiError(detail, response.status);
    }
    return response.json();
  }
}
