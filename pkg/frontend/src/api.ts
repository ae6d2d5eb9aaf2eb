/** Typed client for the studio HTTP API.
 *
 * Every response is an envelope: `{ok: true, data}` or `{ok: false, error}`.
 * Failures become ApiError so callers can branch on the stable error code
 * rather than on HTTP status or message text.
 */

import type {
  AcceptedJson,
  DeltaRowJson,
  Envelope,
  MutationJson,
  Pick,
  ProgressJson,
  ProjectJson,
  PromptConfigJson,
  RenderStatusJson,
  ReviewJson,
} from "./types";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: unknown;

  constructor(code: string, message: string, status: number, detail: unknown) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
    this.detail = detail;
  }
}

/** Subset of Response the client relies on; lets tests stub fetch cheaply. */
export interface HttpResponseLike {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<HttpResponseLike>;

export interface ReviewPayload {
  review: ReviewJson;
  delta: DeltaRowJson[];
}

export interface CreateBody {
  content: string;
  id?: string;
  gen_config?: PromptConfigJson;
  review_config?: PromptConfigJson;
}

export interface ProjectPayload {
  project: ProjectJson;
  /** Serialized current script; present once a revision exists. */
  script?: string;
}

export class StudioApi {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    // Bind so a bare global fetch keeps its expected receiver.
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: HttpResponseLike;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (cause) {
      throw new ApiError("network", String(cause), 0, null);
    }
    let envelope: Envelope<T>;
    try {
      envelope = (await response.json()) as Envelope<T>;
    } catch {
      throw new ApiError(
        "bad_envelope",
        `non-JSON response (${response.status})`,
        response.status,
        null,
      );
    }
    if (!envelope.ok) {
      const err = envelope.error;
      throw new ApiError(err.code, err.message, response.status, err.detail);
    }
    return envelope.data;
  }

  createProject(body: CreateBody): Promise<MutationJson> {
    return this.request("POST", "/projects", body);
  }

  async listProjects(): Promise<string[]> {
    const data = await this.request<{ projects: string[] }>(
      "GET",
      "/projects",
    );
    return data.projects;
  }

  getProject(id: string): Promise<ProjectPayload> {
    return this.request("GET", `/projects/${id}`);
  }

  getProgress(id: string): Promise<ProgressJson> {
    return this.request("GET", `/projects/${id}/progress`);
  }

  generate(id: string): Promise<MutationJson | AcceptedJson> {
    return this.request("POST", `/projects/${id}/generate`);
  }

  review(
    id: string,
    extra?: string,
  ): Promise<(MutationJson & ReviewPayload) | AcceptedJson> {
    const body = extra ? { extra } : {};
    return this.request("POST", `/projects/${id}/review`, body);
  }

  applyAll(id: string): Promise<MutationJson> {
    return this.request("POST", `/projects/${id}/apply`, {
      mode: "all",
      picks: [],
    });
  }

  applySelective(id: string, picks: Pick[]): Promise<MutationJson> {
    return this.request("POST", `/projects/${id}/apply`, {
      mode: "selective",
      picks,
    });
  }

  editScript(id: string, blueprint: string): Promise<MutationJson> {
    return this.request("PATCH", `/projects/${id}/script`, { blueprint });
  }

  updateConfig(
    id: string,
    configs: { gen_config?: PromptConfigJson; review_config?: PromptConfigJson },
  ): Promise<MutationJson> {
    return this.request("PATCH", `/projects/${id}/config`, configs);
  }

  finalize(id: string): Promise<MutationJson> {
    return this.request("POST", `/projects/${id}/finalize`);
  }

  render(
    id: string,
    perSceneDurationS?: number,
  ): Promise<MutationJson | AcceptedJson> {
    const body =
      perSceneDurationS === undefined
        ? {}
        : { per_scene_duration_s: perSceneDurationS };
    return this.request("POST", `/projects/${id}/render`, body);
  }

  renderStatus(id: string): Promise<RenderStatusJson> {
    return this.request("GET", `/projects/${id}/render`);
  }

  reopen(id: string): Promise<MutationJson> {
    return this.request("POST", `/projects/${id}/reopen`);
  }
}
