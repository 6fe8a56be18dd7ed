/** Typed client for the annotation service (see ../API.md). */

import type {
  DocumentJson,
  MacroJson,
  DancerJson,
  SongJson,
  RelationshipJson,
  ValidationJson,
  QueryMatchJson,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly subject: string | null;
  readonly currentRevision?: number;

  constructor(
    status: number,
    code: string,
    message: string,
    subject: string | null = null,
    currentRevision?: number,
  ) {
    super(message);
    this.status = status;
    this.code = code;
    this.subject = subject;
    this.currentRevision = currentRevision;
  }
}

export interface MutationResult {
  id: string;
  revision: number;
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : {},
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (resp.status === 204) {
      return undefined as T;
    }
    const isJson = (resp.headers.get("content-type") ?? "").includes("json");
    const payload = isJson ? await resp.json() : await resp.text();
    if (!resp.ok) {
      if (isJson && typeof payload === "object" && payload !== null) {
        const p = payload as Record<string, unknown>;
        throw new ApiError(
          resp.status,
          String(p.code ?? "HTTP_ERROR"),
          String(p.message ?? resp.statusText),
          (p.subject as string | null) ?? null,
          p.current_revision as number | undefined,
        );
      }
      throw new ApiError(resp.status, "HTTP_ERROR", String(payload));
    }
    return payload as T;
  }

  health(): Promise<{ status: string; format_version: string }> {
    return this.request("GET", "/health");
  }

  listDocuments(): Promise<{ documents: string[] }> {
    return this.request("GET", "/documents");
  }

  createDocument(body: {
    doc_id?: string;
    macro: MacroJson;
    dancers?: DancerJson[];
    songs?: SongJson[];
  }): Promise<{ doc_id: string; revision: number }> {
    return this.request("POST", "/documents", body);
  }

  getDocument(
    docId: string,
  ): Promise<{ doc_id: string; revision: number; document: DocumentJson }> {
    return this.request("GET", `/documents/${docId}`);
  }

  deleteDocument(docId: string): Promise<void> {
    return this.request("DELETE", `/documents/${docId}`);
  }

  addEntity(
    docId: string,
    revision: number,
    entity: Record<string, unknown>,
  ): Promise<MutationResult> {
    return this.request("POST", `/documents/${docId}/entities`, {
      revision,
      entity,
    });
  }

  updateEntity(
    docId: string,
    revision: number,
    entityId: string,
    entity: Record<string, unknown>,
  ): Promise<MutationResult> {
    return this.request("PUT", `/documents/${docId}/entities/${entityId}`, {
      revision,
      entity,
    });
  }

  deleteEntity(
    docId: string,
    revision: number,
    entityId: string,
  ): Promise<MutationResult> {
    return this.request(
      "DELETE",
      `/documents/${docId}/entities/${entityId}?revision=${revision}`,
    );
  }

  addRelationship(
    docId: string,
    revision: number,
    relationship: Omit<RelationshipJson, "rid"> & { rid?: string },
  ): Promise<MutationResult> {
    return this.request("POST", `/documents/${docId}/relationships`, {
      revision,
      relationship: { rid: "", ...relationship },
    });
  }

  deleteRelationship(
    docId: string,
    revision: number,
    rid: string,
  ): Promise<MutationResult> {
    return this.request(
      "DELETE",
      `/documents/${docId}/relationships/${rid}?revision=${revision}`,
    );
  }

  validate(docId: string): Promise<ValidationJson> {
    return this.request("GET", `/documents/${docId}/validation`);
  }

  query(
    docId: string,
    predicate: string,
    params: Record<string, string | string[]>,
  ): Promise<{ matches: QueryMatchJson[] }> {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params)) {
      for (const v of Array.isArray(value) ? value : [value]) {
        search.append(key, v);
      }
    }
    const qs = search.toString();
    return this.request(
      "GET",
      `/documents/${docId}/queries/${predicate}${qs ? `?${qs}` : ""}`,
    );
  }

  relations(
    docId: string,
    actor1: string,
    actor2: string,
  ): Promise<{ directional: string; temporal: string; motion: string }> {
    return this.request(
      "GET",
      `/documents/${docId}/relations/${actor1}/${actor2}`,
    );
  }

  async dot(docId: string, event?: string): Promise<string> {
    const suffix = event ? `?event=${encodeURIComponent(event)}` : "";
    return this.request("GET", `/documents/${docId}/dot${suffix}`);
  }
}
