/**
 * Annotator session: one open document, its revision token, playback
 * position and pending form state. Every mutation goes through the
 * service; on a stale-revision response the session reloads the
 * document and reports the conflict instead of merging silently.
 */

import { ApiClient, ApiError, MutationResult } from "./api.js";
import type { DocumentJson } from "./types.js";
import { playbackMs } from "./capture.js";

export class StaleRevisionReload extends Error {
  constructor(readonly newRevision: number) {
    super(
      `the document changed on the server (now revision ${newRevision}); ` +
        "it has been reloaded, re-apply your edit",
    );
  }
}

export class AnnotationSession {
  docId: string | null = null;
  revision = 0;
  document: DocumentJson | null = null;
  playbackTimeMs = 0;
  selectedEntityId: string | null = null;
  /** Uncommitted interval endpoints from the mark-in/out buttons. */
  pendingIn: number | null = null;
  pendingOut: number | null = null;

  constructor(private readonly client: ApiClient) {}

  async open(docId: string): Promise<void> {
    const resp = await this.client.getDocument(docId);
    this.docId = docId;
    this.revision = resp.revision;
    this.document = resp.document;
  }

  async reload(): Promise<void> {
    if (this.docId === null) {
      throw new Error("no document open");
    }
    await this.open(this.docId);
  }

  seek(currentTimeSeconds: number): void {
    this.playbackTimeMs = playbackMs(currentTimeSeconds);
  }

  markIn(): number {
    this.pendingIn = this.playbackTimeMs;
    return this.pendingIn;
  }

  markOut(): number {
    this.pendingOut = this.playbackTimeMs;
    return this.pendingOut;
  }

  /** The captured closed-open interval, once both marks are set. */
  pendingInterval(): { start: number; end: number } | null {
    if (this.pendingIn === null || this.pendingOut === null) {
      return null;
    }
    return { start: this.pendingIn, end: this.pendingOut };
  }

  clearMarks(): void {
    this.pendingIn = null;
    this.pendingOut = null;
  }

  private async mutate(
    fn: (docId: string, revision: number) => Promise<MutationResult>,
  ): Promise<MutationResult> {
    if (this.docId === null) {
      throw new Error("no document open");
    }
    try {
      const result = await fn(this.docId, this.revision);
      this.revision = result.revision;
      await this.reloadDocumentBody();
      return result;
    } catch (err) {
      if (err instanceof ApiError && err.code === "STALE_REVISION") {
        await this.reload();
        throw new StaleRevisionReload(this.revision);
      }
      throw err;
    }
  }

  private async reloadDocumentBody(): Promise<void> {
    const resp = await this.client.getDocument(this.docId!);
    this.document = resp.document;
    this.revision = resp.revision;
  }

  addEntity(entity: Record<string, unknown>): Promise<MutationResult> {
    return this.mutate((d, r) => this.client.addEntity(d, r, entity));
  }

  updateEntity(
    entityId: string,
    entity: Record<string, unknown>,
  ): Promise<MutationResult> {
    return this.mutate((d, r) =>
      this.client.updateEntity(d, r, entityId, entity),
    );
  }

  deleteEntity(entityId: string): Promise<MutationResult> {
    return this.mutate((d, r) => this.client.deleteEntity(d, r, entityId));
  }

  addRelationship(relationship: {
    src: string;
    tar: string;
    labels: { category: string; label: string }[];
    o1?: string | null;
    o2?: string | null;
  }): Promise<MutationResult> {
    return this.mutate((d, r) =>
      this.client.addRelationship(d, r, {
        src: relationship.src,
        tar: relationship.tar,
        labels: relationship.labels,
        o1: relationship.o1 ?? null,
        o2: relationship.o2 ?? null,
      }),
    );
  }

  deleteRelationship(rid: string): Promise<MutationResult> {
    return this.mutate((d, r) => this.client.deleteRelationship(d, r, rid));
  }
}
