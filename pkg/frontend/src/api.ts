/** Thin typed client for the session service; all state lives server-side. */

import type {
  CommandResponse,
  ExportNode,
  RankedResponse,
  ReportDoc,
  SceneDocument,
  ServiceError,
} from "./types.js";

export class ServiceRequestError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ServiceError) {
    super(`${body.error}: ${body.message}`);
    this.code = body.error;
    this.status = status;
  }
}

async function parse<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    const body = (await resp.json().catch(() => ({
      error: `HTTP${resp.status}`,
      message: resp.statusText,
    }))) as ServiceError;
    throw new ServiceRequestError(resp.status, body);
  }
  return (await resp.json()) as T;
}

export class SessionClient {
  private seq = 0;

  constructor(
    readonly baseUrl: string,
    readonly sessionId: string,
  ) {}

  static async create(baseUrl: string): Promise<SessionClient> {
    const resp = await fetch(`${baseUrl}/sessions`, { method: "POST" });
    const body = await parse<{ id: string }>(resp);
    return new SessionClient(baseUrl, body.id);
  }

  private url(suffix: string): string {
    return `${this.baseUrl}/sessions/${this.sessionId}${suffix}`;
  }

  /** Post one engine command line; commands carry a strict ordering token. */
  async command(line: string): Promise<CommandResponse> {
    const resp = await fetch(this.url("/commands"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ command: line, seq: this.seq + 1 }),
    });
    const body = await parse<CommandResponse>(resp);
    this.seq = body.seq;
    return body;
  }

  async scene(): Promise<SceneDocument> {
    return parse(await fetch(this.url("/scene")));
  }

  async exportNodes(): Promise<ExportNode[]> {
    const doc = await parse<{ nodes: ExportNode[] }>(await fetch(this.url("/export")));
    return doc.nodes;
  }

  async validation(): Promise<ReportDoc | null> {
    return parse(await fetch(this.url("/validation")));
  }

  async ranked(attr: string): Promise<RankedResponse> {
    return parse(await fetch(this.url(`/ranked?attr=${encodeURIComponent(attr)}`)));
  }

  async undo(): Promise<void> {
    const body = await parse<{ seq: number }>(
      await fetch(this.url("/undo"), { method: "POST" }));
    this.seq = body.seq;
  }

  async redo(): Promise<void> {
    const body = await parse<{ seq: number }>(
      await fetch(this.url("/redo"), { method: "POST" }));
    this.seq = body.seq;
  }

  async close(): Promise<void> {
    await fetch(this.url(""), { method: "DELETE" });
  }
}
