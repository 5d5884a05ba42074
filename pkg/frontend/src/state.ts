/** Session store: posts gestures, re-renders only committed server state,
 * and polls once more 250 ms after each command so late propagation lands.
 * Optimistic updates stay disabled by design. */

import { SessionClient } from "./api.js";
import { commandFor, type Gesture } from "./gestures.js";
import { toastsFromResponse, type Toast } from "./toasts.js";
import type { ExportNode, ReportDoc, SceneDocument } from "./types.js";

export const POLL_DELAY_MS = 250;

export interface Snapshot {
  scene: SceneDocument;
  nodes: ExportNode[];
  validation: ReportDoc | null;
}

type Listener = (snapshot: Snapshot, toasts: Toast[]) => void;

export class SessionStore {
  snapshot: Snapshot | null = null;
  toasts: Toast[] = [];
  commandLog: string[] = [];

  private listeners: Listener[] = [];
  private pollTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(private readonly client: SessionClient) {}

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    if (!this.snapshot) return;
    for (const listener of this.listeners) listener(this.snapshot, this.toasts);
  }

  async refresh(): Promise<Snapshot> {
    const [scene, nodes, validation] = await Promise.all([
      this.client.scene(),
      this.client.exportNodes(),
      this.client.validation(),
    ]);
    this.snapshot = { scene, nodes, validation };
    this.emit();
    return this.snapshot;
  }

  /** One gesture = one command = one history entry. */
  async perform(gesture: Gesture): Promise<Toast[]> {
    const line = commandFor(gesture);
    if (gesture.kind === "undo") {
      await this.client.undo();
      this.toasts = [];
    } else {
      const response = await this.client.command(line);
      this.toasts = toastsFromResponse(response);
    }
    this.commandLog.push(line);
    await this.refresh();
    this.schedulePoll();
    return this.toasts;
  }

  dismissToast(index: number): void {
    this.toasts.splice(index, 1);
    this.emit();
  }

  /** Cancel the pending catch-up poll (session closing, tab hidden). */
  dispose(): void {
    if (this.pollTimer) clearTimeout(this.pollTimer);
    this.pollTimer = null;
  }

  private schedulePoll(): void {
    if (this.pollTimer) clearTimeout(this.pollTimer);
    this.pollTimer = setTimeout(() => {
      this.pollTimer = null;
      // a failed catch-up poll is harmless; the next command refreshes anyway
      this.refresh().catch(() => undefined);
    }, POLL_DELAY_MS);
  }
}
