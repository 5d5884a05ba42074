/** Browser entry: wires the bead palette, scene canvas, warning toasts, and
 * gesture handling to one service session. Rendering always reflects the
 * last committed server snapshot. */

import { SessionClient } from "./api.js";
import { buildPalette, recommendedBead, type BeadPalette } from "./beads.js";
import type { Gesture } from "./gestures.js";
import { buildDrawList } from "./sceneview.js";
import { SessionStore, type Snapshot } from "./state.js";
import type { Toast } from "./toasts.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ?? "http://127.0.0.1:7878";

interface UiState {
  selectedAttribute: string | null;
  selectedCollection: string | null;
  sketchPoints: [number, number][];
  flickerPhase: number;
  palette: BeadPalette | null;
}

const ui: UiState = {
  selectedAttribute: null,
  selectedCollection: null,
  sketchPoints: [],
  flickerPhase: 0,
  palette: null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const client = await SessionClient.create(SERVICE_URL);
  const store = new SessionStore(client);
  const canvas = el<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas unavailable");

  store.onChange((snapshot, toasts) => {
    renderScene(ctx, canvas, snapshot);
    renderToasts(toasts, store);
    renderCollections(snapshot, store);
    void renderPalette(snapshot, client, store);
  });

  setInterval(() => {
    ui.flickerPhase += 1;
    if (store.snapshot) renderScene(ctx, canvas, store.snapshot);
  }, 400);

  wireSketch(canvas, store);
  el<HTMLButtonElement>("undo").addEventListener("click", () => {
    void store.perform({ kind: "undo" });
  });
  await store.refresh();
}

function renderScene(
  ctx: CanvasRenderingContext2D,
  canvas: HTMLCanvasElement,
  snapshot: Snapshot,
): void {
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#11131a";
  ctx.fillRect(0, 0, width, height);
  for (const box of buildDrawList(snapshot.scene, snapshot.nodes, ui.flickerPhase)) {
    const x = box.u0 * width;
    const y = box.v0 * height;
    const w = Math.max(1, (box.u1 - box.u0) * width);
    const h = Math.max(1, (box.v1 - box.v0) * height);
    ctx.globalAlpha = box.opacity;
    ctx.fillStyle = box.fill;
    ctx.fillRect(x, y, w, h);
    if (box.highlight) {
      ctx.globalAlpha = 1;
      ctx.strokeStyle = "#ffd166";
      ctx.lineWidth = 2;
      ctx.strokeRect(x - 2, y - 2, w + 4, h + 4);
    }
    if (box.label) {
      ctx.globalAlpha = 0.9;
      ctx.fillStyle = "#e8e8e8";
      ctx.font = "11px sans-serif";
      ctx.fillText(box.label, x, y - 3);
    }
  }
  ctx.globalAlpha = 1;
  if (ui.sketchPoints.length > 1) {
    ctx.strokeStyle = "#06d6a0";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ui.sketchPoints.forEach(([u, v], i) => {
      if (i === 0) ctx.moveTo(u * width, v * height);
      else ctx.lineTo(u * width, v * height);
    });
    ctx.stroke();
  }
}

async function renderPalette(
  snapshot: Snapshot,
  client: SessionClient,
  store: SessionStore,
): Promise<void> {
  const inner = el<HTMLDivElement>("inner-ring");
  const outer = el<HTMLDivElement>("outer-ring");
  inner.replaceChildren();
  outer.replaceChildren();

  for (const attr of snapshot.scene.table.attributes) {
    const bead = document.createElement("button");
    bead.className = "bead attr" + (ui.selectedAttribute === attr.name ? " active" : "");
    bead.textContent = attr.name;
    bead.addEventListener("click", () => {
      ui.selectedAttribute = attr.name;
      void renderPalette(snapshot, client, store);
    });
    inner.appendChild(bead);
  }

  if (!ui.selectedAttribute) return;
  const ranked = await client.ranked(ui.selectedAttribute);
  ui.palette = buildPalette(snapshot.scene, ranked);
  const jumper = recommendedBead(ui.palette);
  for (const entry of ui.palette.outer) {
    const bead = document.createElement("button");
    bead.className = "bead channel" + (entry.valid ? "" : " invalid") +
      (entry === jumper ? " recommended" : "");
    bead.textContent = entry.channel;
    bead.title = entry.reasons.join("\n");
    bead.addEventListener("click", () => {
      const gesture: Gesture = {
        kind: "bind",
        attribute: ui.selectedAttribute as string,
        channel: entry.channel,
      };
      void store.perform(gesture);
    });
    outer.appendChild(bead);
  }
}

function renderToasts(toasts: Toast[], store: SessionStore): void {
  const host = el<HTMLDivElement>("toasts");
  host.replaceChildren();
  toasts.forEach((toast, i) => {
    const node = document.createElement("div");
    node.className = "toast";
    node.textContent = toast.text;
    const dismiss = document.createElement("button");
    dismiss.textContent = "x";
    dismiss.addEventListener("click", () => store.dismissToast(i));
    node.appendChild(dismiss);
    host.appendChild(node);
  });
}

function renderCollections(snapshot: Snapshot, store: SessionStore): void {
  const host = el<HTMLDivElement>("collections");
  host.replaceChildren();
  for (const collection of snapshot.scene.collections) {
    const chip = document.createElement("button");
    chip.className = "chip" +
      (ui.selectedCollection === collection.id ? " active" : "");
    chip.textContent = `${collection.id} (${collection.member_ids.length})`;
    chip.addEventListener("click", () => {
      ui.selectedCollection = collection.id;
      renderCollections(snapshot, store);
    });
    host.appendChild(chip);
  }
}

function wireSketch(canvas: HTMLCanvasElement, store: SessionStore): void {
  let drawing = false;
  const toNorm = (e: PointerEvent): [number, number] => {
    const rect = canvas.getBoundingClientRect();
    return [(e.clientX - rect.left) / rect.width, (e.clientY - rect.top) / rect.height];
  };
  canvas.addEventListener("pointerdown", (e) => {
    if (!ui.selectedCollection) return;
    drawing = true;
    ui.sketchPoints = [toNorm(e)];
  });
  canvas.addEventListener("pointermove", (e) => {
    if (drawing) ui.sketchPoints.push(toNorm(e));
  });
  canvas.addEventListener("pointerup", () => {
    if (!drawing || !ui.selectedCollection) return;
    drawing = false;
    const points = ui.sketchPoints.filter((_, i) => i % 4 === 0);
    ui.sketchPoints = [];
    if (points.length >= 2) {
      void store.perform({
        kind: "sketch",
        collection: ui.selectedCollection,
        points,
        planeY: 0.0,
      });
    }
  });
}

document.addEventListener("DOMContentLoaded", () => {
  void boot().catch((e) => {
    el<HTMLDivElement>("toasts").textContent = `session failed: ${e}`;
  });
});
