/** Pure derivation of a 2D draw list from server documents: exported render
 * nodes plus translucent boxes for detected real objects. The camera follows
 * the session's view pose; no encoding math happens here. */

import type { ExportNode, PoseDoc, SceneDocument, Vec3 } from "./types.js";

export interface DrawBox {
  kind: "glyph" | "real";
  id: string;
  label?: string;
  /** screen-space rect, normalized [0,1] coordinates, v grows downward */
  u0: number;
  v0: number;
  u1: number;
  v1: number;
  depth: number;
  fill: string;       // CSS color
  opacity: number;
  highlight: boolean; // detected real objects flicker
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(a: Vec3): Vec3 {
  const n = Math.hypot(a[0], a[1], a[2]);
  return [a[0] / n, a[1] / n, a[2] / n];
}

export class Camera {
  readonly position: Vec3;
  readonly forward: Vec3;
  readonly right: Vec3;
  readonly up: Vec3;
  readonly tanH: number;
  readonly tanV: number;

  constructor(pose: PoseDoc, fovH: number, fovV: number) {
    this.position = pose.position;
    this.forward = normalize(pose.forward);
    this.right = normalize(cross(this.forward, pose.up));
    this.up = normalize(cross(this.right, this.forward));
    this.tanH = Math.tan((fovH * Math.PI) / 360);
    this.tanV = Math.tan((fovV * Math.PI) / 360);
  }

  /** [u, v, depth]; u/v only meaningful for depth > 0 */
  project(p: Vec3): [number, number, number] {
    const d = sub(p, this.position);
    const depth = dot(d, this.forward);
    const u = 0.5 + dot(d, this.right) / (2 * depth * this.tanH);
    const v = 0.5 - dot(d, this.up) / (2 * depth * this.tanV);
    return [u, v, depth];
  }
}

function hsl(h: number, s: number, l: number, alpha = 1): string {
  return `hsla(${h.toFixed(1)}, ${(s * 100).toFixed(0)}%, ${(l * 100).toFixed(0)}%, ${alpha})`;
}

/** Project an axis-aligned box; bottom-center origin for glyphs, center
 * origin for real objects. Returns null when fully behind the camera. */
function projectBox(
  cam: Camera,
  translation: Vec3,
  extents: Vec3,
  bottomOrigin: boolean,
): { u0: number; v0: number; u1: number; v1: number; depth: number } | null {
  const [ex, ey, ez] = extents;
  const yLo = bottomOrigin ? 0 : -ey / 2;
  const yHi = bottomOrigin ? ey : ey / 2;
  let u0 = Infinity, v0 = Infinity, u1 = -Infinity, v1 = -Infinity;
  let depthSum = 0;
  let visible = 0;
  for (const sx of [-0.5, 0.5]) {
    for (const y of [yLo, yHi]) {
      for (const sz of [-0.5, 0.5]) {
        const p: Vec3 = [
          translation[0] + sx * ex,
          translation[1] + y,
          translation[2] + sz * ez,
        ];
        const [u, v, depth] = cam.project(p);
        if (depth <= 0) continue;
        visible += 1;
        u0 = Math.min(u0, u);
        v0 = Math.min(v0, v);
        u1 = Math.max(u1, u);
        v1 = Math.max(v1, v);
        depthSum += depth;
      }
    }
  }
  if (visible === 0) return null;
  return { u0, v0, u1, v1, depth: depthSum / visible };
}

export function buildDrawList(
  scene: SceneDocument,
  nodes: ExportNode[],
  flickerPhase = 0,
): DrawBox[] {
  const fovH = scene.frame?.fov.h ?? 60;
  const fovV = scene.frame?.fov.v ?? 45;
  const cam = new Camera(scene.view, fovH, fovV);
  const templates = new Map(scene.templates.map((t) => [t.id, t]));
  const boxes: DrawBox[] = [];

  for (const node of nodes) {
    const template = templates.get(node.template);
    if (!template) continue;
    const extents: Vec3 = [
      template.base_extents[0] * node.scale[0],
      template.base_extents[1] * node.scale[1],
      template.base_extents[2] * node.scale[2],
    ];
    const rect = projectBox(cam, node.translation, extents, true);
    if (!rect) continue;
    const [h, s, l] = node.color;
    boxes.push({
      kind: "glyph", id: node.id, ...rect,
      fill: hsl(h, s, l), opacity: node.opacity, highlight: false,
    });
  }

  for (const obj of scene.real_objects) {
    const rect = projectBox(cam, obj.translation, obj.extents, false);
    if (!rect) continue;
    const lum = obj.surface_luminance;
    const flicker = obj.detected && flickerPhase % 2 === 0;
    boxes.push({
      kind: "real", id: obj.id, label: obj.label, ...rect,
      fill: hsl(210, 0.15, lum, 0.35), opacity: 0.35, highlight: flicker,
    });
  }

  boxes.sort((a, b) => b.depth - a.depth);   // painter's order, far first
  return boxes;
}
