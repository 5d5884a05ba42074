/** Wire types mirroring the session service's JSON bodies. */

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number];

export interface AttributeDoc {
  name: string;
  kind: "quantitative" | "ordinal" | "nominal";
  domain: number[] | string[];
}

export interface GlyphDoc {
  id: string;
  row_id: number;
  template_id: string;
  translation: Vec3;
  rotation: Quat;
  channel_values: Record<string, number>;
}

export interface RealObjectDoc {
  id: string;
  label: string;
  translation: Vec3;
  extents: Vec3;
  detected: boolean;
  detection_index: number;
  surface_luminance: number;
}

export interface PoseDoc {
  position: Vec3;
  forward: Vec3;
  up: Vec3;
}

export interface TemplateDoc {
  id: string;
  base_extents: Vec3;
  base_color: [number, number, number];
  material_luminance: number;
}

export interface SceneDocument {
  format_version: number;
  table: { attributes: AttributeDoc[]; rows: { id: number; values: unknown[] }[] };
  templates: TemplateDoc[];
  glyphs: GlyphDoc[];
  collections: { id: string; member_ids: string[] }[];
  mappings: { attribute: string; channel: string; scale: number }[];
  real_objects: RealObjectDoc[];
  view: PoseDoc;
  light_estimate: number;
  frame: { fov: { h: number; v: number } } | null;
  diagnostics: ReportDoc[];
}

export interface ExportNode {
  id: string;
  template: string;
  translation: Vec3;
  rotation: Quat;
  scale: Vec3;
  color: [number, number, number];
  opacity: number;
}

export interface VerdictDoc {
  rule: string;
  valid: boolean;
  metric: number;
  message: string;
}

export interface ReportDoc {
  attribute: string;
  channel: string;
  overall_valid: boolean;
  verdicts: VerdictDoc[];
}

export interface CommandResponse {
  ok: boolean;
  seq: number;
  command: string;
  data: Record<string, unknown>;
  lines: string[];
  warnings: string[];
  report: ReportDoc | null;
  last_report: ReportDoc | null;
}

export interface RankedChannel {
  channel: string;
  valid: boolean;
  reasons: string[];
}

export interface RankedResponse {
  attribute: string;
  channels: RankedChannel[];
  recommended: string;
}

export interface ServiceError {
  error: string;
  message: string;
}
