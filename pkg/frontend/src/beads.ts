/** The double-ring bead palette: inner ring holds data attributes, outer
 * ring visual channels with validity badges. Contents mirror the server's
 * ranked response verbatim; nothing is re-derived client-side. */

import type { RankedResponse, SceneDocument } from "./types.js";

export interface ChannelBead {
  channel: string;
  valid: boolean;
  reasons: string[];
  recommended: boolean;
}

export interface BeadPalette {
  attribute: string;
  inner: string[];          // all attribute names, selected one active
  outer: ChannelBead[];     // ranked channels, server order
}

export function buildPalette(scene: SceneDocument, ranked: RankedResponse): BeadPalette {
  return {
    attribute: ranked.attribute,
    inner: scene.table.attributes.map((a) => a.name),
    outer: ranked.channels.map((c) => ({
      channel: c.channel,
      valid: c.valid,
      reasons: [...c.reasons],
      recommended: c.channel === ranked.recommended,
    })),
  };
}

/** The bead the UI animates ("jumps"): the server's recommendation. */
export function recommendedBead(palette: BeadPalette): ChannelBead | undefined {
  return palette.outer.find((b) => b.recommended);
}
