/** Gesture vocabulary: each user gesture maps to exactly one engine command
 * line, so undo granularity matches gestures and a replay of the command log
 * reproduces the session headlessly. */

export type Gesture =
  | { kind: "bind"; attribute: string; channel: string }
  | { kind: "unbind"; attribute: string; channel: string }
  | { kind: "rescale"; attribute: string; channel: string; factor: number }
  | { kind: "sketch"; collection: string; points: [number, number][]; planeY: number }
  | { kind: "syncAssign"; objectId: string; sourceChannel: string;
      glyphId: string; targetChannel: string }
  | { kind: "autoLayout"; mode: "rank" | "equality"; objectChannel: string;
      attribute: string; anchor: "center" | "top" | "front"; clearance: number }
  | { kind: "group"; templateId: string }
  | { kind: "pick"; targetId: string; distance: number }
  | { kind: "undo" };

function fmt(x: number): string {
  // full precision so the command replays bit-identically
  return Object.is(x, Math.trunc(x)) && Math.abs(x) < 1e15
    ? String(Math.trunc(x))
    : String(x);
}

/** Render the single command line a gesture posts to the session. */
export function commandFor(gesture: Gesture): string {
  switch (gesture.kind) {
    case "bind":
      return `bind --attr ${gesture.attribute} --channel ${gesture.channel}`;
    case "unbind":
      return `unbind --attr ${gesture.attribute} --channel ${gesture.channel}`;
    case "rescale":
      return `rescale --attr ${gesture.attribute} --channel ${gesture.channel} ` +
        `--factor ${fmt(gesture.factor)}`;
    case "sketch": {
      const points = gesture.points.map(([u, v]) => `${fmt(u)},${fmt(v)}`).join(";");
      return `sketch --collection ${gesture.collection} --points ${points} ` +
        `--plane-y ${fmt(gesture.planeY)}`;
    }
    case "syncAssign":
      return `sync --object ${gesture.objectId} --source ${gesture.sourceChannel} ` +
        `--glyph ${gesture.glyphId} --target ${gesture.targetChannel}`;
    case "autoLayout":
      return `autolayout --mode ${gesture.mode} --object-channel ${gesture.objectChannel} ` +
        `--attr ${gesture.attribute} --anchor ${gesture.anchor} ` +
        `--clearance ${fmt(gesture.clearance)}`;
    case "group":
      return `group --by-template ${gesture.templateId}`;
    case "pick":
      return `pick --target ${gesture.targetId} --distance ${fmt(gesture.distance)}`;
    case "undo":
      return "undo";
  }
}
