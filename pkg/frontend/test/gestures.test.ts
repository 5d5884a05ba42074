import { describe, expect, it } from "vitest";

import { commandFor } from "../src/gestures.js";

describe("gesture to command mapping", () => {
  it("bind posts exactly one bind command", () => {
    expect(commandFor({ kind: "bind", attribute: "cost", channel: "length_y" }))
      .toBe("bind --attr cost --channel length_y");
  });

  it("unbind mirrors bind", () => {
    expect(commandFor({ kind: "unbind", attribute: "rank", channel: "length_z" }))
      .toBe("unbind --attr rank --channel length_z");
  });

  it("rescale keeps full float precision", () => {
    expect(commandFor({
      kind: "rescale", attribute: "cost", channel: "length_y", factor: 1.25,
    })).toBe("rescale --attr cost --channel length_y --factor 1.25");
    expect(commandFor({
      kind: "rescale", attribute: "cost", channel: "length_y", factor: 2,
    })).toBe("rescale --attr cost --channel length_y --factor 2");
  });

  it("sketch serializes the drawn points inline", () => {
    expect(commandFor({
      kind: "sketch", collection: "c0",
      points: [[0.25, 0.5], [0.75, 0.5]], planeY: 0.01,
    })).toBe("sketch --collection c0 --points 0.25,0.5;0.75,0.5 --plane-y 0.01");
  });

  it("sync assignment carries the full route", () => {
    expect(commandFor({
      kind: "syncAssign", objectId: "pingpong", sourceChannel: "volume",
      glyphId: "g0", targetChannel: "volume",
    })).toBe("sync --object pingpong --source volume --glyph g0 --target volume");
  });

  it("auto-layout gesture", () => {
    expect(commandFor({
      kind: "autoLayout", mode: "equality", objectChannel: "text",
      attribute: "letter", anchor: "top", clearance: 0,
    })).toBe("autolayout --mode equality --object-channel text --attr letter "
      + "--anchor top --clearance 0");
  });

  it("undo is a bare command", () => {
    expect(commandFor({ kind: "undo" })).toBe("undo");
  });
});
