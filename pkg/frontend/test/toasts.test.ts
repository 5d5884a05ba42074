import { describe, expect, it } from "vitest";

import { toastsFromReport } from "../src/toasts.js";
import type { ReportDoc } from "../src/types.js";

const failingContrast: ReportDoc = {
  attribute: "rank",
  channel: "color_luminance",
  overall_valid: false,
  verdicts: [
    {
      rule: "contrast",
      valid: false,
      metric: 1.8193,
      message: "contrast ratio 1.8193 vs 3:1 minimum (rms 0.455642)",
    },
    { rule: "separability", valid: true, metric: 0, message: "separable" },
  ],
};

describe("warning toasts", () => {
  it("one toast per failing verdict, carrying rule name and metric", () => {
    const toasts = toastsFromReport(failingContrast);
    expect(toasts).toHaveLength(1);
    expect(toasts[0]!.rule).toBe("contrast");
    expect(toasts[0]!.metric).toBeCloseTo(1.8193);
    expect(toasts[0]!.text).toContain("contrast");
    expect(toasts[0]!.text).toContain("metric=1.8193");
  });

  it("valid reports produce no toasts", () => {
    expect(toastsFromReport({ ...failingContrast, verdicts: [], overall_valid: true }))
      .toEqual([]);
    expect(toastsFromReport(null)).toEqual([]);
  });
});
