/** Warning toasts derived from server validation reports. Every failing
 * verdict becomes one dismissible toast carrying the rule name and metric. */

import type { CommandResponse, ReportDoc } from "./types.js";

export interface Toast {
  rule: string;
  metric: number;
  text: string;
}

export function toastsFromReport(report: ReportDoc | null): Toast[] {
  if (!report) return [];
  return report.verdicts
    .filter((v) => !v.valid)
    .map((v) => ({
      rule: v.rule,
      metric: v.metric,
      text: `${v.rule}: ${v.message} (metric=${v.metric})`,
    }));
}

export function toastsFromResponse(response: CommandResponse): Toast[] {
  return toastsFromReport(response.report);
}
