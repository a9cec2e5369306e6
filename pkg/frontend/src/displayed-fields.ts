/**
 * Registry of every certificate-JSON path the console displays.
 *
 * Claim conservation: the UI must not show anything that is not literally
 * present in the certificate payloads. The schema-diff test walks these
 * paths against real service responses.
 */

/** Paths into the certificate envelope; `[]` marks array traversal. */
export const DISPLAYED_CERTIFICATE_FIELDS: Record<string, string[]> = {
  infeasibility: [
    "order",
    "case",
    "mis",
    "kinds",
    "groups[].kind",
    "groups[].text",
    "groups[].constraints",
  ],
  tradeoff: [
    "order",
    "case",
    "displaced",
    "delta_milli",
  ],
  prefiltered: [
    "order",
    "case",
    "kinds",
    "groups[].kind",
    "groups[].text",
  ],
  why: [
    "order",
    "case",
    "chosen_pass",
    "tight[].constraint",
    "tight[].lhs",
    "tight[].rhs",
    "dominance[].order",
    "dominance[].outcome",
    "dominance[].delta_milli",
  ],
  correction: [
    "order",
    "case",
    "corrections[].kind",
    "corrections[].cost_milli",
    "total_cost_milli",
    "ties",
    "validated",
  ],
};

/** True iff the path resolves to a present value inside the document. */
export function pathPresent(doc: unknown, path: string): boolean {
  const segments = path.split(".");
  let cursor: unknown[] = [doc];
  for (const segment of segments) {
    const wantsArray = segment.endsWith("[]");
    const key = wantsArray ? segment.slice(0, -2) : segment;
    const next: unknown[] = [];
    for (const value of cursor) {
      if (value === null || typeof value !== "object") {
        return false;
      }
      const child = (value as Record<string, unknown>)[key];
      if (child === undefined) {
        return false;
      }
      if (wantsArray) {
        if (!Array.isArray(child)) {
          return false;
        }
        next.push(...child);
      } else {
        next.push(child);
      }
    }
    cursor = next;
  }
  return true;
}
