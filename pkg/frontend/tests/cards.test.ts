import { describe, expect, it } from "vitest";

import { certificateToCards } from "../src/cards.js";
import type { CertificateDoc } from "../src/types.js";
import { fixture } from "./helpers.js";

describe("cause cards", () => {
  it("renders two jointly-necessary cards for a conjunction order", () => {
    const cert = fixture<CertificateDoc>("cert-conjunction.json");
    const panel = certificateToCards(cert);
    expect(panel.orderId).toBe("ORD-01");
    expect(panel.cards).toHaveLength(2);
    expect(panel.cards.map((c) => c.kind).sort()).toEqual(
      ["no_downlink", "storage_upper_bound"]);
    expect(panel.joiner).toBe("all of these must change");
  });

  it("card text comes verbatim from the certificate groups", () => {
    const cert = fixture<CertificateDoc>("cert-conjunction.json");
    const panel = certificateToCards(cert);
    const byKind = new Map(cert.groups.map((g) => [g.kind, g.text]));
    for (const card of panel.cards) {
      expect(card.body).toBe(byKind.get(card.kind));
    }
  });

  it("single-cause certificates get one card and no joiner", () => {
    const cert = fixture<CertificateDoc>("cert-conjunction.json");
    const single: CertificateDoc = {
      ...cert,
      groups: cert.groups.filter((g) => g.kind !== "storage_upper_bound"),
    };
    const panel = certificateToCards(single);
    expect(panel.cards).toHaveLength(1);
    expect(panel.joiner).toBeNull();
  });

  it("renders displacement and value delta for a trade-off", () => {
    const cert = fixture<CertificateDoc>("cert-tradeoff.json");
    const panel = certificateToCards(cert);
    expect(panel.cards).toHaveLength(1);
    expect(panel.cards[0].body).toContain("ORD-02");
    expect(panel.cards[0].body).toContain("6.467");
  });

  it("renders filter-reason cards for a prefiltered order", () => {
    const cert = fixture<CertificateDoc>("cert-prefiltered.json");
    const panel = certificateToCards(cert);
    expect(panel.caseLabel).toContain("Filtered");
    expect(panel.cards.length).toBeGreaterThan(0);
    expect(panel.cards.some((c) => c.kind === "cloud")).toBe(true);
  });

  it("renders tight rows plus dominance for a why certificate", () => {
    const cert = fixture<CertificateDoc>("cert-why.json");
    const panel = certificateToCards(cert);
    expect(panel.caseLabel).toContain("P-S3-06");
    expect(panel.cards.some((c) => c.kind === "tight")).toBe(true);
    expect(panel.cards.some((c) => c.kind === "dominance")).toBe(true);
  });

  it("rejects what-if certificates (they get their own panel)", () => {
    const cert = fixture<CertificateDoc>("cert-whatif.json");
    expect(() => certificateToCards(cert)).toThrow(/no card rendering/);
  });
});
