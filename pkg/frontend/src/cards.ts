/**
 * Cause cards: the operator-facing rendering of a certificate.
 *
 * One card per projected cause group, straight from the certificate JSON.
 * Conjunction certificates (more than one substantive cause) are joined by
 * an explicit "all of these must change" banner.
 */

import type { CertificateDoc } from "./types.js";

export interface CauseCard {
  kind: string;
  title: string;
  body: string;
  constraints: string[];
}

export interface CardPanel {
  orderId: string;
  caseLabel: string;
  cards: CauseCard[];
  joiner: string | null; // set when every card is jointly necessary
  footnote: string | null;
}

const KIND_TITLES: Record<string, string> = {
  no_downlink: "No downlink opportunity",
  downlink_required: "Downlink required",
  storage_upper_bound: "Storage capacity conflict",
  storage_lower_bound: "Storage underrun",
  temporal_exclusion: "Temporal conflict",
  forced_inclusion: "Operator request",
  cloud: "Cloud cover",
  deadline: "Deadline",
  visibility: "No visibility",
  sat_unavailable: "Spacecraft unavailable",
  station_unavailable: "Ground station unavailable",
};

function titleFor(kind: string): string {
  return KIND_TITLES[kind] ?? kind;
}

function formatMilli(value: number): string {
  return (value / 1000).toFixed(3);
}

export function certificateToCards(cert: CertificateDoc): CardPanel {
  if (cert.case === "infeasibility") {
    const causes = cert.groups.filter((g) => g.kind !== "forced_inclusion");
    const cards = causes.map((g) => ({
      kind: g.kind,
      title: titleFor(g.kind),
      body: g.text,
      constraints: g.constraints,
    }));
    return {
      orderId: cert.order,
      caseLabel: "Infeasible: no valid schedule can include this order",
      cards,
      joiner: cards.length > 1 ? "all of these must change" : null,
      footnote: `certificate cites ${cert.mis.length} constraints`,
    };
  }

  if (cert.case === "tradeoff") {
    const displaced = cert.displaced.join(", ");
    return {
      orderId: cert.order,
      caseLabel: "Rejected by optimality trade-off",
      cards: [{
        kind: "tradeoff",
        title: "Displacement",
        body: `Scheduling this order would displace ${displaced} and reduce `
          + `mission value by ${formatMilli(cert.delta_milli ?? 0)}`,
        constraints: [],
      }],
      joiner: null,
      footnote: null,
    };
  }

  if (cert.case === "prefiltered") {
    return {
      orderId: cert.order,
      caseLabel: "Filtered before optimization",
      cards: cert.groups.map((g) => ({
        kind: g.kind,
        title: titleFor(g.kind),
        body: g.text,
        constraints: g.constraints,
      })),
      joiner: null,
      footnote: null,
    };
  }

  if (cert.case === "why") {
    const cards: CauseCard[] = (cert.tight ?? []).map((t) => ({
      kind: "tight",
      title: "Binding constraint",
      body: `${t.constraint} holds with equality (${t.lhs} = ${t.rhs})`,
      constraints: [t.constraint],
    }));
    for (const d of cert.dominance ?? []) {
      cards.push({
        kind: "dominance",
        title: d.outcome === "not_viable"
          ? `${d.order} is not a viable alternative`
          : `Dominates ${d.order}`,
        body: d.outcome === "not_viable"
          ? `No feasible schedule substitutes ${d.order} for this order`
          : `Substituting ${d.order} would lose ${formatMilli(d.delta_milli ?? 0)}`,
        constraints: [],
      });
    }
    return {
      orderId: cert.order,
      caseLabel: `Scheduled via pass ${cert.chosen_pass ?? "?"}`,
      cards,
      joiner: null,
      footnote: null,
    };
  }

  throw new Error(`no card rendering for certificate case ${cert.case}`);
}
