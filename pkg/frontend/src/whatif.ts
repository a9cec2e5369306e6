/**
 * What-if panel view model: the minimal correction, its cost ties, and the
 * apply payload — all taken verbatim from the correction certificate.
 */

import type { CertificateDoc, CorrectionAtomDoc } from "./types.js";

export interface CorrectionOption {
  atoms: CorrectionAtomDoc[];
  costMilli: number;
  labels: string[];
  isMinimal: boolean;
}

export interface WhatIfPanel {
  orderId: string;
  state: "menu" | "none";
  options: CorrectionOption[];
  validated: boolean;
  emptyMessage: string | null;
}

export function describeAtom(atom: CorrectionAtomDoc): string {
  switch (atom.kind) {
    case "add_storage_capacity":
      return `add ${atom.amount_mb} MB storage margin on ${atom.satellite_id}`;
    case "add_downlink_pass":
      return `add a downlink pass on ${atom.satellite_id} via ${atom.station_id} `
        + `at [${atom.window?.[0]}s, ${atom.window?.[1]}s]`;
    case "relax_cloud":
      return atom.pass_id
        ? `relax the cloud threshold for ${atom.pass_id} to ${atom.new_threshold_milli}‰`
        : `relax the global cloud threshold to ${atom.new_threshold_milli}‰`;
    case "raise_priority":
      return `raise priority of ${atom.order_id} by ${atom.delta_priority}`;
    case "extend_deadline":
      return `extend the deadline of ${atom.order_id} by ${atom.delta_s}s`;
    case "exclude_order":
      return `withdraw order ${atom.order_id}`;
    default:
      return atom.kind;
  }
}

export function buildWhatIfPanel(cert: CertificateDoc): WhatIfPanel {
  if (cert.case === "no_correction") {
    return {
      orderId: cert.order,
      state: "none",
      options: [],
      validated: false,
      emptyMessage: "No correction in the offered change space makes this "
        + "order schedulable.",
    };
  }
  if (cert.case !== "correction") {
    throw new Error(`not a what-if certificate: ${cert.case}`);
  }
  const minimal: CorrectionOption = {
    atoms: cert.corrections,
    costMilli: cert.total_cost_milli ?? 0,
    labels: cert.corrections.map(describeAtom),
    isMinimal: true,
  };
  const ties: CorrectionOption[] = (cert.ties ?? []).map((atoms) => ({
    atoms,
    costMilli: atoms.reduce((acc, a) => acc + a.cost_milli, 0),
    labels: atoms.map(describeAtom),
    isMinimal: true, // same cost level as the chosen set
  }));
  return {
    orderId: cert.order,
    state: "menu",
    options: [minimal, ...ties],
    validated: cert.validated === true,
    emptyMessage: null,
  };
}

/** The atoms posted to /corrections when the operator applies an option. */
export function applyPayload(option: CorrectionOption): CorrectionAtomDoc[] {
  return option.atoms;
}
