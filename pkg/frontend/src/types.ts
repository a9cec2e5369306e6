/**
 * Wire types mirroring the scheduling service's JSON responses.
 *
 * The console renders these verbatim; it never re-derives explanation
 * content on the client.
 */

export type OrderStatus = "scheduled" | "tradeoff" | "infeasible" | "prefiltered";

export type ExplainKind = "why" | "whynot" | "whatif";

export interface ScheduledOrder {
  order_id: string;
  pass_id: string;
  satellite_id: string;
  start_s: number;
  end_s: number;
}

export interface SelectedDownlink {
  pass_id: string;
  satellite_id: string;
  station_id: string;
  start_s: number;
  end_s: number;
  tx_mb: number;
}

export interface PassRow {
  pass_id: string;
  kind: "imaging" | "downlink";
  start_s: number;
  end_s: number;
  active: boolean;
  scheduled: boolean;
  cloud_fraction_milli?: number;
  order_candidates?: string[];
  station_id?: string;
  tx_mb?: number;
}

export interface StoragePoint {
  t_s: number;
  level_mb: number;
  pass_id: string | null;
}

export interface SatelliteLaneData {
  id: string;
  capacity_mb: number;
  initial_storage_mb: number;
  passes: PassRow[];
  storage_trajectory: StoragePoint[];
}

export interface ScheduleSummary {
  session_id: string;
  instance: string;
  horizon_s: number;
  objective_milli: number;
  scheduled_orders: ScheduledOrder[];
  selected_downlinks: SelectedDownlink[];
  satellites: SatelliteLaneData[];
}

export interface OrderRow {
  order_id: string;
  status: OrderStatus;
  value_milli: number;
  priority: number;
  data_mb: number;
  deadline_s: number | null;
}

export interface CertificateGroup {
  kind: string;
  constraints: string[];
  text: string;
}

export interface CorrectionAtomDoc {
  kind: string;
  cost_milli: number;
  satellite_id?: string;
  station_id?: string;
  order_id?: string;
  pass_id?: string;
  window?: [number, number];
  new_threshold_milli?: number;
  amount_mb?: number;
  delta_priority?: number;
  delta_s?: number;
}

export interface TightRowDoc {
  constraint: string;
  lhs: number;
  rhs: number;
}

export interface DominanceDoc {
  order: string;
  outcome: "value_loss" | "not_viable";
  delta_milli: number | null;
}

/** Shared certificate envelope served by every explain endpoint. */
export interface CertificateDoc {
  order: string;
  case:
    | "infeasibility"
    | "tradeoff"
    | "prefiltered"
    | "why"
    | "correction"
    | "no_correction";
  mis: string[];
  kinds: string[];
  groups: CertificateGroup[];
  displaced: string[];
  delta_milli: number | null;
  corrections: CorrectionAtomDoc[];
  validated: boolean | null;
  chosen_pass?: string;
  tight?: TightRowDoc[];
  dominance?: DominanceDoc[];
  total_cost_milli?: number;
  ties?: CorrectionAtomDoc[][];
  subsets_explored?: number;
  checks?: number;
}

export interface CorrectionDiff {
  newly_scheduled: string[];
  newly_unscheduled: string[];
  objective_delta_milli: number;
}

export interface CorrectionResponse {
  schedule: ScheduleSummary;
  diff: CorrectionDiff;
  history_length: number;
}

export interface ServiceErrorBody {
  code: string;
  message: string;
  field?: string;
}
