/**
 * Timeline layout: per-satellite lanes of pass bars plus the storage
 * trajectory sharing the same time axis. Pure view-model computation; the
 * DOM/SVG binding lives in dom.ts.
 */

import type { ScheduleSummary, StoragePoint } from "./types.js";

export interface PassBar {
  passId: string;
  kind: "imaging" | "downlink";
  startPx: number;
  widthPx: number;
  scheduled: boolean;
  active: boolean;
  highlighted: boolean;
  label: string;
}

export interface StorageSegment {
  xPx: number;
  yFrac: number; // storage level as a fraction of capacity, in [0, 1]
}

export interface SatelliteLane {
  satelliteId: string;
  bars: PassBar[];
  storage: StorageSegment[];
  capacityMb: number;
}

export interface TimelineModel {
  lanes: SatelliteLane[];
  widthPx: number;
  horizonS: number;
  scheduledOrderIds: string[];
  objectiveMilli: number;
}

export interface TimelineOptions {
  widthPx?: number;
  highlightOrders?: string[];
}

function stepPoints(trajectory: StoragePoint[], horizonS: number,
                    scale: number, capacity: number): StorageSegment[] {
  // Step chart: hold each level until the next checkpoint.
  const points: StorageSegment[] = [];
  for (let i = 0; i < trajectory.length; i++) {
    const here = trajectory[i];
    const next = trajectory[i + 1];
    const y = capacity > 0 ? here.level_mb / capacity : 0;
    points.push({ xPx: here.t_s * scale, yFrac: y });
    const until = next ? next.t_s : horizonS;
    points.push({ xPx: until * scale, yFrac: y });
  }
  return points;
}

export function buildTimeline(schedule: ScheduleSummary,
                              options: TimelineOptions = {}): TimelineModel {
  const widthPx = options.widthPx ?? 1200;
  const highlight = new Set(options.highlightOrders ?? []);
  const scale = widthPx / schedule.horizon_s;

  const passOwner = new Map<string, string>();
  for (const s of schedule.scheduled_orders) {
    passOwner.set(s.pass_id, s.order_id);
  }

  const lanes = schedule.satellites.map((sat) => {
    const bars: PassBar[] = sat.passes.map((p) => {
      const owner = passOwner.get(p.pass_id);
      return {
        passId: p.pass_id,
        kind: p.kind,
        startPx: p.start_s * scale,
        widthPx: Math.max(1, (p.end_s - p.start_s) * scale),
        scheduled: p.scheduled,
        active: p.active,
        highlighted: owner !== undefined && highlight.has(owner),
        label: p.kind === "downlink"
          ? `${p.pass_id} → ${p.station_id ?? "?"} (${p.tx_mb ?? 0} MB)`
          : owner
            ? `${p.pass_id} (${owner})`
            : p.pass_id,
      };
    });
    return {
      satelliteId: sat.id,
      bars,
      storage: stepPoints(sat.storage_trajectory, schedule.horizon_s,
                          scale, sat.capacity_mb),
      capacityMb: sat.capacity_mb,
    };
  });

  return {
    lanes,
    widthPx,
    horizonS: schedule.horizon_s,
    scheduledOrderIds: schedule.scheduled_orders.map((s) => s.order_id),
    objectiveMilli: schedule.objective_milli,
  };
}

export function downlinkBars(lane: SatelliteLane): PassBar[] {
  return lane.bars.filter((b) => b.kind === "downlink");
}
