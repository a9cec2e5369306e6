import { describe, expect, it } from "vitest";

import { buildTimeline, downlinkBars } from "../src/timeline.js";
import type { CorrectionResponse, ScheduleSummary } from "../src/types.js";
import { fixture } from "./helpers.js";

const schedule = fixture<ScheduleSummary>("schedule.json");

describe("timeline", () => {
  it("lays out one lane per satellite", () => {
    const model = buildTimeline(schedule);
    expect(model.lanes.map((l) => l.satelliteId)).toEqual(["S1", "S2", "S3"]);
  });

  it("station-blind satellites show no downlink bars", () => {
    const model = buildTimeline(schedule);
    const byId = new Map(model.lanes.map((l) => [l.satelliteId, l]));
    expect(downlinkBars(byId.get("S1")!)).toHaveLength(0);
    expect(downlinkBars(byId.get("S2")!)).toHaveLength(0);
    expect(downlinkBars(byId.get("S3")!)).toHaveLength(4);
  });

  it("scheduled passes are flagged and labelled with their order", () => {
    const model = buildTimeline(schedule);
    const s3 = model.lanes.find((l) => l.satelliteId === "S3")!;
    const scheduledBars = s3.bars.filter((b) => b.scheduled);
    expect(scheduledBars.map((b) => b.passId)).toContain("P-S3-06");
    const bar = scheduledBars.find((b) => b.passId === "P-S3-06")!;
    expect(bar.label).toBe("P-S3-06 (ORD-02)");
  });

  it("an empty schedule draws a flat storage line at the initial level", () => {
    const empty: ScheduleSummary = {
      ...schedule,
      scheduled_orders: [],
      selected_downlinks: [],
      satellites: schedule.satellites.map((s) => ({
        ...s,
        passes: s.passes.map((p) => ({ ...p, scheduled: false })),
        storage_trajectory: [{ t_s: 0, level_mb: s.initial_storage_mb, pass_id: null }],
      })),
    };
    const model = buildTimeline(empty);
    for (const lane of model.lanes) {
      const levels = new Set(lane.storage.map((p) => p.yFrac));
      expect(levels.size).toBe(1);
    }
  });

  it("storage steps at each checkpoint and stays within capacity", () => {
    const model = buildTimeline(schedule);
    const s3 = model.lanes.find((l) => l.satelliteId === "S3")!;
    expect(s3.storage.length).toBeGreaterThan(2);
    for (const point of s3.storage) {
      expect(point.yFrac).toBeGreaterThanOrEqual(0);
      expect(point.yFrac).toBeLessThanOrEqual(1);
    }
    // First step sits at the initial fill fraction (6554 / 8192).
    expect(s3.storage[0].yFrac).toBeCloseTo(6554 / 8192, 6);
  });

  it("post-correction refresh highlights the newly scheduled order", () => {
    const applied = fixture<CorrectionResponse>("corrections-applied.json");
    const model = buildTimeline(applied.schedule,
                                { highlightOrders: applied.diff.newly_scheduled });
    const highlighted = model.lanes
      .flatMap((l) => l.bars)
      .filter((b) => b.highlighted);
    expect(applied.diff.newly_scheduled).toEqual(["ORD-01"]);
    expect(highlighted.map((b) => b.passId)).toEqual(["P-S3-01"]);
    expect(model.scheduledOrderIds).toContain("ORD-01");
  });

  it("pixel positions scale with the horizon", () => {
    const model = buildTimeline(schedule, { widthPx: 432 });
    const s3 = model.lanes.find((l) => l.satelliteId === "S3")!;
    const bar = s3.bars.find((b) => b.passId === "P-DL-01")!;
    expect(bar.startPx).toBeCloseTo((4000 / 43200) * 432, 3);
  });
});
