"""Optimizer-agnostic post-hoc explainer used as the comparison baseline.

Mimics explanation layers that only inspect raw instance data plus the
finished schedule: for each unscheduled order it scores every candidate
imaging pass independently (temporal conflicts, downlink availability,
storage trajectory, cloud, deadline) and reports the blocking reasons of the
single least-blocked candidate. It never touches the constraint model or the
solver, which is precisely what makes it unfaithful on conjunction cases.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownOrderError
from .scenario import DOWNLINK, IMAGING, FilteredInstance, PassWindow

TEMPORAL_CONFLICT = "temporal_conflict"
NO_DOWNLINK_REASON = "no_downlink"
STORAGE_OVERFLOW = "storage_overflow"
CLOUD_REASON = "cloud"
DEADLINE_REASON = "deadline"


@dataclass(frozen=True)
class BaselineReason:
    kind: str
    detail: str


@dataclass(frozen=True)
class BaselineExplanation:
    order_id: str
    chosen_pass_id: str
    reasons: tuple[BaselineReason, ...]
    all_candidate_reasons: dict[str, tuple[BaselineReason, ...]]

    def reason_kinds(self) -> frozenset[str]:
        return frozenset(r.kind for r in self.reasons)


@dataclass(frozen=True)
class ScheduleState:
    """The solved schedule as the baseline sees it: selections only."""

    assigned_pass_of_order: dict[str, str]
    selected_imaging: frozenset[str]
    selected_downlinks: frozenset[str]

    @staticmethod
    def from_assignment(model_vars, assignment) -> "ScheduleState":
        assigned = {}
        imaging = set()
        downlinks = set()
        for var in model_vars:
            if assignment.get(var) != 1:
                continue
            if var.kind == "x":
                assigned[var.order_id] = var.pass_id
            elif var.kind == "y":
                imaging.add(var.pass_id)
            elif var.kind == "d":
                downlinks.add(var.pass_id)
        return ScheduleState(assigned, frozenset(imaging), frozenset(downlinks))

    def selected_passes(self) -> frozenset[str]:
        return self.selected_imaging | self.selected_downlinks


def _conflicts(p: PassWindow, q: PassWindow, min_slew_s: int) -> bool:
    first, second = (p, q) if (p.start_s, p.id) <= (q.start_s, q.id) else (q, p)
    return second.start_s < first.end_s + min_slew_s


def _storage_breaches(fi: FilteredInstance, state: ScheduleState,
                      order_id: str, pass_id: str) -> bool:
    """Simulate the schedule's storage trajectory plus this assignment."""
    scenario = fi.scenario
    p = scenario.pass_window(pass_id)
    sat = scenario.satellite(p.satellite_id)
    chrono = sorted((q for q in scenario.passes if q.satellite_id == sat.id),
                    key=lambda q: (q.start_s, q.id))
    level = sat.initial_storage_mb
    for q in chrono:
        if q.kind == IMAGING:
            for oid in q.order_candidates:
                if state.assigned_pass_of_order.get(oid) == q.id:
                    level += scenario.order(oid).data_mb
            if q.id == pass_id:
                level += scenario.order(order_id).data_mb
        elif q.id in state.selected_downlinks:
            level -= q.tx_mb
        if level > sat.storage_capacity_mb:
            return True
    return False


def inspect_candidate(fi: FilteredInstance, state: ScheduleState,
                      order_id: str, pass_id: str) -> tuple[BaselineReason, ...]:
    """Blocking reasons for one candidate, from schedule-state inspection only."""
    scenario = fi.scenario
    order = scenario.order(order_id)
    p = scenario.pass_window(pass_id)
    sat = scenario.satellite(p.satellite_id)
    reasons: list[BaselineReason] = []

    conflicting = sorted(
        q.id for q in scenario.passes
        if q.satellite_id == p.satellite_id and q.id != p.id
        and q.id in state.selected_passes() and _conflicts(p, q, sat.min_slew_s))
    if conflicting:
        reasons.append(BaselineReason(
            TEMPORAL_CONFLICT,
            f"conflicts with scheduled pass {conflicting[0]}"))

    later = [q for q in scenario.passes
             if q.kind == DOWNLINK and q.satellite_id == p.satellite_id
             and q.start_s > p.end_s]
    if not later:
        reasons.append(BaselineReason(
            NO_DOWNLINK_REASON,
            f"no downlink pass follows on {p.satellite_id}"))
    elif not any(q.id in state.selected_downlinks for q in later):
        reasons.append(BaselineReason(
            NO_DOWNLINK_REASON,
            f"no selected downlink follows on {p.satellite_id}"))

    if _storage_breaches(fi, state, order_id, pass_id):
        reasons.append(BaselineReason(
            STORAGE_OVERFLOW,
            f"imaging {order.data_mb} MB would overflow storage on {p.satellite_id}"))

    if p.cloud_fraction_milli > fi.cloud_threshold_milli:
        reasons.append(BaselineReason(
            CLOUD_REASON,
            f"cloud fraction {p.cloud_fraction_milli} exceeds threshold "
            f"{fi.cloud_threshold_milli}"))

    if order.deadline_s is not None and p.end_s > order.deadline_s:
        reasons.append(BaselineReason(
            DEADLINE_REASON,
            f"pass ends at {p.end_s}s, after deadline {order.deadline_s}s"))

    return tuple(reasons)


def posthoc_explain(fi: FilteredInstance, state: ScheduleState, order_id: str,
                    *, multi_candidate: bool = False) -> BaselineExplanation:
    """Report the blocking reasons of the least-blocked candidate.

    With ``multi_candidate`` the union of every candidate's reasons is
    reported instead (ablation variant; still schedule-state inspection only).
    """
    scenario = fi.scenario
    if order_id not in {o.id for o in scenario.orders}:
        raise UnknownOrderError(f"unknown order {order_id!r}")
    if order_id in state.assigned_pass_of_order:
        raise ValueError(f"order {order_id} is scheduled; baseline explains rejections")

    candidates = sorted(p.id for p in scenario.imaging_passes()
                        if order_id in p.order_candidates)
    if not candidates:
        raise ValueError(f"order {order_id} has no candidate passes")

    per_candidate = {pid: inspect_candidate(fi, state, order_id, pid)
                     for pid in candidates}
    chosen = min(candidates, key=lambda pid: (len(per_candidate[pid]), pid))
    if multi_candidate:
        merged: list[BaselineReason] = []
        seen = set()
        for pid in candidates:
            for reason in per_candidate[pid]:
                if reason.kind not in seen:
                    seen.add(reason.kind)
                    merged.append(reason)
        reasons = tuple(merged)
    else:
        reasons = per_candidate[chosen]
    return BaselineExplanation(
        order_id=order_id, chosen_pass_id=chosen,
        reasons=reasons, all_candidate_reasons=per_candidate)


def baseline_to_dict(expl: BaselineExplanation) -> dict:
    """Same envelope as solver certificates, flagged as post-hoc."""
    return {
        "order": expl.order_id,
        "case": "posthoc",
        "method": "posthoc",
        "chosen_pass": expl.chosen_pass_id,
        "mis": [],
        "kinds": sorted(expl.reason_kinds()),
        "groups": [{"kind": r.kind, "constraints": [], "text": r.detail}
                   for r in expl.reasons],
        "displaced": [],
        "delta_milli": None,
        "corrections": [],
        "validated": None,
    }
