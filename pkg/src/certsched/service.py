"""HTTP facade for the operator console and scripted clients.

Sessions are in-memory: uploading a scenario filters, builds, and solves it
eagerly; queries serve cached certificates; corrections are the only mutation
and trigger a full re-solve plus cache invalidation.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .baseline import ScheduleState
from .errors import (AlreadyScheduledError, InvalidAtomError, NotScheduledError,
                     ResourceLimitExceeded, ScenarioParseError,
                     ScenarioValidationError, UnknownOrderError)
from .explain import (CorrectionAtom, Explainer, FilterPolicy,
                      InfeasibilityCertificate, PrefilteredAnswer,
                      ContrastiveCertificate, atom_from_dict, atom_to_dict,
                      certificate_to_dict)
from .model import DEFAULT_WEIGHTS, ObjectiveWeights
from .scenario import (DOWNLINK, IMAGING, ScenarioSpec, apply_feasibility_filters,
                       scenario_from_dict)
from .solver import SolverConfig
from .verify import counterfactual_atoms, report_to_dict, run_full_evaluation

logger = logging.getLogger(__name__)

EXPLAIN_KINDS = ("why", "whynot", "whatif")


@dataclass
class Session:
    id: str
    scenario: ScenarioSpec
    policy: FilterPolicy
    weights: ObjectiveWeights
    cfg: SolverConfig
    explainer: Explainer
    corrections_history: list[list[dict]] = field(default_factory=list)
    cert_cache: dict[tuple[str, str], dict] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


class ServiceError(Exception):
    def __init__(self, status_code: int, code: str, message: str, field_path: str | None = None):
        self.status_code = status_code
        self.body = {"code": code, "message": message}
        if field_path is not None:
            self.body["field"] = field_path
        super().__init__(message)


def _rebuild(scenario: ScenarioSpec, policy: FilterPolicy,
             weights: ObjectiveWeights, cfg: SolverConfig) -> Explainer:
    fi = apply_feasibility_filters(
        scenario, policy.cloud_threshold_milli,
        pass_threshold_overrides=policy.overrides_dict())
    return Explainer(fi, weights, cfg, policy=policy)


def _schedule_summary(session: Session) -> dict:
    ex = session.explainer
    scenario = session.scenario
    assignment = ex.base.schedule
    state = ScheduleState.from_assignment(ex.model.vars, assignment)
    active = {p.id for p in ex.fi.active_passes()}

    scheduled = []
    for oid in sorted(state.assigned_pass_of_order):
        p = scenario.pass_window(state.assigned_pass_of_order[oid])
        scheduled.append({"order_id": oid, "pass_id": p.id,
                          "satellite_id": p.satellite_id,
                          "start_s": p.start_s, "end_s": p.end_s})
    downlinks = []
    for pid in sorted(state.selected_downlinks):
        p = scenario.pass_window(pid)
        downlinks.append({"pass_id": p.id, "satellite_id": p.satellite_id,
                          "station_id": p.station_id,
                          "start_s": p.start_s, "end_s": p.end_s, "tx_mb": p.tx_mb})

    satellites = []
    for sat in scenario.satellites:
        chrono = sorted((p for p in scenario.passes if p.satellite_id == sat.id),
                        key=lambda p: (p.start_s, p.id))
        level = sat.initial_storage_mb
        trajectory = [{"t_s": 0, "level_mb": level, "pass_id": None}]
        pass_rows = []
        for p in chrono:
            is_active = p.id in active
            p_scheduled = (p.id in state.selected_imaging
                           or p.id in state.selected_downlinks)
            if p_scheduled and is_active:
                if p.kind == IMAGING:
                    for oid, pid in state.assigned_pass_of_order.items():
                        if pid == p.id:
                            level += scenario.order(oid).data_mb
                else:
                    level -= p.tx_mb
                trajectory.append({"t_s": p.end_s, "level_mb": level, "pass_id": p.id})
            row = {"pass_id": p.id, "kind": p.kind, "start_s": p.start_s,
                   "end_s": p.end_s, "active": is_active, "scheduled": p_scheduled}
            if p.kind == IMAGING:
                row["cloud_fraction_milli"] = p.cloud_fraction_milli
                row["order_candidates"] = list(p.order_candidates)
            else:
                row["station_id"] = p.station_id
                row["tx_mb"] = p.tx_mb
            pass_rows.append(row)
        satellites.append({
            "id": sat.id,
            "capacity_mb": sat.storage_capacity_mb,
            "initial_storage_mb": sat.initial_storage_mb,
            "passes": pass_rows,
            "storage_trajectory": trajectory,
        })

    return {
        "session_id": session.id,
        "instance": scenario.name,
        "horizon_s": scenario.horizon_s,
        "objective_milli": ex.base.objective_milli,
        "scheduled_orders": scheduled,
        "selected_downlinks": downlinks,
        "satellites": satellites,
    }


def _orders_summary(session: Session) -> list[dict]:
    ex = session.explainer
    out = []
    for order in session.scenario.orders:
        out.append({
            "order_id": order.id,
            "status": ex.status(order.id),
            "value_milli": order.value_milli,
            "priority": order.priority,
            "data_mb": order.data_mb,
            "deadline_s": order.deadline_s,
        })
    return out


def _default_whatif_space(session: Session, order_id: str) -> list[CorrectionAtom]:
    """Correction menu derived from the order's why-not certificate."""
    ex = session.explainer
    answer = ex.why_not(order_id)
    if isinstance(answer, InfeasibilityCertificate):
        m_forced, _ = ex.forced_model(order_id)
        state = ScheduleState.from_assignment(ex.model.vars, ex.base.schedule)
        return list(counterfactual_atoms(ex.fi, answer, state, m_forced))
    if isinstance(answer, PrefilteredAnswer):
        atoms = []
        clouds = [r for r in answer.reasons if r.kind == "cloud"]
        if clouds:
            worst = max(session.scenario.pass_window(r.pass_id).cloud_fraction_milli
                        for r in clouds if r.pass_id)
            atoms.append(CorrectionAtom(kind="relax_cloud", cost_milli=50,
                                        new_threshold_milli=min(1000, worst + 30)))
        deadlines = [r for r in answer.reasons if r.kind == "deadline"]
        if deadlines:
            order = session.scenario.order(order_id)
            latest = max(session.scenario.pass_window(r.pass_id).end_s
                         for r in deadlines if r.pass_id)
            atoms.append(CorrectionAtom(kind="extend_deadline", cost_milli=200,
                                        order_id=order_id,
                                        delta_s=latest - order.deadline_s + 1))
        return atoms
    if isinstance(answer, ContrastiveCertificate):
        atoms = [CorrectionAtom(kind="raise_priority", cost_milli=150,
                                order_id=order_id, delta_priority=2)]
        for displaced in answer.displaced:
            atoms.append(CorrectionAtom(kind="exclude_order", cost_milli=800,
                                        order_id=displaced))
        return atoms
    return []


def create_app() -> FastAPI:
    app = FastAPI(title="certsched", version="0.1.0")
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise ServiceError(404, "unknown_session", f"no session {session_id!r}")
        return session

    @app.exception_handler(ServiceError)
    async def _service_error(request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status_code, content=exc.body)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(sessions)}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            doc = await request.json()
        except Exception:
            raise ServiceError(400, "parse_error", "request body is not valid JSON")
        try:
            scenario = scenario_from_dict(doc)
        except ScenarioValidationError as exc:
            raise ServiceError(400, "validation_error", str(exc), field_path=exc.field)
        except ScenarioParseError as exc:
            raise ServiceError(400, "parse_error", str(exc))
        policy = FilterPolicy()
        try:
            explainer = _rebuild(scenario, policy, DEFAULT_WEIGHTS, SolverConfig())
        except ResourceLimitExceeded as exc:
            raise ServiceError(503, "resource_limit", str(exc))
        except ValueError as exc:
            raise ServiceError(422, "unsolvable", str(exc))
        session = Session(
            id=uuid.uuid4().hex[:12], scenario=scenario, policy=policy,
            weights=DEFAULT_WEIGHTS, cfg=SolverConfig(), explainer=explainer)
        with store_lock:
            sessions[session.id] = session
        logger.info("session %s created: %s", session.id, scenario.name)
        return _schedule_summary(session)

    @app.get("/sessions/{session_id}/schedule")
    def get_schedule(session_id: str):
        return _schedule_summary(get_session(session_id))

    @app.get("/sessions/{session_id}/orders")
    def get_orders(session_id: str):
        return {"orders": _orders_summary(get_session(session_id))}

    @app.post("/sessions/{session_id}/explain/{kind}/{order_id}")
    async def explain(session_id: str, kind: str, order_id: str, request: Request):
        session = get_session(session_id)
        if kind not in EXPLAIN_KINDS:
            raise ServiceError(404, "unknown_kind",
                               f"kind must be one of {EXPLAIN_KINDS}")
        body = {}
        if await request.body():
            try:
                body = await request.json()
            except Exception:
                raise ServiceError(400, "parse_error", "request body is not valid JSON")
        cache_key = (kind, order_id)
        if cache_key in session.cert_cache and not body:
            return session.cert_cache[cache_key]
        ex = session.explainer
        try:
            if kind == "why":
                answer = ex.why(order_id)
            elif kind == "whynot":
                answer = ex.why_not(order_id)
            else:
                if "changes" in body:
                    space = [atom_from_dict(d) for d in body["changes"]]
                else:
                    space = _default_whatif_space(session, order_id)
                answer = ex.what_if(order_id, space,
                                    max_atoms=int(body.get("max_atoms", 2)))
        except UnknownOrderError as exc:
            raise ServiceError(404, "unknown_order", str(exc))
        except AlreadyScheduledError as exc:
            raise ServiceError(409, "already_scheduled", str(exc))
        except NotScheduledError as exc:
            raise ServiceError(409, "not_scheduled", str(exc))
        except InvalidAtomError as exc:
            raise ServiceError(422, "invalid_atom", str(exc))
        payload = certificate_to_dict(answer)
        if not body:
            session.cert_cache[cache_key] = payload
        return payload

    @app.post("/sessions/{session_id}/corrections")
    async def apply_correction(session_id: str, request: Request):
        session = get_session(session_id)
        try:
            body = await request.json()
        except Exception:
            raise ServiceError(400, "parse_error", "request body is not valid JSON")
        atom_docs = body.get("atoms")
        if not isinstance(atom_docs, list):
            raise ServiceError(422, "invalid_atom", "body must carry an 'atoms' list")
        try:
            atoms = tuple(atom_from_dict(d) for d in atom_docs)
        except InvalidAtomError as exc:
            raise ServiceError(422, "invalid_atom", str(exc))

        with session.lock:
            from .explain import apply_atoms
            try:
                scenario, policy = apply_atoms(session.scenario, session.policy, atoms)
            except InvalidAtomError as exc:
                raise ServiceError(422, "invalid_atom", str(exc))
            before = set(session.explainer.scheduled)
            before_obj = session.explainer.base.objective_milli
            try:
                explainer = _rebuild(scenario, policy, session.weights, session.cfg)
            except ResourceLimitExceeded as exc:
                raise ServiceError(503, "resource_limit", str(exc))
            session.scenario = scenario
            session.policy = policy
            session.explainer = explainer
            session.cert_cache.clear()
            session.corrections_history.append([atom_to_dict(at) for at in atoms])
            after = set(explainer.scheduled)
            diff = {
                "newly_scheduled": sorted(after - before),
                "newly_unscheduled": sorted(before - after),
                "objective_delta_milli": explainer.base.objective_milli - before_obj,
            }
        logger.info("session %s corrected: %s", session.id, diff)
        return {"schedule": _schedule_summary(session), "diff": diff,
                "history_length": len(session.corrections_history)}

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        session = get_session(session_id)
        report = run_full_evaluation(session.explainer.fi, session.cfg,
                                     session.weights, policy=session.policy)
        return report_to_dict(report)

    return app


app = create_app()
