"""Certificates answering why / why-not / what-if queries.

Three certificate families, each independently checkable against the model:
  * InfeasibilityCertificate: a minimal infeasible subset found by the
    deletion filter, projected onto semantic constraint kinds.
  * ContrastiveCertificate: the minimal set of scheduled orders a rejected
    order would displace, with the exact mission-value delta.
  * CorrectionCertificate: the cheapest operator-actionable parameter change
    that makes a rejected order schedulable, validated by a full re-solve.

Structural linking rows (assignment uniqueness, indicator coupling) are the
hard background of every check: they define what scheduling an order means,
are never deleted, and are not reported; the query's forcing constraint is
retained and reported. Every iteration order is canonical, so certificates
are byte-identical across runs and solver seeds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .errors import (AlreadyScheduledError, InvalidAtomError, NotScheduledError,
                     UnknownOrderError)
from .model import (DEFAULT_WEIGHTS, FORCED_INCLUSION, NO_DOWNLINK,
                    STORAGE_LOWER_BOUND, STORAGE_UPPER_BOUND, TAG_STRUCTURAL,
                    TEMPORAL_EXCLUSION, ObjectiveWeights, ScheduleModel,
                    TaggedConstraint, VarRef, a as var_a, build_model,
                    force_order, render_constraint, x as var_x, y as var_y)
from .scenario import (DOWNLINK, IMAGING, FilteredInstance, GroundStation, Order,
                       PassWindow, PrefilterReason, ScenarioSpec, Satellite,
                       apply_feasibility_filters, canonical_dumps, expected_tx_mb)
from .solver import (INFEASIBLE, OPTIMAL, SolveResult, SolverConfig, SolverCore,
                     scheduled_orders, solve)

# ---------------------------------------------------------------------------
# Certificate types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    constraint_id: str
    still_infeasible: bool  # True: dropped from the core; False: retained


@dataclass(frozen=True)
class KindGroup:
    kind: str
    constraint_ids: tuple[str, ...]
    text: str


@dataclass(frozen=True)
class InfeasibilityCertificate:
    order_id: str
    mis: tuple[str, ...]              # sorted, includes forced/<order>
    kinds: frozenset[str]             # non-structural kinds only
    grouped_view: tuple[KindGroup, ...]
    checks_log: tuple[CheckRecord, ...]


@dataclass(frozen=True)
class ContrastiveCertificate:
    order_id: str
    displaced: tuple[str, ...]
    objective_delta_milli: int
    forced_schedule: dict[VarRef, int] = field(compare=False)


@dataclass(frozen=True)
class TightRow:
    constraint_id: str
    lhs: int
    rhs: int


VALUE_LOSS = "value_loss"
NOT_VIABLE = "not_viable"


@dataclass(frozen=True)
class DominanceRecord:
    alt_order_id: str
    outcome: str  # value_loss | not_viable
    delta_milli: int | None = None


@dataclass(frozen=True)
class WhyCertificate:
    order_id: str
    chosen_pass_id: str
    tight: tuple[TightRow, ...]
    dominance: tuple[DominanceRecord, ...]


@dataclass(frozen=True)
class PrefilteredAnswer:
    order_id: str
    reasons: tuple[PrefilterReason, ...]

    def reason_kinds(self) -> frozenset[str]:
        return frozenset(r.kind for r in self.reasons)


# ---------------------------------------------------------------------------
# Correction atoms
# ---------------------------------------------------------------------------

RELAX_CLOUD = "relax_cloud"
ADD_DOWNLINK_PASS = "add_downlink_pass"
ADD_STORAGE_CAPACITY = "add_storage_capacity"
RAISE_PRIORITY = "raise_priority"
EXTEND_DEADLINE = "extend_deadline"
EXCLUDE_ORDER = "exclude_order"

ATOM_KINDS = (RELAX_CLOUD, ADD_DOWNLINK_PASS, ADD_STORAGE_CAPACITY,
              RAISE_PRIORITY, EXTEND_DEADLINE, EXCLUDE_ORDER)


@dataclass(frozen=True)
class CorrectionAtom:
    """One operator-actionable parameter change with its operational cost."""

    kind: str
    cost_milli: int
    satellite_id: str | None = None
    station_id: str | None = None
    order_id: str | None = None
    pass_id: str | None = None                 # relax_cloud scope; None = global
    window: tuple[int, int] | None = None
    new_threshold_milli: int | None = None
    amount_mb: int | None = None
    delta_priority: int | None = None
    delta_s: int | None = None

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise InvalidAtomError(f"unknown atom kind {self.kind!r}")
        if self.cost_milli <= 0:
            raise InvalidAtomError("atom cost must be positive")

    def key(self) -> str:
        return canonical_dumps(atom_to_dict(self))


def atom_to_dict(atom: CorrectionAtom) -> dict:
    out = {"kind": atom.kind, "cost_milli": atom.cost_milli}
    for name in ("satellite_id", "station_id", "order_id", "pass_id",
                 "new_threshold_milli", "amount_mb", "delta_priority", "delta_s"):
        value = getattr(atom, name)
        if value is not None:
            out[name] = value
    if atom.window is not None:
        out["window"] = list(atom.window)
    return out


def atom_from_dict(doc: dict) -> CorrectionAtom:
    known = {"kind", "cost_milli", "satellite_id", "station_id", "order_id",
             "pass_id", "new_threshold_milli", "amount_mb", "delta_priority",
             "delta_s", "window"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise InvalidAtomError(f"unknown atom field {unknown[0]!r}")
    window = doc.get("window")
    if window is not None:
        window = (int(window[0]), int(window[1]))
    try:
        return CorrectionAtom(
            kind=doc["kind"], cost_milli=int(doc["cost_milli"]),
            satellite_id=doc.get("satellite_id"), station_id=doc.get("station_id"),
            order_id=doc.get("order_id"), pass_id=doc.get("pass_id"),
            window=window,
            new_threshold_milli=doc.get("new_threshold_milli"),
            amount_mb=doc.get("amount_mb"),
            delta_priority=doc.get("delta_priority"), delta_s=doc.get("delta_s"))
    except KeyError as exc:
        raise InvalidAtomError(f"atom missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class FilterPolicy:
    """Pipeline-level knobs that sit outside the scenario document."""

    cloud_threshold_milli: int = 200
    pass_threshold_overrides: tuple[tuple[str, int], ...] = ()
    excluded_orders: frozenset[str] = frozenset()

    def overrides_dict(self) -> dict[str, int]:
        return dict(self.pass_threshold_overrides)


def apply_atom(scenario: ScenarioSpec, policy: FilterPolicy,
               atom: CorrectionAtom) -> tuple[ScenarioSpec, FilterPolicy]:
    """Apply one atom; returns the corrected scenario/policy pair."""
    if atom.kind == RELAX_CLOUD:
        if atom.new_threshold_milli is None or not 0 <= atom.new_threshold_milli <= 1000:
            raise InvalidAtomError("relax_cloud needs new_threshold_milli in [0, 1000]")
        if atom.pass_id is None:
            return scenario, replace(policy, cloud_threshold_milli=atom.new_threshold_milli)
        if atom.pass_id not in {p.id for p in scenario.passes}:
            raise InvalidAtomError(f"relax_cloud: unknown pass {atom.pass_id!r}")
        overrides = policy.overrides_dict()
        overrides[atom.pass_id] = atom.new_threshold_milli
        return scenario, replace(policy,
                                 pass_threshold_overrides=tuple(sorted(overrides.items())))

    if atom.kind == ADD_DOWNLINK_PASS:
        if atom.satellite_id is None or atom.station_id is None or atom.window is None:
            raise InvalidAtomError("add_downlink_pass needs satellite_id, station_id, window")
        sats = {s.id for s in scenario.satellites}
        stations = {s.id for s in scenario.stations}
        if atom.satellite_id not in sats:
            raise InvalidAtomError(f"add_downlink_pass: unknown satellite {atom.satellite_id!r}")
        if atom.station_id not in stations:
            raise InvalidAtomError(f"add_downlink_pass: unknown station {atom.station_id!r}")
        start, end = atom.window
        if not 0 <= start < end <= scenario.horizon_s:
            raise InvalidAtomError("add_downlink_pass: window outside horizon")
        sat = scenario.satellite(atom.satellite_id)
        tx = expected_tx_mb(sat.downlink_rate_kbps, end - start)
        if atom.amount_mb is not None and atom.amount_mb != tx:
            raise InvalidAtomError(
                f"add_downlink_pass: tx {atom.amount_mb} inconsistent with window (expected {tx})")
        existing = {p.id for p in scenario.passes}
        n = 1
        while f"P-ADD-{n:02d}" in existing:
            n += 1
        new_pass = PassWindow(
            id=f"P-ADD-{n:02d}", satellite_id=atom.satellite_id, kind=DOWNLINK,
            start_s=start, end_s=end, station_id=atom.station_id, tx_mb=tx)
        return replace(scenario, passes=scenario.passes + (new_pass,)), policy

    if atom.kind == ADD_STORAGE_CAPACITY:
        if atom.satellite_id is None or atom.amount_mb is None or atom.amount_mb <= 0:
            raise InvalidAtomError("add_storage_capacity needs satellite_id and positive amount_mb")
        sats = list(scenario.satellites)
        for i, sat in enumerate(sats):
            if sat.id == atom.satellite_id:
                sats[i] = replace(sat, storage_capacity_mb=sat.storage_capacity_mb + atom.amount_mb)
                return replace(scenario, satellites=tuple(sats)), policy
        raise InvalidAtomError(f"add_storage_capacity: unknown satellite {atom.satellite_id!r}")

    if atom.kind == RAISE_PRIORITY:
        if atom.order_id is None or atom.delta_priority is None or atom.delta_priority <= 0:
            raise InvalidAtomError("raise_priority needs order_id and positive delta_priority")
        orders = list(scenario.orders)
        for i, order in enumerate(orders):
            if order.id == atom.order_id:
                orders[i] = replace(order, priority=order.priority + atom.delta_priority)
                return replace(scenario, orders=tuple(orders)), policy
        raise InvalidAtomError(f"raise_priority: unknown order {atom.order_id!r}")

    if atom.kind == EXTEND_DEADLINE:
        if atom.order_id is None or atom.delta_s is None or atom.delta_s <= 0:
            raise InvalidAtomError("extend_deadline needs order_id and positive delta_s")
        orders = list(scenario.orders)
        for i, order in enumerate(orders):
            if order.id == atom.order_id:
                if order.deadline_s is None:
                    raise InvalidAtomError(f"extend_deadline: order {order.id} has no deadline")
                orders[i] = replace(order, deadline_s=order.deadline_s + atom.delta_s)
                return replace(scenario, orders=tuple(orders)), policy
        raise InvalidAtomError(f"extend_deadline: unknown order {atom.order_id!r}")

    if atom.kind == EXCLUDE_ORDER:
        if atom.order_id is None:
            raise InvalidAtomError("exclude_order needs order_id")
        if atom.order_id not in {o.id for o in scenario.orders}:
            raise InvalidAtomError(f"exclude_order: unknown order {atom.order_id!r}")
        return scenario, replace(
            policy, excluded_orders=policy.excluded_orders | {atom.order_id})

    raise InvalidAtomError(f"unknown atom kind {atom.kind!r}")


def apply_atoms(scenario: ScenarioSpec, policy: FilterPolicy,
                atoms: tuple[CorrectionAtom, ...]) -> tuple[ScenarioSpec, FilterPolicy]:
    for atom in atoms:
        scenario, policy = apply_atom(scenario, policy, atom)
    return scenario, policy


@dataclass(frozen=True)
class CorrectionCertificate:
    order_id: str
    chosen: tuple[CorrectionAtom, ...]
    total_cost_milli: int
    ties: tuple[tuple[CorrectionAtom, ...], ...]
    validated: bool
    validated_schedule: dict[VarRef, int] | None = field(compare=False, default=None)


@dataclass(frozen=True)
class NoCorrectionFound:
    order_id: str
    subsets_explored: int


# ---------------------------------------------------------------------------
# Minimal infeasible subset extraction (deletion filter)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MisExtraction:
    mis: tuple[str, ...]
    checks_log: tuple[CheckRecord, ...]
    candidates: tuple[str, ...]


def deletion_candidates(m: ScheduleModel) -> list[str]:
    """Constraints the deletion filter may remove: every non-structural row.

    Structural rows are background; the forcing constraint is exempt from
    deletion but reported in the certificate.
    """
    return m.non_structural_ids()


def extract_mis(m_forced: ScheduleModel, cfg: SolverConfig = SolverConfig(),
                core: SolverCore | None = None,
                priority_vars: tuple[VarRef, ...] = ()) -> MisExtraction:
    """Deletion filter over the forced model's non-structural constraints.

    Iterates candidates in canonical id order; a candidate whose removal
    keeps the model infeasible is dropped permanently, otherwise retained.
    Performs exactly one feasibility check per candidate.
    """
    if core is None:
        core = SolverCore(m_forced)
    # Report only the query's forcing constraint; policy-level exclusion rows
    # (forced_exclusion) remove competitors and can never be necessary for
    # an infeasibility, so they stay in the undeletable background.
    forced_ids = [c.id for c in m_forced.constraints if c.kind == FORCED_INCLUSION]
    if not forced_ids:
        raise ValueError("extract_mis expects a forced model")
    candidates = deletion_candidates(m_forced)

    probe = core.check(cfg, disabled_ids=frozenset(), priority_vars=priority_vars)
    if probe.feasible:
        raise ValueError("extract_mis expects an infeasible model")

    dropped: set[str] = set()
    log: list[CheckRecord] = []
    for cid in candidates:
        result = core.check(cfg, disabled_ids=frozenset(dropped | {cid}),
                            priority_vars=priority_vars)
        if result.feasible:
            log.append(CheckRecord(cid, still_infeasible=False))
        else:
            dropped.add(cid)
            log.append(CheckRecord(cid, still_infeasible=True))

    retained = [cid for cid in candidates if cid not in dropped]
    mis = tuple(sorted(retained + forced_ids))
    return MisExtraction(mis=mis, checks_log=tuple(log), candidates=tuple(candidates))


def project_tags(m: ScheduleModel, mis: tuple[str, ...],
                 order_id: str) -> tuple[frozenset[str], tuple[KindGroup, ...]]:
    """Group the core by kind; merge runs of consecutive storage checkpoints.

    Structural kinds are suppressed from the projected kind set G but stay in
    the core listing itself.
    """
    members = [m.constraint(cid) for cid in mis]
    kinds = frozenset(c.kind for c in members if c.tag != TAG_STRUCTURAL)

    groups: list[KindGroup] = []
    storage = [c for c in members
               if c.kind in (STORAGE_UPPER_BOUND, STORAGE_LOWER_BOUND)]
    by_sat_kind: dict[tuple[str, str], list[TaggedConstraint]] = {}
    for c in storage:
        by_sat_kind.setdefault((c.context["satellite"], c.kind), []).append(c)
    for (sat, kind), rows in sorted(by_sat_kind.items()):
        rows.sort(key=lambda c: c.context["checkpoint"])
        run: list[TaggedConstraint] = []
        for c in rows:
            if run and c.context["checkpoint"] != run[-1].context["checkpoint"] + 1:
                groups.append(_storage_group(sat, kind, run))
                run = []
            run.append(c)
        if run:
            groups.append(_storage_group(sat, kind, run))

    for c in sorted(members, key=lambda c: c.id):
        if c in storage:
            continue
        if c.tag == TAG_STRUCTURAL and c.kind != FORCED_INCLUSION:
            continue
        groups.append(KindGroup(kind=c.kind, constraint_ids=(c.id,),
                                text=render_constraint(c)))

    groups.sort(key=lambda g: (g.kind, g.constraint_ids))
    return kinds, tuple(groups)


def _storage_group(sat: str, kind: str, rows: list[TaggedConstraint]) -> KindGroup:
    if len(rows) == 1:
        return KindGroup(kind=kind, constraint_ids=(rows[0].id,),
                         text=render_constraint(rows[0]))
    t0 = rows[0].context["start_s"]
    t1 = rows[-1].context["end_s"]
    return KindGroup(
        kind=kind,
        constraint_ids=tuple(c.id for c in rows),
        text=f"storage trajectory conflict on {sat} between t={t0}s and t={t1}s")


# ---------------------------------------------------------------------------
# Explainer pipeline
# ---------------------------------------------------------------------------

STATUS_SCHEDULED = "scheduled"
STATUS_TRADEOFF = "tradeoff"
STATUS_INFEASIBLE = "infeasible"
STATUS_PREFILTERED = "prefiltered"


class Explainer:
    """Solves an instance once and answers per-order queries against it."""

    def __init__(self, fi: FilteredInstance,
                 weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                 cfg: SolverConfig = SolverConfig(),
                 policy: FilterPolicy | None = None,
                 widen_dominance: bool = False):
        self.fi = fi
        self.weights = weights
        self.cfg = cfg
        self.policy = policy or FilterPolicy(cloud_threshold_milli=fi.cloud_threshold_milli)
        self.widen_dominance = widen_dominance

        model = build_model(fi, weights)
        for oid in sorted(self.policy.excluded_orders):
            if var_a(oid) in model.var_index:
                model = force_order(model, oid, 0)
        self.model = model
        self.base = solve(model, cfg)
        if self.base.status != OPTIMAL:
            raise ValueError("base instance is infeasible; cannot explain against it")
        self.scheduled = set(scheduled_orders(model, self.base.schedule))
        self._status_cache: dict[str, str] = {}
        self._forced_cache: dict[str, tuple[ScheduleModel, SolverCore]] = {}

    # -- plumbing ------------------------------------------------------------

    def _order_ids(self) -> list[str]:
        return [o.id for o in self.fi.scenario.orders]

    def _require_order(self, order_id: str) -> None:
        if order_id not in {o.id for o in self.fi.scenario.orders}:
            raise UnknownOrderError(f"unknown order {order_id!r}")

    def forced_model(self, order_id: str) -> tuple[ScheduleModel, SolverCore]:
        if order_id not in self._forced_cache:
            m = force_order(self.model, order_id, 1)
            self._forced_cache[order_id] = (m, SolverCore(m))
        return self._forced_cache[order_id]

    def _priority_vars(self, order_id: str) -> tuple[VarRef, ...]:
        return tuple(var_x(o, p) for (o, p) in sorted(self.fi.admissible_pairs)
                     if o == order_id)

    def is_prefiltered(self, order_id: str) -> bool:
        return (order_id in self.policy.excluded_orders
                or not any(o == order_id for (o, _) in self.fi.admissible_pairs))

    def status(self, order_id: str) -> str:
        self._require_order(order_id)
        if order_id in self._status_cache:
            return self._status_cache[order_id]
        if order_id in self.scheduled:
            status = STATUS_SCHEDULED
        elif self.is_prefiltered(order_id):
            status = STATUS_PREFILTERED
        else:
            m_forced, core = self.forced_model(order_id)
            probe = core.check(self.cfg, priority_vars=self._priority_vars(order_id))
            status = STATUS_TRADEOFF if probe.feasible else STATUS_INFEASIBLE
        self._status_cache[order_id] = status
        return status

    # -- why-not --------------------------------------------------------------

    def why_not(self, order_id: str):
        """Prefiltered | InfeasibilityCertificate | ContrastiveCertificate."""
        status = self.status(order_id)
        if status == STATUS_SCHEDULED:
            raise AlreadyScheduledError(f"order {order_id} is in the optimal schedule")
        if status == STATUS_PREFILTERED:
            if order_id in self.policy.excluded_orders:
                return PrefilteredAnswer(order_id, (PrefilterReason(
                    "excluded", None, "order withdrawn by an operator correction"),))
            return PrefilteredAnswer(order_id, tuple(self.fi.prefilter_log[order_id]))
        m_forced, core = self.forced_model(order_id)
        if status == STATUS_INFEASIBLE:
            extraction = extract_mis(m_forced, self.cfg, core=core,
                                     priority_vars=self._priority_vars(order_id))
            kinds, groups = project_tags(m_forced, extraction.mis, order_id)
            return InfeasibilityCertificate(
                order_id=order_id, mis=extraction.mis, kinds=kinds,
                grouped_view=groups, checks_log=extraction.checks_log)
        forced_opt = core.optimize(self.cfg)
        forced_scheduled = set(scheduled_orders(m_forced, forced_opt.schedule))
        displaced = sorted(self.scheduled - forced_scheduled)
        displaced = self.refine_displacements(order_id, displaced)
        delta = self.base.objective_milli - forced_opt.objective_milli
        return ContrastiveCertificate(
            order_id=order_id, displaced=tuple(displaced),
            objective_delta_milli=delta, forced_schedule=forced_opt.schedule)

    def refine_displacements(self, order_id: str, displaced: list[str]) -> list[str]:
        """Drop displaced orders that could co-exist with the forced one."""
        kept = []
        for b in sorted(displaced):
            m_forced, _ = self.forced_model(order_id)
            co_forced = force_order(m_forced, b, 1)
            probe = SolverCore(co_forced).check(
                self.cfg, priority_vars=self._priority_vars(order_id))
            if not probe.feasible:
                kept.append(b)
        return kept

    # -- why -------------------------------------------------------------------

    def why(self, order_id: str) -> WhyCertificate:
        self._require_order(order_id)
        if order_id not in self.scheduled:
            raise NotScheduledError(f"order {order_id} is not in the optimal schedule")
        assignment = self.base.schedule
        chosen = next(v.pass_id for v in self.model.vars
                      if v.kind == "x" and v.order_id == order_id and assignment[v] == 1)
        varset = {var_x(order_id, chosen), var_y(chosen), var_a(order_id)}

        tight: list[TightRow] = []
        for c in self.model.constraints:
            if not any(v in varset for v, _ in c.terms):
                continue
            lhs = sum(coef * assignment[v] for v, coef in c.terms)
            if lhs == c.rhs:
                tight.append(TightRow(c.id, lhs, c.rhs))

        dominance = [self._dominance_record(order_id, b)
                     for b in self._alternatives(order_id, chosen)]
        return WhyCertificate(order_id=order_id, chosen_pass_id=chosen,
                              tight=tuple(tight), dominance=tuple(dominance))

    def _alternatives(self, order_id: str, chosen_pass: str) -> list[str]:
        """Unscheduled orders competing for the chosen pass's resources."""
        unscheduled = [o for o in self._order_ids()
                       if o not in self.scheduled and not self.is_prefiltered(o)]
        if self.widen_dominance:
            return unscheduled
        partners = {chosen_pass}
        for c in self.model.constraints:
            if c.kind == TEMPORAL_EXCLUSION and chosen_pass in c.context["passes"]:
                partners.update(c.context["passes"])
        sat = self.fi.scenario.pass_window(chosen_pass).satellite_id
        out = []
        for b in unscheduled:
            for p in self.fi.candidates_of(b):
                if p.id in partners or p.satellite_id == sat:
                    out.append(b)
                    break
        return out

    def _dominance_record(self, order_id: str, alt: str) -> DominanceRecord:
        m = force_order(self.model, order_id, 0)
        m = force_order(m, alt, 1)
        result = SolverCore(m).optimize(self.cfg)
        if result.status == INFEASIBLE:
            return DominanceRecord(alt, NOT_VIABLE)
        return DominanceRecord(alt, VALUE_LOSS,
                               self.base.objective_milli - result.objective_milli)

    # -- what-if -----------------------------------------------------------------

    def what_if(self, order_id: str, space: list[CorrectionAtom],
                max_atoms: int = 2):
        """Cheapest atom subset making the order schedulable, validated."""
        self._require_order(order_id)
        if order_id in self.scheduled:
            raise AlreadyScheduledError(f"order {order_id} is already scheduled")

        subsets: list[tuple[int, tuple[str, ...], tuple[CorrectionAtom, ...]]] = []
        for size in range(1, max_atoms + 1):
            for combo in itertools.combinations(sorted(space, key=lambda at: at.key()), size):
                cost = sum(at.cost_milli for at in combo)
                subsets.append((cost, tuple(at.key() for at in combo), combo))
        subsets.sort(key=lambda t: (t[0], t[1]))

        explored = 0
        successes: list[tuple[CorrectionAtom, ...]] = []
        success_cost: int | None = None
        for cost, _, combo in subsets:
            if success_cost is not None and cost > success_cost:
                break
            explored += 1
            if self._correction_unblocks(order_id, combo):
                successes.append(combo)
                success_cost = cost

        if not successes:
            return NoCorrectionFound(order_id=order_id, subsets_explored=explored)

        chosen = successes[0]
        validated, schedule = self._validate_correction(order_id, chosen)
        return CorrectionCertificate(
            order_id=order_id, chosen=chosen,
            total_cost_milli=sum(at.cost_milli for at in chosen),
            ties=tuple(successes[1:]), validated=validated,
            validated_schedule=schedule)

    def _corrected_model(self, atoms: tuple[CorrectionAtom, ...]) -> tuple[ScheduleModel, FilteredInstance]:
        scenario, policy = apply_atoms(self.fi.scenario, self.policy, atoms)
        fi = apply_feasibility_filters(
            scenario, policy.cloud_threshold_milli,
            pass_threshold_overrides=policy.overrides_dict())
        model = build_model(fi, self.weights)
        for oid in sorted(policy.excluded_orders):
            if var_a(oid) in model.var_index:
                model = force_order(model, oid, 0)
        return model, fi

    def _correction_unblocks(self, order_id: str,
                             atoms: tuple[CorrectionAtom, ...]) -> bool:
        model, fi = self._corrected_model(atoms)
        if var_a(order_id) not in model.var_index:
            return False  # still prefiltered
        forced = force_order(model, order_id, 1)
        return SolverCore(forced).check(self.cfg).feasible

    def _validate_correction(self, order_id: str,
                             atoms: tuple[CorrectionAtom, ...]):
        """Full optimal re-solve of the corrected model with the order forced."""
        model, _ = self._corrected_model(atoms)
        forced = force_order(model, order_id, 1)
        result = SolverCore(forced).optimize(self.cfg)
        if result.status != OPTIMAL:
            return False, None
        ok = order_id in scheduled_orders(forced, result.schedule)
        return ok, result.schedule

    # -- bulk helpers -------------------------------------------------------------

    def all_why_not(self) -> dict[str, object]:
        """Answer why-not for every unscheduled order, in canonical order."""
        return {oid: self.why_not(oid) for oid in self._order_ids()
                if oid not in self.scheduled}

    def infeasibility_certificates(self) -> dict[str, InfeasibilityCertificate]:
        return {oid: answer for oid, answer in self.all_why_not().items()
                if isinstance(answer, InfeasibilityCertificate)}


# ---------------------------------------------------------------------------
# Module-level operation wrappers
# ---------------------------------------------------------------------------

def explain_why_not(fi: FilteredInstance, order_id: str,
                    cfg: SolverConfig = SolverConfig(),
                    weights: ObjectiveWeights = DEFAULT_WEIGHTS):
    return Explainer(fi, weights, cfg).why_not(order_id)


def explain_why(fi: FilteredInstance, order_id: str,
                cfg: SolverConfig = SolverConfig(),
                weights: ObjectiveWeights = DEFAULT_WEIGHTS) -> WhyCertificate:
    return Explainer(fi, weights, cfg).why(order_id)


def explain_what_if(fi: FilteredInstance, order_id: str,
                    space: list[CorrectionAtom],
                    cfg: SolverConfig = SolverConfig(),
                    weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                    max_atoms: int = 2):
    return Explainer(fi, weights, cfg).what_if(order_id, space, max_atoms)


def refine_displacements(fi: FilteredInstance, order_id: str, displaced: list[str],
                         cfg: SolverConfig = SolverConfig(),
                         weights: ObjectiveWeights = DEFAULT_WEIGHTS) -> list[str]:
    return Explainer(fi, weights, cfg).refine_displacements(order_id, displaced)


# ---------------------------------------------------------------------------
# Certificate JSON envelope (shared with service, verify, and the console)
# ---------------------------------------------------------------------------

CASE_INFEASIBILITY = "infeasibility"
CASE_TRADEOFF = "tradeoff"
CASE_PREFILTERED = "prefiltered"
CASE_WHY = "why"
CASE_CORRECTION = "correction"
CASE_NO_CORRECTION = "no_correction"


def certificate_to_dict(answer, model: ScheduleModel | None = None) -> dict:
    """Stable JSON envelope: {order, case, mis, kinds, groups, displaced,
    delta_milli, corrections, validated, ...}."""
    base = {
        "order": None, "case": None, "mis": [], "kinds": [], "groups": [],
        "displaced": [], "delta_milli": None, "corrections": [], "validated": None,
    }
    if isinstance(answer, InfeasibilityCertificate):
        base.update(
            order=answer.order_id, case=CASE_INFEASIBILITY,
            mis=list(answer.mis), kinds=sorted(answer.kinds),
            groups=[{"kind": g.kind, "constraints": list(g.constraint_ids),
                     "text": g.text} for g in answer.grouped_view],
            checks=len(answer.checks_log))
    elif isinstance(answer, ContrastiveCertificate):
        base.update(order=answer.order_id, case=CASE_TRADEOFF,
                    displaced=list(answer.displaced),
                    delta_milli=answer.objective_delta_milli)
    elif isinstance(answer, PrefilteredAnswer):
        base.update(order=answer.order_id, case=CASE_PREFILTERED,
                    kinds=sorted(answer.reason_kinds()),
                    groups=[{"kind": r.kind, "constraints": [],
                             "text": r.detail} for r in answer.reasons])
    elif isinstance(answer, WhyCertificate):
        base.update(
            order=answer.order_id, case=CASE_WHY,
            chosen_pass=answer.chosen_pass_id,
            tight=[{"constraint": t.constraint_id, "lhs": t.lhs, "rhs": t.rhs}
                   for t in answer.tight],
            dominance=[{"order": r.alt_order_id, "outcome": r.outcome,
                        "delta_milli": r.delta_milli} for r in answer.dominance])
    elif isinstance(answer, CorrectionCertificate):
        base.update(
            order=answer.order_id, case=CASE_CORRECTION,
            corrections=[atom_to_dict(at) for at in answer.chosen],
            total_cost_milli=answer.total_cost_milli,
            ties=[[atom_to_dict(at) for at in tie] for tie in answer.ties],
            validated=answer.validated)
    elif isinstance(answer, NoCorrectionFound):
        base.update(order=answer.order_id, case=CASE_NO_CORRECTION,
                    subsets_explored=answer.subsets_explored)
    else:
        raise TypeError(f"not a certificate: {type(answer)!r}")
    return base
