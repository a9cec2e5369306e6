"""Tagged 0-1 linear scheduling model.

Variables (all binary):
  x(order, pass)  order assigned to an imaging pass
  y(pass)         imaging pass used
  d(pass)         downlink pass used
  a(order)        order scheduled

The objective and every constraint use exact integer arithmetic in
milli-units so optima are reproducible across platforms and seeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import UnknownOrderError
from .scenario import DOWNLINK, IMAGING, FilteredInstance, PassWindow

LE = "<="
EQ = "="
GE = ">="

# Constraint kinds
UNIQUE_ASSIGNMENT = "unique_assignment"
ASSIGN_IMPLIES_PASS = "assign_implies_pass"
ORDER_SCHEDULED_LINK = "order_scheduled_link"
PASS_REQUIRES_ASSIGNMENT = "pass_requires_assignment"
DOWNLINK_REQUIRED = "downlink_required"
NO_DOWNLINK = "no_downlink"
TEMPORAL_EXCLUSION = "temporal_exclusion"
STORAGE_UPPER_BOUND = "storage_upper_bound"
STORAGE_LOWER_BOUND = "storage_lower_bound"
FORCED_INCLUSION = "forced_inclusion"
FORCED_EXCLUSION = "forced_exclusion"

# Semantic tags. "energy" and "policy" are reserved by the taxonomy but no
# constraint family emits them.
TAG_STRUCTURAL = "structural"
TAG_DOWNLINK = "downlink"
TAG_TEMPORAL = "temporal"
TAG_STORAGE = "storage"
ALL_TAGS = ("visibility", "deadline", "cloud", "storage", "downlink",
            "temporal", "energy", "policy", "structural")

KIND_TAG = {
    UNIQUE_ASSIGNMENT: TAG_STRUCTURAL,
    ASSIGN_IMPLIES_PASS: TAG_STRUCTURAL,
    ORDER_SCHEDULED_LINK: TAG_STRUCTURAL,
    PASS_REQUIRES_ASSIGNMENT: TAG_STRUCTURAL,
    FORCED_INCLUSION: TAG_STRUCTURAL,
    FORCED_EXCLUSION: TAG_STRUCTURAL,
    DOWNLINK_REQUIRED: TAG_DOWNLINK,
    NO_DOWNLINK: TAG_DOWNLINK,
    TEMPORAL_EXCLUSION: TAG_TEMPORAL,
    STORAGE_UPPER_BOUND: TAG_STORAGE,
    STORAGE_LOWER_BOUND: TAG_STORAGE,
}

STRUCTURAL_KINDS = frozenset(k for k, t in KIND_TAG.items() if t == TAG_STRUCTURAL)


@dataclass(frozen=True, order=True)
class VarRef:
    """Reference to one binary decision variable.

    Ordering is the canonical variable order used for deterministic
    tie-breaking everywhere downstream.
    """

    kind: str  # "a" | "d" | "x" | "y"
    order_id: str = ""
    pass_id: str = ""

    def label(self) -> str:
        if self.kind == "a":
            return f"a[{self.order_id}]"
        if self.kind == "x":
            return f"x[{self.order_id},{self.pass_id}]"
        return f"{self.kind}[{self.pass_id}]"


def a(order_id: str) -> VarRef:
    return VarRef("a", order_id=order_id)


def d(pass_id: str) -> VarRef:
    return VarRef("d", pass_id=pass_id)


def x(order_id: str, pass_id: str) -> VarRef:
    return VarRef("x", order_id=order_id, pass_id=pass_id)


def y(pass_id: str) -> VarRef:
    return VarRef("y", pass_id=pass_id)


@dataclass(frozen=True)
class ObjectiveWeights:
    """Milli-unit scalar weights of the objective."""

    alpha_milli: int = 500   # priority steepness
    beta_milli: int = 10     # per-scheduled-order tiebreaker reward
    lambda_milli: int = 100  # per-downlink-contact cost
    mu_milli: int = 200      # cloud-risk penalty weight
    eta_milli: int = 100     # delivery-latency penalty weight

    def __post_init__(self):
        for name in ("alpha_milli", "beta_milli", "lambda_milli", "mu_milli", "eta_milli"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


DEFAULT_WEIGHTS = ObjectiveWeights()


@dataclass(frozen=True)
class TaggedConstraint:
    id: str
    tag: str
    kind: str
    terms: tuple[tuple[VarRef, int], ...]
    sense: str  # "<=" | "=" | ">="
    rhs: int
    context: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ScheduleModel:
    vars: tuple[VarRef, ...]
    constraints: tuple[TaggedConstraint, ...]
    objective: tuple[tuple[VarRef, int], ...]
    instance: FilteredInstance

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {c.id: c for c in self.constraints})
        object.__setattr__(self, "_var_index", {v: i for i, v in enumerate(self.vars)})

    @property
    def by_id(self) -> dict[str, TaggedConstraint]:
        return self._by_id  # type: ignore[attr-defined]

    @property
    def var_index(self) -> dict[VarRef, int]:
        return self._var_index  # type: ignore[attr-defined]

    def constraint(self, constraint_id: str) -> TaggedConstraint:
        return self.by_id[constraint_id]

    def non_structural_ids(self) -> list[str]:
        return sorted(c.id for c in self.constraints if c.tag != TAG_STRUCTURAL)

    def forced_constraint_ids(self) -> list[str]:
        return sorted(c.id for c in self.constraints
                      if c.kind in (FORCED_INCLUSION, FORCED_EXCLUSION))


def priority_weight(priority: int, alpha_milli: int) -> int:
    """Priority-to-weight map, in milli-units: 1 + alpha * (P - 1)."""
    if priority < 1:
        raise ValueError("priority must be >= 1")
    return 1000 + alpha_milli * (priority - 1)


def compute_latency_milli(p: PassWindow, downlinks: list[PassWindow], horizon_s: int) -> int:
    """Normalized imaging-to-earliest-downlink latency in [0, 1000].

    The normalization constant is the planning horizon. Returns the 1000
    sentinel when no later same-satellite downlink exists (harmless: the
    pass-usage variable is then pinned to zero anyway).
    """
    if p.kind != IMAGING:
        raise ValueError("latency is defined for imaging passes")
    later = [q.start_s for q in downlinks
             if q.satellite_id == p.satellite_id and q.start_s > p.end_s]
    if not later:
        return 1000
    gap = min(later) - p.end_s
    return min(1000, 1000 * gap // horizon_s)


def build_exclusions(passes: list[PassWindow], min_slew_s: int) -> set[tuple[str, str]]:
    """Unordered same-satellite pass pairs that overlap or violate slew time.

    Applies uniformly to every kind combination. Pair (i, j) with
    start_i <= start_j conflicts iff start_j < end_i + min_slew_s.
    """
    ordered = sorted(passes, key=lambda p: (p.start_s, p.id))
    pairs: set[tuple[str, str]] = set()
    for i, first in enumerate(ordered):
        for second in ordered[i + 1:]:
            if second.start_s >= first.end_s + min_slew_s:
                break
            pairs.add(tuple(sorted((first.id, second.id))))  # type: ignore[arg-type]
    return pairs


def objective_coefficient_milli(value_milli: int, weight_milli: int,
                                mu_milli: int, cloud_milli: int,
                                eta_milli: int, latency_milli: int) -> int:
    """Milli-unit reward of one assignment variable.

    Exact integer evaluation of V * W * (1 - mu*c - eta*l); the single floor
    division at the end truncates sub-milli precision deterministically.
    """
    factor = 1_000_000 - mu_milli * cloud_milli - eta_milli * latency_milli
    return value_milli * weight_milli * factor // 1_000_000_000


def build_model(fi: FilteredInstance, weights: ObjectiveWeights = DEFAULT_WEIGHTS) -> ScheduleModel:
    """Translate a filtered instance into the tagged constraint system."""
    scenario = fi.scenario
    active = fi.active_passes()
    active_by_id = {p.id: p for p in active}
    imaging = [p for p in active if p.kind == IMAGING]
    downlinks = [p for p in active if p.kind == DOWNLINK]

    pairs = sorted(fi.admissible_pairs)
    orders_with_pairs = sorted({o for (o, _) in pairs})
    pairs_by_order = {o: [pid for (oo, pid) in pairs if oo == o] for o in orders_with_pairs}
    pairs_by_pass: dict[str, list[str]] = {p.id: [] for p in imaging}
    for (oid, pid) in pairs:
        pairs_by_pass[pid].append(oid)

    vars_list: list[VarRef] = []
    vars_list += [a(o) for o in orders_with_pairs]
    vars_list += [d(p.id) for p in downlinks]
    vars_list += [x(o, pid) for (o, pid) in pairs]
    vars_list += [y(p.id) for p in imaging]
    vars_list.sort()

    later_downlinks: dict[str, list[PassWindow]] = {}
    for p in imaging:
        later_downlinks[p.id] = sorted(
            (q for q in downlinks
             if q.satellite_id == p.satellite_id and q.start_s > p.end_s),
            key=lambda q: (q.start_s, q.id))

    constraints: list[TaggedConstraint] = []

    def emit(cid, kind, terms, sense, rhs, **context):
        constraints.append(TaggedConstraint(
            id=cid, tag=KIND_TAG[kind], kind=kind,
            terms=tuple(terms), sense=sense, rhs=rhs, context=context))

    for oid in orders_with_pairs:
        emit(f"unique/{oid}", UNIQUE_ASSIGNMENT,
             [(x(oid, pid), 1) for pid in sorted(pairs_by_order[oid])],
             LE, 1, order=oid)
        terms = [(a(oid), 1)] + [(x(oid, pid), -1) for pid in sorted(pairs_by_order[oid])]
        emit(f"order_link/{oid}", ORDER_SCHEDULED_LINK, terms, EQ, 0, order=oid)

    for (oid, pid) in pairs:
        emit(f"assign_pass/{oid}/{pid}", ASSIGN_IMPLIES_PASS,
             [(x(oid, pid), 1), (y(pid), -1)], LE, 0, order=oid, passes=[pid])

    for p in imaging:
        emit(f"pass_assign/{p.id}", PASS_REQUIRES_ASSIGNMENT,
             [(y(p.id), 1)] + [(x(oid, p.id), -1) for oid in sorted(pairs_by_pass[p.id])],
             LE, 0, passes=[p.id], satellite=p.satellite_id)

    for p in imaging:
        later = later_downlinks[p.id]
        if later:
            emit(f"downlink_req/{p.id}", DOWNLINK_REQUIRED,
                 [(y(p.id), 1)] + [(d(q.id), -1) for q in later],
                 LE, 0, passes=[p.id], satellite=p.satellite_id,
                 downlinks=[q.id for q in later])
        else:
            emit(f"no_downlink/{p.id}", NO_DOWNLINK,
                 [(y(p.id), 1)], LE, 0, passes=[p.id], satellite=p.satellite_id)

    for sat in scenario.satellites:
        sat_passes = [p for p in active if p.satellite_id == sat.id]
        for (i, j) in sorted(build_exclusions(sat_passes, sat.min_slew_s)):
            pi, pj = active_by_id[i], active_by_id[j]
            ui = y(i) if pi.kind == IMAGING else d(i)
            uj = y(j) if pj.kind == IMAGING else d(j)
            emit(f"excl/{i}/{j}", TEMPORAL_EXCLUSION,
                 [(ui, 1), (uj, 1)], LE, 1,
                 passes=[i, j], satellite=sat.id)

    for sat in scenario.satellites:
        chrono = sorted((p for p in active if p.satellite_id == sat.id),
                        key=lambda p: (p.start_s, p.id))
        running: list[tuple[VarRef, int]] = []
        for k, p in enumerate(chrono):
            if p.kind == IMAGING:
                for oid in sorted(pairs_by_pass[p.id]):
                    running.append((x(oid, p.id), scenario.order(oid).data_mb))
            else:
                running.append((d(p.id), -p.tx_mb))
            free = sat.storage_capacity_mb - sat.initial_storage_mb
            demands = [coef for (_, coef) in running if coef > 0]
            ctx = dict(satellite=sat.id, checkpoint=k, passes=[p.id],
                       start_s=p.start_s, end_s=p.end_s,
                       free_mb=free, max_demand_mb=max(demands, default=0))
            emit(f"storage_ub/{sat.id}/k={k}", STORAGE_UPPER_BOUND,
                 list(running), LE, free, **ctx)
            emit(f"storage_lb/{sat.id}/k={k}", STORAGE_LOWER_BOUND,
                 list(running), GE, -sat.initial_storage_mb, **ctx)

    constraints.sort(key=lambda c: c.id)

    objective: list[tuple[VarRef, int]] = []
    for oid in orders_with_pairs:
        order = scenario.order(oid)
        weight = priority_weight(order.priority, weights.alpha_milli)
        for pid in sorted(pairs_by_order[oid]):
            p = active_by_id[pid]
            latency = compute_latency_milli(p, downlinks, scenario.horizon_s)
            coef = objective_coefficient_milli(
                order.value_milli, weight,
                weights.mu_milli, p.cloud_fraction_milli,
                weights.eta_milli, latency)
            objective.append((x(oid, pid), coef))
        objective.append((a(oid), weights.beta_milli))
    for q in downlinks:
        objective.append((d(q.id), -weights.lambda_milli))
    objective.sort(key=lambda t: t[0])

    return ScheduleModel(
        vars=tuple(vars_list),
        constraints=tuple(constraints),
        objective=tuple(objective),
        instance=fi,
    )


def force_order(m: ScheduleModel, order_id: str, value: int) -> ScheduleModel:
    """Clone the model with the order's scheduling indicator pinned to 0 or 1."""
    if value not in (0, 1):
        raise ValueError("value must be 0 or 1")
    var = a(order_id)
    if var not in m.var_index:
        raise UnknownOrderError(f"order {order_id!r} has no scheduling variable")
    cid = f"forced/{order_id}"
    if cid in m.by_id:
        raise ValueError(f"order {order_id!r} is already forced")
    kind = FORCED_INCLUSION if value == 1 else FORCED_EXCLUSION
    forced = TaggedConstraint(
        id=cid, tag=TAG_STRUCTURAL, kind=kind,
        terms=((var, 1),), sense=EQ, rhs=value, context=dict(order=order_id))
    constraints = tuple(sorted(m.constraints + (forced,), key=lambda c: c.id))
    return replace(m, constraints=constraints)


def render_constraint(c: TaggedConstraint) -> str:
    """Deterministic operator-facing sentence for one constraint."""
    ctx = c.context
    if c.kind == NO_DOWNLINK:
        return (f"imaging pass {ctx['passes'][0]} has no subsequent downlink pass "
                f"on {ctx['satellite']}")
    if c.kind == DOWNLINK_REQUIRED:
        return (f"imaging pass {ctx['passes'][0]} requires a subsequent downlink "
                f"pass on {ctx['satellite']}")
    if c.kind == TEMPORAL_EXCLUSION:
        i, j = ctx["passes"]
        return f"passes {i} and {j} conflict temporally (overlap or slew)"
    if c.kind == STORAGE_UPPER_BOUND:
        return (f"storage capacity on {ctx['satellite']} exceeded after pass "
                f"{ctx['passes'][0]} (needs {ctx['max_demand_mb']} MB, "
                f"{ctx['free_mb']} MB free)")
    if c.kind == STORAGE_LOWER_BOUND:
        return (f"storage on {ctx['satellite']} would drop below zero after pass "
                f"{ctx['passes'][0]}")
    if c.kind == FORCED_INCLUSION:
        return f"the request to include order {ctx['order']}"
    if c.kind == FORCED_EXCLUSION:
        return f"the request to exclude order {ctx['order']}"
    if c.kind == UNIQUE_ASSIGNMENT:
        return f"order {ctx['order']} may use at most one imaging pass"
    if c.kind == ORDER_SCHEDULED_LINK:
        return f"order {ctx['order']} counts as scheduled exactly when assigned"
    if c.kind == ASSIGN_IMPLIES_PASS:
        return (f"assigning order {ctx['order']} to pass {ctx['passes'][0]} "
                f"requires using that pass")
    if c.kind == PASS_REQUIRES_ASSIGNMENT:
        return f"pass {ctx['passes'][0]} is used only if some order is assigned to it"
    return c.id


def model_dump_lines(m: ScheduleModel) -> list[str]:
    """Stable one-line-per-constraint diagnostic dump."""
    lines = []
    for c in m.constraints:
        terms = " + ".join(
            (f"{coef}*{var.label()}" if coef >= 0 else f"({coef})*{var.label()}")
            for var, coef in c.terms)
        lines.append(f"{c.id} | {c.tag} | {c.kind} | {terms} | {c.sense} | {c.rhs}")
    return lines
