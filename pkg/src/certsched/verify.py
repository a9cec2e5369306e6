"""Faithfulness evaluation: soundness, minimality, counterfactuals, stability.

Every check here re-derives its verdict through the solver primitives
(feasibility checks and exact row evaluation on restricted sub-models); none
of them trusts the explanation pipeline's internals. Restricted sub-models
always retain the structural linking rows, which define what scheduling an
order means, plus the certificate's cited constraints.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

from .baseline import (BaselineExplanation, CLOUD_REASON, DEADLINE_REASON,
                       NO_DOWNLINK_REASON, STORAGE_OVERFLOW, ScheduleState,
                       TEMPORAL_CONFLICT, posthoc_explain)
from .errors import CertschedError
from .explain import (ADD_DOWNLINK_PASS, ADD_STORAGE_CAPACITY, EXCLUDE_ORDER,
                      EXTEND_DEADLINE, RELAX_CLOUD, CorrectionAtom, Explainer,
                      FilterPolicy, InfeasibilityCertificate, PrefilteredAnswer,
                      ContrastiveCertificate, apply_atoms, certificate_to_dict)
from .model import (DEFAULT_WEIGHTS, DOWNLINK_REQUIRED, KIND_TAG, NO_DOWNLINK,
                    STORAGE_LOWER_BOUND, STORAGE_UPPER_BOUND, TAG_STRUCTURAL,
                    TEMPORAL_EXCLUSION, ObjectiveWeights, ScheduleModel,
                    build_model, force_order)
from .scenario import FilteredInstance, apply_feasibility_filters, canonical_dumps
from .solver import (OPTIMAL, SolverConfig, SolverCore, constraint_lhs,
                     scheduled_orders, solve)

# Default operational costs of derived corrections (milli-units). Cloud
# relaxations are cheap, extra ground-station contacts expensive.
ATOM_COST_MILLI = {
    RELAX_CLOUD: 50,
    "raise_priority": 150,
    EXTEND_DEADLINE: 200,
    ADD_STORAGE_CAPACITY: 400,
    EXCLUDE_ORDER: 800,
    ADD_DOWNLINK_PASS: 1000,
}

BASELINE_KIND_MAP = {
    NO_DOWNLINK_REASON: NO_DOWNLINK,
    STORAGE_OVERFLOW: STORAGE_UPPER_BOUND,
    TEMPORAL_CONFLICT: TEMPORAL_EXCLUSION,
    CLOUD_REASON: "cloud",
    DEADLINE_REASON: "deadline",
}


@dataclass(frozen=True)
class ConstraintSoundness:
    constraint_id: str
    tag_valid: bool
    set_sufficient: bool
    individually_necessary: bool

    @property
    def passed(self) -> bool:
        return self.tag_valid and self.set_sufficient and self.individually_necessary


@dataclass(frozen=True)
class SoundnessReport:
    order_id: str
    results: tuple[ConstraintSoundness, ...]

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def total(self) -> int:
        return len(self.results)


def _restricted_check(core: SolverCore, m: ScheduleModel, keep: set[str],
                      cfg: SolverConfig, extra_disabled: set[str] = frozenset()):
    """Feasibility of (kept cited rows + structural background)."""
    disabled = {c.id for c in m.constraints
                if c.tag != TAG_STRUCTURAL and c.id not in keep}
    disabled |= extra_disabled
    return core.check(cfg, disabled_ids=frozenset(disabled))


def check_soundness(cert: InfeasibilityCertificate, m_forced: ScheduleModel,
                    cfg: SolverConfig = SolverConfig(),
                    core: SolverCore | None = None) -> SoundnessReport:
    """Tag validity, collective sufficiency, individual necessity.

    Sufficiency: the model restricted to the cited constraints (plus the
    structural background) is infeasible. Necessity: removing any single
    cited constraint makes that restriction feasible, with a witness that
    violates the removed constraint.
    """
    if core is None:
        core = SolverCore(m_forced)
    cited = set(cert.mis)
    missing = [cid for cid in cert.mis if cid not in m_forced.by_id]
    if missing:
        raise CertschedError(f"certificate cites unknown constraint {missing[0]!r}")

    sufficient = not _restricted_check(core, m_forced, cited, cfg).feasible

    results = []
    forced_id = f"forced/{cert.order_id}"
    for cid in cert.mis:
        c = m_forced.constraint(cid)
        tag_valid = KIND_TAG.get(c.kind) == c.tag
        keep = cited - {cid}
        extra = {cid} if c.tag == TAG_STRUCTURAL else frozenset()
        probe = _restricted_check(core, m_forced, keep, cfg, extra_disabled=set(extra))
        necessary = False
        if probe.feasible:
            lhs = constraint_lhs(c, probe.assignment)
            violated = (lhs > c.rhs if c.sense == "<="
                        else lhs < c.rhs if c.sense == ">="
                        else lhs != c.rhs)
            necessary = violated
        results.append(ConstraintSoundness(
            constraint_id=cid, tag_valid=tag_valid,
            set_sufficient=sufficient, individually_necessary=necessary))
    return SoundnessReport(order_id=cert.order_id, results=tuple(results))


# ---------------------------------------------------------------------------
# Counterfactual validity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterfactualResult:
    order_id: str
    passed: bool
    correction: tuple[CorrectionAtom, ...]


def counterfactual_atoms(fi: FilteredInstance, cert: InfeasibilityCertificate,
                         base_state: ScheduleState | None = None,
                         m_forced: ScheduleModel | None = None) -> tuple[CorrectionAtom, ...]:
    """Fixed kind-to-atom table deriving a targeted correction from the core.

    storage_upper_bound: add the cited satellite's worst checkpoint deficit.
    no_downlink / downlink_required: insert a synthetic downlink pass after
    the order's latest admissible candidate, sized to carry the order's data.
    temporal_exclusion: force out the conflicting scheduled order.
    cloud / deadline kinds only occur pre-model and map to relax_cloud /
    extend_deadline.
    """
    scenario = fi.scenario
    order = scenario.order(cert.order_id)
    atoms: dict[str, CorrectionAtom] = {}
    model = m_forced

    for cid in cert.mis:
        c = model.constraint(cid) if model is not None else None
        kind = c.kind if c is not None else None
        if kind == STORAGE_UPPER_BOUND:
            sat = scenario.satellite(c.context["satellite"])
            deficit = max(1, sat.initial_storage_mb + order.data_mb - sat.storage_capacity_mb)
            atoms[f"storage/{sat.id}"] = CorrectionAtom(
                kind=ADD_STORAGE_CAPACITY, cost_milli=ATOM_COST_MILLI[ADD_STORAGE_CAPACITY],
                satellite_id=sat.id, amount_mb=deficit)
        elif kind in (NO_DOWNLINK, DOWNLINK_REQUIRED):
            candidates = fi.candidates_of(cert.order_id)
            latest = max(candidates, key=lambda p: (p.end_s, p.id))
            sat = scenario.satellite(latest.satellite_id)
            duration = -(-order.data_mb * 8000 // sat.downlink_rate_kbps)  # ceil
            start = latest.end_s + sat.min_slew_s + 10
            atoms[f"downlink/{sat.id}"] = CorrectionAtom(
                kind=ADD_DOWNLINK_PASS, cost_milli=ATOM_COST_MILLI[ADD_DOWNLINK_PASS],
                satellite_id=sat.id, station_id=scenario.stations[0].id,
                window=(start, start + duration))
        elif kind == TEMPORAL_EXCLUSION:
            if base_state is None:
                raise CertschedError("temporal counterfactual needs the base schedule")
            other = None
            for pid in c.context["passes"]:
                for oid, chosen in base_state.assigned_pass_of_order.items():
                    if chosen == pid:
                        other = oid
            if other is None:
                continue  # conflict against an unscheduled pass needs no change
            atoms[f"exclude/{other}"] = CorrectionAtom(
                kind=EXCLUDE_ORDER, cost_milli=ATOM_COST_MILLI[EXCLUDE_ORDER],
                order_id=other)
    return tuple(atoms[k] for k in sorted(atoms))


def check_counterfactual(fi: FilteredInstance, cert: InfeasibilityCertificate,
                         weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                         cfg: SolverConfig = SolverConfig(),
                         base_state: ScheduleState | None = None,
                         m_forced: ScheduleModel | None = None,
                         atoms: tuple[CorrectionAtom, ...] | None = None,
                         policy: FilterPolicy | None = None) -> CounterfactualResult:
    """Apply the derived correction to a cloned instance and fully re-solve."""
    if m_forced is None:
        m_forced = force_order(build_model(fi, weights), cert.order_id, 1)
    if atoms is None:
        atoms = counterfactual_atoms(fi, cert, base_state, m_forced)
    if policy is None:
        policy = FilterPolicy(cloud_threshold_milli=fi.cloud_threshold_milli)
    scenario, policy = apply_atoms(fi.scenario, policy, atoms)
    fixed = apply_feasibility_filters(
        scenario, policy.cloud_threshold_milli,
        pass_threshold_overrides=policy.overrides_dict())
    model = build_model(fixed, weights)
    from .model import a as var_a
    if var_a(cert.order_id) not in model.var_index:
        return CounterfactualResult(cert.order_id, False, atoms)
    for oid in sorted(policy.excluded_orders):
        if var_a(oid) in model.var_index:
            model = force_order(model, oid, 0)
    forced = force_order(model, cert.order_id, 1)
    result = solve(forced, cfg)
    passed = (result.status == OPTIMAL
              and cert.order_id in scheduled_orders(forced, result.schedule))
    return CounterfactualResult(cert.order_id, passed, atoms)


# ---------------------------------------------------------------------------
# Stability across solver seeds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityResult:
    pairs: dict[tuple[int, int], float]
    jaccard_min: float
    jaccard_mean: float


def _explanation_set(fi: FilteredInstance, seed: int,
                     weights: ObjectiveWeights, cfg: SolverConfig,
                     policy: FilterPolicy | None = None) -> set[str]:
    seeded = SolverConfig(seed=seed, node_limit=cfg.node_limit,
                          time_limit_ms=cfg.time_limit_ms)
    explainer = Explainer(fi, weights, seeded, policy=policy)
    out = set()
    for oid, answer in explainer.all_why_not().items():
        if isinstance(answer, InfeasibilityCertificate):
            payload = sorted(answer.kinds)
        elif isinstance(answer, ContrastiveCertificate):
            payload = list(answer.displaced)
        elif isinstance(answer, PrefilteredAnswer):
            payload = sorted(answer.reason_kinds())
        else:  # pragma: no cover
            payload = []
        out.add(canonical_dumps({"order": oid,
                                 "case": type(answer).__name__,
                                 "payload": payload}))
    for oid in sorted(explainer.scheduled):
        out.add(canonical_dumps({"order": oid, "case": "Scheduled", "payload": []}))
    return out


def check_stability(fi: FilteredInstance, seeds: list[int],
                    cfg: SolverConfig = SolverConfig(),
                    weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                    explain_fn=None,
                    policy: FilterPolicy | None = None) -> StabilityResult:
    """Jaccard agreement of serialized explanation sets across solver seeds."""
    if len(seeds) < 2:
        raise ValueError("stability needs at least two seeds")
    fn = explain_fn or (lambda inst, seed: _explanation_set(inst, seed, weights,
                                                            cfg, policy))
    sets = {seed: fn(fi, seed) for seed in seeds}
    pairs: dict[tuple[int, int], float] = {}
    for i, s1 in enumerate(seeds):
        for s2 in seeds[i + 1:]:
            union = sets[s1] | sets[s2]
            inter = sets[s1] & sets[s2]
            pairs[(s1, s2)] = len(inter) / len(union) if union else 1.0
    values = list(pairs.values())
    return StabilityResult(pairs=pairs, jaccard_min=min(values),
                           jaccard_mean=sum(values) / len(values))


# ---------------------------------------------------------------------------
# Baseline failure-mode accounting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaselineComparison:
    orders_with_noncausal: int
    noncausal_attributions: int
    total_attributions: int
    conjunction_orders: int
    baseline_incomplete_on_conjunctions: int
    noncausal_order_ids: tuple[str, ...]


def compare_baseline(certs: dict[str, InfeasibilityCertificate],
                     baseline_expls: dict[str, BaselineExplanation]) -> BaselineComparison:
    """Count non-causal attributions and incomplete conjunctions.

    A baseline attribution is non-causal iff its mapped constraint kind is
    not in the certificate's kind set G; an order with |G| > 1 is a
    conjunction order, on which the baseline is incomplete iff its kinds do
    not cover G.
    """
    if set(certs) != set(baseline_expls):
        raise ValueError("certificate and baseline order sets differ")
    noncausal_orders = []
    noncausal_attr = 0
    total_attr = 0
    conjunctions = 0
    incomplete = 0
    for oid in sorted(certs):
        g = certs[oid].kinds
        mapped = [BASELINE_KIND_MAP[r.kind] for r in baseline_expls[oid].reasons]
        total_attr += len(mapped)
        bad = [k for k in mapped if k not in g]
        noncausal_attr += len(bad)
        if bad:
            noncausal_orders.append(oid)
        if len(g) > 1:
            conjunctions += 1
            if not g.issubset(set(mapped)):
                incomplete += 1
    return BaselineComparison(
        orders_with_noncausal=len(noncausal_orders),
        noncausal_attributions=noncausal_attr,
        total_attributions=total_attr,
        conjunction_orders=conjunctions,
        baseline_incomplete_on_conjunctions=incomplete,
        noncausal_order_ids=tuple(noncausal_orders))


# ---------------------------------------------------------------------------
# Full evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvaluationReport:
    instance_name: str
    n_orders: int
    n_scheduled: int
    n_tradeoffs: int
    n_prefiltered: int
    n_certificates: int
    soundness_passed: int
    soundness_total: int
    counterfactual_passed: int
    counterfactual_total: int
    stability_jaccard_min: float
    stability_jaccard_mean: float
    stability_pairs: int
    core_size_avg: float
    core_size_median: float
    core_size_max: int
    baseline: BaselineComparison
    timings_ms: dict[str, float] = field(compare=False)

    @property
    def all_checks_pass(self) -> bool:
        return (self.soundness_passed == self.soundness_total
                and self.counterfactual_passed == self.counterfactual_total
                and math.isclose(self.stability_jaccard_min, 1.0))


def run_full_evaluation(fi: FilteredInstance,
                        cfg: SolverConfig = SolverConfig(),
                        weights: ObjectiveWeights = DEFAULT_WEIGHTS,
                        seeds: list[int] | None = None,
                        policy: FilterPolicy | None = None) -> EvaluationReport:
    """Solve, extract every certificate, run every check, collect timings."""
    seeds = list(range(8)) if seeds is None else seeds

    t0 = time.perf_counter()
    explainer = Explainer(fi, weights, cfg, policy=policy)
    solve_ms = explainer.base.stats.wall_ms

    t_extract = time.perf_counter()
    answers = explainer.all_why_not()
    extract_ms = (time.perf_counter() - t_extract) * 1000.0

    certs = {oid: ans for oid, ans in answers.items()
             if isinstance(ans, InfeasibilityCertificate)}
    tradeoffs = [oid for oid, ans in answers.items()
                 if isinstance(ans, ContrastiveCertificate)]
    prefiltered = [oid for oid, ans in answers.items()
                   if isinstance(ans, PrefilteredAnswer)]

    t_sound = time.perf_counter()
    sound_passed = sound_total = 0
    for oid, cert in sorted(certs.items()):
        m_forced, core = explainer.forced_model(oid)
        report = check_soundness(cert, m_forced, cfg, core=core)
        sound_passed += report.passed
        sound_total += report.total
    soundness_ms = (time.perf_counter() - t_sound) * 1000.0

    state = ScheduleState.from_assignment(explainer.model.vars, explainer.base.schedule)
    t_cf = time.perf_counter()
    cf_passed = 0
    for oid, cert in sorted(certs.items()):
        m_forced, _ = explainer.forced_model(oid)
        result = check_counterfactual(fi, cert, weights, cfg,
                                      base_state=state, m_forced=m_forced,
                                      policy=policy)
        cf_passed += int(result.passed)
    counterfactual_ms = (time.perf_counter() - t_cf) * 1000.0

    stability = check_stability(fi, seeds, cfg, weights, policy=policy)

    baseline_expls = {oid: posthoc_explain(fi, state, oid) for oid in certs}
    comparison = compare_baseline(certs, baseline_expls)

    sizes = [len(c.mis) for c in certs.values()]
    total_ms = (time.perf_counter() - t0) * 1000.0

    return EvaluationReport(
        instance_name=fi.scenario.name,
        n_orders=len(fi.scenario.orders),
        n_scheduled=len(explainer.scheduled),
        n_tradeoffs=len(tradeoffs),
        n_prefiltered=len(prefiltered),
        n_certificates=len(certs),
        soundness_passed=sound_passed,
        soundness_total=sound_total,
        counterfactual_passed=cf_passed,
        counterfactual_total=len(certs),
        stability_jaccard_min=stability.jaccard_min if certs or tradeoffs else 1.0,
        stability_jaccard_mean=stability.jaccard_mean,
        stability_pairs=len(stability.pairs),
        core_size_avg=sum(sizes) / len(sizes) if sizes else 0.0,
        core_size_median=float(statistics.median(sizes)) if sizes else 0.0,
        core_size_max=max(sizes, default=0),
        baseline=comparison,
        timings_ms={
            "solve_ms": round(solve_ms, 3),
            "extract_ms": round(extract_ms, 3),
            "soundness_ms": round(soundness_ms, 3),
            "counterfactual_ms": round(counterfactual_ms, 3),
            "total_ms": round(total_ms, 3),
        })


def report_to_dict(report: EvaluationReport) -> dict:
    return {
        "instance": report.instance_name,
        "orders": {
            "total": report.n_orders,
            "scheduled": report.n_scheduled,
            "tradeoffs": report.n_tradeoffs,
            "prefiltered": report.n_prefiltered,
            "infeasible": report.n_certificates,
        },
        "soundness": {"passed": report.soundness_passed, "total": report.soundness_total},
        "counterfactual": {"passed": report.counterfactual_passed,
                           "total": report.counterfactual_total},
        "stability": {"jaccard_min": report.stability_jaccard_min,
                      "jaccard_mean": report.stability_jaccard_mean,
                      "pairs": report.stability_pairs},
        "core_size": {"avg": round(report.core_size_avg, 3),
                      "median": report.core_size_median,
                      "max": report.core_size_max},
        "baseline": {
            "orders_with_noncausal": report.baseline.orders_with_noncausal,
            "noncausal_attributions": report.baseline.noncausal_attributions,
            "total_attributions": report.baseline.total_attributions,
            "conjunction_orders": report.baseline.conjunction_orders,
            "incomplete_on_conjunctions": report.baseline.baseline_incomplete_on_conjunctions,
            "noncausal_order_ids": list(report.baseline.noncausal_order_ids),
        },
        "timings_ms": report.timings_ms,
        "all_checks_pass": report.all_checks_pass,
    }


def report_to_markdown(report: EvaluationReport) -> str:
    b = report.baseline
    lines = [
        f"# Evaluation report: {report.instance_name}",
        "",
        "## Outcome profile",
        f"- orders: {report.n_orders}",
        f"- scheduled: {report.n_scheduled}",
        f"- optimality trade-offs: {report.n_tradeoffs}",
        f"- prefiltered: {report.n_prefiltered}",
        f"- infeasibility certificates: {report.n_certificates}",
        "",
        "## Intrinsic correctness",
        f"- soundness checks passed: {report.soundness_passed}/{report.soundness_total}",
        f"- counterfactual tests succeeded: "
        f"{report.counterfactual_passed}/{report.counterfactual_total}",
        f"- stability (Jaccard over {report.stability_pairs} seed pairs): "
        f"min {report.stability_jaccard_min:.3f}, mean {report.stability_jaccard_mean:.3f}",
        f"- core size avg/median/max: {report.core_size_avg:.1f} / "
        f"{report.core_size_median:.1f} / {report.core_size_max}",
        "",
        "## Post-hoc baseline failure modes",
        f"- orders with non-causal attribution: {b.orders_with_noncausal}/{report.n_certificates}",
        f"- non-causal / total attributions: {b.noncausal_attributions}/{b.total_attributions}",
        f"- conjunction orders: {b.conjunction_orders}",
        f"- baseline incomplete on conjunctions: "
        f"{b.baseline_incomplete_on_conjunctions}/{b.conjunction_orders}",
        "",
        "## Timings (wall-clock, ms)",
    ]
    for key, value in report.timings_ms.items():
        lines.append(f"- {key}: {value}")
    lines.append("")
    lines.append("All checks pass." if report.all_checks_pass else "CHECK FAILURES present.")
    lines.append("")
    return "\n".join(lines)
