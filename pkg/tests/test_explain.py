from __future__ import annotations

import itertools

import pytest

from certsched.errors import AlreadyScheduledError, InvalidAtomError
from certsched.explain import (CorrectionAtom, CorrectionCertificate, Explainer,
                               FilterPolicy, InfeasibilityCertificate, KindGroup,
                               NoCorrectionFound, PrefilteredAnswer,
                               ContrastiveCertificate, apply_atom,
                               certificate_to_dict, extract_mis, project_tags)
from certsched.model import build_model, force_order
from certsched.scenario import (GroundStation, Order, PassWindow, Satellite,
                                ScenarioSpec, apply_feasibility_filters,
                                expected_tx_mb)
from certsched.solver import SolverCore, SolverConfig, check_feasibility
from conftest import TINY2_WEIGHTS


def no_downlink_toy() -> ScenarioSpec:
    """One order whose only candidate sits on a satellite with no downlink."""
    return ScenarioSpec(
        name="nd-toy", horizon_s=1000,
        satellites=(Satellite("S1", 4096, 0, 8000, 0),
                    Satellite("S2", 4096, 0, 8000, 0)),
        stations=(GroundStation("G1"),),
        orders=(Order("blocked", 5000, 1, 100), Order("fine", 4000, 1, 100)),
        passes=(
            PassWindow("p1", "S1", "imaging", 0, 60, order_candidates=("blocked",)),
            PassWindow("p2", "S2", "imaging", 0, 60, order_candidates=("fine",)),
            PassWindow("q2", "S2", "downlink", 100, 200, station_id="G1",
                       tx_mb=expected_tx_mb(8000, 100)),
        ))


class TestExtractMis:
    def test_toy_no_downlink_core(self):
        fi = apply_feasibility_filters(no_downlink_toy())
        m = force_order(build_model(fi, TINY2_WEIGHTS), "blocked", 1)
        extraction = extract_mis(m)
        assert extraction.mis == ("forced/blocked", "no_downlink/p1")
        kinds, _ = project_tags(m, extraction.mis, "blocked")
        assert kinds == {"no_downlink"}

    def test_toy_core_is_irreducible_by_enumeration(self):
        """Independent oracle: every proper subset of the core (plus the
        structural background) is feasible; the full core is not."""
        fi = apply_feasibility_filters(no_downlink_toy())
        m = force_order(build_model(fi, TINY2_WEIGHTS), "blocked", 1)
        extraction = extract_mis(m)
        non_structural = [c.id for c in m.constraints if c.tag != "structural"]
        core = SolverCore(m)

        def feasible_with(kept: set[str]) -> bool:
            disabled = frozenset(set(non_structural) - kept) | (
                {"forced/blocked"} if "forced/blocked" not in kept else frozenset())
            return core.check(disabled_ids=frozenset(disabled)).feasible

        cited = set(extraction.mis)
        assert not feasible_with(cited)
        for drop in extraction.mis:
            assert feasible_with(cited - {drop}), f"{drop} is redundant"

    def test_requires_infeasible_model(self, tiny2_model):
        forced = force_order(tiny2_model, "o1", 1)
        with pytest.raises(ValueError):
            extract_mis(forced)

    def test_requires_forced_model(self, tiny2_model):
        with pytest.raises(ValueError):
            extract_mis(tiny2_model)

    def test_call_budget_one_check_per_candidate(self, canonical_answers,
                                                 canonical_explainer):
        m = canonical_explainer.model
        n_candidates = len([c for c in m.constraints if c.tag != "structural"])
        for answer in canonical_answers.values():
            if isinstance(answer, InfeasibilityCertificate):
                assert len(answer.checks_log) == n_candidates


class TestCanonicalCertificates:
    def test_conjunction_cores(self, canonical_answers):
        for oid in ("ORD-01", "ORD-06", "ORD-09"):
            cert = canonical_answers[oid]
            assert isinstance(cert, InfeasibilityCertificate)
            assert cert.kinds == {"no_downlink", "storage_upper_bound"}
            assert len(cert.mis) == 3

    def test_storage_only_cores(self, canonical_answers):
        for oid in ("ORD-03", "ORD-04"):
            cert = canonical_answers[oid]
            assert cert.kinds == {"storage_upper_bound"}
            assert len(cert.mis) == 2

    def test_no_downlink_only_cores(self, canonical_answers):
        for oid in ("ORD-07", "ORD-10"):
            cert = canonical_answers[oid]
            assert cert.kinds == {"no_downlink"}
            assert len(cert.mis) == 2

    def test_core_always_cites_the_forcing_constraint(self, canonical_answers):
        for oid, answer in canonical_answers.items():
            if isinstance(answer, InfeasibilityCertificate):
                assert f"forced/{oid}" in answer.mis

    def test_core_size_bound(self, canonical_answers):
        sizes = [len(a.mis) for a in canonical_answers.values()
                 if isinstance(a, InfeasibilityCertificate)]
        assert max(sizes) <= 3

    def test_tradeoffs(self, canonical_answers):
        for oid, delta in (("ORD-05", 6467), ("ORD-08", 7456)):
            cert = canonical_answers[oid]
            assert isinstance(cert, ContrastiveCertificate)
            assert cert.displaced == ("ORD-02",)
            assert cert.objective_delta_milli == delta

    def test_already_scheduled_raises(self, canonical_explainer):
        with pytest.raises(AlreadyScheduledError):
            canonical_explainer.why_not("ORD-02")

    def test_certificates_are_seed_invariant(self, canonical_fi, canonical_answers):
        other = Explainer(canonical_fi, cfg=SolverConfig(seed=99))
        for oid, answer in canonical_answers.items():
            assert certificate_to_dict(other.why_not(oid)) == certificate_to_dict(answer)


class TestPrefiltered:
    def test_cloud_blocked_order_is_prefiltered(self):
        spec = ScenarioSpec(
            name="cloudy", horizon_s=1000,
            satellites=(Satellite("S1", 4096, 0, 8000, 0),),
            stations=(GroundStation("G1"),),
            orders=(Order("c1", 5000, 1, 100), Order("okay", 4000, 1, 100)),
            passes=(
                PassWindow("p1", "S1", "imaging", 0, 60,
                           order_candidates=("c1",), cloud_fraction_milli=250),
                PassWindow("p2", "S1", "imaging", 100, 160, order_candidates=("okay",)),
                PassWindow("q1", "S1", "downlink", 300, 400, station_id="G1",
                           tx_mb=expected_tx_mb(8000, 100)),
            ))
        fi = apply_feasibility_filters(spec, 200)
        answer = Explainer(fi, TINY2_WEIGHTS).why_not("c1")
        assert isinstance(answer, PrefilteredAnswer)
        assert answer.reason_kinds() == {"cloud", "visibility"}

    def test_relax_cloud_unblocks(self):
        spec = ScenarioSpec(
            name="cloudy", horizon_s=1000,
            satellites=(Satellite("S1", 4096, 0, 8000, 0),),
            stations=(GroundStation("G1"),),
            orders=(Order("c1", 5000, 1, 100),),
            passes=(
                PassWindow("p1", "S1", "imaging", 0, 60,
                           order_candidates=("c1",), cloud_fraction_milli=250),
                PassWindow("q1", "S1", "downlink", 300, 400, station_id="G1",
                           tx_mb=expected_tx_mb(8000, 100)),
            ))
        fi = apply_feasibility_filters(spec, 200)
        ex = Explainer(fi, TINY2_WEIGHTS)
        atom = CorrectionAtom(kind="relax_cloud", cost_milli=50,
                              new_threshold_milli=300)
        cert = ex.what_if("c1", [atom])
        assert isinstance(cert, CorrectionCertificate)
        assert cert.validated
        assert cert.chosen == (atom,)


class TestRefineDisplacements:
    def test_empty_stays_empty(self, canonical_explainer):
        assert canonical_explainer.refine_displacements("ORD-05", []) == []

    def test_necessary_displacement_kept(self, canonical_explainer):
        assert canonical_explainer.refine_displacements("ORD-05", ["ORD-02"]) == ["ORD-02"]

    def test_spurious_displacement_removed(self, tiny2_fi):
        # Both tiny-2 orders fit together, so a claimed displacement of o2
        # by forcing o1 is spurious and gets dropped.
        ex = Explainer(tiny2_fi, TINY2_WEIGHTS)
        assert ex.refine_displacements("o1", ["o2"]) == []

    def test_impossible_companion_is_kept(self, canonical_explainer):
        # ORD-07 can never be scheduled at all, so co-forcing it with
        # ORD-05 stays infeasible and the entry survives refinement.
        refined = canonical_explainer.refine_displacements(
            "ORD-05", ["ORD-02", "ORD-07"])
        assert refined == ["ORD-02", "ORD-07"]


class TestWhy:
    def test_canonical_scheduled_order(self, canonical_explainer):
        cert = canonical_explainer.why("ORD-02")
        assert cert.chosen_pass_id == "P-S3-06"
        tight_ids = {t.constraint_id for t in cert.tight}
        assert "downlink_req/P-S3-06" in tight_ids
        assert "unique/ORD-02" in tight_ids
        outcomes = {r.alt_order_id: r for r in cert.dominance}
        assert outcomes["ORD-05"].outcome == "value_loss"
        assert outcomes["ORD-05"].delta_milli == 6467
        assert outcomes["ORD-01"].outcome == "not_viable"

    def test_why_rejects_unscheduled(self, canonical_explainer):
        from certsched.errors import NotScheduledError
        with pytest.raises(NotScheduledError):
            canonical_explainer.why("ORD-05")

    def test_tight_storage_row_when_capacity_exact(self, tiny2_fi):
        ex = Explainer(tiny2_fi, TINY2_WEIGHTS)
        cert = ex.why("o1")
        tight_ids = {t.constraint_id for t in cert.tight}
        # Both orders fill storage to the brim: the cumulative row at the
        # second pass is binding and mentions o1's assignment variable.
        assert "storage_ub/SAT-1/k=1" in tight_ids

    def test_no_alternatives_still_reports_tight(self, tiny2_fi):
        ex = Explainer(tiny2_fi, TINY2_WEIGHTS)
        cert = ex.why("o2")
        assert cert.dominance == ()
        assert cert.tight


class TestWhatIf:
    def test_storage_only_order_chooses_cheap_storage_atom(self, canonical_fi):
        ex = Explainer(canonical_fi)
        space = [
            CorrectionAtom(kind="add_storage_capacity", cost_milli=100,
                           satellite_id="S3", amount_mb=512),
            CorrectionAtom(kind="add_downlink_pass", cost_milli=1000,
                           satellite_id="S3", station_id="GS-1", window=(1000, 1983)),
        ]
        cert = ex.what_if("ORD-03", space)
        assert isinstance(cert, CorrectionCertificate)
        assert cert.chosen == (space[0],)
        assert cert.total_cost_milli == 100
        assert cert.validated
        assert cert.ties == ()

    def test_empty_space_finds_nothing(self, canonical_fi):
        ex = Explainer(canonical_fi)
        answer = ex.what_if("ORD-03", [])
        assert isinstance(answer, NoCorrectionFound)

    def test_ties_collected_at_equal_cost(self, canonical_fi):
        ex = Explainer(canonical_fi)
        space = [
            CorrectionAtom(kind="add_storage_capacity", cost_milli=100,
                           satellite_id="S3", amount_mb=512),
            CorrectionAtom(kind="add_storage_capacity", cost_milli=100,
                           satellite_id="S3", amount_mb=205),
        ]
        cert = ex.what_if("ORD-03", space)
        assert cert.total_cost_milli == 100
        assert len(cert.ties) == 1

    def test_scheduled_order_rejected(self, canonical_fi):
        ex = Explainer(canonical_fi)
        with pytest.raises(AlreadyScheduledError):
            ex.what_if("ORD-02", [])


class TestAtoms:
    def test_add_downlink_pass_derives_tx(self, canonical_fi):
        atom = CorrectionAtom(kind="add_downlink_pass", cost_milli=10,
                              satellite_id="S1", station_id="GS-1",
                              window=(5000, 6000))
        scenario, _ = apply_atom(canonical_fi.scenario, FilterPolicy(), atom)
        added = scenario.pass_window("P-ADD-01")
        assert added.tx_mb == expected_tx_mb(15000, 1000)

    def test_invalid_atoms_rejected(self, canonical_fi):
        scenario = canonical_fi.scenario
        bad = [
            CorrectionAtom(kind="add_storage_capacity", cost_milli=10,
                           satellite_id="NOPE", amount_mb=100),
            CorrectionAtom(kind="relax_cloud", cost_milli=10,
                           new_threshold_milli=2000),
            CorrectionAtom(kind="extend_deadline", cost_milli=10,
                           order_id="ORD-01", delta_s=100),  # no deadline set
            CorrectionAtom(kind="add_downlink_pass", cost_milli=10,
                           satellite_id="S1", station_id="GS-1",
                           window=(99999, 100100)),
        ]
        for atom in bad:
            with pytest.raises(InvalidAtomError):
                apply_atom(scenario, FilterPolicy(), atom)

    def test_atom_kind_validated_at_construction(self):
        with pytest.raises(InvalidAtomError):
            CorrectionAtom(kind="warp_drive", cost_milli=10)

    def test_exclude_order_is_policy_level(self, canonical_fi):
        atom = CorrectionAtom(kind="exclude_order", cost_milli=10, order_id="ORD-02")
        scenario, policy = apply_atom(canonical_fi.scenario, FilterPolicy(), atom)
        assert scenario == canonical_fi.scenario
        assert policy.excluded_orders == {"ORD-02"}


class TestModuleLevelOperations:
    def test_wrappers_match_explainer(self, tiny2_fi):
        from certsched.explain import explain_what_if, explain_why, explain_why_not
        from certsched.errors import AlreadyScheduledError as ASE
        cert = explain_why(tiny2_fi, "o1", weights=TINY2_WEIGHTS)
        assert cert.order_id == "o1"
        with pytest.raises(ASE):
            explain_why_not(tiny2_fi, "o1", weights=TINY2_WEIGHTS)
        with pytest.raises(ASE):
            explain_what_if(tiny2_fi, "o2", [], weights=TINY2_WEIGHTS)

    def test_whynot_wrapper_on_unschedulable(self):
        from certsched.explain import explain_why_not
        fi = apply_feasibility_filters(no_downlink_toy())
        answer = explain_why_not(fi, "blocked", weights=TINY2_WEIGHTS)
        assert isinstance(answer, InfeasibilityCertificate)
        assert answer.kinds == {"no_downlink"}


class TestProjectTags:
    def test_consecutive_storage_checkpoints_merge(self, canonical_explainer):
        m = canonical_explainer.model
        ids = ("storage_ub/S3/k=2", "storage_ub/S3/k=3", "storage_ub/S3/k=4")
        _, groups = project_tags(m, ids, "ORD-01")
        assert len(groups) == 1
        assert groups[0].constraint_ids == ids
        assert "storage trajectory conflict on S3" in groups[0].text

    def test_non_consecutive_checkpoints_stay_apart(self, canonical_explainer):
        m = canonical_explainer.model
        _, groups = project_tags(m, ("storage_ub/S3/k=1", "storage_ub/S3/k=4"), "x")
        assert len(groups) == 2

    def test_forced_suppressed_from_kinds_but_grouped(self, canonical_answers):
        cert = canonical_answers["ORD-07"]
        assert cert.kinds == {"no_downlink"}
        group_kinds = {g.kind for g in cert.grouped_view}
        assert group_kinds == {"no_downlink", "forced_inclusion"}

    def test_conjunction_has_two_cause_groups(self, canonical_answers):
        cert = canonical_answers["ORD-01"]
        cause_groups = [g for g in cert.grouped_view if g.kind != "forced_inclusion"]
        assert {g.kind for g in cause_groups} == {"no_downlink", "storage_upper_bound"}
