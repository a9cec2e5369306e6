from __future__ import annotations

import dataclasses

import pytest

from certsched.baseline import ScheduleState, posthoc_explain
from certsched.explain import CorrectionAtom, Explainer, InfeasibilityCertificate
from certsched.model import build_model, force_order
from certsched.scenario import apply_feasibility_filters
from certsched.solver import SolverConfig
from certsched.verify import (check_counterfactual, check_soundness,
                              check_stability, compare_baseline,
                              counterfactual_atoms, report_to_dict,
                              report_to_markdown, run_full_evaluation)
from conftest import TINY2_WEIGHTS, tiny2_scenario


@pytest.fixture(scope="module")
def canonical_certs(canonical_answers):
    return {oid: a for oid, a in canonical_answers.items()
            if isinstance(a, InfeasibilityCertificate)}


@pytest.fixture(scope="module")
def canonical_state(canonical_explainer):
    return ScheduleState.from_assignment(
        canonical_explainer.model.vars, canonical_explainer.base.schedule)


class TestSoundness:
    def test_all_canonical_checks_pass(self, canonical_explainer, canonical_certs):
        passed = total = 0
        for oid, cert in canonical_certs.items():
            m_forced, core = canonical_explainer.forced_model(oid)
            report = check_soundness(cert, m_forced, core=core)
            passed += report.passed
            total += report.total
        assert total == sum(len(c.mis) for c in canonical_certs.values())
        assert passed == total

    def test_dropped_member_breaks_sufficiency(self, canonical_explainer,
                                               canonical_certs):
        cert = canonical_certs["ORD-01"]
        broken = dataclasses.replace(
            cert, mis=tuple(c for c in cert.mis if not c.startswith("no_downlink")))
        m_forced, core = canonical_explainer.forced_model("ORD-01")
        report = check_soundness(broken, m_forced, core=core)
        assert not all(r.set_sufficient for r in report.results)
        assert report.passed < report.total

    def test_padded_member_fails_necessity(self, canonical_explainer,
                                           canonical_certs):
        cert = canonical_certs["ORD-07"]
        padded = dataclasses.replace(
            cert, mis=tuple(sorted(cert.mis + ("storage_ub/S1/k=0",))))
        m_forced, core = canonical_explainer.forced_model("ORD-07")
        report = check_soundness(padded, m_forced, core=core)
        by_id = {r.constraint_id: r for r in report.results}
        assert not by_id["storage_ub/S1/k=0"].individually_necessary

    def test_tag_validity_checked(self, canonical_explainer, canonical_certs):
        cert = canonical_certs["ORD-07"]
        m_forced, core = canonical_explainer.forced_model("ORD-07")
        report = check_soundness(cert, m_forced, core=core)
        assert all(r.tag_valid for r in report.results)


class TestCounterfactual:
    def test_seven_of_seven(self, canonical_fi, canonical_explainer,
                            canonical_certs, canonical_state):
        passed = 0
        for oid, cert in canonical_certs.items():
            m_forced, _ = canonical_explainer.forced_model(oid)
            result = check_counterfactual(canonical_fi, cert,
                                          base_state=canonical_state,
                                          m_forced=m_forced)
            assert result.passed, f"counterfactual failed for {oid}"
            passed += 1
        assert passed == 7

    def test_conjunction_needs_both_atoms(self, canonical_fi, canonical_explainer,
                                          canonical_certs, canonical_state):
        """Applying only the downlink atom leaves the storage block in place."""
        cert = canonical_certs["ORD-01"]
        m_forced, _ = canonical_explainer.forced_model("ORD-01")
        atoms = counterfactual_atoms(canonical_fi, cert, canonical_state, m_forced)
        downlink_only = tuple(a for a in atoms if a.kind == "add_downlink_pass")
        assert downlink_only
        result = check_counterfactual(canonical_fi, cert,
                                      base_state=canonical_state,
                                      m_forced=m_forced, atoms=downlink_only)
        assert not result.passed

    def test_derived_atoms_match_kinds(self, canonical_fi, canonical_explainer,
                                       canonical_certs, canonical_state):
        cert = canonical_certs["ORD-03"]
        m_forced, _ = canonical_explainer.forced_model("ORD-03")
        atoms = counterfactual_atoms(canonical_fi, cert, canonical_state, m_forced)
        assert [a.kind for a in atoms] == ["add_storage_capacity"]
        assert atoms[0].satellite_id == "S3"
        assert atoms[0].amount_mb == 205  # 6554 + 1843 - 8192


class TestStability:
    def test_canonical_28_pairs_all_one(self, canonical_fi):
        result = check_stability(canonical_fi, list(range(8)))
        assert len(result.pairs) == 28
        assert result.jaccard_min == 1.0
        assert result.jaccard_mean == 1.0

    def test_identical_runs_agree(self, canonical_fi):
        result = check_stability(canonical_fi, [0, 0])
        assert result.jaccard_min == 1.0

    def test_seed_dependent_mutant_detected(self, canonical_fi):
        def mutant(fi, seed):
            return {f"explanation-colored-by-{seed}"}

        result = check_stability(canonical_fi, [0, 1], explain_fn=mutant)
        assert result.jaccard_min < 1.0

    def test_needs_two_seeds(self, canonical_fi):
        with pytest.raises(ValueError):
            check_stability(canonical_fi, [0])


class TestCompareBaseline:
    def test_canonical_failure_modes(self, canonical_fi, canonical_certs,
                                     canonical_state):
        expls = {oid: posthoc_explain(canonical_fi, canonical_state, oid)
                 for oid in canonical_certs}
        cmp = compare_baseline(canonical_certs, expls)
        assert cmp.orders_with_noncausal == 2
        assert cmp.noncausal_attributions == 2
        assert cmp.total_attributions == 9
        assert cmp.conjunction_orders == 3
        assert cmp.baseline_incomplete_on_conjunctions == 3
        assert set(cmp.noncausal_order_ids) == {"ORD-03", "ORD-04"}

    def test_perfect_baseline_counts_zero(self, canonical_certs, canonical_fi,
                                          canonical_state):
        # Feed the certificates' own kinds back as the baseline answer.
        import certsched.baseline as bl
        expls = {}
        inverse = {"no_downlink": "no_downlink",
                   "storage_upper_bound": "storage_overflow"}
        for oid, cert in canonical_certs.items():
            reasons = tuple(bl.BaselineReason(inverse[k], "synthetic")
                            for k in sorted(cert.kinds))
            expls[oid] = bl.BaselineExplanation(oid, "p", reasons, {})
        cmp = compare_baseline(canonical_certs, expls)
        assert cmp.orders_with_noncausal == 0
        assert cmp.baseline_incomplete_on_conjunctions == 0

    def test_mismatched_order_sets_rejected(self, canonical_certs):
        with pytest.raises(ValueError):
            compare_baseline(canonical_certs, {})


class TestFullEvaluation:
    def test_canonical_report_matches_table(self, canonical_fi):
        report = run_full_evaluation(canonical_fi)
        assert report.n_scheduled == 1
        assert report.n_tradeoffs == 2
        assert report.n_certificates == 7
        assert report.n_prefiltered == 0
        assert report.soundness_passed == report.soundness_total == 17
        assert report.counterfactual_passed == report.counterfactual_total == 7
        assert report.stability_jaccard_min == 1.0
        assert report.stability_pairs == 28
        assert report.core_size_max == 3
        assert report.core_size_median == 2.0
        assert abs(report.core_size_avg - 17 / 7) < 1e-9
        assert report.baseline.conjunction_orders == 3
        assert report.baseline.baseline_incomplete_on_conjunctions == 3
        assert report.baseline.orders_with_noncausal == 2
        assert report.all_checks_pass

    def test_tiny2_has_zero_certificates(self, tiny2_fi):
        report = run_full_evaluation(tiny2_fi, weights=TINY2_WEIGHTS, seeds=[0, 1])
        assert report.n_certificates == 0
        assert report.n_scheduled == 2
        assert report.counterfactual_total == 0
        assert report.all_checks_pass

    def test_report_content_stable_across_runs(self, canonical_fi):
        a = report_to_dict(run_full_evaluation(canonical_fi, seeds=[0, 1]))
        b = report_to_dict(run_full_evaluation(canonical_fi, seeds=[0, 1]))
        a.pop("timings_ms")
        b.pop("timings_ms")
        assert a == b

    def test_markdown_renders(self, canonical_fi):
        report = run_full_evaluation(canonical_fi, seeds=[0, 1])
        text = report_to_markdown(report)
        assert "Soundness checks passed" in text or "soundness checks passed" in text
        assert "All checks pass." in text


class TestFuzzSoundness:
    def test_random_small_instances_all_sound(self):
        """Every certificate emitted on fuzzed instances passes verification."""
        from certsched.scenario import GeneratorParams, generate_synthetic
        checked = 0
        for seed in range(12):
            params = GeneratorParams(n_satellites=3, n_stations=2, n_orders=6)
            fi = apply_feasibility_filters(generate_synthetic(params, seed))
            ex = Explainer(fi)
            for oid, answer in ex.all_why_not().items():
                if not isinstance(answer, InfeasibilityCertificate):
                    continue
                m_forced, core = ex.forced_model(oid)
                report = check_soundness(answer, m_forced, core=core)
                assert report.passed == report.total, (seed, oid)
                checked += 1
        assert checked >= 5
