"""Certificate-based explanation engine for imaging/downlink scheduling."""

from .baseline import BaselineExplanation, ScheduleState, inspect_candidate, posthoc_explain
from .explain import (ContrastiveCertificate, CorrectionAtom, CorrectionCertificate,
                      Explainer, FilterPolicy, InfeasibilityCertificate,
                      NoCorrectionFound, PrefilteredAnswer, WhyCertificate,
                      certificate_to_dict, explain_what_if, explain_why,
                      explain_why_not, extract_mis, project_tags)
from .model import (DEFAULT_WEIGHTS, ObjectiveWeights, ScheduleModel,
                    TaggedConstraint, VarRef, build_exclusions, build_model,
                    compute_latency_milli, force_order, model_dump_lines,
                    priority_weight, render_constraint)
from .scenario import (FilteredInstance, GeneratorParams, GroundStation, Order,
                       PassWindow, PrefilterReason, Satellite, ScenarioSpec,
                       apply_feasibility_filters, canonical_scenario,
                       dumps_scenario, generate_synthetic, load_scenario)
from .solver import (EvalResult, FeasibilityResult, SolveResult, SolverConfig,
                     SolverCore, brute_force_solve, check_feasibility, evaluate,
                     scheduled_orders, solve)
from .verify import (EvaluationReport, check_counterfactual, check_soundness,
                     check_stability, compare_baseline, report_to_dict,
                     report_to_markdown, run_full_evaluation)

__version__ = "0.1.0"
