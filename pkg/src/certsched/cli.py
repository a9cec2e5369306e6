"""Batch command-line entry points.

JSON results go to stdout, human-readable progress to stderr. Exit codes:
0 success, 1 failed verification checks, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .bench import emit_csv, rows_to_dicts, sweep_constellation, sweep_orders
from .errors import CertschedError
from .explain import (Explainer, atom_from_dict, certificate_to_dict)
from .model import ObjectiveWeights
from .scenario import (GeneratorParams, apply_feasibility_filters,
                       canonical_scenario, dumps_scenario, generate_synthetic,
                       load_scenario)
from .solver import SolverConfig, scheduled_orders
from .verify import report_to_dict, report_to_markdown, run_full_evaluation

logger = logging.getLogger(__name__)


def _say(message: str) -> None:
    print(message, file=sys.stderr)


def _weights_from_args(args) -> ObjectiveWeights:
    return ObjectiveWeights(
        alpha_milli=args.alpha, beta_milli=args.beta, lambda_milli=args.lam,
        mu_milli=args.mu, eta_milli=args.eta)


def _add_weight_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=int, default=500, help="priority steepness (milli)")
    parser.add_argument("--beta", type=int, default=10, help="scheduled-order reward (milli)")
    parser.add_argument("--lam", type=int, default=100, help="downlink cost (milli)")
    parser.add_argument("--mu", type=int, default=200, help="cloud penalty weight (milli)")
    parser.add_argument("--eta", type=int, default=100, help="latency penalty weight (milli)")


def _load(path: str):
    return load_scenario(Path(path).read_text(encoding="utf-8"))


def _pipeline(args):
    scenario = _load(args.scenario)
    fi = apply_feasibility_filters(scenario, args.threshold)
    return Explainer(fi, _weights_from_args(args), SolverConfig(seed=args.seed))


def _schedule_payload(explainer) -> dict:
    assignment = explainer.base.schedule
    chosen = {v.order_id: v.pass_id for v in explainer.model.vars
              if v.kind == "x" and assignment[v] == 1}
    return {
        "instance": explainer.fi.scenario.name,
        "objective_milli": explainer.base.objective_milli,
        "scheduled": [{"order_id": o, "pass_id": p} for o, p in sorted(chosen.items())],
        "selected_downlinks": sorted(v.pass_id for v in explainer.model.vars
                                     if v.kind == "d" and assignment[v] == 1),
        "stats": {"nodes": explainer.base.stats.nodes,
                  "wall_ms": round(explainer.base.stats.wall_ms, 3)},
    }


def cmd_solve(args) -> int:
    explainer = _pipeline(args)
    payload = _schedule_payload(explainer)

    if args.apply_changes:
        from .explain import FilterPolicy, apply_atoms
        from .scenario import apply_feasibility_filters as refilter
        docs = json.loads(Path(args.apply_changes).read_text(encoding="utf-8"))
        atoms = tuple(atom_from_dict(d) for d in docs)
        policy = FilterPolicy(cloud_threshold_milli=args.threshold)
        scenario, policy = apply_atoms(explainer.fi.scenario, policy, atoms)
        corrected = Explainer(
            refilter(scenario, policy.cloud_threshold_milli,
                     pass_threshold_overrides=policy.overrides_dict()),
            _weights_from_args(args), SolverConfig(seed=args.seed), policy=policy)
        before = set(explainer.scheduled)
        after = set(corrected.scheduled)
        payload = {
            "before": payload,
            "after": _schedule_payload(corrected),
            "diff": {
                "newly_scheduled": sorted(after - before),
                "newly_unscheduled": sorted(before - after),
                "objective_delta_milli": (corrected.base.objective_milli
                                          - explainer.base.objective_milli),
            },
        }
        explainer = corrected

    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        _say(f"schedule written to {args.out}")
    else:
        print(text)
    _say(f"{len(explainer.scheduled)} of {len(explainer.fi.scenario.orders)} "
         f"orders scheduled, objective {explainer.base.objective_milli} milli")
    return 0


def cmd_explain(args) -> int:
    explainer = _pipeline(args)
    if args.kind == "why":
        answer = explainer.why(args.order)
    elif args.kind == "whynot":
        answer = explainer.why_not(args.order)
    else:
        if args.changes:
            docs = json.loads(Path(args.changes).read_text(encoding="utf-8"))
            space = [atom_from_dict(d) for d in docs]
        else:
            _say("no --changes file given; deriving a default correction menu")
            from .baseline import ScheduleState
            from .explain import InfeasibilityCertificate
            from .verify import counterfactual_atoms
            answer0 = explainer.why_not(args.order)
            if isinstance(answer0, InfeasibilityCertificate):
                state = ScheduleState.from_assignment(
                    explainer.model.vars, explainer.base.schedule)
                m_forced, _ = explainer.forced_model(args.order)
                space = list(counterfactual_atoms(explainer.fi, answer0, state, m_forced))
            else:
                space = []
        answer = explainer.what_if(args.order, space, max_atoms=args.max_atoms)
    print(json.dumps(certificate_to_dict(answer), indent=2, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    scenario = _load(args.scenario)
    fi = apply_feasibility_filters(scenario, args.threshold)
    seeds = list(range(args.seeds))
    report = run_full_evaluation(fi, SolverConfig(seed=args.seed),
                                 _weights_from_args(args), seeds=seeds)
    _say(report_to_markdown(report))
    if args.report_md:
        Path(args.report_md).write_text(report_to_markdown(report), encoding="utf-8")
    payload = json.dumps(report_to_dict(report), indent=2, sort_keys=True)
    if args.report_json:
        Path(args.report_json).write_text(payload + "\n", encoding="utf-8")
    print(payload)
    return 0 if report.all_checks_pass else 1


def cmd_bench(args) -> int:
    cfg = SolverConfig(seed=args.seed)
    if args.axis == "orders":
        counts = args.sizes or ([25, 50, 75, 100] if args.quick
                                else [25, 50, 75, 100, 125, 150, 175, 200])
        rows = sweep_orders(counts, n_satellites=args.satellites,
                            n_stations=args.stations, seed=args.seed, cfg=cfg,
                            parallel=args.parallel)
    else:
        counts = args.sizes or ([5, 10, 15, 20] if args.quick
                                else [5, 10, 15, 20, 25, 30])
        rows = sweep_constellation(counts, n_orders=args.orders,
                                   n_stations=args.stations, seed=args.seed,
                                   cfg=cfg, parallel=args.parallel)
    csv_text = emit_csv(rows)
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
        _say(f"CSV written to {args.csv}")
    if args.json:
        print(json.dumps(rows_to_dicts(rows), indent=2, sort_keys=True))
    else:
        print(csv_text, end="")
    return 0


def cmd_generate(args) -> int:
    if args.canonical:
        scenario = canonical_scenario()
    else:
        params = GeneratorParams(n_satellites=args.satellites,
                                 n_stations=args.stations, n_orders=args.orders,
                                 horizon_s=args.horizon)
        scenario = generate_synthetic(params, args.seed)
    text = dumps_scenario(scenario)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        _say(f"scenario {scenario.name} written to {args.out}")
    else:
        print(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    port = int(os.environ.get("CERTSCHED_PORT", args.port))
    _say(f"serving on {args.bind}:{port}")
    uvicorn.run(create_app(), host=args.bind, port=port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="certsched",
        description="Certificate-based explanations for imaging/downlink scheduling")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a scenario to optimality")
    p.add_argument("scenario")
    p.add_argument("--out", help="write schedule JSON to this path")
    p.add_argument("--apply-changes",
                   help="JSON file of correction atoms to apply before solving; "
                        "prints before/after schedules and the diff")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=int, default=200, help="cloud threshold (milli)")
    _add_weight_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("explain", help="answer a why / why-not / what-if query")
    p.add_argument("scenario")
    p.add_argument("--order", required=True)
    p.add_argument("--kind", required=True, choices=["why", "whynot", "whatif"])
    p.add_argument("--changes", help="JSON file with the what-if change space")
    p.add_argument("--max-atoms", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=int, default=200)
    _add_weight_flags(p)
    p.set_defaults(fn=cmd_explain)

    p = sub.add_parser("verify", help="run the faithfulness evaluation harness")
    p.add_argument("scenario")
    p.add_argument("--seeds", type=int, default=8, help="number of solver seeds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=int, default=200)
    p.add_argument("--report-json", help="write report JSON to this path")
    p.add_argument("--report-md", help="write report markdown to this path")
    _add_weight_flags(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="scalability sweeps")
    p.add_argument("axis", choices=["orders", "constellation"])
    p.add_argument("--quick", action="store_true", help="CI-sized sweep (default)")
    p.add_argument("--full", dest="quick", action="store_false")
    p.add_argument("--sizes", type=int, nargs="+", help="explicit sweep points")
    p.add_argument("--orders", type=int, default=50)
    p.add_argument("--satellites", type=int, default=10)
    p.add_argument("--stations", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="write CSV to this path")
    p.add_argument("--json", action="store_true", help="print JSON instead of CSV")
    p.add_argument("--parallel", action="store_true",
                   help="extract per-order explanations concurrently")
    p.set_defaults(fn=cmd_bench, quick=True)

    p = sub.add_parser("generate", help="emit a synthetic or the canonical scenario")
    p.add_argument("--canonical", action="store_true",
                   help="emit the embedded canonical scenario")
    p.add_argument("--orders", type=int, default=25)
    p.add_argument("--satellites", type=int, default=5)
    p.add_argument("--stations", type=int, default=2)
    p.add_argument("--horizon", type=int, default=43200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write scenario JSON to this path")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--bind", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except CertschedError as exc:
        _say(f"error: {exc}")
        return 2
    except FileNotFoundError as exc:
        _say(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
