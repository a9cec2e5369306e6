"""Exact, deterministic optimizer and feasibility oracle for 0-1 linear models.

Depth-first branch and bound over binary variables with unit propagation on
every row and an LP-free bound (mutual-exclusion-aware sum of positive
objective coefficients). All arithmetic is integer-exact. The search is fully
canonical: the seed is recorded for reproducibility bookkeeping but never
influences the returned status, objective, or assignment; among multiple
optima the lexicographically smallest assignment in canonical variable order
is returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import PartialAssignmentError, ResourceLimitExceeded
from .model import EQ, GE, LE, ScheduleModel, TaggedConstraint, VarRef

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"

_TIME_CHECK_MASK = 0xFF


@dataclass(frozen=True)
class SolverConfig:
    seed: int = 0
    node_limit: int | None = None
    time_limit_ms: int | None = None

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit_ms is not None and self.time_limit_ms <= 0:
            raise ValueError("time_limit_ms must be positive")


@dataclass(frozen=True)
class SolveStats:
    nodes: int
    propagations: int
    wall_ms: float
    seed: int = 0


@dataclass(frozen=True)
class SolveResult:
    status: str  # "optimal" | "infeasible"
    schedule: dict[VarRef, int] | None
    objective_milli: int
    stats: SolveStats


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    assignment: dict[VarRef, int] | None
    stats: SolveStats


@dataclass(frozen=True)
class EvalResult:
    feasible: bool
    objective_milli: int
    violated: tuple[str, ...]


class SolverCore:
    """Compiled model reused across many solver calls (deletion loops)."""

    def __init__(self, model: ScheduleModel):
        self.model = model
        self.n = len(model.vars)
        self.var_index = model.var_index

        self.obj = [0] * self.n
        for var, coef in model.objective:
            self.obj[self.var_index[var]] += coef

        self.terms: list[list[tuple[int, int]]] = []
        self.sense: list[str] = []
        self.rhs: list[int] = []
        self.row_ids: list[str] = []
        self.row_of_id: dict[str, int] = {}
        self.var_rows: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for c in model.constraints:
            r = len(self.terms)
            row = [(self.var_index[v], coef) for v, coef in c.terms]
            self.terms.append(row)
            self.sense.append(c.sense)
            self.rhs.append(c.rhs)
            self.row_ids.append(c.id)
            self.row_of_id[c.id] = r
            for vi, coef in row:
                self.var_rows[vi].append((r, coef))
        self.m = len(self.terms)

        self._base_min = [0] * self.m
        self._base_max = [0] * self.m
        for r, row in enumerate(self.terms):
            self._base_min[r] = sum(min(coef, 0) for _, coef in row)
            self._base_max[r] = sum(max(coef, 0) for _, coef in row)

        # Mutual-exclusion groups for the bound: rows of the shape
        # sum(v_i) <= 1 with unit coefficients let at most one member
        # contribute its objective gain.
        self.group_of = [-1] * self.n
        self.groups: list[list[int]] = []
        for c in model.constraints:
            if c.sense != LE or c.rhs != 1 or len(c.terms) < 2:
                continue
            if any(coef != 1 for _, coef in c.terms):
                continue
            members = [self.var_index[v] for v, _ in c.terms]
            if any(self.group_of[vi] >= 0 for vi in members):
                continue
            if all(self.obj[vi] <= 0 for vi in members):
                continue
            gid = len(self.groups)
            ordered = sorted(members, key=lambda vi: -self.obj[vi])
            self.groups.append(ordered)
            for vi in members:
                self.group_of[vi] = gid

        self._build_knapsacks()

    def _build_knapsacks(self):
        """Per-satellite data-volume relaxation used as a second bound.

        The final storage checkpoint of each satellite implies
        sum(data * x) <= free + sum(tx) over that satellite, so a fractional
        knapsack over the satellite's assignment variables upper-bounds their
        joint objective contribution. Exact rational ratio ordering keeps the
        bound admissible.
        """
        from fractions import Fraction

        scenario = self.model.instance.scenario
        self.knap_sat_of: list[int] = [-1] * self.n      # knapsack id per x var
        self.knap_weight: list[int] = [0] * self.n
        sat_ids = sorted({p.satellite_id for p in self.model.instance.active_passes()})
        sat_idx = {sid: i for i, sid in enumerate(sat_ids)}
        self.knap_capacity = [0] * len(sat_ids)
        items: list[list[int]] = [[] for _ in sat_ids]

        for sid in sat_ids:
            sat = scenario.satellite(sid)
            free = sat.storage_capacity_mb - sat.initial_storage_mb
            tx_total = sum(p.tx_mb for p in self.model.instance.active_passes()
                           if p.satellite_id == sid and p.kind == "downlink")
            self.knap_capacity[sat_idx[sid]] = free + tx_total

        pass_sat = {p.id: p.satellite_id for p in scenario.passes}
        for vi, var in enumerate(self.model.vars):
            if var.kind != "x" or self.obj[vi] <= 0:
                continue
            k = sat_idx[pass_sat[var.pass_id]]
            self.knap_sat_of[vi] = k
            self.knap_weight[vi] = scenario.order(var.order_id).data_mb
            items[k].append(vi)

        self.knap_items = [
            sorted(member,
                   key=lambda vi: (Fraction(-self.obj[vi], self.knap_weight[vi]), vi))
            for member in items
        ]
        # Positive gains outside every knapsack (scheduling rewards, etc.).
        self.non_knap_positive = sum(
            self.obj[vi] for vi in range(self.n)
            if self.obj[vi] > 0 and self.knap_sat_of[vi] < 0)

        # Variable orders. Canonical = model order (drives returned optima).
        # The bound-proving phase walks satellite by satellite (decisions on
        # one spacecraft rarely couple to another, so finishing a satellite
        # before starting the next keeps subtree gaps from multiplying),
        # greedily within a satellite.
        self.canonical_order = list(range(self.n))
        self.greedy_order = self._satellite_major_order()

    def _satellite_major_order(self) -> list[int]:
        scenario = self.model.instance.scenario
        pass_sat = {p.id: p.satellite_id for p in scenario.passes}
        sat_rank = {sid: i for i, sid in enumerate(sorted({s.id for s in scenario.satellites}))}
        head: list[int] = []
        for sid in sorted(sat_rank, key=sat_rank.get):
            xs = [vi for vi, var in enumerate(self.model.vars)
                  if var.kind == "x" and pass_sat[var.pass_id] == sid]
            xs.sort(key=lambda vi: (-self.obj[vi], vi))
            ds = [vi for vi, var in enumerate(self.model.vars)
                  if var.kind == "d" and pass_sat[var.pass_id] == sid]
            head += xs + ds
        tail = [vi for vi, var in enumerate(self.model.vars) if var.kind in ("y", "a")]
        return head + tail

    # -- search state -------------------------------------------------------

    def _reset(self, disabled_rows: set[int]):
        self.values = [-1] * self.n
        self.min_act = list(self._base_min)
        self.max_act = list(self._base_max)
        self.trail: list[int] = []
        self.pending: list[int] = []
        self.in_pending = [False] * self.m
        self.enabled = [r not in disabled_rows for r in range(self.m)]
        self.nodes = 0
        self.propagations = 0
        self.fixed_obj = 0
        self.pos_unfixed = sum(self.obj[vi] for vi in range(self.n)
                               if self.obj[vi] > 0 and self.group_of[vi] < 0)
        self.knap_committed = [0] * len(self.knap_capacity)
        self.non_knap_unfixed = self.non_knap_positive
        for r in range(self.m):
            if self.enabled[r]:
                self.pending.append(r)
                self.in_pending[r] = True

    def _fix(self, vi: int, val: int) -> bool:
        cur = self.values[vi]
        if cur >= 0:
            return cur == val
        self.values[vi] = val
        self.trail.append(vi)
        self.propagations += 1
        self.fixed_obj += self.obj[vi] * val
        if self.obj[vi] > 0 and self.group_of[vi] < 0:
            self.pos_unfixed -= self.obj[vi]
        if self.knap_sat_of[vi] >= 0:
            if val == 1:
                self.knap_committed[self.knap_sat_of[vi]] += self.knap_weight[vi]
        elif self.obj[vi] > 0:
            self.non_knap_unfixed -= self.obj[vi]
        for r, coef in self.var_rows[vi]:
            neg = coef if coef < 0 else 0
            pos = coef if coef > 0 else 0
            self.min_act[r] += coef * val - neg
            self.max_act[r] += coef * val - pos
            if self.enabled[r] and not self.in_pending[r]:
                self.pending.append(r)
                self.in_pending[r] = True
        return True

    def _undo_to(self, mark: int):
        while len(self.trail) > mark:
            vi = self.trail.pop()
            val = self.values[vi]
            self.values[vi] = -1
            self.fixed_obj -= self.obj[vi] * val
            if self.obj[vi] > 0 and self.group_of[vi] < 0:
                self.pos_unfixed += self.obj[vi]
            if self.knap_sat_of[vi] >= 0:
                if val == 1:
                    self.knap_committed[self.knap_sat_of[vi]] -= self.knap_weight[vi]
            elif self.obj[vi] > 0:
                self.non_knap_unfixed += self.obj[vi]
            for r, coef in self.var_rows[vi]:
                neg = coef if coef < 0 else 0
                pos = coef if coef > 0 else 0
                self.min_act[r] -= coef * val - neg
                self.max_act[r] -= coef * val - pos
        self.pending.clear()
        for r in range(self.m):
            self.in_pending[r] = False

    def _propagate(self) -> bool:
        values = self.values
        while self.pending:
            r = self.pending.pop()
            self.in_pending[r] = False
            if not self.enabled[r]:
                continue
            sense = self.sense[r]
            rhs = self.rhs[r]
            if sense != GE:
                if self.min_act[r] > rhs:
                    return False
                slack = rhs - self.min_act[r]
                for vi, coef in self.terms[r]:
                    if values[vi] < 0:
                        if coef > 0:
                            if coef > slack and not self._fix(vi, 0):
                                return False
                        elif -coef > slack:
                            if not self._fix(vi, 1):
                                return False
            if sense != LE:
                if self.max_act[r] < rhs:
                    return False
                surplus = self.max_act[r] - rhs
                for vi, coef in self.terms[r]:
                    if values[vi] < 0:
                        if coef > 0:
                            if coef > surplus and not self._fix(vi, 1):
                                return False
                        elif -coef > surplus:
                            if not self._fix(vi, 0):
                                return False
        return True

    def _bound(self) -> int:
        """Upper bound on the objective of any completion of the current node.

        Minimum of two admissible relaxations: mutual-exclusion groups
        (at most one assignment per order) and per-satellite fractional
        knapsacks over the total transmittable data volume.
        """
        values = self.values
        total = self.fixed_obj + self.pos_unfixed
        for members in self.groups:
            best = 0
            taken = False
            for vi in members:
                val = values[vi]
                if val < 0:
                    gain = self.obj[vi]
                    if gain > best:
                        best = gain
                elif val == 1:
                    taken = True
                    break
            if not taken and best > 0:
                total += best

        knap_total = self.fixed_obj + self.non_knap_unfixed
        for k, members in enumerate(self.knap_items):
            rem = self.knap_capacity[k] - self.knap_committed[k]
            if rem <= 0:
                continue
            gain = 0
            for vi in members:
                if values[vi] >= 0:
                    continue
                w = self.knap_weight[vi]
                if w <= rem:
                    gain += self.obj[vi]
                    rem -= w
                    if rem == 0:
                        break
                else:
                    gain += self.obj[vi] * rem // w
                    break
            knap_total += gain
        return min(total, knap_total)

    def _budget_check(self, cfg: SolverConfig, t0: float):
        if cfg.node_limit is not None and self.nodes > cfg.node_limit:
            raise ResourceLimitExceeded(f"node limit {cfg.node_limit} exceeded")
        if (cfg.time_limit_ms is not None and (self.nodes & _TIME_CHECK_MASK) == 0
                and (time.perf_counter() - t0) * 1000.0 > cfg.time_limit_ms):
            raise ResourceLimitExceeded(f"time limit {cfg.time_limit_ms} ms exceeded")

    @staticmethod
    def _next_unfixed(values, order, start):
        k = start
        n = len(order)
        while k < n and values[order[k]] >= 0:
            k += 1
        return k

    def _dfs_first(self, order: list[int], cfg: SolverConfig, t0: float) -> list[int] | None:
        """First satisfying assignment in 0-first DFS order, or None."""
        if not self._propagate():
            return None
        frames: list[tuple[int, int, int]] = []  # (var, tried, trail_mark)
        k = self._next_unfixed(self.values, order, 0)
        while True:
            if k >= len(order):
                return list(self.values)
            vi = order[k]
            mark = len(self.trail)
            self.nodes += 1
            self._budget_check(cfg, t0)
            ok = self._fix(vi, 0) and self._propagate()
            if ok:
                frames.append((vi, 0, mark))
                k = self._next_unfixed(self.values, order, k)
                continue
            self._undo_to(mark)
            ok = self._fix(vi, 1) and self._propagate()
            if ok:
                frames.append((vi, 1, mark))
                k = self._next_unfixed(self.values, order, k)
                continue
            self._undo_to(mark)
            # backtrack
            while frames:
                fvi, tried, fmark = frames.pop()
                self._undo_to(fmark)
                if tried == 0:
                    self.nodes += 1
                    self._budget_check(cfg, t0)
                    if self._fix(fvi, 1) and self._propagate():
                        frames.append((fvi, 1, fmark))
                        k = self._next_unfixed(self.values, order, 0)
                        break
                    self._undo_to(fmark)
            else:
                return None

    def _dfs_best_value(self, cfg: SolverConfig, t0: float) -> int | None:
        """Optimal objective value, or None when infeasible.

        Explores in greedy order (descending coefficient, preferred value
        first) so the first dive already lands near the optimum and the bound
        prunes aggressively.
        """
        if not self._propagate():
            return None
        order = self.greedy_order
        best: int | None = None
        frames: list[tuple[int, int, int]] = []
        k = self._next_unfixed(self.values, order, 0)

        def preferred(vi: int) -> int:
            return 1 if self.obj[vi] > 0 else 0

        while True:
            if best is not None and self._bound() <= best:
                descend = False
            elif k >= len(order):
                value = self.fixed_obj
                if best is None or value > best:
                    best = value
                descend = False
            else:
                descend = True

            if descend:
                vi = order[k]
                mark = len(self.trail)
                first = preferred(vi)
                self.nodes += 1
                self._budget_check(cfg, t0)
                if self._fix(vi, first) and self._propagate():
                    frames.append((vi, first, mark))
                    k = self._next_unfixed(self.values, order, k)
                    continue
                self._undo_to(mark)
                second = 1 - first
                self.nodes += 1
                self._budget_check(cfg, t0)
                if self._fix(vi, second) and self._propagate():
                    frames.append((vi, -1, mark))  # -1: both values consumed
                    k = self._next_unfixed(self.values, order, k)
                    continue
                self._undo_to(mark)

            # backtrack
            while frames:
                fvi, tried_first, fmark = frames.pop()
                self._undo_to(fmark)
                if tried_first >= 0:
                    second = 1 - tried_first
                    self.nodes += 1
                    self._budget_check(cfg, t0)
                    if self._fix(fvi, second) and self._propagate():
                        frames.append((fvi, -1, fmark))
                        k = self._next_unfixed(self.values, order, 0)
                        break
                    self._undo_to(fmark)
            else:
                return best

    def _dfs_lex_optimal(self, target: int, cfg: SolverConfig, t0: float) -> list[int]:
        """Lexicographically smallest assignment attaining the target value.

        Canonical-order 0-first DFS; subtrees that cannot reach the target
        are pruned, so the first complete assignment found is the canonical
        representative of the optimum.
        """
        self._undo_to(0)
        for r in range(self.m):
            if self.enabled[r]:
                self.pending.append(r)
                self.in_pending[r] = True
        if not self._propagate():  # cannot happen: target came from this model
            raise RuntimeError("model became infeasible during canonicalization")
        order = self.canonical_order
        frames: list[tuple[int, int, int]] = []
        k = self._next_unfixed(self.values, order, 0)
        while True:
            if self._bound() < target:
                descend = False
            elif k >= len(order):
                return list(self.values)
            else:
                descend = True

            if descend:
                vi = order[k]
                mark = len(self.trail)
                self.nodes += 1
                self._budget_check(cfg, t0)
                if self._fix(vi, 0) and self._propagate():
                    frames.append((vi, 0, mark))
                    k = self._next_unfixed(self.values, order, k)
                    continue
                self._undo_to(mark)
                self.nodes += 1
                self._budget_check(cfg, t0)
                if self._fix(vi, 1) and self._propagate():
                    frames.append((vi, 1, mark))
                    k = self._next_unfixed(self.values, order, k)
                    continue
                self._undo_to(mark)

            while frames:
                fvi, tried, fmark = frames.pop()
                self._undo_to(fmark)
                if tried == 0:
                    self.nodes += 1
                    self._budget_check(cfg, t0)
                    if self._fix(fvi, 1) and self._propagate():
                        frames.append((fvi, 1, fmark))
                        k = self._next_unfixed(self.values, order, 0)
                        break
                    self._undo_to(fmark)
            else:
                raise RuntimeError("optimal value unattainable during canonicalization")

    # -- public entry points -------------------------------------------------

    def feasibility_var_order(self, priority_vars: tuple[VarRef, ...]) -> list[int]:
        """Assignment variables first (they drive propagation), priority up front."""
        prio = [self.var_index[v] for v in priority_vars if v in self.var_index]
        seen = set(prio)
        rank = {"x": 0, "d": 1, "y": 2, "a": 3}
        rest = sorted((vi for vi in range(self.n) if vi not in seen),
                      key=lambda vi: (rank[self.model.vars[vi].kind], vi))
        return prio + rest

    def check(self, cfg: SolverConfig = SolverConfig(),
              disabled_ids: frozenset[str] = frozenset(),
              priority_vars: tuple[VarRef, ...] = ()) -> FeasibilityResult:
        t0 = time.perf_counter()
        disabled = {self.row_of_id[cid] for cid in disabled_ids}
        self._reset(disabled)
        order = self.feasibility_var_order(priority_vars)
        values = self._dfs_first(order, cfg, t0)
        wall = (time.perf_counter() - t0) * 1000.0
        stats = SolveStats(self.nodes, self.propagations, wall, cfg.seed)
        if values is None:
            return FeasibilityResult(False, None, stats)
        return FeasibilityResult(True, self._to_assignment(values), stats)

    def optimize(self, cfg: SolverConfig = SolverConfig()) -> SolveResult:
        """Optimal value plus the lexicographically smallest optimal assignment.

        Constraint-disjoint variable components are solved independently and
        merged: the objective is separable, so the concatenation of the
        per-component canonical optima is the global canonical optimum.
        """
        t0 = time.perf_counter()
        components = self._components()
        if len(components) > 1:
            return self._optimize_decomposed(components, cfg, t0)
        self._reset(set())
        best = self._dfs_best_value(cfg, t0)
        if best is None:
            wall = (time.perf_counter() - t0) * 1000.0
            return SolveResult(INFEASIBLE, None, 0,
                               SolveStats(self.nodes, self.propagations, wall, cfg.seed))
        values = self._dfs_lex_optimal(best, cfg, t0)
        wall = (time.perf_counter() - t0) * 1000.0
        stats = SolveStats(self.nodes, self.propagations, wall, cfg.seed)
        return SolveResult(OPTIMAL, self._to_assignment(values), best, stats)

    def _components(self) -> list[list[int]]:
        """Variable groups connected through shared constraints."""
        parent = list(range(self.n))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for row in self.terms:
            if len(row) < 2:
                continue
            root = find(row[0][0])
            for vi, _ in row[1:]:
                parent[find(vi)] = root
        comps: dict[int, list[int]] = {}
        for vi in range(self.n):
            comps.setdefault(find(vi), []).append(vi)
        return sorted(comps.values(), key=lambda vs: vs[0])

    def _optimize_decomposed(self, components: list[list[int]],
                             cfg: SolverConfig, t0: float) -> SolveResult:
        from .model import ScheduleModel

        merged: dict[VarRef, int] = {}
        total = 0
        nodes = propagations = 0
        for comp in components:
            comp_set = set(comp)
            comp_vars = tuple(self.model.vars[vi] for vi in comp)
            rows = tuple(c for c in self.model.constraints
                         if self.var_index[c.terms[0][0]] in comp_set)
            objective = tuple((v, coef) for v, coef in self.model.objective
                              if self.var_index[v] in comp_set)
            sub = ScheduleModel(vars=comp_vars, constraints=rows,
                                objective=objective, instance=self.model.instance)
            result = SolverCore(sub).optimize(cfg)
            nodes += result.stats.nodes
            propagations += result.stats.propagations
            if result.status == INFEASIBLE:
                wall = (time.perf_counter() - t0) * 1000.0
                return SolveResult(INFEASIBLE, None, 0,
                                   SolveStats(nodes, propagations, wall, cfg.seed))
            total += result.objective_milli
            merged.update(result.schedule)
        wall = (time.perf_counter() - t0) * 1000.0
        return SolveResult(OPTIMAL, merged, total,
                           SolveStats(nodes, propagations, wall, cfg.seed))

    def _to_assignment(self, values: list[int]) -> dict[VarRef, int]:
        return {var: values[vi] for vi, var in enumerate(self.model.vars)}


def solve(m: ScheduleModel, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Provably optimal assignment (or infeasibility) with exact objective."""
    return SolverCore(m).optimize(cfg)


def check_feasibility(m: ScheduleModel, cfg: SolverConfig = SolverConfig(),
                      *, disabled_ids: frozenset[str] = frozenset(),
                      priority_vars: tuple[VarRef, ...] = ()) -> FeasibilityResult:
    """Stop at the first satisfying assignment; no objective involved."""
    return SolverCore(m).check(cfg, disabled_ids, priority_vars)


def evaluate(m: ScheduleModel, assignment: dict[VarRef, int]) -> EvalResult:
    """Exact integer evaluation of a total assignment against every row."""
    missing = [v for v in m.vars if v not in assignment]
    if missing:
        raise PartialAssignmentError(
            f"assignment misses {len(missing)} variables (first: {missing[0].label()})")
    violated = []
    for c in m.constraints:
        lhs = sum(coef * assignment[v] for v, coef in c.terms)
        ok = (lhs <= c.rhs if c.sense == LE
              else lhs >= c.rhs if c.sense == GE
              else lhs == c.rhs)
        if not ok:
            violated.append(c.id)
    objective = sum(coef * assignment[v] for v, coef in m.objective)
    return EvalResult(not violated, objective, tuple(violated))


def constraint_lhs(c: TaggedConstraint, assignment: dict[VarRef, int]) -> int:
    return sum(coef * assignment[v] for v, coef in c.terms)


_BRUTE_CHUNK = 1 << 16


def brute_force_solve(m: ScheduleModel) -> SolveResult:
    """Reference oracle: exhaustive enumeration of all binary assignments.

    Only intended for tests; refuses models with more than 25 variables.
    """
    t0 = time.perf_counter()
    n = len(m.vars)
    if n > 25:
        raise ValueError(f"brute force limited to 25 variables, got {n}")

    obj = np.zeros(n, dtype=np.int64)
    var_index = m.var_index
    for var, coef in m.objective:
        obj[var_index[var]] += coef
    rows = np.zeros((len(m.constraints), n), dtype=np.int64)
    rhs = np.zeros(len(m.constraints), dtype=np.int64)
    senses = []
    for r, c in enumerate(m.constraints):
        for var, coef in c.terms:
            rows[r, var_index[var]] += coef
        rhs[r] = c.rhs
        senses.append(c.sense)

    best_value: int | None = None
    best_key: int | None = None
    best_bits: int | None = None
    # Lexicographic key: earlier variables weigh heavier.
    lex_weights = np.array([1 << (n - 1 - i) for i in range(n)], dtype=np.int64)

    total = 1 << n
    for lo in range(0, total, _BRUTE_CHUNK):
        hi = min(lo + _BRUTE_CHUNK, total)
        codes = np.arange(lo, hi, dtype=np.int64)
        bits = ((codes[:, None] >> np.arange(n, dtype=np.int64)) & 1)
        lhs = bits @ rows.T
        feasible = np.ones(hi - lo, dtype=bool)
        for r, sense in enumerate(senses):
            if sense == LE:
                feasible &= lhs[:, r] <= rhs[r]
            elif sense == GE:
                feasible &= lhs[:, r] >= rhs[r]
            else:
                feasible &= lhs[:, r] == rhs[r]
        if not feasible.any():
            continue
        values = bits[feasible] @ obj
        keys = bits[feasible] @ lex_weights
        codes_f = codes[feasible]
        top = values.max()
        if best_value is None or top > best_value or (
                top == best_value and keys[values == top].min() < best_key):
            mask = values == top
            sub_keys = keys[mask]
            pick = int(np.argmin(sub_keys))
            if best_value is None or top > best_value or int(sub_keys[pick]) < best_key:
                best_value = int(top)
                best_key = int(sub_keys[pick])
                best_bits = int(codes_f[mask][pick])

    wall = (time.perf_counter() - t0) * 1000.0
    stats = SolveStats(nodes=total, propagations=0, wall_ms=wall)
    if best_value is None:
        return SolveResult(INFEASIBLE, None, 0, stats)
    schedule = {var: (best_bits >> i) & 1 for i, var in enumerate(m.vars)}
    return SolveResult(OPTIMAL, schedule, best_value, stats)


def scheduled_orders(m: ScheduleModel, assignment: dict[VarRef, int]) -> list[str]:
    """Order ids with the scheduling indicator set."""
    return sorted(v.order_id for v in m.vars if v.kind == "a" and assignment[v] == 1)
