"""Scheduling instances: domain types, JSON I/O, feasibility filters, generators.

All quantities are integers (megabytes, milli-units, seconds) so downstream
arithmetic is exact and reproducible byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field, replace

from .errors import ScenarioParseError, ScenarioValidationError

CLOUD_THRESHOLD_DEFAULT_MILLI = 200

IMAGING = "imaging"
DOWNLINK = "downlink"

# Prefilter reason kinds
VISIBILITY = "visibility"
DEADLINE = "deadline"
CLOUD = "cloud"
SAT_UNAVAILABLE = "sat_unavailable"
STATION_UNAVAILABLE = "station_unavailable"


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Satellite:
    id: str
    storage_capacity_mb: int
    initial_storage_mb: int
    downlink_rate_kbps: int
    min_slew_s: int
    unavailable_windows: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class GroundStation:
    id: str
    unavailable_windows: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class Order:
    id: str
    value_milli: int
    priority: int
    data_mb: int
    deadline_s: int | None = None


@dataclass(frozen=True)
class PassWindow:
    id: str
    satellite_id: str
    kind: str  # "imaging" | "downlink"
    start_s: int
    end_s: int
    order_candidates: tuple[str, ...] = ()
    cloud_fraction_milli: int = 0
    station_id: str | None = None
    tx_mb: int = 0

    @property
    def duration_s(self) -> int:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    horizon_s: int
    satellites: tuple[Satellite, ...]
    stations: tuple[GroundStation, ...]
    orders: tuple[Order, ...]
    passes: tuple[PassWindow, ...]

    def satellite(self, sat_id: str) -> Satellite:
        return self._sat_index()[sat_id]

    def order(self, order_id: str) -> Order:
        return self._order_index()[order_id]

    def pass_window(self, pass_id: str) -> PassWindow:
        return self._pass_index()[pass_id]

    def _sat_index(self) -> dict[str, Satellite]:
        return {s.id: s for s in self.satellites}

    def _order_index(self) -> dict[str, Order]:
        return {o.id: o for o in self.orders}

    def _pass_index(self) -> dict[str, PassWindow]:
        return {p.id: p for p in self.passes}

    def imaging_passes(self) -> list[PassWindow]:
        return [p for p in self.passes if p.kind == IMAGING]

    def downlink_passes(self) -> list[PassWindow]:
        return [p for p in self.passes if p.kind == DOWNLINK]


def expected_tx_mb(rate_kbps: int, duration_s: int) -> int:
    """Transmittable volume of a downlink pass, rounded down (conservative)."""
    return rate_kbps * duration_s // 8000


# ---------------------------------------------------------------------------
# JSON I/O
# ---------------------------------------------------------------------------

_SAT_KEYS = {"id", "storage_capacity_mb", "initial_storage_mb",
             "downlink_rate_kbps", "min_slew_s", "unavailable_windows"}
_STATION_KEYS = {"id", "unavailable_windows"}
_ORDER_KEYS = {"id", "value_milli", "priority", "data_mb", "deadline_s"}
_PASS_KEYS_COMMON = {"id", "satellite_id", "kind", "start_s", "end_s"}
_PASS_KEYS_IMAGING = _PASS_KEYS_COMMON | {"order_candidates", "cloud_fraction_milli"}
_PASS_KEYS_DOWNLINK = _PASS_KEYS_COMMON | {"station_id", "tx_mb"}
_TOP_KEYS = {"name", "horizon_s", "satellites", "stations", "orders", "passes"}


def _require_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioValidationError(path, "must be an integer")
    return value


def _require_str(value, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioValidationError(path, "must be a non-empty string")
    return value


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ScenarioValidationError(f"{path}.{unknown[0]}", "unknown key")


def _parse_windows(value, path: str) -> tuple[tuple[int, int], ...]:
    if value is None:
        return ()
    if not isinstance(value, list):
        raise ScenarioValidationError(path, "must be a list of [start_s, end_s] pairs")
    out = []
    for i, w in enumerate(value):
        if not isinstance(w, list) or len(w) != 2:
            raise ScenarioValidationError(f"{path}[{i}]", "must be a [start_s, end_s] pair")
        a = _require_int(w[0], f"{path}[{i}][0]")
        b = _require_int(w[1], f"{path}[{i}][1]")
        if a >= b:
            raise ScenarioValidationError(f"{path}[{i}]", "window start must be before end")
        out.append((a, b))
    return tuple(out)


def scenario_from_dict(doc: dict) -> ScenarioSpec:
    if not isinstance(doc, dict):
        raise ScenarioValidationError("$", "document must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "$")
    for key in sorted(_TOP_KEYS):
        if key not in doc:
            raise ScenarioValidationError(key, "missing required key")

    name = _require_str(doc["name"], "name")
    horizon = _require_int(doc["horizon_s"], "horizon_s")
    if horizon <= 0:
        raise ScenarioValidationError("horizon_s", "must be positive")

    satellites = []
    for i, s in enumerate(doc["satellites"]):
        path = f"satellites[{i}]"
        _reject_unknown(s, _SAT_KEYS, path)
        sat = Satellite(
            id=_require_str(s.get("id"), f"{path}.id"),
            storage_capacity_mb=_require_int(s.get("storage_capacity_mb"), f"{path}.storage_capacity_mb"),
            initial_storage_mb=_require_int(s.get("initial_storage_mb"), f"{path}.initial_storage_mb"),
            downlink_rate_kbps=_require_int(s.get("downlink_rate_kbps"), f"{path}.downlink_rate_kbps"),
            min_slew_s=_require_int(s.get("min_slew_s"), f"{path}.min_slew_s"),
            unavailable_windows=_parse_windows(s.get("unavailable_windows"), f"{path}.unavailable_windows"),
        )
        if sat.storage_capacity_mb <= 0:
            raise ScenarioValidationError(f"{path}.storage_capacity_mb", "must be positive")
        if not 0 <= sat.initial_storage_mb <= sat.storage_capacity_mb:
            raise ScenarioValidationError(
                f"{path}.initial_storage_mb",
                "must lie within [0, storage_capacity_mb]")
        if sat.downlink_rate_kbps <= 0:
            raise ScenarioValidationError(f"{path}.downlink_rate_kbps", "must be positive")
        if sat.min_slew_s < 0:
            raise ScenarioValidationError(f"{path}.min_slew_s", "must be >= 0")
        satellites.append(sat)

    stations = []
    for i, s in enumerate(doc["stations"]):
        path = f"stations[{i}]"
        _reject_unknown(s, _STATION_KEYS, path)
        stations.append(GroundStation(
            id=_require_str(s.get("id"), f"{path}.id"),
            unavailable_windows=_parse_windows(s.get("unavailable_windows"), f"{path}.unavailable_windows"),
        ))

    orders = []
    for i, o in enumerate(doc["orders"]):
        path = f"orders[{i}]"
        _reject_unknown(o, _ORDER_KEYS, path)
        deadline = o.get("deadline_s")
        if deadline is not None:
            deadline = _require_int(deadline, f"{path}.deadline_s")
        order = Order(
            id=_require_str(o.get("id"), f"{path}.id"),
            value_milli=_require_int(o.get("value_milli"), f"{path}.value_milli"),
            priority=_require_int(o.get("priority"), f"{path}.priority"),
            data_mb=_require_int(o.get("data_mb"), f"{path}.data_mb"),
            deadline_s=deadline,
        )
        if order.value_milli <= 0:
            raise ScenarioValidationError(f"{path}.value_milli", "must be positive")
        if order.priority < 1:
            raise ScenarioValidationError(f"{path}.priority", "must be >= 1")
        if order.data_mb <= 0:
            raise ScenarioValidationError(f"{path}.data_mb", "must be positive")
        orders.append(order)

    passes = []
    for i, p in enumerate(doc["passes"]):
        path = f"passes[{i}]"
        kind = _require_str(p.get("kind"), f"{path}.kind")
        if kind == IMAGING:
            _reject_unknown(p, _PASS_KEYS_IMAGING, path)
            candidates = p.get("order_candidates")
            if not isinstance(candidates, list) or not candidates:
                raise ScenarioValidationError(
                    f"{path}.order_candidates", "imaging pass needs at least one candidate order")
            pw = PassWindow(
                id=_require_str(p.get("id"), f"{path}.id"),
                satellite_id=_require_str(p.get("satellite_id"), f"{path}.satellite_id"),
                kind=IMAGING,
                start_s=_require_int(p.get("start_s"), f"{path}.start_s"),
                end_s=_require_int(p.get("end_s"), f"{path}.end_s"),
                order_candidates=tuple(_require_str(c, f"{path}.order_candidates[{j}]")
                                       for j, c in enumerate(candidates)),
                cloud_fraction_milli=_require_int(p.get("cloud_fraction_milli", 0),
                                                  f"{path}.cloud_fraction_milli"),
            )
            if not 0 <= pw.cloud_fraction_milli <= 1000:
                raise ScenarioValidationError(f"{path}.cloud_fraction_milli", "must lie in [0, 1000]")
        elif kind == DOWNLINK:
            _reject_unknown(p, _PASS_KEYS_DOWNLINK, path)
            pw = PassWindow(
                id=_require_str(p.get("id"), f"{path}.id"),
                satellite_id=_require_str(p.get("satellite_id"), f"{path}.satellite_id"),
                kind=DOWNLINK,
                start_s=_require_int(p.get("start_s"), f"{path}.start_s"),
                end_s=_require_int(p.get("end_s"), f"{path}.end_s"),
                station_id=_require_str(p.get("station_id"), f"{path}.station_id"),
                tx_mb=_require_int(p.get("tx_mb"), f"{path}.tx_mb"),
            )
        else:
            raise ScenarioValidationError(f"{path}.kind", "must be 'imaging' or 'downlink'")
        if not 0 <= pw.start_s < pw.end_s <= horizon:
            raise ScenarioValidationError(
                f"{path}.start_s", "pass window must satisfy 0 <= start < end <= horizon_s")
        passes.append(pw)

    spec = ScenarioSpec(
        name=name, horizon_s=horizon,
        satellites=tuple(satellites), stations=tuple(stations),
        orders=tuple(orders), passes=tuple(passes),
    )
    _validate_cross_references(spec)
    return spec


def _validate_cross_references(spec: ScenarioSpec) -> None:
    for label, ids in (("satellites", [s.id for s in spec.satellites]),
                       ("stations", [s.id for s in spec.stations]),
                       ("orders", [o.id for o in spec.orders]),
                       ("passes", [p.id for p in spec.passes])):
        seen: set[str] = set()
        for i, item_id in enumerate(ids):
            if item_id in seen:
                raise ScenarioValidationError(f"{label}[{i}].id", f"duplicate id {item_id!r}")
            seen.add(item_id)

    sat_ids = {s.id for s in spec.satellites}
    station_ids = {s.id for s in spec.stations}
    order_ids = {o.id for o in spec.orders}
    for i, p in enumerate(spec.passes):
        if p.satellite_id not in sat_ids:
            raise ScenarioValidationError(
                f"passes[{i}].satellite_id", f"unknown satellite {p.satellite_id!r}")
        if p.kind == DOWNLINK:
            if p.station_id not in station_ids:
                raise ScenarioValidationError(
                    f"passes[{i}].station_id", f"unknown station {p.station_id!r}")
            sat = spec.satellite(p.satellite_id)
            expected = expected_tx_mb(sat.downlink_rate_kbps, p.duration_s)
            if p.tx_mb != expected:
                raise ScenarioValidationError(
                    f"passes[{i}].tx_mb",
                    f"inconsistent with link rate x duration (expected {expected})")
        else:
            for j, oid in enumerate(p.order_candidates):
                if oid not in order_ids:
                    raise ScenarioValidationError(
                        f"passes[{i}].order_candidates[{j}]", f"unknown order {oid!r}")


def load_scenario(text: str | bytes) -> ScenarioSpec:
    """Parse and fully validate a scenario JSON document."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"malformed scenario document: {exc}") from exc
    return scenario_from_dict(doc)


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    return {
        "name": spec.name,
        "horizon_s": spec.horizon_s,
        "satellites": [
            {
                "id": s.id,
                "storage_capacity_mb": s.storage_capacity_mb,
                "initial_storage_mb": s.initial_storage_mb,
                "downlink_rate_kbps": s.downlink_rate_kbps,
                "min_slew_s": s.min_slew_s,
                "unavailable_windows": [list(w) for w in s.unavailable_windows],
            }
            for s in spec.satellites
        ],
        "stations": [
            {"id": s.id, "unavailable_windows": [list(w) for w in s.unavailable_windows]}
            for s in spec.stations
        ],
        "orders": [
            {
                "id": o.id,
                "value_milli": o.value_milli,
                "priority": o.priority,
                "data_mb": o.data_mb,
                "deadline_s": o.deadline_s,
            }
            for o in spec.orders
        ],
        "passes": [
            (
                {
                    "id": p.id,
                    "satellite_id": p.satellite_id,
                    "kind": p.kind,
                    "start_s": p.start_s,
                    "end_s": p.end_s,
                    "order_candidates": list(p.order_candidates),
                    "cloud_fraction_milli": p.cloud_fraction_milli,
                }
                if p.kind == IMAGING
                else {
                    "id": p.id,
                    "satellite_id": p.satellite_id,
                    "kind": p.kind,
                    "start_s": p.start_s,
                    "end_s": p.end_s,
                    "station_id": p.station_id,
                    "tx_mb": p.tx_mb,
                }
            )
            for p in spec.passes
        ],
    }


def canonical_dumps(data) -> str:
    """Canonical JSON: sorted keys, no insignificant whitespace."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def dumps_scenario(spec: ScenarioSpec) -> str:
    return canonical_dumps(scenario_to_dict(spec))


# ---------------------------------------------------------------------------
# Feasibility filters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrefilterReason:
    kind: str  # visibility | deadline | cloud | sat_unavailable | station_unavailable
    pass_id: str | None
    detail: str


@dataclass(frozen=True)
class FilteredInstance:
    """Scenario plus the admissible (order, imaging pass) variable space.

    ``excluded_pass_ids`` records downlink passes pruned for station
    unavailability; they carry no variables downstream.
    """

    scenario: ScenarioSpec
    cloud_threshold_milli: int
    admissible_pairs: frozenset[tuple[str, str]]
    prefilter_log: dict[str, tuple[PrefilterReason, ...]]
    excluded_pass_ids: frozenset[str] = frozenset()

    def candidates_of(self, order_id: str) -> list[PassWindow]:
        """Admissible imaging passes of one order, sorted by pass id."""
        ids = sorted(p for (o, p) in self.admissible_pairs if o == order_id)
        return [self.scenario.pass_window(pid) for pid in ids]

    def active_passes(self) -> list[PassWindow]:
        """Passes that survive into the model (pruned variable space)."""
        live_imaging = {p for (_, p) in self.admissible_pairs}
        out = []
        for p in self.scenario.passes:
            if p.kind == IMAGING and p.id in live_imaging:
                out.append(p)
            elif p.kind == DOWNLINK and p.id not in self.excluded_pass_ids:
                out.append(p)
        return out

    def prefiltered_orders(self) -> list[str]:
        """Orders with no admissible candidate left."""
        with_pairs = {o for (o, _) in self.admissible_pairs}
        return [o.id for o in self.scenario.orders if o.id not in with_pairs]


def _overlaps(start: int, end: int, windows: tuple[tuple[int, int], ...]) -> tuple[int, int] | None:
    for ws, we in windows:
        if start < we and ws < end:
            return (ws, we)
    return None


def apply_feasibility_filters(
    scenario: ScenarioSpec,
    cloud_threshold_milli: int = CLOUD_THRESHOLD_DEFAULT_MILLI,
    *,
    pass_threshold_overrides: dict[str, int] | None = None,
) -> FilteredInstance:
    """Prune the (order, pass) variable space before model construction.

    A pair is removed iff the pass ends after the order's deadline, the pass
    cloud fraction exceeds the (possibly per-pass overridden) threshold, or
    the satellite is unavailable during the pass. Downlink passes are removed
    when their ground station is unavailable. Every removal is logged; orders
    left with no candidate get an additional ``visibility`` entry.
    """
    if not 0 <= cloud_threshold_milli <= 1000:
        raise ScenarioValidationError("cloud_threshold_milli", "must lie in [0, 1000]")
    overrides = pass_threshold_overrides or {}

    log: dict[str, list[PrefilterReason]] = {o.id: [] for o in scenario.orders}
    admissible: set[tuple[str, str]] = set()

    for p in scenario.imaging_passes():
        sat = scenario.satellite(p.satellite_id)
        threshold = overrides.get(p.id, cloud_threshold_milli)
        sat_window = _overlaps(p.start_s, p.end_s, sat.unavailable_windows)
        for oid in p.order_candidates:
            order = scenario.order(oid)
            if order.deadline_s is not None and p.end_s > order.deadline_s:
                log[oid].append(PrefilterReason(
                    DEADLINE, p.id,
                    f"pass ends at {p.end_s}s, after deadline {order.deadline_s}s"))
            elif p.cloud_fraction_milli > threshold:
                log[oid].append(PrefilterReason(
                    CLOUD, p.id,
                    f"cloud fraction {p.cloud_fraction_milli} exceeds threshold {threshold}"))
            elif sat_window is not None:
                log[oid].append(PrefilterReason(
                    SAT_UNAVAILABLE, p.id,
                    f"satellite {sat.id} unavailable during [{sat_window[0]}, {sat_window[1]}]"))
            else:
                admissible.add((oid, p.id))

    excluded = set()
    for p in scenario.downlink_passes():
        station = next(s for s in scenario.stations if s.id == p.station_id)
        window = _overlaps(p.start_s, p.end_s, station.unavailable_windows)
        if window is not None:
            excluded.add(p.id)

    for order in scenario.orders:
        if not any(o == order.id for (o, _) in admissible):
            log[order.id].append(PrefilterReason(
                VISIBILITY, None, "no admissible imaging pass remains"))

    return FilteredInstance(
        scenario=scenario,
        cloud_threshold_milli=cloud_threshold_milli,
        admissible_pairs=frozenset(admissible),
        prefilter_log={k: tuple(v) for k, v in log.items()},
        excluded_pass_ids=frozenset(excluded),
    )


# ---------------------------------------------------------------------------
# Synthetic generator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorParams:
    """Density knobs for synthetic instances.

    The first ``no_downlink_count`` satellites never see a ground station
    (think inclined orbits missing a polar site), and orders are placed on
    satellites by a nested uniform draw, so growing the constellation strictly
    shrinks the set of orders stranded on station-blind spacecraft: sweeps
    over the constellation size show nonincreasing certificate counts by
    construction. All of an order's imaging opportunities sit on a single
    satellite (repeat ground-track passes), inside the window covered by
    ground contacts.
    """

    n_satellites: int
    n_stations: int
    n_orders: int
    horizon_s: int = 43200
    candidates_per_order: int = 2
    data_min_mb: int = 1100
    data_max_mb: int = 2300
    capacity_mb: int = 8192
    initial_fill_milli: int = 300
    downlink_rate_kbps: int = 15000
    downlinks_per_satellite: int = 3
    downlink_duration_s: int = 600
    min_slew_s: int = 150
    cloudy_per_mille: int = 400
    deadline_per_mille: int = 150
    no_downlink_count: int = 2
    imaging_window_per_mille: int = 700  # imaging confined to this horizon prefix


def _derive_rng(seed: int, *parts) -> random.Random:
    key = f"{seed}|" + "|".join(str(p) for p in parts)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def generate_synthetic(params: GeneratorParams, seed: int) -> ScenarioSpec:
    """Deterministic synthetic instance for the given (params, seed)."""
    if min(params.n_satellites, params.n_stations, params.n_orders) < 1:
        raise ScenarioValidationError("params", "all counts must be >= 1")

    horizon = params.horizon_s
    satellites = []
    for i in range(params.n_satellites):
        satellites.append(Satellite(
            id=f"SAT-{i + 1:02d}",
            storage_capacity_mb=params.capacity_mb,
            initial_storage_mb=params.capacity_mb * params.initial_fill_milli // 1000,
            downlink_rate_kbps=params.downlink_rate_kbps,
            min_slew_s=params.min_slew_s,
        ))
    stations = [GroundStation(id=f"GS-{i + 1:02d}") for i in range(params.n_stations)]
    n_blind = max(0, min(params.no_downlink_count, params.n_satellites - 1))

    orders = []
    for i in range(params.n_orders):
        rng = _derive_rng(seed, "order", i)
        deadline = None
        if rng.randrange(1000) < params.deadline_per_mille:
            deadline = rng.randint(horizon // 2, horizon)
        orders.append(Order(
            id=f"ORD-{i + 1:03d}",
            value_milli=rng.randint(2000, 12000),
            priority=rng.choice([1, 1, 1, 2, 2, 3]),
            data_mb=rng.randint(params.data_min_mb, params.data_max_mb),
            deadline_s=deadline,
        ))

    passes: list[PassWindow] = []
    n_img = 0
    img_horizon = horizon * params.imaging_window_per_mille // 1000
    for i, order in enumerate(orders):
        # Nested satellite draw: the same u lands on a lower index as the
        # constellation grows, so station-blind placement shrinks monotonically.
        u = _derive_rng(seed, "sat", i).random()
        sat_idx = min(params.n_satellites - 1, int(u * params.n_satellites))
        for j in range(params.candidates_per_order):
            rng = _derive_rng(seed, "pass", i, j)
            duration = rng.randint(120, 300)
            latest = img_horizon - duration - 1
            if order.deadline_s is not None:
                latest = min(latest, order.deadline_s - duration)
            start = rng.randint(0, max(1, latest))
            cloudy = j > 0 and rng.randrange(1000) < params.cloudy_per_mille
            n_img += 1
            passes.append(PassWindow(
                id=f"P-IMG-{n_img:04d}",
                satellite_id=satellites[sat_idx].id,
                kind=IMAGING,
                start_s=start,
                end_s=start + duration,
                order_candidates=(order.id,),
                cloud_fraction_milli=rng.randint(250, 900) if cloudy else rng.randint(0, 150),
            ))

    n_dl = 0
    for i, sat in enumerate(satellites):
        if i < n_blind:
            continue
        for j in range(params.downlinks_per_satellite):
            start = horizon * (j + 1) // (params.downlinks_per_satellite + 1) + 37 * i
            start = min(start, horizon - params.downlink_duration_s - 1)
            n_dl += 1
            passes.append(PassWindow(
                id=f"P-DL-{n_dl:04d}",
                satellite_id=sat.id,
                kind=DOWNLINK,
                start_s=start,
                end_s=start + params.downlink_duration_s,
                station_id=stations[(i + j) % params.n_stations].id,
                tx_mb=expected_tx_mb(params.downlink_rate_kbps, params.downlink_duration_s),
            ))

    return ScenarioSpec(
        name=f"synthetic-s{params.n_satellites}-o{params.n_orders}-seed{seed}",
        horizon_s=horizon,
        satellites=tuple(satellites),
        stations=tuple(stations),
        orders=tuple(orders),
        passes=tuple(passes),
    )


# ---------------------------------------------------------------------------
# Canonical embedded scenario
# ---------------------------------------------------------------------------

def canonical_scenario() -> ScenarioSpec:
    """Handcrafted single-station stress instance.

    Three spacecraft share one ground station. S1 and S2 never see it (zero
    downlink passes); S3 has exactly four. S3 starts 80% full (1638 MB free)
    while every order needs 1843 MB, so imaging on S3 is only possible after
    a downlink has freed space. The pass geometry is locked against the
    verification suite: solving yields exactly 1 scheduled order, 2 optimality
    trade-offs, and 7 constraint-infeasible orders (2 blocked by storage
    alone, 3 by a storage+downlink conjunction, 2 by missing downlink alone).
    """
    horizon = 43200
    rate = 15000
    slew = 150

    satellites = (
        Satellite("S1", 8192, 1024, rate, slew),
        Satellite("S2", 8192, 1024, rate, slew),
        Satellite("S3", 8192, 6554, rate, slew),
    )
    stations = (GroundStation("GS-1"),)

    data = 1843
    orders = (
        Order("ORD-01", 9500, 1, data),   # conjunction: S1 + early S3
        Order("ORD-02", 9000, 2, data),   # scheduled via the post-relief window
        Order("ORD-03", 4500, 1, data),   # storage-only, early S3 near the first downlink
        Order("ORD-04", 4200, 1, data),   # storage-only
        Order("ORD-05", 7000, 1, data),   # trade-off
        Order("ORD-06", 4800, 1, data),   # conjunction
        Order("ORD-07", 3500, 1, data),   # no-downlink only (S1)
        Order("ORD-08", 6000, 1, data),   # trade-off
        Order("ORD-09", 4600, 1, data),   # conjunction
        Order("ORD-10", 3300, 1, data),   # no-downlink only (S2)
    )

    def img(pid, sat, start, end, order, cloud=0):
        return PassWindow(pid, sat, IMAGING, start, end,
                          order_candidates=(order,), cloud_fraction_milli=cloud)

    def dl(pid, start, end):
        return PassWindow(pid, "S3", DOWNLINK, start, end,
                          station_id="GS-1", tx_mb=expected_tx_mb(rate, end - start))

    passes = (
        # --- admissible imaging, S1 (no station access) -------------------
        img("P-S1-01", "S1", 1000, 1300, "ORD-01"),
        img("P-S1-02", "S1", 1400, 1700, "ORD-06"),
        img("P-S1-03", "S1", 1440, 1740, "ORD-09"),
        img("P-S1-04", "S1", 4000, 4300, "ORD-07"),
        img("P-S1-05", "S1", 4400, 4700, "ORD-02"),
        # --- admissible imaging, S2 (no station access) -------------------
        img("P-S2-01", "S2", 2000, 2300, "ORD-10"),
        img("P-S2-02", "S2", 2600, 2900, "ORD-05"),
        # --- admissible imaging, S3 ---------------------------------------
        img("P-S3-01", "S3", 1400, 1700, "ORD-01"),
        img("P-S3-02", "S3", 1900, 2200, "ORD-06"),
        img("P-S3-03", "S3", 2600, 2900, "ORD-09"),
        img("P-S3-04", "S3", 3690, 3860, "ORD-03"),
        img("P-S3-05", "S3", 3870, 3990, "ORD-04"),
        img("P-S3-06", "S3", 5300, 5600, "ORD-02"),
        img("P-S3-07", "S3", 5900, 6200, "ORD-05"),
        img("P-S3-08", "S3", 6500, 6800, "ORD-08"),
        # --- S3 downlink contacts ------------------------------------------
        dl("P-DL-01", 4000, 5000),
        dl("P-DL-02", 7200, 8200),
        dl("P-DL-03", 8600, 9600),
        dl("P-DL-04", 10000, 11000),
        # --- weather-blocked imaging opportunities (above 20% cloud) ------
        img("P-S1-51", "S1", 6000, 6300, "ORD-01", 450),
        img("P-S1-52", "S1", 6600, 6900, "ORD-06", 300),
        img("P-S1-53", "S1", 7200, 7500, "ORD-09", 550),
        img("P-S1-54", "S1", 8000, 8300, "ORD-07", 250),
        img("P-S1-55", "S1", 8600, 8900, "ORD-10", 700),
        img("P-S1-56", "S1", 9400, 9700, "ORD-02", 350),
        img("P-S1-57", "S1", 10200, 10500, "ORD-05", 900),
        img("P-S2-51", "S2", 4000, 4300, "ORD-10", 300),
        img("P-S2-52", "S2", 5000, 5300, "ORD-08", 400),
        img("P-S2-53", "S2", 6000, 6300, "ORD-05", 250),
        img("P-S2-54", "S2", 7000, 7300, "ORD-06", 600),
        img("P-S2-55", "S2", 8000, 8300, "ORD-09", 320),
        img("P-S3-51", "S3", 300, 600, "ORD-03", 250),
        img("P-S3-52", "S3", 700, 950, "ORD-04", 400),
        img("P-S3-53", "S3", 1000, 1250, "ORD-03", 800),
        img("P-S3-54", "S3", 11500, 11800, "ORD-01", 300),
        img("P-S3-55", "S3", 12000, 12300, "ORD-08", 500),
        img("P-S3-56", "S3", 12500, 12800, "ORD-02", 260),
        img("P-S3-57", "S3", 13000, 13300, "ORD-07", 275),
    )

    return ScenarioSpec(
        name="canonical-single-station",
        horizon_s=horizon,
        satellites=satellites,
        stations=stations,
        orders=orders,
        passes=passes,
    )
