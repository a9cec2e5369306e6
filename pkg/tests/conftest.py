from __future__ import annotations

import pytest

from certsched.explain import Explainer
from certsched.model import ObjectiveWeights, build_model
from certsched.scenario import (GroundStation, Order, PassWindow, Satellite,
                                ScenarioSpec, apply_feasibility_filters,
                                canonical_scenario)

# Weights for the two-order toy: no priority steepness, no cloud/latency
# penalties, so the optimum is hand-checkable.
TINY2_WEIGHTS = ObjectiveWeights(alpha_milli=0, beta_milli=10, lambda_milli=100,
                                 mu_milli=0, eta_milli=0)


def tiny2_scenario() -> ScenarioSpec:
    """Two 1024 MB orders, one satellite filled to the brim by both."""
    return ScenarioSpec(
        name="tiny-2",
        horizon_s=1000,
        satellites=(Satellite("SAT-1", 2048, 0, 273067, 0),),
        stations=(GroundStation("GS-1"),),
        orders=(
            Order("o1", 10000, 1, 1024),
            Order("o2", 5000, 1, 1024),
        ),
        passes=(
            PassWindow("p1", "SAT-1", "imaging", 0, 60, order_candidates=("o1",)),
            PassWindow("p2", "SAT-1", "imaging", 100, 160, order_candidates=("o2",)),
            PassWindow("q1", "SAT-1", "downlink", 300, 360, station_id="GS-1",
                       tx_mb=2048),
        ),
    )


@pytest.fixture(scope="session")
def canonical_fi():
    return apply_feasibility_filters(canonical_scenario())


@pytest.fixture(scope="session")
def canonical_explainer(canonical_fi):
    return Explainer(canonical_fi)


@pytest.fixture(scope="session")
def canonical_answers(canonical_explainer):
    return canonical_explainer.all_why_not()


@pytest.fixture()
def tiny2_fi():
    return apply_feasibility_filters(tiny2_scenario())


@pytest.fixture()
def tiny2_model(tiny2_fi):
    return build_model(tiny2_fi, TINY2_WEIGHTS)
