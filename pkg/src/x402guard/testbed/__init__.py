from .mock import (
    INSTRUCTED_VALUES,
    RESOURCE_BODY,
    BrokenServer,
    Kind,
    MockFacilitator,
    MockServer,
    ServerBehaviour,
    SettlementRejected,
)
from .scenarios import SCENARIOS, SLACK_POLICY, StepClock, Testbed, build

__all__ = [
    "INSTRUCTED_VALUES",
    "RESOURCE_BODY",
    "SCENARIOS",
    "SLACK_POLICY",
    "BrokenServer",
    "Kind",
    "MockFacilitator",
    "MockServer",
    "ServerBehaviour",
    "SettlementRejected",
    "StepClock",
    "Testbed",
    "build",
]
