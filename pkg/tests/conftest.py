from __future__ import annotations

import pytest

from crm_forge.domain import Timestamp
from crm_forge.seed import build_seed_fixture
from crm_forge.store import Store


class ManualClock:
    """Settable clock for deterministic expiry and timestamp tests."""

    def __init__(self, start: str = "2024-01-01T00:00:00.000Z"):
        self.current = Timestamp.parse(start)

    def now(self) -> Timestamp:
        return self.current

    def advance_ms(self, delta_ms: int) -> None:
        self.current = self.current.add_ms(delta_ms)

    def advance_hours(self, hours: int) -> None:
        self.advance_ms(hours * 3_600_000)


@pytest.fixture
def mem_store() -> Store:
    return Store(None)


@pytest.fixture
def seeded():
    store = Store(None)
    info = build_seed_fixture(store)
    return store, info


@pytest.fixture
def clock() -> ManualClock:
    return ManualClock()
