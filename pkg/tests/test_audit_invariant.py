"""Every successful mutation appends exactly one activity, over a fuzzed
mix of valid, invalid, and forbidden calls."""

import asyncio
import random

import pytest

from crm_forge.api.hub import Connection
from crm_forge.api.service import CrmService, RequestContext
from crm_forge.errors import ApiError
from crm_forge.seed import build_seed_fixture
from crm_forge.store import Store

from conftest import ManualClock


class TestNoMutationWithoutAudit:
    def test_fuzzed_mutation_sequence_matches_activity_count(self):
        store = Store(None)
        info = build_seed_fixture(store)
        clock = ManualClock("2024-07-15T12:00:00.000Z")
        published = []
        service = CrmService(
            store, clock=clock.now, publisher=lambda a, task: published.append(a.seq)
        )
        admin_ctx = RequestContext(service, actor=store.get("user", info.admin_id))
        owner_ctx = RequestContext(service, actor=store.get("user", info.owner_id))
        viewer_ctx = RequestContext(service, actor=store.get("user", info.viewer_id))

        rng = random.Random(2468)
        base_seq = store.last_seq
        successes = 0

        def company_id():
            companies = store.all("company")
            return rng.choice(companies).id if companies else info.company_ids[0]

        def task_id():
            return rng.choice(store.all("task")).id

        operations = [
            lambda ctx: service.create_company(
                ctx, {"name": f"f-{rng.randint(0, 10**9)}", "salesOwnerId": info.owner_id}
            ),
            lambda ctx: service.create_company(ctx, {"name": " ", "salesOwnerId": info.owner_id}),
            lambda ctx: service.update_company(
                ctx, company_id(), {"industry": f"i{rng.randint(0, 99)}"}
            ),
            lambda ctx: service.delete_company(ctx, company_id()),
            lambda ctx: service.create_contact(
                ctx, {"companyId": company_id(), "name": f"c-{rng.randint(0, 99)}"}
            ),
            lambda ctx: service.create_deal(
                ctx,
                {"companyId": company_id(), "title": f"d-{rng.randint(0, 99)}",
                 "value": rng.randint(0, 10_000_00)},
            ),
            lambda ctx: service.create_deal(
                ctx, {"companyId": company_id(), "title": "bad", "value": -5}
            ),
            lambda ctx: service.create_task(ctx, {"title": f"t-{rng.randint(0, 10**9)}"}),
            lambda ctx: service.move_task(ctx, task_id(), rng.choice(info.stage_ids)),
            lambda ctx: service.delete_task(ctx, task_id()),
            lambda ctx: service.update_profile(ctx, phone=f"+1-555-{rng.randint(1000, 9999)}"),
        ]

        for _ in range(300):
            ctx = rng.choice([admin_ctx, admin_ctx, owner_ctx, viewer_ctx])
            op = rng.choice(operations)
            before = store.last_seq
            try:
                op(ctx)
            except ApiError:
                assert store.last_seq == before, "failed mutation advanced the audit log"
            else:
                successes += 1
                assert store.last_seq == before + 1, "successful mutation must append exactly one"

        new_activities = store.activities_after(base_seq, limit=10_000)
        assert len(new_activities) == successes
        assert published == [a.seq for a in new_activities]
        assert successes > 50  # the fuzz actually exercised the happy paths


class TestHubOverflowContract:
    def test_enqueue_reports_overflow_once_and_drops_frames(self):
        connection = Connection(user_id="u")
        connection.queue = asyncio.Queue(maxsize=2)
        closes = []
        connection.on_overflow = lambda: closes.append(True)

        assert connection.enqueue({"n": 1}) is True
        assert connection.enqueue({"n": 2}) is True
        assert connection.enqueue({"n": 3}) is False  # full: overflow trips
        assert connection.overflowed is True
        assert connection.enqueue({"n": 4}) is False  # stays dead, no re-fire
        assert closes == [True]
        assert connection.queue.qsize() == 2
