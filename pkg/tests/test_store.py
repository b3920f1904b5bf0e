import json
import random
import threading

import pytest

from crm_forge.domain import (
    Activity,
    ActivityVerb,
    Company,
    CompanyDraft,
    EntityKind,
    Timestamp,
    UserAccount,
    Role,
    new_id,
)
from crm_forge.auth import make_credential_record
from crm_forge.seed import ANCHOR, build_seed_fixture
from crm_forge.store import (
    AppendActivity,
    BadOperator,
    Delete,
    Filter,
    FilterOp,
    IntegrityViolation,
    Page,
    Put,
    SortDir,
    StorageFailure,
    Store,
    UnknownField,
    VersionMismatch,
    load_snapshot_file,
    store_from_snapshot_file,
)


def make_user(name="U", email=None, role=Role.SALES_OWNER):
    return UserAccount(
        id=new_id(),
        name=name,
        email=email or f"{new_id()}@x.test",
        role=role,
        password_hash=make_credential_record("irrelevant-pw", salt=b"0" * 16),
        created_at=ANCHOR,
    )


def make_company(owner_id, name="Acme", created_at=ANCHOR):
    return Company(
        id=new_id(),
        name=name,
        sales_owner_id=owner_id,
        created_at=created_at,
        updated_at=created_at,
    )


def activity_for(actor_id, entity_id, summary="did something"):
    return AppendActivity(
        Activity(
            seq=0,
            actor_id=actor_id,
            verb=ActivityVerb.CREATE,
            entity_kind=EntityKind.COMPANY,
            entity_id=entity_id,
            summary=summary,
            at=ANCHOR,
        )
    )


class TestCommit:
    def test_create_with_activity_advances_seq_by_one(self, mem_store):
        user = make_user()
        mem_store.commit([Put("user", user)])
        company = make_company(user.id)
        before = mem_store.last_seq
        seq = mem_store.commit([Put("company", company), activity_for(user.id, company.id)])
        assert seq == before + 1
        assert mem_store.get("company", company.id) == company

    def test_empty_txn_is_noop(self, mem_store):
        before = mem_store.last_seq
        assert mem_store.commit([]) == before
        assert mem_store.last_seq == before

    def test_delete_company_with_deals_rejected(self, seeded):
        store, info = seeded
        with pytest.raises(IntegrityViolation):
            store.commit([Delete("company", info.company_ids[0])])

    def test_cascade_in_same_txn_allowed(self, seeded):
        store, info = seeded
        cid = info.company_ids[0]
        txn = [Delete("deal", d.id) for d in store.all("deal") if d.company_id == cid]
        txn += [Delete("contact", c.id) for c in store.all("contact") if c.company_id == cid]
        txn.append(Delete("company", cid))
        store.commit(txn)
        assert store.get("company", cid) is None

    def test_failed_commit_leaves_state_untouched(self, seeded):
        store, info = seeded
        snap = store.snapshot().to_bytes()
        with pytest.raises(IntegrityViolation):
            store.commit([Delete("company", info.company_ids[0])])
        assert store.snapshot().to_bytes() == snap

    def test_company_requires_existing_non_viewer_owner(self, seeded):
        store, info = seeded
        with pytest.raises(IntegrityViolation):
            store.commit([Put("company", make_company(new_id()))])
        with pytest.raises(IntegrityViolation):
            store.commit([Put("company", make_company(info.viewer_id))])

    def test_duplicate_email_rejected(self, mem_store):
        first = make_user(email="same@x.test")
        second = make_user(email="SAME@x.test")
        mem_store.commit([Put("user", first)])
        with pytest.raises(IntegrityViolation):
            mem_store.commit([Put("user", second)])

    def test_duplicate_rank_within_stage_rejected(self, seeded):
        store, info = seeded
        tasks = [t for t in store.all("task") if t.stage_id == info.stage_ids[0]]
        clone = tasks[0]
        from crm_forge.domain import replace

        with pytest.raises(IntegrityViolation):
            store.commit([Put("task", replace(tasks[1], rank=clone.rank))])


class TestActivitiesAfter:
    def test_after_zero_returns_seed_creation_order(self, seeded):
        store, _ = seeded
        activities = store.activities_after(0, limit=100)
        assert [a.seq for a in activities] == list(range(1, 61))

    def test_after_max_is_empty(self, seeded):
        store, _ = seeded
        assert store.activities_after(store.last_seq, limit=10) == []

    def test_after_max_minus_one_limit_one(self, seeded):
        store, _ = seeded
        result = store.activities_after(store.last_seq - 1, limit=1)
        assert len(result) == 1
        assert result[0].seq == store.last_seq


class TestQuery:
    def test_contains_is_case_insensitive(self, seeded):
        store, _ = seeded
        rows, total = store.query("company", [Filter("name", FilterOp.CONTAINS, "walker")])
        assert total == 1
        assert rows[0].name == "Walker - Harris"

    def test_total_ignores_paging(self, seeded):
        store, _ = seeded
        rows, total = store.query("company", [], Page(limit=3))
        assert len(rows) == 3
        assert total == 7

    def test_gte_money_filter(self, seeded):
        store, _ = seeded
        rows, _ = store.query(
            "deal", [Filter("value", FilterOp.GTE, 50_000_000)], Page(limit=100)
        )
        titles = {r.title for r in rows}
        assert titles == {
            "Walker - Harris opportunity",
            "Friesen, Jaskolski and Gibson opportunity",
        }

    def test_unknown_field_and_bad_operator(self, seeded):
        store, _ = seeded
        with pytest.raises(UnknownField):
            store.query("company", [Filter("bogus", FilterOp.EQ, 1)])
        with pytest.raises(BadOperator):
            store.query("company", [Filter("name", FilterOp.GTE, "x")])
        with pytest.raises(UnknownField):
            store.query("company", [], Page(sort_field="bogus"))
        with pytest.raises(UnknownField):
            store.query("nonsense", [])

    def test_ties_break_by_id_ascending(self, mem_store):
        user = make_user()
        mem_store.commit([Put("user", user)])
        companies = [make_company(user.id, name="Same") for _ in range(5)]
        mem_store.commit([Put("company", c) for c in companies])
        expected = sorted(c.id for c in companies)
        for direction in (SortDir.ASC, SortDir.DESC):
            rows, _ = mem_store.query(
                "company", [], Page(limit=100, sort_field="name", sort_dir=direction)
            )
            assert [r.id for r in rows] == expected

    def test_random_queries_match_brute_force_oracle(self, mem_store):
        rng = random.Random(7)
        user = make_user()
        mem_store.commit([Put("user", user)])
        shadow = {}
        names = ["Alpha", "beta corp", "Gamma LLC", "walker co", "Delta"]
        for step in range(300):
            action = rng.random()
            if action < 0.6 or not shadow:
                company = make_company(
                    user.id,
                    name=rng.choice(names) + str(rng.randint(0, 9)),
                    created_at=ANCHOR.add_ms(rng.randint(0, 10_000) * 1000),
                )
                mem_store.commit([Put("company", company)])
                shadow[company.id] = company
            else:
                victim = rng.choice(list(shadow))
                mem_store.commit([Delete("company", victim)])
                del shadow[victim]

            needle = rng.choice(["alpha", "co", "x", "walker"])
            offset = rng.randint(0, 4)
            limit = rng.randint(1, 5)
            direction = rng.choice([SortDir.ASC, SortDir.DESC])
            rows, total = mem_store.query(
                "company",
                [Filter("name", FilterOp.CONTAINS, needle)],
                Page(offset=offset, limit=limit, sort_field="name", sort_dir=direction),
            )
            # Independent brute force over the shadow dict.
            expected = [c for c in shadow.values() if needle in c.name.lower()]
            expected.sort(key=lambda c: (c.name, c.id))
            if direction == SortDir.DESC:
                buckets = {}
                for c in expected:
                    buckets.setdefault(c.name, []).append(c)
                expected = [c for name in sorted(buckets, reverse=True) for c in buckets[name]]
            assert total == len(expected)
            assert [r.id for r in rows] == [c.id for c in expected[offset : offset + limit]]


class TestDurability:
    def test_wal_replay_reproduces_state(self, tmp_path):
        store = Store(tmp_path)
        info = build_seed_fixture(store)
        user = make_user()
        store.commit([Put("user", user)])
        store.close()

        reopened = Store(tmp_path)
        assert reopened.count("company") == 7
        assert reopened.get("user", user.id) is not None
        assert reopened.last_seq == info.last_seq
        assert reopened.snapshot().to_bytes() == store.snapshot().to_bytes()

    def test_wal_format_is_json_lines(self, tmp_path):
        store = Store(tmp_path)
        build_seed_fixture(store)
        store.close()
        lines = (tmp_path / "wal.log").read_text().splitlines()
        assert len(lines) == 1
        record = json.loads(lines[0])
        assert record["seq"] == 60
        assert isinstance(record["txn"], list)

    def test_snapshot_then_wal_tail(self, tmp_path):
        store = Store(tmp_path)
        build_seed_fixture(store)
        store.snapshot_save()
        assert (tmp_path / "wal.log").read_bytes() == b""
        user = make_user()
        store.commit([Put("user", user)])
        store.close()

        reopened = Store(tmp_path)
        assert reopened.count("user") == 4
        assert reopened.count("company") == 7

    def test_torn_final_wal_line_is_ignored(self, tmp_path):
        store = Store(tmp_path)
        build_seed_fixture(store)
        store.close()
        with open(tmp_path / "wal.log", "ab") as fh:
            fh.write(b'{"seq": 61, "txn": [{"op": "put"')
        reopened = Store(tmp_path)
        assert reopened.last_seq == 60

    def test_corrupt_interior_wal_line_fails(self, tmp_path):
        store = Store(tmp_path)
        build_seed_fixture(store)
        user = make_user()
        store.commit([Put("user", user)])
        store.close()
        lines = (tmp_path / "wal.log").read_bytes().split(b"\n")
        lines[0] = b"garbage"
        (tmp_path / "wal.log").write_bytes(b"\n".join(lines))
        with pytest.raises(StorageFailure):
            Store(tmp_path)

    def test_snapshot_round_trip_identity(self, seeded, tmp_path):
        store, _ = seeded
        path = store.snapshot_save(tmp_path / "export.json")
        loaded = store_from_snapshot_file(path)
        assert loaded.snapshot().to_bytes() == store.snapshot().to_bytes()
        rows, total = loaded.query("company", [Filter("name", FilterOp.CONTAINS, "walker")])
        assert total == 1 and rows[0].name == "Walker - Harris"

    def test_version_mismatch(self, seeded, tmp_path):
        store, _ = seeded
        path = store.snapshot_save(tmp_path / "export.json")
        doc = json.loads(path.read_text())
        doc["format_version"] = 2
        path.write_text(json.dumps(doc))
        with pytest.raises(VersionMismatch):
            load_snapshot_file(path)

    def test_corrupted_snapshot(self, tmp_path):
        path = tmp_path / "export.json"
        path.write_text("{not json")
        with pytest.raises(StorageFailure):
            load_snapshot_file(path)


class TestLinearizability:
    def test_concurrent_commits_serialize_in_seq_order(self, mem_store):
        user = make_user()
        mem_store.commit([Put("user", user)])
        errors = []

        def worker(i):
            try:
                for j in range(25):
                    company = make_company(user.id, name=f"w{i}-{j}")
                    mem_store.commit(
                        [Put("company", company), activity_for(user.id, company.id)]
                    )
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        activities = mem_store.activities_after(0, limit=10_000)
        seqs = [a.seq for a in activities]
        assert seqs == list(range(1, 201))
        assert mem_store.count("company") == 200
