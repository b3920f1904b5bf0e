import pytest

import crm_forge.auth as auth_mod
from crm_forge.auth import (
    Action,
    AuthService,
    Decision,
    authorize,
    make_credential_record,
    new_token,
    rbac_decision,
    verify_password,
)
from crm_forge.domain import EntityKind, Role
from crm_forge.errors import (
    EmailTaken,
    Forbidden,
    InvalidCredentials,
    InvalidToken,
    ValidationFailed,
    WeakPassword,
)
from crm_forge.seed import SEED_USERS, build_seed_fixture
from crm_forge.store import Store

ADMIN_EMAIL = SEED_USERS[0][2]
ADMIN_PASSWORD = SEED_USERS[0][6]


@pytest.fixture
def svc(seeded, clock):
    store, _ = seeded
    return AuthService(store, clock=clock.now)


class TestCredentials:
    def test_verify(self):
        record = make_credential_record("hunter2-is-weak")
        assert verify_password("hunter2-is-weak", record)
        assert not verify_password("hunter2-is-weak!", record)

    def test_equal_passwords_produce_different_records(self):
        a = make_credential_record("same-password")
        b = make_credential_record("same-password")
        assert a["hash"] != b["hash"] and a["salt"] != b["salt"]

    def test_record_never_contains_plaintext(self):
        record = make_credential_record("super-secret-phrase")
        assert "super-secret-phrase" not in str(record)

    def test_work_factor(self):
        assert make_credential_record("x" * 8)["iterations"] >= 100_000


class TestSignup:
    def test_fresh_email_defaults_to_viewer(self, svc):
        user = svc.signup("New Person", "new@x.test", "long-enough-pw")
        assert user.role == Role.VIEWER
        assert svc.store.get("user", user.id).email == "new@x.test"

    def test_taken_email(self, svc):
        with pytest.raises(EmailTaken):
            svc.signup("Dup", ADMIN_EMAIL, "long-enough-pw")
        with pytest.raises(EmailTaken):
            svc.signup("Dup", ADMIN_EMAIL.upper(), "long-enough-pw")

    def test_weak_password(self, svc):
        with pytest.raises(WeakPassword):
            svc.signup("Weak", "weak@x.test", "short")

    def test_bad_email_shape(self, svc):
        with pytest.raises(ValidationFailed):
            svc.signup("Bad", "not-an-email", "long-enough-pw")

    def test_signup_appends_activity(self, svc):
        before = svc.store.last_seq
        svc.signup("New Person", "new@x.test", "long-enough-pw")
        activities = svc.store.activities_after(before)
        assert len(activities) == 1
        assert activities[0].entity_kind == EntityKind.USER


class TestLogin:
    def test_success_creates_24h_session(self, svc):
        session, user = svc.login(ADMIN_EMAIL, ADMIN_PASSWORD)
        assert user.email == ADMIN_EMAIL
        assert session.expires_at.epoch_ms - session.created_at.epoch_ms == 24 * 3_600_000
        assert svc.authenticate(session.token).id == user.id

    def test_wrong_password_and_unknown_email_are_indistinguishable(self, svc):
        with pytest.raises(InvalidCredentials) as wrong_pw:
            svc.login(ADMIN_EMAIL, "not-the-password")
        with pytest.raises(InvalidCredentials) as unknown:
            svc.login("nobody@x.test", "not-the-password")
        assert str(wrong_pw.value) == str(unknown.value)
        assert wrong_pw.value.extensions == unknown.value.extensions

    def test_expired_session_never_authenticates(self, svc, clock):
        session, _ = svc.login(ADMIN_EMAIL, ADMIN_PASSWORD)
        clock.advance_hours(25)
        assert svc.authenticate(session.token) is None

    def test_logout_revokes(self, svc):
        session, _ = svc.login(ADMIN_EMAIL, ADMIN_PASSWORD)
        assert svc.logout(session.token)
        assert svc.authenticate(session.token) is None
        assert not svc.logout(session.token)

    def test_session_tokens_unique_over_many_logins(self, svc, monkeypatch):
        # Cheap hashing keeps 200 full logins fast; the 10^4 uniqueness run
        # exercises the token generator itself below.
        monkeypatch.setattr(auth_mod, "PBKDF2_ITERATIONS", 1_000)
        user = svc.signup("Fast", "fast@x.test", "long-enough-pw")
        tokens = {svc.login("fast@x.test", "long-enough-pw")[0].token for _ in range(200)}
        assert len(tokens) == 200
        assert user is not None

    def test_token_generator_unique_at_scale(self):
        tokens = {new_token() for _ in range(10_000)}
        assert len(tokens) == 10_000


class TestRecovery:
    def test_unknown_email_mints_nothing(self, svc):
        snap = svc.store.snapshot().to_bytes()
        svc.start_recovery("nobody@x.test")
        assert svc.outbox == []
        assert svc.store.snapshot().to_bytes() == snap

    def test_happy_path_rotates_credentials_and_sessions(self, svc):
        session, _ = svc.login(ADMIN_EMAIL, ADMIN_PASSWORD)
        svc.start_recovery(ADMIN_EMAIL)
        token = svc.outbox[-1].token
        svc.complete_recovery(token, "brand-new-password")
        with pytest.raises(InvalidCredentials):
            svc.login(ADMIN_EMAIL, ADMIN_PASSWORD)
        assert svc.authenticate(session.token) is None
        new_session, _ = svc.login(ADMIN_EMAIL, "brand-new-password")
        assert svc.authenticate(new_session.token) is not None

    def test_single_use(self, svc):
        svc.start_recovery(ADMIN_EMAIL)
        token = svc.outbox[-1].token
        svc.complete_recovery(token, "brand-new-password")
        with pytest.raises(InvalidToken):
            svc.complete_recovery(token, "another-password")

    def test_expired_token(self, svc, clock):
        svc.start_recovery(ADMIN_EMAIL)
        token = svc.outbox[-1].token
        clock.advance_hours(2)
        with pytest.raises(InvalidToken):
            svc.complete_recovery(token, "brand-new-password")

    def test_weak_replacement_password(self, svc):
        svc.start_recovery(ADMIN_EMAIL)
        with pytest.raises(WeakPassword):
            svc.complete_recovery(svc.outbox[-1].token, "short")

    def test_outbox_file_written_for_durable_store(self, tmp_path, clock):
        store = Store(tmp_path)
        build_seed_fixture(store)
        svc = AuthService(store, clock=clock.now)
        svc.start_recovery(ADMIN_EMAIL)
        lines = (tmp_path / "recovery-outbox.jsonl").read_text().splitlines()
        assert len(lines) == 1
        assert ADMIN_EMAIL in lines[0]


class TestUpdateProfile:
    def test_owner_edits_own_phone(self, svc, seeded):
        store, info = seeded
        owner = store.get("user", info.owner_id)
        updated = svc.update_profile(owner, phone="+1-555-9999")
        assert store.get("user", info.owner_id).phone == "+1-555-9999"
        assert updated.phone == "+1-555-9999"

    def test_non_admin_role_change_forbidden(self, svc, seeded):
        store, info = seeded
        viewer = store.get("user", info.viewer_id)
        with pytest.raises(Forbidden):
            svc.update_profile(viewer, role=Role.ADMIN)

    def test_email_collision(self, svc, seeded):
        store, info = seeded
        owner = store.get("user", info.owner_id)
        with pytest.raises(EmailTaken):
            svc.update_profile(owner, email=ADMIN_EMAIL.upper())

    def test_field_validation(self, svc, seeded):
        store, info = seeded
        owner = store.get("user", info.owner_id)
        with pytest.raises(ValidationFailed):
            svc.update_profile(owner, phone="9" * 33)


class TestRbac:
    def test_admin_allows_everything(self, seeded):
        store, info = seeded
        admin = store.get("user", info.admin_id)
        assert authorize(admin, Action.DELETE, EntityKind.COMPANY, "someone-else")

    def test_viewer_is_read_only(self, seeded):
        store, info = seeded
        viewer = store.get("user", info.viewer_id)
        assert authorize(viewer, Action.READ, EntityKind.DEAL)
        assert not authorize(viewer, Action.UPDATE, EntityKind.TASK, viewer.id)

    def test_sales_owner_owned_only(self, seeded):
        store, info = seeded
        owner = store.get("user", info.owner_id)
        assert authorize(owner, Action.UPDATE, EntityKind.COMPANY, owner.id)
        assert not authorize(owner, Action.UPDATE, EntityKind.COMPANY, info.admin_id)
        assert not authorize(owner, Action.UPDATE, EntityKind.COMPANY, None)

    def test_matrix_is_total(self):
        for role in Role:
            for action in Action:
                for kind in EntityKind:
                    assert rbac_decision(role, action, kind) in Decision


class TestNoPlaintextOnDisk:
    def test_scripted_run_leaves_no_password_bytes(self, tmp_path, clock):
        store = Store(tmp_path)
        build_seed_fixture(store)
        svc = AuthService(store, clock=clock.now)
        svc.login(ADMIN_EMAIL, ADMIN_PASSWORD)
        svc.signup("Probe", "probe@x.test", "probe-password-123")
        svc.start_recovery(ADMIN_EMAIL)
        svc.complete_recovery(svc.outbox[-1].token, "rotated-password-456")
        store.snapshot_save()
        store.close()

        secrets = [pw for *_, pw in SEED_USERS] + ["probe-password-123", "rotated-password-456"]
        for path in tmp_path.rglob("*"):
            if path.is_file():
                blob = path.read_bytes()
                for secret in secrets:
                    assert secret.encode() not in blob, f"{secret} leaked into {path.name}"
