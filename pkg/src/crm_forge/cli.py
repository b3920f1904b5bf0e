"""Operational entry point: run the server, seed/reset data, rebalance ranks,
export snapshots, render offline reports.

Exit codes: 2 port in use, 3 data dir unwritable, 4 seed on a non-empty
store, 5 lock held by another process. A ``.lock`` file with the owner PID
enforces one process per data dir; stale locks from dead PIDs are reclaimed.
Logs go to stderr as one JSON object per line.
"""

from __future__ import annotations

import errno
import json
import logging
import os
import socket
import sys
import time
from pathlib import Path

import click

from .config import LOG_LEVELS, load_config
from .domain import Timestamp
from .rank import evenly_spaced_ranks
from .report import write_report
from .seed import build_seed_fixture
from .store import Put, SeedOnNonEmptyStore, Store, replace_ranks_txn

EXIT_PORT_IN_USE = 2
EXIT_DATA_DIR_UNWRITABLE = 3
EXIT_SEED_ON_NON_EMPTY = 4
EXIT_LOCK_HELD = 5

LOCK_FILE = ".lock"

log = logging.getLogger("crm_forge.cli")


class JsonLogFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "ts": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime(record.created))
            + f".{int(record.msecs):03d}Z",
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
        }
        if record.exc_info:
            entry["exc"] = self.formatException(record.exc_info)
        return json.dumps(entry, ensure_ascii=False)


def configure_logging(level: str) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonLogFormatter())
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel({"WARN": "WARNING"}.get(level, level))


def ensure_writable(data_dir: Path) -> None:
    try:
        data_dir.mkdir(parents=True, exist_ok=True)
        probe = data_dir / ".write-probe"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        log.error(f"data dir {data_dir} is not writable: {exc}")
        sys.exit(EXIT_DATA_DIR_UNWRITABLE)


def _pid_alive(pid: int) -> bool:
    try:
        os.kill(pid, 0)
    except ProcessLookupError:
        return False
    except PermissionError:
        return True
    return True


def acquire_lock(data_dir: Path) -> Path:
    lock_path = data_dir / LOCK_FILE
    if lock_path.exists():
        try:
            holder = int(lock_path.read_text().strip())
        except ValueError:
            holder = None
        if holder is not None and holder != os.getpid() and _pid_alive(holder):
            log.error(f"data dir {data_dir} is locked by pid {holder}")
            sys.exit(EXIT_LOCK_HELD)
    lock_path.write_text(str(os.getpid()))
    return lock_path


def release_lock(lock_path: Path) -> None:
    try:
        lock_path.unlink()
    except OSError:
        pass


_COMMON_OPTIONS = [
    click.option("--data-dir", type=click.Path(), default=None, help="Store directory."),
    click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None),
]


def common_options(fn):
    for option in reversed(_COMMON_OPTIONS):
        fn = option(fn)
    return fn


@click.group()
def main() -> None:
    """crm-forge: CRM backend with a GraphQL API and real-time updates."""


@main.command()
@click.option("--port", type=int, default=None, help="TCP port (default 8080).")
@click.option("--seed-on-empty", is_flag=True, help="Seed the demo dataset when the store is empty.")
@click.option("--cors", default=None, help="Comma-separated allowed origins.")
@click.option("--max-depth", type=int, default=None, help="Maximum GraphQL query depth.")
@common_options
def serve(port, seed_on_empty, cors, max_depth, data_dir, log_level) -> None:
    """Run the HTTP+WebSocket server until interrupted."""
    config = load_config(
        port=port, data_dir=data_dir, seed_on_empty=seed_on_empty,
        cors=cors, max_depth=max_depth, log_level=log_level,
    )
    configure_logging(config.log_level)

    import uvicorn

    from .api import create_app

    try:
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind(("127.0.0.1", config.port))
        sock.listen(128)
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            log.error(f"port {config.port} is already in use")
            sys.exit(EXIT_PORT_IN_USE)
        raise
    ensure_writable(config.data_dir)
    lock_path = acquire_lock(config.data_dir)
    try:
        store = Store(config.data_dir)
        if config.seed_on_empty and store.is_empty:
            build_seed_fixture(store)
            log.info("seeded empty store with the demo dataset")
        app = create_app(
            store,
            cors_allowlist=config.cors_allowlist,
            max_query_depth=config.max_query_depth,
        )
        log.info(f"listening on 127.0.0.1:{config.port}, data dir {config.data_dir}")
        server = uvicorn.Server(
            uvicorn.Config(
                app,
                log_config=None,
                access_log=False,
                ws="auto",
                lifespan="off",
            )
        )

        # uvicorn re-raises the captured signal with pre-run handlers restored
        # after its graceful shutdown; these handlers absorb that re-raise so
        # control returns here for the final snapshot instead of a hard kill.
        import signal as signal_mod

        def request_shutdown(signum, frame):
            server.should_exit = True

        signal_mod.signal(signal_mod.SIGTERM, request_shutdown)
        signal_mod.signal(signal_mod.SIGINT, request_shutdown)

        server.run(sockets=[sock])
        # First signal lands here via uvicorn's graceful shutdown.
        store.snapshot_save()
        store.close()
        log.info("flushed WAL into snapshot, exiting")
    finally:
        release_lock(lock_path)
        sock.close()


def _open_locked_store(data_dir, log_level) -> tuple[Store, Path]:
    config = load_config(data_dir=data_dir, log_level=log_level)
    configure_logging(config.log_level)
    ensure_writable(config.data_dir)
    lock_path = acquire_lock(config.data_dir)
    return Store(config.data_dir), lock_path


@main.command()
@common_options
def seed(data_dir, log_level) -> None:
    """Populate an empty store with the deterministic demo dataset."""
    store, lock_path = _open_locked_store(data_dir, log_level)
    try:
        try:
            info = build_seed_fixture(store)
        except SeedOnNonEmptyStore:
            log.error("store is not empty; use `crm-forge reset` first")
            sys.exit(EXIT_SEED_ON_NON_EMPTY)
        log.info(f"seeded {len(info.company_ids)} companies, last seq {info.last_seq}")
        store.close()
    finally:
        release_lock(lock_path)


@main.command()
@click.option("--yes", is_flag=True, help="Confirm deletion of all store files.")
@common_options
def reset(yes, data_dir, log_level) -> None:
    """Delete the store files (WAL, snapshot, recovery outbox)."""
    config = load_config(data_dir=data_dir, log_level=log_level)
    configure_logging(config.log_level)
    if not yes:
        log.error("refusing to delete data without --yes")
        sys.exit(1)
    ensure_writable(config.data_dir)
    lock_path = acquire_lock(config.data_dir)
    try:
        removed = []
        for name in ("wal.log", "snapshot.json", "recovery-outbox.jsonl"):
            target = config.data_dir / name
            if target.exists():
                target.unlink()
                removed.append(name)
        log.info(f"removed {', '.join(removed) if removed else 'nothing'}")
    finally:
        release_lock(lock_path)


@main.command()
@click.option("--out", type=click.Path(), required=True, help="Snapshot output path.")
@common_options
def export(out, data_dir, log_level) -> None:
    """Write a deterministic snapshot of the store to --out."""
    store, lock_path = _open_locked_store(data_dir, log_level)
    try:
        path = store.snapshot_save(Path(out))
        store.close()
        log.info(f"exported snapshot to {path}")
    finally:
        release_lock(lock_path)


@main.command()
@common_options
def rebalance(data_dir, log_level) -> None:
    """Rewrite every task rank to short evenly spaced values, preserving order."""
    store, lock_path = _open_locked_store(data_dir, log_level)
    try:
        txn = replace_ranks_txn(store, evenly_spaced_ranks)
        if txn:
            store.commit(txn)
        log.info(f"rebalanced {len(txn)} task ranks")
        store.close()
    finally:
        release_lock(lock_path)


@main.command()
@click.option("--out", type=click.Path(), default="reports", help="Report output directory.")
@click.option("--months", type=int, default=12, help="Chart window in months (1-36).")
@common_options
def report(out, months, data_dir, log_level) -> None:
    """Render the deals chart PNG and CSV tables from the current store."""
    store, lock_path = _open_locked_store(data_dir, log_level)
    try:
        paths = write_report(store, Path(out), months, Timestamp.now())
        store.close()
        for path in paths:
            log.info(f"wrote {path}")
    finally:
        release_lock(lock_path)


if __name__ == "__main__":
    main()
