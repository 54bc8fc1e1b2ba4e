"""Single-file SQLite persistence for widget collections.

One store file holds any number of simulation contexts across six tables:
tb_simulation, tb_parameter, tb_dataarray, tb_parameterwidget, tb_datawidget
and tb_commentwidget.  A fresh store starts with the default context "N.N.".
Values are serialized as canonical JSON text so files stay portable across
locales.
"""

from __future__ import annotations

import json
import os
import sqlite3

from filelock import FileLock, Timeout

from .model import (
    DEFAULT_CONTEXT,
    CommentWidgetDef,
    DataArrayDef,
    DataWidgetDef,
    ParameterDef,
    ParameterWidgetDef,
    SimulationContext,
    WidgetCollection,
)

SCHEMA_VERSION = 1

TABLES = (
    "tb_simulation",
    "tb_parameter",
    "tb_dataarray",
    "tb_parameterwidget",
    "tb_datawidget",
    "tb_commentwidget",
)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS tb_simulation (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    name TEXT NOT NULL UNIQUE,
    app_name TEXT NOT NULL DEFAULT ''
);
CREATE TABLE IF NOT EXISTS tb_parameter (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    name TEXT NOT NULL,
    kind TEXT NOT NULL,
    value TEXT NOT NULL,
    list_index INTEGER NOT NULL DEFAULT -1,
    UNIQUE(sim_id, name, list_index)
);
CREATE TABLE IF NOT EXISTS tb_dataarray (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    name TEXT NOT NULL,
    kind TEXT NOT NULL,
    UNIQUE(sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_parameterwidget (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    kind TEXT NOT NULL,
    name TEXT NOT NULL,
    x INTEGER NOT NULL DEFAULT 0,
    y INTEGER NOT NULL DEFAULT 0,
    config TEXT NOT NULL DEFAULT '{}',
    target TEXT NOT NULL DEFAULT '',
    UNIQUE(sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_datawidget (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    kind TEXT NOT NULL,
    name TEXT NOT NULL,
    x INTEGER NOT NULL DEFAULT 0,
    y INTEGER NOT NULL DEFAULT 0,
    config TEXT NOT NULL DEFAULT '{}',
    target TEXT NOT NULL DEFAULT '',
    UNIQUE(sim_id, name)
);
CREATE TABLE IF NOT EXISTS tb_commentwidget (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    sim_id INTEGER NOT NULL REFERENCES tb_simulation(id) ON DELETE CASCADE,
    name TEXT NOT NULL,
    x INTEGER NOT NULL DEFAULT 0,
    y INTEGER NOT NULL DEFAULT 0,
    body TEXT NOT NULL DEFAULT '',
    UNIQUE(sim_id, name)
);
"""


class StoreError(Exception):
    pass


class StoreCorrupt(StoreError):
    pass


class SchemaMismatch(StoreError):
    pass


class StoreLocked(StoreError):
    pass


class NoSuchContext(StoreError):
    pass


class ContextExists(StoreError):
    pass


class WriteFailed(StoreError):
    pass


def default_db_path(app_source_path: str, optional_cli_arg: str | None = None) -> str:
    """Derive the store path from the app source path: same name, ".db"
    extension.  An explicit CLI argument wins."""
    if optional_cli_arg:
        return optional_cli_arg
    if not app_source_path:
        raise ValueError("empty app source path")
    root, _ = os.path.splitext(app_source_path)
    return root + ".db"


def _dump(value) -> str:
    return json.dumps(value, ensure_ascii=False, allow_nan=False)


class Store:
    """Open handle to one store file.  Confined to a single owner: an
    exclusive lock file guards against a second host writing concurrently."""

    def __init__(self, path: str):
        self.path = path
        self._lock = FileLock(path + ".lock")
        try:
            self._lock.acquire(timeout=0)
        except Timeout:
            raise StoreLocked(f"store locked: {path}") from None
        try:
            # access is serialized by the owning engine loop, but open and
            # handoff may happen on a different thread than later use
            self._conn = sqlite3.connect(path, check_same_thread=False)
            self._conn.execute("PRAGMA foreign_keys = ON")
            self._init_schema()
        except sqlite3.DatabaseError as e:
            self._release()
            raise StoreCorrupt(f"store corrupt: {path}: {e}") from e
        except Exception:
            self._release()
            raise

    def _release(self) -> None:
        try:
            self._lock.release()
        finally:
            try:
                os.unlink(self._lock.lock_file)
            except OSError:
                pass

    def _init_schema(self) -> None:
        version = self._conn.execute("PRAGMA user_version").fetchone()[0]
        if version > SCHEMA_VERSION:
            raise SchemaMismatch(f"schema mismatch: file version {version}, "
                                 f"supported {SCHEMA_VERSION}")
        with self._conn:
            self._conn.executescript(_SCHEMA)
            self._conn.execute(f"PRAGMA user_version = {SCHEMA_VERSION}")
            n = self._conn.execute("SELECT COUNT(*) FROM tb_simulation").fetchone()[0]
            if n == 0:
                self._conn.execute("INSERT INTO tb_simulation(name, app_name) VALUES (?, '')",
                                   (DEFAULT_CONTEXT,))

    def close(self) -> None:
        if self._conn is not None:
            self._conn.close()
            self._conn = None
            self._release()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- contexts ---------------------------------------------------------

    def list_contexts(self) -> list[str]:
        rows = self._conn.execute("SELECT name FROM tb_simulation ORDER BY id").fetchall()
        return [r[0] for r in rows]

    def _sim_id(self, name: str) -> int:
        row = self._conn.execute("SELECT id FROM tb_simulation WHERE name = ?", (name,)).fetchone()
        if row is None:
            raise NoSuchContext(f"no such context: {name}")
        return row[0]

    def copy_context(self, src: str, dst: str) -> None:
        """Deep-copy every row of ``src`` under a new context name; the two
        contexts are independent afterwards."""
        src_id = self._sim_id(src)
        exists = self._conn.execute("SELECT 1 FROM tb_simulation WHERE name = ?", (dst,)).fetchone()
        if exists:
            raise ContextExists(f"context exists: {dst}")
        try:
            with self._conn:
                cur = self._conn.execute(
                    "INSERT INTO tb_simulation(name, app_name) "
                    "SELECT ?, app_name FROM tb_simulation WHERE id = ?", (dst, src_id))
                dst_id = cur.lastrowid
                self._conn.execute(
                    "INSERT INTO tb_parameter(sim_id, name, kind, value, list_index) "
                    "SELECT ?, name, kind, value, list_index FROM tb_parameter WHERE sim_id = ?",
                    (dst_id, src_id))
                self._conn.execute(
                    "INSERT INTO tb_dataarray(sim_id, name, kind) "
                    "SELECT ?, name, kind FROM tb_dataarray WHERE sim_id = ?", (dst_id, src_id))
                self._conn.execute(
                    "INSERT INTO tb_parameterwidget(sim_id, kind, name, x, y, config, target) "
                    "SELECT ?, kind, name, x, y, config, target FROM tb_parameterwidget "
                    "WHERE sim_id = ?", (dst_id, src_id))
                self._conn.execute(
                    "INSERT INTO tb_datawidget(sim_id, kind, name, x, y, config, target) "
                    "SELECT ?, kind, name, x, y, config, target FROM tb_datawidget "
                    "WHERE sim_id = ?", (dst_id, src_id))
                self._conn.execute(
                    "INSERT INTO tb_commentwidget(sim_id, name, x, y, body) "
                    "SELECT ?, name, x, y, body FROM tb_commentwidget WHERE sim_id = ?",
                    (dst_id, src_id))
        except sqlite3.Error as e:
            raise WriteFailed(f"write failed: {e}") from e

    # -- collections ------------------------------------------------------

    def save_collection(self, coll: WidgetCollection) -> None:
        """Replace all stored rows for the collection's context atomically.
        The context row is created on first save."""
        try:
            with self._conn:
                row = self._conn.execute("SELECT id FROM tb_simulation WHERE name = ?",
                                         (coll.context.name,)).fetchone()
                if row is None:
                    cur = self._conn.execute(
                        "INSERT INTO tb_simulation(name, app_name) VALUES (?, ?)",
                        (coll.context.name, coll.context.app_name))
                    sim_id = cur.lastrowid
                else:
                    sim_id = row[0]
                    self._conn.execute("UPDATE tb_simulation SET app_name = ? WHERE id = ?",
                                       (coll.context.app_name, sim_id))
                for table in TABLES[1:]:
                    self._conn.execute(f"DELETE FROM {table} WHERE sim_id = ?", (sim_id,))
                self._conn.executemany(
                    "INSERT INTO tb_parameter(sim_id, name, kind, value, list_index) "
                    "VALUES (?, ?, ?, ?, ?)",
                    [(sim_id, p.name, p.kind, _dump(p.value), p.list_index)
                     for p in coll.parameters])
                self._conn.executemany(
                    "INSERT INTO tb_dataarray(sim_id, name, kind) VALUES (?, ?, ?)",
                    [(sim_id, d.name, d.kind) for d in coll.data])
                self._conn.executemany(
                    "INSERT INTO tb_parameterwidget(sim_id, kind, name, x, y, config, target) "
                    "VALUES (?, ?, ?, ?, ?, ?, ?)",
                    [(sim_id, w.widget_kind, w.name, w.geometry[0], w.geometry[1],
                      _dump(w.config), w.target) for w in coll.pwidgets])
                self._conn.executemany(
                    "INSERT INTO tb_datawidget(sim_id, kind, name, x, y, config, target) "
                    "VALUES (?, ?, ?, ?, ?, ?, ?)",
                    [(sim_id, w.widget_kind, w.name, w.geometry[0], w.geometry[1],
                      _dump(w.config), w.target) for w in coll.dwidgets])
                self._conn.executemany(
                    "INSERT INTO tb_commentwidget(sim_id, name, x, y, body) "
                    "VALUES (?, ?, ?, ?, ?)",
                    [(sim_id, c.name, c.geometry[0], c.geometry[1], c.body)
                     for c in coll.comments])
        except (sqlite3.Error, ValueError, TypeError) as e:
            raise WriteFailed(f"write failed: {e}") from e

    def load_collection(self, context_name: str) -> WidgetCollection:
        sim_id = self._sim_id(context_name)
        app_name = self._conn.execute("SELECT app_name FROM tb_simulation WHERE id = ?",
                                      (sim_id,)).fetchone()[0]
        coll = WidgetCollection(context=SimulationContext(context_name, app_name))
        for name, kind, value, idx in self._conn.execute(
                "SELECT name, kind, value, list_index FROM tb_parameter "
                "WHERE sim_id = ? ORDER BY id", (sim_id,)):
            coll.parameters.append(ParameterDef(name, kind, json.loads(value), idx))
        for name, kind in self._conn.execute(
                "SELECT name, kind FROM tb_dataarray WHERE sim_id = ? ORDER BY id", (sim_id,)):
            coll.data.append(DataArrayDef(name, kind))
        for kind, name, x, y, config, target in self._conn.execute(
                "SELECT kind, name, x, y, config, target FROM tb_parameterwidget "
                "WHERE sim_id = ? ORDER BY id", (sim_id,)):
            coll.pwidgets.append(ParameterWidgetDef(kind, name, (x, y), json.loads(config), target))
        for kind, name, x, y, config, target in self._conn.execute(
                "SELECT kind, name, x, y, config, target FROM tb_datawidget "
                "WHERE sim_id = ? ORDER BY id", (sim_id,)):
            coll.dwidgets.append(DataWidgetDef(kind, name, (x, y), json.loads(config), target))
        for name, x, y, body in self._conn.execute(
                "SELECT name, x, y, body FROM tb_commentwidget WHERE sim_id = ? ORDER BY id",
                (sim_id,)):
            coll.comments.append(CommentWidgetDef(name, (x, y), body))
        return coll


def open_store(path: str) -> Store:
    """Open (creating if missing) the store at ``path``; all six tables exist
    afterwards and a brand-new store contains exactly one context "N.N."."""
    return Store(path)
