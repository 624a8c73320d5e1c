# verifier/storage.py
"""
Report serialization (JSON, CSV) and the optional sqlite run history
"""

import csv
import io
import json
import os
import sqlite3
import uuid
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Dict, List, Optional

from common.config import get_config
from common.errors import ConfigError
from common.logger import get_module_logger
from verifier.core import Report, format_number

logger = get_module_logger("storage")

CSV_COLUMNS = ("name", "defect", "tol", "pass")


def report_to_json(report: Report, timing: bool = False) -> str:
    """Byte-identical for identical configurations unless timing is requested"""
    return json.dumps(report.to_dict(timing=timing), indent=2)


def report_to_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for check in report.checks:
        writer.writerow([check.name, format_number(check.defect), format_number(check.tol),
                         "true" if check.passed else "false"])
    return buffer.getvalue()


class RunHistory:
    """sqlite store of past verification runs"""

    def __init__(self, db_path: Optional[str] = None):
        self.db_path = db_path or get_config().report.history_db
        if not self.db_path:
            raise ConfigError("Run history is disabled; set QASKEY_HISTORY_DB")

        directory = os.path.dirname(self.db_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        self._init_database()
        logger.debug(f"Run history at {self.db_path}")

    def _init_database(self):
        with self._get_connection() as conn:
            conn.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    id TEXT PRIMARY KEY,
                    command TEXT NOT NULL,
                    seed INTEGER NOT NULL,
                    created_at TEXT NOT NULL,
                    total INTEGER NOT NULL,
                    passed INTEGER NOT NULL,
                    worst_defect REAL NOT NULL,
                    wall_time REAL NOT NULL,
                    report TEXT NOT NULL
                )
            """)
            conn.execute("CREATE INDEX IF NOT EXISTS idx_runs_created_at ON runs (created_at)")
            conn.commit()

    @contextmanager
    def _get_connection(self):
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        try:
            yield conn
        finally:
            conn.close()

    def save_run(self, report: Report) -> str:
        run_id = str(uuid.uuid4())[:8]
        summary = report.summary()
        with self._get_connection() as conn:
            conn.execute("""
                INSERT OR REPLACE INTO runs
                (id, command, seed, created_at, total, passed, worst_defect, wall_time, report)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, (
                run_id,
                report.config.command,
                report.config.seed,
                datetime.now().isoformat(),
                summary["total"],
                summary["passed"],
                float(summary["worst_defect"]),
                summary["wall_time"],
                report_to_json(report, timing=True),
            ))
            conn.commit()
        logger.info(f"Recorded run {run_id} ({report.config.command})")
        return run_id

    def load_runs(self, limit: int = 20) -> List[Dict[str, Any]]:
        with self._get_connection() as conn:
            cursor = conn.execute("""
                SELECT id, command, seed, created_at, total, passed, worst_defect, wall_time
                FROM runs ORDER BY created_at DESC LIMIT ?
            """, (limit,))
            return [dict(row) for row in cursor.fetchall()]

    def load_report(self, run_id: str) -> Optional[Dict[str, Any]]:
        with self._get_connection() as conn:
            row = conn.execute("SELECT report FROM runs WHERE id = ?", (run_id,)).fetchone()
        return json.loads(row["report"]) if row else None


_history: Optional[RunHistory] = None


def get_history() -> RunHistory:
    """Global run history bound to the configured database"""
    global _history
    if _history is None or _history.db_path != get_config().report.history_db:
        _history = RunHistory()
    return _history


__all__ = ["CSV_COLUMNS", "RunHistory", "get_history", "report_to_csv", "report_to_json"]
