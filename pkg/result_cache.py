import hashlib
import json
import logging
import sqlite3
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ValidationError

from catalog import Catalog
from config import RunConfig
from exclusivity import ExclusivityVerdict, verify_verdict
from report import REPORT_KINDS, ActionSearchReport, kind_of
from riemann_hurwitz import ActionRecord, PreconditionError, verify_record

logger = logging.getLogger(__name__)

CACHE_MAGIC = "hurwitz-cache"
CACHE_VERSION = "1"


class CacheFormatError(RuntimeError):
    pass


class CacheStats(BaseModel):
    total: int
    by_operation: Dict[str, int]


def input_digest(inputs: Dict[str, Any]) -> str:
    canonical = json.dumps(inputs, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ResultCache:
    """Append-only store of action records and exclusivity verdicts.

    Rows are keyed by (operation, sha256 of the canonical input JSON); a
    lookup takes the newest row and re-verifies it before handing it back.
    """

    def __init__(self, db_path: str = "hurwitz_cache.db"):
        self.db_path = db_path
        self._init_db()

    def _init_db(self):
        """Create tables on first use and check the header of an existing file."""
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.cursor()
                cursor.execute("""
                    CREATE TABLE IF NOT EXISTS meta (
                        key TEXT PRIMARY KEY,
                        value TEXT NOT NULL
                    )
                """)
                cursor.execute("""
                    CREATE TABLE IF NOT EXISTS results (
                        id INTEGER PRIMARY KEY AUTOINCREMENT,
                        operation TEXT NOT NULL,
                        digest TEXT NOT NULL,
                        kind TEXT NOT NULL,
                        payload TEXT NOT NULL,
                        created TEXT NOT NULL
                    )
                """)
                cursor.execute("SELECT key, value FROM meta")
                meta = dict(cursor.fetchall())
                if not meta:
                    cursor.executemany(
                        "INSERT INTO meta (key, value) VALUES (?, ?)",
                        [("magic", CACHE_MAGIC), ("version", CACHE_VERSION)],
                    )
                conn.commit()
        except sqlite3.DatabaseError as exc:
            raise CacheFormatError(f"{self.db_path} is not a result cache: {exc}") from exc
        if meta and (meta.get("magic") != CACHE_MAGIC or meta.get("version") != CACHE_VERSION):
            raise CacheFormatError(
                f"{self.db_path} has header {meta.get('magic')!r} v{meta.get('version')}, "
                f"expected {CACHE_MAGIC!r} v{CACHE_VERSION}"
            )

    def put(self, operation: str, inputs: Dict[str, Any], result: BaseModel):
        kind = kind_of(result)
        payload = json.dumps(result.model_dump(mode="json"), sort_keys=True)
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("""
                INSERT INTO results (operation, digest, kind, payload, created)
                VALUES (?, ?, ?, ?, ?)
            """, (
                operation,
                input_digest(inputs),
                kind,
                payload,
                datetime.now(timezone.utc).isoformat(),
            ))
            conn.commit()

    def get(
        self,
        operation: str,
        inputs: Dict[str, Any],
        catalog: Optional[Catalog] = None,
        config: Optional[RunConfig] = None,
    ) -> Optional[BaseModel]:
        """Newest row that parses and re-verifies; corrupt rows are skipped."""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("""
                SELECT id, kind, payload FROM results
                WHERE operation = ? AND digest = ?
                ORDER BY id DESC
            """, (operation, input_digest(inputs)))
            rows = cursor.fetchall()
        for row_id, kind, payload in rows:
            try:
                result = REPORT_KINDS[kind].model_validate(json.loads(payload))
                problems = self._reverify(result, catalog, config)
            except (KeyError, ValueError, ValidationError, PreconditionError) as exc:
                problems = [str(exc)]
            if problems:
                logger.warning("skipping cache row %d (%s): %s", row_id, operation, "; ".join(problems))
                continue
            logger.info("cache hit for %s", operation)
            return result
        return None

    @staticmethod
    def _reverify(result: BaseModel, catalog: Optional[Catalog], config: Optional[RunConfig]) -> List[str]:
        if isinstance(result, ActionSearchReport):
            if result.record is None:
                return ["only found actions are cached"]
            result = result.record
        if isinstance(result, ActionRecord):
            report = verify_record(result)
            return [] if report.verdict == "VALID" else [f"stored action verifies as {report.verdict}"]
        if isinstance(result, ExclusivityVerdict):
            return verify_verdict(result, catalog, config)
        return [f"{type(result).__name__} is not a cacheable result"]

    def get_stats(self) -> CacheStats:
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute("SELECT operation, COUNT(*) FROM results GROUP BY operation ORDER BY operation")
            counts = dict(cursor.fetchall())
        return CacheStats(total=sum(counts.values()), by_operation=counts)
