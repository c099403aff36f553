import sqlite3

import pytest

from exclusivity import weakly_exclusive_verdict
from report import ActionSearchReport
from result_cache import CacheFormatError, ResultCache, input_digest
from riemann_hurwitz import canonical_actions


@pytest.fixture
def cache(tmp_path):
    return ResultCache(str(tmp_path / "results.db"))


def test_input_digest_ignores_key_order():
    assert input_digest({"a": 1, "b": [2, 3]}) == input_digest({"b": [2, 3], "a": 1})
    assert input_digest({"a": 1}) != input_digest({"a": 2})


def test_verdict_hit(cache):
    verdict = weakly_exclusive_verdict(8)
    cache.put("genus-report", {"genus": 8}, verdict)
    assert cache.get("genus-report", {"genus": 8}) == verdict
    assert cache.get("genus-report", {"genus": 9}) is None
    stats = cache.get_stats()
    assert stats.total == 1
    assert stats.by_operation == {"genus-report": 1}


def test_action_search_hit(cache):
    record = canonical_actions(4)[1]
    report = ActionSearchReport(group="C4", group_order=4, genus=4, status="found", record=record)
    cache.put("find-action", {"group": "C4", "genus": 4}, report)
    assert cache.get("find-action", {"group": "C4", "genus": 4}) == report


def test_corrupt_row_is_skipped(cache):
    verdict = weakly_exclusive_verdict(9)
    cache.put("genus-report", {"genus": 9}, verdict)
    with sqlite3.connect(cache.db_path) as conn:
        conn.execute("UPDATE results SET payload = replace(payload, '\"lcm\": 720', '\"lcm\": 721')")
        conn.commit()
    assert cache.get("genus-report", {"genus": 9}) is None


def test_newest_good_row_wins(cache):
    verdict = weakly_exclusive_verdict(10)
    cache.put("genus-report", {"genus": 10}, verdict)
    with sqlite3.connect(cache.db_path) as conn:
        conn.execute(
            "INSERT INTO results (operation, digest, kind, payload, created) VALUES (?, ?, ?, ?, ?)",
            ("genus-report", input_digest({"genus": 10}), "exclusivity_verdict", "{broken", "now"),
        )
        conn.commit()
    assert cache.get("genus-report", {"genus": 10}) == verdict


def test_foreign_database_rejected(tmp_path):
    path = tmp_path / "other.db"
    with sqlite3.connect(path) as conn:
        conn.execute("CREATE TABLE meta (key TEXT PRIMARY KEY, value TEXT NOT NULL)")
        conn.execute("INSERT INTO meta VALUES ('magic', 'feedback')")
        conn.commit()
    with pytest.raises(CacheFormatError):
        ResultCache(str(path))


def test_not_a_database(tmp_path):
    path = tmp_path / "junk.db"
    path.write_text("this is not sqlite " * 100)
    with pytest.raises(CacheFormatError):
        ResultCache(str(path))
