import json
import random

import pytest

from cactoid.fuzz import FuzzBounds, fuzz, random_block, random_graph, verify_graph
from cactoid.io import dumps


def test_default_sweep_passes():
    report = fuzz(1, 100)
    assert report.passed, [r.to_json() for r in report.records.values() if r.failed]


def test_same_seed_byte_identical():
    a = dumps(fuzz(3, 20).to_json())
    b = dumps(fuzz(3, 20).to_json())
    assert a == b


def test_report_independent_of_jobs():
    a = dumps(fuzz(5, 16, graph_cases=4).to_json())
    b = dumps(fuzz(5, 16, graph_cases=4, jobs=2).to_json())
    assert a == b


def test_different_seeds_differ():
    a = [random_block(random.Random(f"1/block/{i}")) for i in range(5)]
    b = [random_block(random.Random(f"2/block/{i}")) for i in range(5)]
    assert a != b


def test_degenerate_cases_check_zero_det():
    bounds = FuzzBounds(num_min=-1, num_max=1, den_max=1)
    report = fuzz(2, 60, bounds, include_degenerate=True)
    assert report.passed
    rec = report.get("zero cycle weight => det oracle = 0")
    assert rec is not None and rec.checked > 0


def test_resampling_excludes_zero_cycles():
    bounds = FuzzBounds(num_min=-1, num_max=1, den_max=1)
    for i in range(50):
        block = random_block(random.Random(i), bounds)
        assert all(block.summary.w)


def test_bounds_validated():
    with pytest.raises(ValueError):
        FuzzBounds(max_n=0)
    with pytest.raises(ValueError):
        FuzzBounds(num_min=3, num_max=1)


def test_random_graph_respects_block_limit():
    bounds = FuzzBounds(max_blocks=3)
    for i in range(20):
        assert 1 <= len(random_graph(random.Random(i), bounds).blocks) <= 3


def test_report_json_shape(two_triangles):
    out = json.loads(dumps(verify_graph(two_triangles).to_json()))
    assert out["status"] == "pass"
    assert out["summary"]["failed"] == 0
    for rec in out["records"]:
        assert set(rec) == {"name", "status", "checked", "failed", "first_mismatch"}


def test_zero_cycle_exceptions_are_reported_not_failed():
    bounds = FuzzBounds(num_min=-1, num_max=1, den_max=1)
    report = fuzz(2, 60, bounds, include_degenerate=True).to_json()
    assert report["status"] == "pass"
    assert report["discrepancies"]
    for rec in report["discrepancies"]:
        assert rec["stated"] == "0" and rec["oracle"] != "0"
