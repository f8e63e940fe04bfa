from src.models import dump_json
from src.selftest import PROPERTIES, verify_suite


def test_suite_passes():
    report = verify_suite(0)
    assert report.passed
    assert [r.name for r in report.results] == [name for name, _, _ in PROPERTIES]
    assert all(r.cases > 0 for r in report.results)


def test_same_seed_same_report():
    assert dump_json(verify_suite(7)) == dump_json(verify_suite(7))


def test_injected_fault_is_reported():
    report = verify_suite(0, inject_fault=True)
    assert not report.passed
    failed = [r for r in report.results if not r.passed]
    assert [r.name for r in failed] == ["tower_exactness"]
    assert "disjoint" in failed[0].witness
    assert "seed 0" in failed[0].witness
