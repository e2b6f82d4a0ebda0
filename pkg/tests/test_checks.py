import pytest

from sumfree.checks import SUITE_NAMES, run_suite


def test_suite_names():
    assert SUITE_NAMES == ("solver", "spectral", "structure", "weights", "equidist", "all")


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("nonsense")


def test_all_suites_pass_and_report_shape():
    report = run_suite("all", seed=0)
    assert report["passed"], report["failed"]
    assert report["suite"] == "all"
    assert report["seed"] == 0
    assert report["failed"] == []
    names = [c["name"] for c in report["checks"]]
    assert len(names) == len(set(names))
    owners = {n.split(".")[0] for n in names}
    assert owners == {"solver", "spectral", "structure", "weights", "equidist"}
    for c in report["checks"]:
        assert c["passed"] and c["detail"] is None


def test_single_suite_matches_all():
    solo = run_suite("solver", seed=3)
    combined = run_suite("all", seed=3)
    solo_names = [c["name"] for c in solo["checks"]]
    subset = [c for c in combined["checks"] if c["name"] in solo_names]
    assert subset == solo["checks"]
