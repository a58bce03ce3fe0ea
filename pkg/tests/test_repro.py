import pytest

from bwangle.repro import reproduction_suite


@pytest.fixture(scope="module")
def suite():
    return reproduction_suite(include_slow=False)


def test_every_check_passes(suite):
    failed = suite.loc[~suite["passed"], "check"].tolist()
    assert failed == []


def test_suite_columns(suite):
    assert list(suite.columns) == ["check", "expected", "computed", "tolerance", "passed"]
    assert suite["check"].is_unique
    assert not suite["check"].str.contains("nu = -1").any()
