"""One test per acceptance criterion, each printing its pass/fail line."""

import pytest

from oligorep import acceptance


@pytest.mark.parametrize("cid", [row[0] for row in acceptance.CRITERIA])
def test_criterion(cid):
    report = acceptance.run_criterion(cid)
    verdict = "PASS" if report["passed"] else "FAIL"
    print(f"criterion {report['id']}: {verdict} "
          f"({report['elapsed']}s / budget {report['budget']}s) - "
          f"{report['desc']}")
    assert report["passed"], report
