import pytest

from contragen.contracts.model import HIGH
from contragen.emit import SuiteExporter, attach_oracle
from contragen.harness import ContractRow, ProgramReport, RunReport, write_report
from contragen.search import VIOLATING
from contragen.web.app import create_app

from conftest import POST_EMPTY, GiftTests


@pytest.fixture
def client(tmp_path, gift_contracts):
    report = RunReport(str(tmp_path / "gifts"), 1, 1, {})
    program = ProgramReport("giftpack", "giftpack.sub", 6, 1, 5, 0, 0)
    program.rows = [ContractRow("giftpack", POST_EMPTY, "@throws EmptyException", HIGH, 1, 1, 1, 1, 1)]
    report.programs.append(program)
    write_report(report, str(tmp_path / "reports"))

    test = GiftTests.null_gift()
    test.focal_contract, test.focal_index = POST_EMPTY, 2
    emitted = attach_oracle(test, gift_contracts[POST_EMPTY], VIOLATING, "testUnwrapAndSave_EmptyExIfGiftIsNull")
    SuiteExporter(str(tmp_path / "suites" / "giftpack")).export("GiftPack", [emitted])

    app = create_app(str(tmp_path / "reports"), str(tmp_path / "suites"))
    app.config["TESTING"] = True
    return app.test_client()


def test_index_lists_reports_and_suites(client):
    page = client.get("/").get_data(as_text=True)
    assert "gifts-seed1-r1" in page
    assert "giftpack/GiftPack" in page


def test_report_page(client):
    response = client.get("/reports/gifts-seed1-r1")
    assert response.status_code == 200
    assert POST_EMPTY in response.get_data(as_text=True)


def test_report_api(client):
    listing = client.get("/api/reports").get_json()
    assert [r["name"] for r in listing] == ["gifts-seed1-r1"]
    data = client.get("/api/reports/gifts-seed1-r1").get_json()
    assert data["categories"]["both_alarm"] == 1


def test_suite_page(client):
    page = client.get("/suites/giftpack/GiftPack").get_data(as_text=True)
    assert "testUnwrapAndSave_EmptyExIfGiftIsNull" in page
    assert "catch (EmptyException e)" in page


@pytest.mark.parametrize("url", ["/reports/missing", "/api/reports/missing", "/suites/nowhere", "/suites/../reports"])
def test_not_found(client, url):
    assert client.get(url).status_code == 404
