"""HTTP service: endpoints, status codes, session state, CLI parity."""

from __future__ import annotations

import json
import time

from fastapi.testclient import TestClient

from gridaudit.cli import main
from gridaudit.service import create_app

from .conftest import DATA, check_dot, strip_timings

S1_CSV = (DATA / "s1.csv").read_text()
S2_CSV = (DATA / "s2.csv").read_text()


def client(ttl: float | None = None) -> TestClient:
    app = create_app(ttl=ttl) if ttl is not None else create_app()
    return TestClient(app)


def open_session(c: TestClient, csv_text: str = S2_CSV) -> str:
    resp = c.post(
        "/sessions", content=csv_text, headers={"content-type": "text/csv"}
    )
    assert resp.status_code == 201, resp.text
    return resp.json()["session"]


def test_create_session_csv():
    c = client()
    resp = c.post(
        "/sessions", content=S2_CSV, headers={"content-type": "text/csv"}
    )
    assert resp.status_code == 201
    body = resp.json()
    assert body["session"]
    assert body["input"]["cells"] == 5
    assert body["input"]["formulas"] == 3
    assert body["input"]["digest"].startswith("sha256:")


def test_create_session_json_workbook():
    c = client()
    doc = {"name": "t", "cells": {"A1": "5", "B1": "=A1*2"}}
    resp = c.post("/sessions", json=doc)
    assert resp.status_code == 201
    assert resp.json()["input"]["formulas"] == 1


def test_create_session_json_csv_wrapper():
    c = client()
    resp = c.post("/sessions", json={"csv": S2_CSV, "name": "wrapped"})
    assert resp.status_code == 201
    assert resp.json()["input"]["name"] == "wrapped"


def test_create_session_rejects_bad_workbooks():
    c = client()
    resp = c.post(
        "/sessions", content='"open', headers={"content-type": "text/csv"}
    )
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "MalformedWorkbook"

    resp = c.post(
        "/sessions", content="{not json", headers={"content-type": "application/json"}
    )
    assert resp.status_code == 422

    resp = c.post(
        "/sessions", content=b"\xff\xfe", headers={"content-type": "text/csv"}
    )
    assert resp.status_code == 422


def test_unknown_session_is_404():
    c = client()
    for path in (
        "/sessions/deadbeef/grid",
        "/sessions/deadbeef/areas?level=copy",
        "/sessions/deadbeef/sinks",
        "/sessions/deadbeef/modules",
        "/sessions/deadbeef/srg?mode=modules",
        "/sessions/deadbeef/trace?module=B3",
        "/sessions/deadbeef/diff?fine=copy&coarse=structural",
    ):
        resp = c.get(path)
        assert resp.status_code == 404, path
        assert resp.json()["error"]["code"] == "UnknownSession"


def test_grid_endpoint():
    c = client()
    sid = open_session(c)
    resp = c.get(f"/sessions/{sid}/grid")
    assert resp.status_code == 200
    cells = resp.json()["payload"]["cells"]
    assert cells["A3"] == {"kind": "formula", "text": "=A1+A2"}


def test_areas_endpoint():
    c = client()
    sid = open_session(c, S1_CSV)
    resp = c.get(f"/sessions/{sid}/areas", params={"level": "copy"})
    assert resp.status_code == 200
    assert [a["cells"] for a in resp.json()["payload"]["areas"]] == [
        ["C1", "C2"],
        ["C3"],
    ]
    resp = c.get(f"/sessions/{sid}/areas", params={"level": "COPY"})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "InvalidParams"


def test_classes_endpoint_camel_case_params():
    c = client()
    sid = open_session(c)
    resp = c.get(
        f"/sessions/{sid}/classes",
        params={"dh": 2, "dv": 1, "dman": 2, "eqStart": "logical", "eqRest": "structural"},
    )
    assert resp.status_code == 200
    assert resp.json()["parameters"] == {
        "dh": 2,
        "dv": 1,
        "dman": 2,
        "eq_start": "logical",
        "eq_rest": "structural",
    }


def test_classes_endpoint_rejects_bad_params():
    c = client()
    sid = open_session(c)
    resp = c.get(f"/sessions/{sid}/classes", params={"dh": "wide"})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "InvalidParams"

    resp = c.get(f"/sessions/{sid}/classes", params={"dh": 0, "dv": 0})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "InvalidParams"


def test_sinks_initial_state():
    c = client()
    sid = open_session(c)
    resp = c.get(f"/sessions/{sid}/sinks")
    assert resp.status_code == 200
    assert resp.json()["payload"] == {
        "active": ["B3", "C3"],
        "excluded": [],
        "history": [],
    }


def test_exclude_then_modules():
    c = client()
    sid = open_session(c)
    resp = c.post(f"/sessions/{sid}/sinks/exclude", json={"cell": "B3"})
    assert resp.status_code == 200
    assert resp.json()["payload"]["active"] == ["C3"]
    resp = c.get(f"/sessions/{sid}/modules")
    assert [m["id"] for m in resp.json()["payload"]["modules"]] == ["C3-module"]


def test_exclude_restore_round_trip():
    c = client()
    sid = open_session(c)
    before = c.get(f"/sessions/{sid}/sinks").json()["payload"]
    c.post(f"/sessions/{sid}/sinks/exclude", json={"cell": "B3"})
    after = c.post(
        f"/sessions/{sid}/sinks/restore", json={"cell": "B3"}
    ).json()["payload"]
    assert after == before


def test_exclude_non_sink_is_409():
    c = client()
    sid = open_session(c)
    resp = c.post(f"/sessions/{sid}/sinks/exclude", json={"cell": "A1"})
    assert resp.status_code == 409
    assert resp.json()["error"]["code"] == "NotASink"


def test_restore_unexcluded_is_409():
    c = client()
    sid = open_session(c)
    resp = c.post(f"/sessions/{sid}/sinks/restore", json={"cell": "B3"})
    assert resp.status_code == 409
    assert resp.json()["error"]["code"] == "NotASink"


def test_exclude_malformed_body_is_422():
    c = client()
    sid = open_session(c)
    resp = c.post(f"/sessions/{sid}/sinks/exclude", json={"cell": 5})
    assert resp.status_code == 422
    resp = c.post(f"/sessions/{sid}/sinks/exclude", json={})
    assert resp.status_code == 422
    resp = c.post(f"/sessions/{sid}/sinks/exclude", json={"cell": "1A"})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "MalformedAddress"


def test_sessions_are_isolated():
    c = client()
    first = open_session(c)
    second = open_session(c)
    c.post(f"/sessions/{first}/sinks/exclude", json={"cell": "B3"})
    resp = c.get(f"/sessions/{second}/sinks")
    assert resp.json()["payload"]["excluded"] == []


def test_srg_modules_endpoint():
    c = client()
    sid = open_session(c)
    resp = c.get(f"/sessions/{sid}/srg", params={"mode": "modules"})
    assert resp.status_code == 200
    payload = resp.json()["payload"]
    assert [v["id"] for v in payload["vertices"]] == [
        "A3-module",
        "B3-module",
        "C3-module",
    ]
    assert [[e["from"], e["to"]] for e in payload["edges"]] == [
        ["A3-module", "B3-module"],
        ["A3-module", "C3-module"],
    ]


def test_srg_fisheye_param():
    c = client()
    sid = open_session(c)
    resp = c.get(
        f"/sessions/{sid}/srg", params={"mode": "modules", "fisheye": "A3-module"}
    )
    assert resp.status_code == 200
    assert resp.json()["payload"]["fisheye"] == "A3-module"
    resp = c.get(
        f"/sessions/{sid}/srg", params={"mode": "modules", "fisheye": "Z9"}
    )
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "UnknownModule"


def test_srg_dot_format():
    c = client()
    sid = open_session(c)
    resp = c.get(f"/sessions/{sid}/srg", params={"mode": "modules", "format": "dot"})
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("text/vnd.graphviz")
    check_dot(resp.text)
    assert '"A3-module" -> "B3-module";' in resp.text


def test_srg_unknown_format_is_422():
    c = client()
    sid = open_session(c)
    resp = c.get(f"/sessions/{sid}/srg", params={"mode": "modules", "format": "svg"})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "InvalidParams"


def test_srg_units_reuses_last_class_params():
    c = client()
    sid = open_session(c, S1_CSV)
    c.get(f"/sessions/{sid}/classes", params={"dh": 2, "dv": 1})
    resp = c.get(f"/sessions/{sid}/srg", params={"mode": "units"})
    assert resp.status_code == 200
    assert resp.json()["parameters"]["dh"] == 2
    assert resp.json()["parameters"]["dv"] == 1


def test_trace_endpoint():
    c = client()
    sid = open_session(c)
    resp = c.get(f"/sessions/{sid}/trace", params={"module": "B3-module"})
    assert resp.status_code == 200
    assert resp.json()["payload"]["predecessors"] == [
        {"module": "A3-module", "result": "A3"}
    ]
    resp = c.get(f"/sessions/{sid}/trace", params={"module": "Z9"})
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "UnknownModule"


def test_diff_endpoint():
    c = client()
    sid = open_session(c, S1_CSV)
    resp = c.get(
        f"/sessions/{sid}/diff", params={"fine": "copy", "coarse": "structural"}
    )
    assert resp.status_code == 200
    assert len(resp.json()["payload"]["hot_spots"]) == 1
    resp = c.get(f"/sessions/{sid}/diff", params={"fine": "copy", "coarse": "copy"})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "LevelMismatch"


def test_sessions_expire():
    c = client(ttl=0.01)
    sid = open_session(c)
    time.sleep(0.05)
    resp = c.get(f"/sessions/{sid}/sinks")
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "UnknownSession"


def test_cors_enabled():
    c = client()
    resp = c.options(
        "/sessions",
        headers={
            "origin": "http://localhost:5173",
            "access-control-request-method": "POST",
        },
    )
    assert resp.status_code == 200
    assert resp.headers["access-control-allow-origin"] == "*"


def test_api_matches_cli(capsys, tmp_path):
    code = main(["modules", str(DATA / "s2.csv"), "--exclude", "B3"])
    assert code == 0
    cli_report = json.loads(capsys.readouterr().out)

    c = client()
    sid = open_session(c)
    c.post(f"/sessions/{sid}/sinks/exclude", json={"cell": "B3"})
    api_report = c.get(f"/sessions/{sid}/modules").json()

    cli_doc = strip_timings(cli_report)
    api_doc = strip_timings(api_report)
    # the CLI names the sheet after the file; the API wrapper has no path
    cli_doc["input"] = dict(cli_doc["input"], name=None)
    api_doc["input"] = dict(api_doc["input"], name=None)
    assert cli_doc == api_doc
