"""HTTP surface tests: envelope shape, error mapping, endpoint behavior."""

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from pedacogen.api import create_app
from pedacogen.config import AppConfig
from pedacogen.gateways import MockTextGateway, MockVideoGateway
from pedacogen.project import ProjectStore
from pedacogen.service import ProjectService

DATA = Path(__file__).parent / "data"
CONTENT = "Ohm's law relates voltage, current, and resistance."


def make_client(tmp_path, text_gateway=None, video_gateway=None):
    service = ProjectService(ProjectStore(tmp_path / "store"),
                             text_gateway or MockTextGateway(),
                             video_gateway or MockVideoGateway())
    return TestClient(create_app(service))


@pytest.fixture()
def client(tmp_path):
    return make_client(tmp_path)


def create_project(client, content=CONTENT, **extra):
    r = client.post("/projects", json={"content": content, **extra})
    assert r.status_code == 201
    return r.json()["data"]["id"]


class TestEnvelope:
    def test_success_envelope(self, client):
        r = client.post("/projects", json={"content": CONTENT})
        body = r.json()
        assert body["ok"] is True
        assert "error" not in body
        assert body["data"]["state"]["name"] == "setup"

    def test_error_envelope(self, client):
        r = client.get("/projects/missing")
        body = r.json()
        assert r.status_code == 404
        assert body["ok"] is False
        assert "data" not in body
        assert body["error"]["code"] == "not_found"
        assert body["error"]["message"]

    def test_mutations_carry_state_and_revision(self, client):
        pid = create_project(client)
        r = client.post(f"/projects/{pid}/generate")
        data = r.json()["data"]
        assert data["state"]["name"] == "drafted"
        assert data["revision_id"] == 0
        r = client.post(f"/projects/{pid}/review", json={})
        data = r.json()["data"]
        assert data["state"]["name"] == "review_ready"
        assert data["revision_id"] == 0
        r = client.post(f"/projects/{pid}/apply", json={"mode": "all"})
        data = r.json()["data"]
        assert data["state"]["name"] == "drafted"
        assert data["revision_id"] == 1


class TestLifecycle:
    def test_happy_path_reaches_complete(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        client.post(f"/projects/{pid}/review", json={})
        client.post(f"/projects/{pid}/apply", json={"mode": "all"})
        client.post(f"/projects/{pid}/finalize")
        r = client.post(f"/projects/{pid}/render", json={})
        data = r.json()["data"]
        assert r.status_code == 200
        assert data["state"]["name"] == "complete"
        assert len(data["manifest"]["clips"]) == 7
        assert data["manifest"]["total_duration_s"] == 56.0

        r = client.get(f"/projects/{pid}/render")
        assert r.json()["data"]["status"] == "complete"

    def test_get_project_includes_script_text(self, client):
        pid = create_project(client)
        r = client.get(f"/projects/{pid}")
        assert "script" not in r.json()["data"]
        client.post(f"/projects/{pid}/generate")
        r = client.get(f"/projects/{pid}")
        data = r.json()["data"]
        assert data["script"].startswith("<Scene 1>")
        assert data["project"]["state"]["name"] == "drafted"

    def test_progress_endpoint(self, client):
        pid = create_project(client)
        r = client.get(f"/projects/{pid}/progress")
        data = r.json()["data"]
        assert data == {"state": "setup", "phase": 1, "label": "setup",
                        "legal_events": ["generate_script", "script_arrived"]}

    def test_review_payload_carries_report_and_delta(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        r = client.post(f"/projects/{pid}/review",
                        json={"extra": "Check scene pacing."})
        data = r.json()["data"]
        assert data["review"]["iteration"] == 1
        assert data["review"]["suggestions"]
        assert data["delta"] == [{"scene_index": 1, "kind": "modified",
                                  "changed_fields": ["narration"]}]

    def test_selective_apply_via_picks(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        r = client.post(f"/projects/{pid}/review", json={})
        picks = [[d["scene_index"], f] for d in r.json()["data"]["delta"]
                 for f in d["changed_fields"]]
        r = client.post(f"/projects/{pid}/apply",
                        json={"mode": "selective", "picks": picks})
        assert r.status_code == 200
        assert r.json()["data"]["revision_id"] == 1

    def test_patch_script(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        script = ("<Scene 1>\nVisual Description: A circuit diagram.\n"
                  "Clear Narration: Voltage equals current times resistance.")
        r = client.patch(f"/projects/{pid}/script",
                         json={"blueprint": script})
        data = r.json()["data"]
        assert data["revision_id"] == 1
        assert data["script"] == script

    def test_patch_config(self, client):
        pid = create_project(client)
        r = client.get(f"/projects/{pid}")
        gen_config = r.json()["data"]["project"]["gen_config"]
        gen_config["preamble"] = "Replacement preamble."
        r = client.patch(f"/projects/{pid}/config",
                         json={"gen_config": gen_config})
        assert r.status_code == 200
        r = client.get(f"/projects/{pid}")
        assert r.json()["data"]["project"]["gen_config"]["preamble"] == \
            "Replacement preamble."

    def test_reopen_after_complete(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        client.post(f"/projects/{pid}/finalize")
        client.post(f"/projects/{pid}/render", json={})
        r = client.post(f"/projects/{pid}/reopen")
        assert r.json()["data"]["state"]["name"] == "drafted"

    def test_list_projects(self, client):
        create_project(client, id="aaa")
        create_project(client, id="bbb")
        r = client.get("/projects")
        assert r.json()["data"]["projects"] == ["aaa", "bbb"]


class TestErrorMapping:
    def test_unknown_project_404(self, client):
        for method, url in [("get", "/projects/nope"),
                            ("post", "/projects/nope/finalize"),
                            ("get", "/projects/nope/progress")]:
            r = getattr(client, method)(url)
            assert r.status_code == 404
            assert r.json()["error"]["code"] == "not_found"

    def test_render_before_finalize_409(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        r = client.post(f"/projects/{pid}/render", json={})
        assert r.status_code == 409
        assert r.json()["error"]["code"] == "illegal_transition"
        assert r.json()["error"]["detail"]["state"] == "drafted"

    def test_config_after_finalize_409(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        client.post(f"/projects/{pid}/finalize")
        r = client.patch(f"/projects/{pid}/config", json={"gen_config": None})
        assert r.status_code in (409, 422)

    def test_missing_body_field_422(self, client):
        r = client.post("/projects", json={})
        assert r.status_code == 422
        assert r.json()["error"]["code"] == "validation"

    def test_blank_content_422(self, client):
        r = client.post("/projects", json={"content": " "})
        assert r.status_code == 422
        assert r.json()["error"]["code"] == "validation"

    def test_bad_blueprint_maps_declared_error(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        r = client.patch(f"/projects/{pid}/script",
                         json={"blueprint": "<Scene 1>\nClear Narration: x"})
        assert r.status_code == 422
        assert r.json()["error"]["code"] == "missing_field"

    def test_gateway_error_passes_through_as_502(self, tmp_path):
        bad = MockTextGateway(scripted=["not a script", "also not a script"])
        client = make_client(tmp_path, text_gateway=bad)
        pid = create_project(client)
        r = client.post(f"/projects/{pid}/generate")
        assert r.status_code == 502
        err = r.json()["error"]
        assert err["code"] == "malformed_output"
        assert len(err["detail"]["transcripts"]) == 2
        r = client.get(f"/projects/{pid}/progress")
        assert r.json()["data"]["state"] == "setup"

    def test_render_failure_502_and_failed_state(self, tmp_path):
        client = make_client(tmp_path,
                             video_gateway=MockVideoGateway(fail_scenes={3}))
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        client.post(f"/projects/{pid}/finalize")
        r = client.post(f"/projects/{pid}/render", json={})
        assert r.status_code == 502
        assert r.json()["error"]["code"] == "render_failed"
        assert r.json()["error"]["detail"]["failed_scenes"] == [3]
        r = client.get(f"/projects/{pid}/render")
        assert r.json()["data"]["status"] == "failed"

    def test_bad_duration_422(self, client):
        pid = create_project(client)
        client.post(f"/projects/{pid}/generate")
        client.post(f"/projects/{pid}/finalize")
        r = client.post(f"/projects/{pid}/render",
                        json={"per_scene_duration_s": -1})
        assert r.status_code == 422


class TestEvalEndpoints:
    @pytest.fixture()
    def loaded(self, client):
        for name in ("ratings", "usability", "demographics"):
            with open(DATA / f"{name}.csv", "rb") as fh:
                r = client.post(f"/eval/{name}", content=fh.read())
            assert r.status_code == 200
        return client

    def test_upload_reports_record_count(self, client):
        with open(DATA / "ratings.csv", "rb") as fh:
            r = client.post("/eval/ratings", content=fh.read())
        assert r.json()["data"] == {"dataset": "ratings", "records": 1794}

    def test_improvement_report(self, loaded):
        r = loaded.get("/eval/report", params={"kind": "improvement"})
        rows = r.json()["data"]["rows"]
        assert len(rows) == 13
        assert rows[0]["improvement_display"] == "+0.96"
        assert rows[0]["item"] == "Q13"
        assert rows[-1]["improvement_display"] == "+0.41"
        assert "+0.96" in r.json()["data"]["text"]

    def test_topics_report(self, loaded):
        r = loaded.get("/eval/report", params={"kind": "topics"})
        assert [row["improvement_display"] for row in
                r.json()["data"]["rows"]] == ["+0.87", "+1.17", "+0.82"]

    def test_subgroup_report(self, loaded):
        r = loaded.get("/eval/report",
                       params={"kind": "subgroup", "partition": "gender"})
        rows = r.json()["data"]["rows"]
        assert rows[0]["group_a"] == "female"
        assert {row["item"] for row in rows} == {
            "overall_satisfaction", "guide_validity", "intent_reflection",
            "production_efficiency", "intention_to_apply"}

    def test_report_without_upload_422(self, client):
        r = client.get("/eval/report", params={"kind": "improvement"})
        assert r.status_code == 422
        assert "ratings" in r.json()["error"]["message"]

    def test_unknown_kind_422(self, loaded):
        r = loaded.get("/eval/report", params={"kind": "anova"})
        assert r.status_code == 422

    def test_malformed_csv_422(self, client):
        r = client.post("/eval/ratings", content=b"pid,oops\n1,2\n")
        assert r.status_code == 422
        assert r.json()["error"]["code"] == "bad_header"

    def test_empty_upload_422(self, client):
        r = client.post("/eval/ratings", content=b"")
        assert r.status_code == 422


class TestAppFactory:
    def test_mock_config_builds_standalone_app(self, tmp_path):
        app = create_app(config=AppConfig(project_dir=str(tmp_path / "s")))
        client = TestClient(app)
        pid = create_project(client)
        r = client.post(f"/projects/{pid}/generate")
        assert r.status_code == 200

    def test_cors_headers_when_configured(self, tmp_path):
        app = create_app(config=AppConfig(
            project_dir=str(tmp_path / "s"),
            cors_origins=("http://localhost:5173",)))
        client = TestClient(app)
        r = client.options("/projects", headers={
            "Origin": "http://localhost:5173",
            "Access-Control-Request-Method": "POST"})
        assert r.headers["access-control-allow-origin"] == \
            "http://localhost:5173"
