import pytest
from fastapi.testclient import TestClient

from ontographs.api import create_app
from ontographs.corpus import fixtures
from ontographs.experiment import ExperimentService

from test_experiment import FakeClock, fixture_experiment

TOKEN = "open-sesame"


@pytest.fixture
def client(tmp_path):
    clock = FakeClock()
    service = ExperimentService(fixture_experiment(), tmp_path, grace_seconds=2.0, clock=clock)
    app = create_app(service, results_token=TOKEN)
    with TestClient(app) as tc:
        tc.clock = clock
        yield tc
    service.close()


def start_session(client, subject="alice"):
    response = client.post("/sessions", json={"experiment": "fixtures", "subject": subject})
    assert response.status_code == 200
    return response.json()["session"]


class TestSessionEndpoints:
    def test_create_and_fetch_stage(self, client):
        session = start_session(client)
        stage = client.get(f"/sessions/{session}/stage").json()
        assert stage["stage"] == 0
        assert stage["stages_total"] == 4
        assert len(stage["statements"]) == 10
        assert stage["remaining_seconds"] <= 300
        assert stage["ontograph"].startswith("<?xml")

    def test_unknown_experiment_is_404_with_code(self, client):
        response = client.post("/sessions", json={"experiment": "zzz", "subject": "a"})
        assert response.status_code == 404
        assert response.json() == {"code": "unknown_experiment",
                                   "reason": "no experiment 'zzz'"}

    def test_stage_payload_has_no_truth_field(self, client):
        session = start_session(client)
        body = client.get(f"/sessions/{session}/stage").text
        assert "truth" not in body

    def test_submit_answer_roundtrip(self, client):
        session = start_session(client)
        client.clock.tick(40)
        response = client.post(f"/sessions/{session}/answers",
                               json={"statement": "1/1", "answer": "true"})
        assert response.status_code == 200
        assert response.json() == {"accepted": True, "elapsed_ms": 40000,
                                   "remaining_seconds": 260.0}

    def test_duplicate_answer_conflict(self, client):
        session = start_session(client)
        client.post(f"/sessions/{session}/answers", json={"statement": "1/1", "answer": "true"})
        response = client.post(f"/sessions/{session}/answers",
                               json={"statement": "1/1", "answer": "false"})
        assert response.status_code == 409
        assert response.json()["code"] == "duplicate_answer"

    def test_bad_answer_is_422(self, client):
        session = start_session(client)
        response = client.post(f"/sessions/{session}/answers",
                               json={"statement": "1/1", "answer": "maybe"})
        assert response.status_code == 422
        assert response.json()["code"] == "invalid_request"

    def test_late_answer_rejected_after_grace(self, client):
        session = start_session(client)
        client.clock.tick(303)
        response = client.post(f"/sessions/{session}/answers",
                               json={"statement": "1/1", "answer": "true"})
        assert response.status_code == 409
        assert response.json()["code"] == "deadline_passed"

    def test_advance_requires_confirmation_then_moves_on(self, client):
        session = start_session(client)
        response = client.post(f"/sessions/{session}/advance", json={})
        assert response.status_code == 409
        assert response.json()["code"] == "confirm_required"
        response = client.post(f"/sessions/{session}/advance",
                               json={"confirm_dont_know": True})
        assert response.json() == {"finished": False, "stage": 1, "stages_total": 4}


class TestResultsEndpoint:
    def test_token_required(self, client):
        assert client.get("/experiments/fixtures/results").status_code == 403
        assert client.get("/experiments/fixtures/results?token=wrong").status_code == 403

    def test_token_via_query_or_header(self, client):
        assert client.get(f"/experiments/fixtures/results?token={TOKEN}").status_code == 200
        response = client.get("/experiments/fixtures/results",
                              headers={"x-results-token": TOKEN})
        assert response.status_code == 200
        assert response.json()["aggregate"]["n_subjects"] == 0

    def test_scripted_session_shows_up_in_results(self, client):
        truths = {sid: t for s in fixtures() for sid, t in s.key.entries}
        session = start_session(client, subject="bob")
        for stage in range(4):
            statements = client.get(f"/sessions/{session}/stage").json()["statements"]
            for item in statements:
                client.clock.tick(12)
                answer = "true" if truths[item["id"]] else "false"
                assert client.post(f"/sessions/{session}/answers",
                                   json={"statement": item["id"], "answer": answer}
                                   ).status_code == 200
            final = client.post(f"/sessions/{session}/advance", json={}).json()
        assert final == {"finished": True, "stage": None, "stages_total": 4}
        report = client.get(f"/experiments/fixtures/results?token={TOKEN}").json()
        assert report["aggregate"]["n_subjects"] == 1
        assert report["aggregate"]["correctness"] == 1.0
        # Answers land 12 s apart within each stage (elapsed 12..120); the four
        # excluded statements sit at positions 3 and 10 (stage 1) and 7 and 9
        # (stage 2): mean = (4*660 - 36 - 120 - 84 - 108) / 36.
        assert report["aggregate"]["mean_decision_seconds"] == pytest.approx(2292 / 36)
