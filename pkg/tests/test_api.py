import pytest
from fastapi.testclient import TestClient

from app.main import app
from tests.helpers import MOTZKIN, VALLEY


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestAnalysisEndpoint:
    def test_health(self, client):
        response = client.get("/api/analysis/health")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}

    def test_motzkin(self, client):
        response = client.post("/api/analysis/", json={"objective": MOTZKIN, "sublevel": "2"})
        assert response.status_code == 200
        body = response.json()
        assert body["attained"] is True
        assert body["lambda_star"]["exact"] == "1"
        assert body["sublevel"] == {"level": "2", "verdict": "Unbounded"}

    def test_valley_with_stability(self, client):
        response = client.post("/api/analysis/", json={"objective": VALLEY, "stability": "1/10,1"})
        assert response.status_code == 200
        body = response.json()
        assert body["attained"] is False
        assert body["stability"]["verdict"] == "UnstableWitness"

    def test_parse_error(self, client):
        response = client.post("/api/analysis/", json={"objective": "x^"})
        assert response.status_code == 422
        assert response.json()["detail"]["error"] == "PolynomialParseError"

    def test_licq_failure_carries_the_witness(self, client):
        response = client.post("/api/analysis/", json={"objective": "x", "constraint": "x^2 - y^2"})
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert detail["error"] == "LICQFailureError"
        assert len(detail["witness_box"]) == 2

    def test_request_validation(self, client):
        response = client.post("/api/analysis/", json={"objective": ""})
        assert response.status_code == 422
        response = client.post("/api/analysis/", json={"objective": "x", "precision": 0})
        assert response.status_code == 422
