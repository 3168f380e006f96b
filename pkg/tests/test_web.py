import pytest
from fastapi.testclient import TestClient

from app.web import app

client = TestClient(app)

HAND_DATA = {
    "normalizing_numbers": [
        {"n": 1, "re": -1.0},
        {"n": 2, "re": -0.5},
        {"n": 3, "re": -1 / 12},
    ],
    "c12": {"asymptote": {"re": -1.5}},
}


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_forward_free_problem():
    response = client.post(
        "/api/forward",
        params={"cutoff": 2, "region": "-2,2,0.5,2"},
        json={"beta": 2.0, "harmonics": []},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["eigenvalues"] == []
    assert [s["family"] for s in body["singularities"]] == ["n/(2beta)", "n/(2beta)", "n/2", "n/2"]


def test_forward_rejects_bad_region():
    response = client.post(
        "/api/forward", params={"region": "2,-2,0.5,2"}, json={"beta": 2.0, "harmonics": []}
    )
    assert response.status_code == 400


def test_inverse_hand_data():
    response = client.post("/api/inverse", json=HAND_DATA)
    assert response.status_code == 200
    body = response.json()
    assert body["beta"] == pytest.approx(2.0)
    assert body["harmonics"][0]["re"] == pytest.approx(1.0, abs=1e-14)


def test_inverse_positive_asymptote():
    payload = dict(HAND_DATA, c12={"asymptote": {"re": 1.0}})
    response = client.post("/api/inverse", json=payload)
    assert response.status_code == 422
    assert response.json()["detail"].startswith("NonPositiveBeta")


def test_inverse_duplicate_entries():
    payload = dict(HAND_DATA, normalizing_numbers=[{"n": 1, "re": -1.0}, {"n": 1, "re": 0.5}])
    response = client.post("/api/inverse", json=payload)
    assert response.status_code in (400, 422)
