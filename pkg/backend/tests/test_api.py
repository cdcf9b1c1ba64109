import asyncio

import pytest
from fastapi.testclient import TestClient

from app.api.v1.endpoints import algebra as algebra_endpoints
from app.main import app
from app.services import modules


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "healthy"
    assert body["environment"] == "testing"
    assert body["rules"] == 21
    assert "X-Process-Time" in response.headers


def test_normalize(client):
    response = client.post("/api/v1/algebra/normalize", json={"expr": "y*x"})
    assert response.status_code == 200
    assert response.json()["text"] == "q^2*x*y - q^2 + 1"


def test_normalize_nu_expression(client):
    response = client.post("/api/v1/algebra/normalize", json={"expr": "nz", "alphabet": "A"})
    assert response.json()["text"] == "-q*x*y + q"


def test_reduce(client):
    response = client.post("/api/v1/algebra/reduce?order=rightmost", json={"expr": "nx*nx"})
    assert response.status_code == 200
    body = response.json()
    assert body["text"] == "q^4*y2*z2 + (q^3+q)*nx - q^4"
    assert {"word": "y2*z2", "coeff": "q^4"} in body["terms"]


def test_syntax_error_is_unprocessable(client):
    response = client.post("/api/v1/algebra/reduce", json={"expr": "nx +"})
    assert response.status_code == 422
    body = response.json()
    assert body["error"] == "syntax_error"
    assert body["correlation_id"].startswith("err_")


def test_alphabet_mismatch(client):
    response = client.post("/api/v1/algebra/reduce", json={"expr": "x*y"})
    assert response.status_code == 422
    assert response.json()["error"] == "alphabet_mismatch"


def test_rules(client):
    rules = client.get("/api/v1/algebra/rules", params={"check": True}).json()
    assert len(rules) == 21
    assert all(r["verified"] for r in rules)
    assert rules[0]["rule_id"] == "R01"
    assert rules[0]["tilde"] == "y2*z2"


def test_allowed_words(client):
    body = client.get("/api/v1/algebra/allowed", params={"max_len": 2}).json()
    assert body["count"] == 22
    assert client.get("/api/v1/algebra/allowed", params={"max_len": 9}).status_code == 422


def test_module_matrix(client):
    body = client.get("/api/v1/modules/1", params={"gen": "nx"}).json()
    assert body["matrix"] == [["0", "0"], ["-q + q^-1", "0"]]
    body = client.get("/api/v1/modules/1", params={"gen": "x", "eps": -1, "q": "2"}).json()
    assert body["matrix"] == [["-2", "3/2"], ["0", "-1/2"]]


def test_module_matrix_bad_input(client):
    assert client.get("/api/v1/modules/1", params={"gen": "x"}).status_code == 400
    assert client.get("/api/v1/modules/1", params={"gen": "w"}).status_code == 400
    assert client.get("/api/v1/modules/1", params={"gen": "nx", "eps": 3}).status_code == 400


def test_classify(client):
    response = client.post("/api/v1/modules/classify", json=modules.build_L(2).to_json())
    assert response.status_code == 200
    body = response.json()
    assert body["d"] == 2
    assert body["lambda"] == "q^-4"
    assert body["isomorphic_to_L"] is True


def test_classify_reducible_module(client):
    payload = modules.direct_sum(modules.build_L(0), modules.build_L(0)).to_json()
    response = client.post("/api/v1/modules/classify", json=payload)
    assert response.status_code == 422
    assert response.json()["error"] == "kernel_too_large"


def test_classify_rejects_bad_q(client):
    payload = modules.build_L(1).to_json()
    payload["q"] = "-1"
    assert client.post("/api/v1/modules/classify", json=payload).status_code == 422


def test_verify(client):
    response = client.post("/api/v1/verify", json={"suite": "rules", "max_word_len": 1, "max_d": 0})
    assert response.status_code == 200
    body = response.json()
    assert body["counts"] == {"pass": 21, "fail": 0, "flagged": 0}
    assert body["bounds"]["max_word_len"] == 1


def test_verify_unknown_suite(client):
    assert client.post("/api/v1/verify", json={"suite": "bogus"}).status_code == 400


def test_oversized_power_is_rejected(client):
    response = client.post("/api/v1/algebra/reduce", json={"expr": "z2^22*nx^22"})
    assert response.status_code == 422
    assert response.json()["error"] == "syntax_error"


def test_reduction_runs_off_the_event_loop(client, monkeypatch):
    seen = []

    def fake_reduce(p, order):
        try:
            asyncio.get_running_loop()
            seen.append("loop")
        except RuntimeError:
            seen.append("worker")
        return p

    monkeypatch.setattr(algebra_endpoints, "reduce", fake_reduce)
    response = client.post("/api/v1/algebra/reduce", json={"expr": "nx*z2"})
    assert response.status_code == 200
    assert seen == ["worker"]
