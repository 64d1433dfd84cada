"""HTTP service: endpoint contracts, status codes, error bodies."""

import pytest
from fastapi.testclient import TestClient

from deltacomb.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def term(num, den, order, re, im):
    return {"loc": {"num": num, "den": den}, "order": order, "re": re, "im": im}


def dist(*terms, mode="float"):
    return {"mode": mode, "terms": list(terms)}


POINT_MASS_2_AT_3 = dist(term(3, 1, 0, "2", "0"), mode="exact")


class TestHealth:
    def test_health(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        assert r.json() == {"status": "ok"}


class TestInvert:
    def test_invertible(self, client):
        r = client.post("/invert", json={"input": POINT_MASS_2_AT_3})
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"report", "artifacts", "ok"}
        assert body["ok"] is True
        inverse = body["report"]["inverse"]
        assert inverse["terms"] == [
            {"loc": {"num": -3, "den": 1}, "order": 0, "re": "1/2", "im": "0"}
        ]
        assert "inverse.json" in body["artifacts"]

    def test_not_invertible_is_still_ok(self, client):
        payload = {"input": dist(term(0, 1, 1, 1.0, 0.0))}
        r = client.post("/invert", json=payload)
        assert r.status_code == 200
        body = r.json()
        assert body["ok"] is True
        assert body["report"]["invertible"] is False
        assert "order" in body["report"]["reason"]

    def test_shape_error_is_400(self, client):
        r = client.post("/invert", json={"bogus": 1})
        assert r.status_code == 400
        assert r.json()["error"]["type"] == "ParseError"

    def test_float_coefficient_in_exact_mode_is_400(self, client):
        bad = dist(term(0, 1, 0, 0.5, 0.0), mode="exact")
        r = client.post("/invert", json={"input": bad})
        assert r.status_code == 400
        assert r.json()["error"]["type"] == "ParseError"

    def test_extra_fields_rejected(self, client):
        r = client.post(
            "/invert", json={"input": POINT_MASS_2_AT_3, "surprise": 1}
        )
        assert r.status_code == 400


class TestApprox:
    def test_comb_pair(self, client):
        payload = {
            "t": dist(term(-1, 1, 0, 1.0, 0.0), term(1, 1, 0, -1.0, 0.0)),
            "s": dist(term(0, 1, 0, 1.0, 0.0)),
            "k": [1, 2],
        }
        r = client.post("/approx", json=payload)
        assert r.status_code == 200
        body = r.json()
        assert body["ok"] is True
        entries = body["report"]["stage2"]
        assert [e["k"] for e in entries] == [1, 2]
        assert all(e["residual_pass"] for e in entries)
        assert "quadruple_k1.json" in body["artifacts"]

    def test_perturbation_budget_exhaustion_is_422(self, client):
        shared = dist(term(0, 1, 0, 1.0, 0.0), term(1, 1, 0, 1.0, 0.0))
        r = client.post("/approx", json={"t": shared, "s": shared, "k": 40})
        assert r.status_code == 422
        body = r.json()
        assert body["error"]["type"] == "PerturbationBudgetError"

    def test_exact_input_needing_sampling_is_400(self, client):
        t = dist(term(1, 2, 1, "1", "0"), mode="exact")
        s = dist(term(0, 1, 0, "2", "0"), mode="exact")
        r = client.post("/approx", json={"t": t, "s": s})
        assert r.status_code == 400
        assert r.json()["error"]["type"] == "InputError"


class TestSample:
    def test_two_step_schedule(self, client):
        payload = {
            "input": dist(term(1, 2, 1, 1.0, 0.0), term(-1, 4, 0, 3.0, 0.0)),
            "schedule": [[2, 8], [4, 32]],
        }
        r = client.post("/sample", json=payload)
        assert r.status_code == 200
        body = r.json()
        assert body["ok"] is True
        steps = body["report"]["steps"]
        assert [[s["m"], s["n"]] for s in steps] == [[2, 8], [4, 32]]
        assert steps[1]["max_weak"] < steps[0]["max_weak"]

    def test_exact_mode_is_400(self, client):
        payload = {"input": dist(term(0, 1, 0, "1", "0"), mode="exact")}
        r = client.post("/sample", json=payload)
        assert r.status_code == 400


class TestTransform:
    def test_certificate_validates(self, client):
        payload = {
            "inputs": [dist(term(3, 1, 0, 2.0, 0.0))],
            "grid": {"center_re": 0, "center_im": 0, "radius": 1.0, "resolution": 11},
        }
        r = client.post("/transform", json=payload)
        assert r.status_code == 200
        body = r.json()
        assert body["ok"] is True
        assert body["report"]["violations"] == 0
        assert "grid.csv" in body["artifacts"]

    def test_pair_margin(self, client):
        payload = {
            "inputs": [
                dist(term(0, 1, 0, 1.0, 0.0)),
                dist(term(3, 1, 0, 2.0, 0.0)),
            ]
        }
        r = client.post("/transform", json=payload)
        assert r.status_code == 200
        assert r.json()["report"]["coprime_margin"]["value"] >= 1.0 - 1e-12

    def test_too_many_inputs_rejected(self, client):
        one = dist(term(0, 1, 0, 1.0, 0.0))
        r = client.post("/transform", json={"inputs": [one, one, one]})
        assert r.status_code == 400


class TestVerify:
    def make_quadruple(self, client):
        payload = {
            "t": dist(term(0, 1, 0, 1.0, 0.0), term(1, 1, 0, 1.0, 0.0)),
            "s": dist(term(0, 1, 0, 1.0, 0.0), term(1, 1, 0, 1.0, 0.0)),
            "k": 2,
        }
        r = client.post("/approx", json=payload)
        assert r.status_code == 200
        import json as _json

        return _json.loads(r.json()["artifacts"]["quadruple_k2.json"])

    def test_genuine_quadruple(self, client):
        quad = self.make_quadruple(client)
        r = client.post("/verify", json=quad)
        assert r.status_code == 200
        assert r.json()["ok"] is True

    def test_tampered_quadruple_fails_gate(self, client):
        quad = self.make_quadruple(client)
        quad["u_k"]["dist"]["terms"] = []
        r = client.post("/verify", json=quad)
        assert r.status_code == 200  # the run succeeded; the gate failed
        body = r.json()
        assert body["ok"] is False
        assert body["report"]["recomputed_residual"] > 1e-9

    def test_malformed_quadruple_is_400(self, client):
        r = client.post("/verify", json={"mode": "float"})
        assert r.status_code == 400
        assert r.json()["error"]["type"] == "ParseError"
