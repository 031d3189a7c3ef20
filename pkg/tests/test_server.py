import pytest
from fastapi.testclient import TestClient

from rtsverify.server import app, registry
from rtsverify.tools.log import preview
from rtsverify.tools.registry import RunRegistry


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture(scope="module")
def token_text(token_file):
    return token_file.read_text(encoding="utf-8")


def test_health(client):
    assert client.get("/health").json() == {"ok": True}


def test_frameworks(client):
    body = client.get("/frameworks").json()
    assert body["version"] == 1
    assert "xor" in {k["type"] for k in body["framework_kinds"]}


class TestCheck:
    def test_safe(self, client, token_text):
        r = client.post("/check", json={"instance": token_text, "framework": "xor"})
        assert r.status_code == 200
        body = r.json()
        assert body["verdict"] == "Safe"
        assert body["exit_code"] == 0
        assert [row["property"] for row in body["rows"]] == ["two_tokens", "no_token"]

    def test_not_abstract_safe(self, client, token_text):
        r = client.post(
            "/check",
            json={"instance": token_text, "framework": "disj=1", "options": {"property": "two_tokens"}},
        )
        body = r.json()
        assert body["verdict"] == "NotAbstractSafe"
        assert body["exit_code"] == 1
        assert body["rows"][0]["witness"] == [["t", "n", "n"], ["t", "n", "t"]]

    def test_lazy(self, client, token_text):
        r = client.post("/check", json={"instance": token_text, "framework": "xor", "options": {"mode": "lazy"}})
        body = r.json()
        assert body["mode"] == "lazy"
        assert body["verdict"] == "Safe"
        assert "equivalence" in body["rows"][0]["stats"]

    @pytest.mark.parametrize(
        "payload",
        [
            {"framework": "bogus"},
            {"framework": None},
            {"framework": "xor", "options": {"property": "missing"}},
        ],
    )
    def test_usage_errors_are_400(self, client, token_text, payload):
        r = client.post("/check", json={"instance": token_text, **payload})
        assert r.status_code == 400
        assert r.json()["detail"]

    def test_parse_errors_are_400(self, client):
        r = client.post("/check", json={"instance": "alphabet:\n  symbols t n\nfoo\n", "framework": "xor"})
        assert r.status_code == 400
        assert "line 3" in r.json()["detail"]

    def test_lazy_on_growth_is_422(self, client, models_dir):
        text = (models_dir / "token_passing_growth.rts").read_text(encoding="utf-8")
        r = client.post("/check", json={"instance": text, "framework": "disj=1", "options": {"mode": "lazy"}})
        assert r.status_code == 422

    @pytest.mark.parametrize(
        "payload",
        [
            {"framework": "xor", "options": {"mode": "sideways"}},
            {"framework": "xor", "options": {"max_eq": 0}},
            {"framework": "xor", "extra": 1},
        ],
    )
    def test_request_validation(self, client, token_text, payload):
        r = client.post("/check", json={"instance": token_text, **payload})
        assert r.status_code == 422

    def test_empty_instance(self, client):
        assert client.post("/check", json={"instance": ""}).status_code == 422


class TestSeparate:
    def test_separable(self, client, token_text):
        r = client.post("/separate", json={"instance": token_text, "framework": "xor", "c": "t n", "c_prime": "t t"})
        body = r.json()
        assert body["separable"] is True
        assert len(body["separator"].split()) == 2

    @pytest.mark.parametrize("brute_force", [False, True])
    def test_not_separable(self, client, token_text, brute_force):
        r = client.post(
            "/separate",
            json={
                "instance": token_text,
                "framework": "disj=1",
                "c": "t n n",
                "c_prime": "t n t",
                "brute_force": brute_force,
            },
        )
        assert r.json() == {"separable": False, "separator": None}

    def test_unequal_lengths_are_422(self, client, token_text):
        r = client.post("/separate", json={"instance": token_text, "framework": "xor", "c": "t", "c_prime": "t n"})
        assert r.status_code == 422

    def test_unknown_symbol_is_400(self, client, token_text):
        r = client.post("/separate", json={"instance": token_text, "framework": "xor", "c": "t x", "c_prime": "t n"})
        assert r.status_code == 400


class TestRuns:
    def test_lifecycle(self, client, token_text):
        r = client.post("/runs", json={"instance": token_text, "framework": "xor"})
        assert r.status_code == 200
        run_id = r.json()["run_id"]
        assert r.json()["status"] == "queued"
        # the test client runs background tasks before returning
        run = client.get(f"/runs/{run_id}").json()
        assert run["status"] == "done"
        assert run["report"]["verdict"] == "Safe"
        assert run["report"]["run_id"] == run_id
        listed = client.get("/runs").json()["runs"]
        assert run_id in {r["run_id"] for r in listed}
        assert "report" not in listed[0]

    def test_run_stores_a_one_line_instance_preview(self, client, token_text):
        run_id = client.post("/runs", json={"instance": token_text, "framework": "xor"}).json()["run_id"]
        shown = client.get(f"/runs/{run_id}").json()["instance"]
        assert shown == preview(token_text, 40)
        assert shown.endswith("...")
        assert "\n" not in shown

    def test_failed_run(self, client, token_text):
        r = client.post("/runs", json={"instance": token_text, "framework": "bogus"})
        run = client.get(f"/runs/{r.json()['run_id']}").json()
        assert run["status"] == "error"
        assert run["http_status"] == 400
        assert "bogus" in run["error"]

    def test_unknown_run(self, client):
        r = client.get("/runs/nope")
        assert r.status_code == 404
        assert r.json()["detail"] == "unknown run_id"

    def test_registry_is_shared(self, client, token_text):
        before = len(registry.runs)
        client.post("/runs", json={"instance": token_text, "framework": "xor", "options": {"mode": "lazy"}})
        assert len(registry.runs) == before + 1


class TestRunRegistry:
    def test_finished_runs_are_evicted_first(self):
        reg = RunRegistry(max_runs=2)
        reg.add_run("a", "x", "xor", "direct")
        reg.add_run("b", "x", "xor", "direct")
        reg.upsert_status("b", "done", report={})
        reg.add_run("c", "x", "xor", "direct")
        assert list(reg.runs) == ["a", "c"]

    def test_status_changes(self):
        reg = RunRegistry()
        reg.add_run("a", "x", "xor", "lazy")
        assert reg.upsert_status("a", "running")
        assert not reg.upsert_status("a", "running")
        with pytest.raises(ValueError):
            reg.upsert_status("a", "paused")
