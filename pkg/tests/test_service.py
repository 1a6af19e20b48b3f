import json

import pytest
from fastapi.testclient import TestClient

from conftest import CUBE_SEQUENT_TEXT, DATA
from cl12.games import LabMove, apply_run, initial_position
from cl12.service import build_app, position_view
from cl12.syntax import parse_sequent


@pytest.fixture()
def client():
    return TestClient(build_app())


@pytest.fixture()
def cube_payload():
    return {
        "sequent": CUBE_SEQUENT_TEXT,
        "proof": json.loads((DATA / "cube.proof.json").read_text()),
        "interpretation": json.loads((DATA / "mod16.json").read_text()),
        "humanSide": "env",
    }


class TestParseEndpoint:
    def test_formula(self, client):
        r = client.post("/parse", json={"text": "p & q"})
        assert r.status_code == 200
        body = r.json()
        assert body["ast"]["kind"] == "cho-and"
        assert body["freeVars"] == []

    def test_sequent(self, client):
        r = client.post("/parse", json={"text": "p(x) ||- q(x)"})
        assert r.json()["freeVars"] == ["x"]

    def test_malformed_is_400(self, client):
        assert client.post("/parse", json={"text": "p /\\ ("}).status_code == 400


class TestProofEndpoints:
    def test_check_cube(self, client, cube_payload):
        r = client.post("/proof/check", json={"proof": cube_payload["proof"]})
        assert r.json()["overall"] == "valid"

    def test_search_found(self, client):
        r = client.post("/proof/search",
                        json={"sequent": "||- !x: ?y: (p(x) -> p(y))"})
        assert "proof" in r.json()

    def test_search_not_found(self, client):
        r = client.post("/proof/search",
                        json={"sequent": "||- ?y: !x: (p(x) -> p(y))",
                              "budget": {"maxDepth": 8}})
        assert "notFound" in r.json()


class TestSessions:
    def test_full_replay_of_the_example(self, client, cube_payload):
        sid = client.post("/sessions", json=cube_payload).json()["id"]
        state = None
        for batch in (["1.10"], ["0.1.0.100"], ["0.1.1.1000"]):
            r = client.post(f"/sessions/{sid}/moves", json={"moves": batch})
            assert r.status_code == 200
            state = r.json()
        run = [m["player"] + m["move"] for m in state["run"]]
        assert run == ["B1.10", "T0.1.:", "T0.1.0.10", "T0.1.0.10", "B0.1.0.100",
                       "T0.1.1.100", "T0.1.1.10", "B0.1.1.1000", "T1.1000"]
        assert state["status"] == "finished"
        assert state["verdict"] == "T"

    def test_event_sourcing_invariant(self, client, cube_payload):
        sid = client.post("/sessions", json=cube_payload).json()["id"]
        client.post(f"/sessions/{sid}/moves", json={"moves": ["1.10"]})
        state = client.get(f"/sessions/{sid}").json()
        seq = parse_sequent(state["sequent"])
        run = tuple(LabMove(m["player"], m["move"]) for m in state["run"])
        replayed = apply_run(initial_position(seq), run)
        assert position_view(replayed) == state["position"]

    def test_undo_determinism(self, client, cube_payload):
        sid = client.post("/sessions", json=cube_payload).json()["id"]
        digests = []
        for batch in (["1.10"], ["0.1.0.100"], ["0.1.1.1000"]):
            state = client.post(f"/sessions/{sid}/moves", json={"moves": batch}).json()
            digests.append(json.dumps(state, sort_keys=True))
        client.post(f"/sessions/{sid}/undo", json={"toTick": 1})
        replay = None
        for batch in (["0.1.0.100"], ["0.1.1.1000"]):
            replay = client.post(f"/sessions/{sid}/moves", json={"moves": batch}).json()
        assert json.dumps(replay, sort_keys=True) == digests[-1]

    def test_illegal_env_move_finishes_for_top(self, client, cube_payload):
        sid = client.post("/sessions", json=cube_payload).json()["id"]
        r = client.post(f"/sessions/{sid}/moves", json={"moves": ["zap"]})
        assert r.status_code == 200
        assert r.json()["status"] == "finished"
        assert r.json()["verdict"] == "T"

    def test_out_of_turn_is_409(self, client, cube_payload):
        sid = client.post("/sessions", json=cube_payload).json()["id"]
        client.post(f"/sessions/{sid}/moves", json={"moves": ["zap"]})
        assert client.post(f"/sessions/{sid}/moves",
                           json={"moves": ["1.10"]}).status_code == 409

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.post("/sessions/nope/moves",
                           json={"moves": []}).status_code == 404

    def test_bad_session_spec_400(self, client, cube_payload):
        bad = dict(cube_payload, sequent="p ||-")
        assert client.post("/sessions", json=bad).status_code == 400
        human = dict(cube_payload, humanSide="machine")
        assert client.post("/sessions", json=human).status_code == 400

    def test_schemas_offered_to_env(self, client, cube_payload):
        state = client.post("/sessions", json=cube_payload).json()["state"]
        kinds = {s["kind"] for s in state["schemas"]}
        assert "choose-constant" in kinds

    def test_session_on_a_searched_proof(self, client):
        from cl12.calculus import proof_to_json, search_proof
        seq_text = "||- !x: ?y: (p(x) -> p(y))"
        proof = search_proof(parse_sequent(seq_text))
        body = {"sequent": seq_text, "proof": proof_to_json(proof),
                "interpretation": {"domain_size": 2,
                                   "predicates": {"p": [[[0], True], [[1], False]]}},
                "humanSide": "env"}
        sid = client.post("/sessions", json=body).json()["id"]
        state = client.post(f"/sessions/{sid}/moves", json={"moves": ["1.10"]}).json()
        moves = [m["player"] + m["move"] for m in state["run"]]
        assert moves == ["B1.10", "T1.10"]  # the machine echoes the constant
        assert state["status"] == "finished" and state["verdict"] == "T"

    def test_persistence_writes_files(self, tmp_path, cube_payload):
        client = TestClient(build_app(str(tmp_path)))
        sid = client.post("/sessions", json=cube_payload).json()["id"]
        client.post(f"/sessions/{sid}/moves", json={"moves": ["1.10"]})
        stored = json.loads((tmp_path / f"{sid}.json").read_text())
        assert stored["id"] == sid
        assert len(stored["run"]) >= 1
