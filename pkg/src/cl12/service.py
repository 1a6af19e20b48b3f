"""Session-oriented HTTP facade over parsing, checking, search, and play.

Sessions are event-sourced: the stored run replayed from the initial
position always reproduces the current position, and undo restores a
recorded per-tick checkpoint.  The human always plays Environment.
"""

from __future__ import annotations

import json
import pathlib
import secrets
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from cl12.calculus import (
    NotFound, SearchBudget, check_proof, proof_from_json,
    proof_to_json, search_proof,
)
from cl12.classical import FiniteModel
from cl12.games import (
    BOT, TOP, IllegalMove, Interpretation, LabMove, SequentPosition,
    adjudicate, apply_move, initial_position, legal_move_schemas, tree_leaves,
)
from cl12.strategy import ProofAgent, extract_strategy
from cl12.syntax import (
    Sequent, formula_to_json, free_vars, parse_formula, parse_sequent,
    render_formula, render_sequent, SyntaxError_,
)


@dataclass
class Session:
    id: str
    sequent: Sequent
    interp: Interpretation
    agent: ProofAgent
    position: SequentPosition
    run: list[LabMove] = field(default_factory=list)
    status: str = "awaiting-env"   # awaiting-env | finished
    verdict: Optional[str] = None
    history: list[tuple] = field(default_factory=list)  # per-tick checkpoints

    def checkpoint(self):
        self.history.append((self.agent.checkpoint(), self.position,
                             tuple(self.run), self.status, self.verdict))


def position_view(pos: SequentPosition) -> dict:
    return {
        "closurePending": list(pos.closure_pending),
        "valuation": dict(pos.valuation),
        "succedent": render_formula(pos.succedent),
        "antecedent": [
            {"slot": i,
             "leaves": [{"address": a, "formula": render_formula(g)}
                        for a, g in tree_leaves(t)]}
            for i, t in enumerate(pos.antecedent)
        ],
    }


def session_state(s: Session) -> dict:
    return {
        "id": s.id,
        "sequent": render_sequent(s.sequent),
        "position": position_view(s.position),
        "schemas": [sc.to_json() for sc in legal_move_schemas(s.position, BOT)]
        if s.status == "awaiting-env" else [],
        "run": [m.to_json() for m in s.run],
        "status": s.status,
        "verdict": s.verdict,
        "tick": len(s.history) - 1,
    }


def _machine_turn(s: Session, delivered: list[str]):
    """Tick the agent until silent; machine illegality finishes the session."""
    moves = s.agent.on_tick(delivered)
    while moves:
        for m in moves:
            lab = LabMove(TOP, m)
            try:
                s.position = apply_move(s.position, lab)
            except IllegalMove:
                s.run.append(lab)
                s.status = "finished"
                s.verdict = BOT
                return
            s.run.append(lab)
        moves = s.agent.on_tick([])
    if not legal_move_schemas(s.position, BOT):
        s.status = "finished"
        try:
            s.verdict = adjudicate(s.position, s.interp)
        except KeyError:
            s.verdict = "unknown"


class ParseBody(BaseModel):
    text: str


class CheckBody(BaseModel):
    proof: dict
    budget: int = 20000


class SearchBody(BaseModel):
    sequent: str
    budget: dict = {}


class SessionBody(BaseModel):
    sequent: str
    proof: dict
    interpretation: dict
    humanSide: str = "env"


class MovesBody(BaseModel):
    moves: list[str]


class UndoBody(BaseModel):
    toTick: int


def build_app(persist_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="cl12", version="0.1.0")
    from fastapi.middleware.cors import CORSMiddleware
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, Session] = {}
    persist = pathlib.Path(persist_dir) if persist_dir else None
    if persist:
        persist.mkdir(parents=True, exist_ok=True)

    def save(s: Session):
        if persist:
            (persist / f"{s.id}.json").write_text(json.dumps(session_state(s)))

    @app.post("/parse")
    def parse(body: ParseBody):
        text = body.text
        try:
            if "||-" in text:
                seq = parse_sequent(text)
                return {"kind": "sequent",
                        "ast": {"antecedent": [formula_to_json(g) for g in seq.antecedent],
                                "succedent": formula_to_json(seq.succedent)},
                        "rendered": render_sequent(seq),
                        "freeVars": sorted(free_vars(seq))}
            f = parse_formula(text)
            return {"kind": "formula", "ast": formula_to_json(f),
                    "rendered": render_formula(f),
                    "freeVars": sorted(free_vars(f))}
        except SyntaxError_ as e:
            raise HTTPException(400, str(e))

    @app.post("/proof/check")
    def proof_check(body: CheckBody):
        try:
            proof = proof_from_json(body.proof)
        except (SyntaxError_, KeyError, ValueError) as e:
            raise HTTPException(400, f"bad proof: {e}")
        return check_proof(proof, body.budget).to_json()

    @app.post("/proof/search")
    def proof_search(body: SearchBody):
        try:
            seq = parse_sequent(body.sequent)
        except SyntaxError_ as e:
            raise HTTPException(400, str(e))
        budget = SearchBudget(
            max_depth=int(body.budget.get("maxDepth", 12)),
            max_replications=int(body.budget.get("maxReplications", 2)),
            stability_budget=int(body.budget.get("stabilityBudget", 8000)),
        )
        result = search_proof(seq, budget)
        if isinstance(result, NotFound):
            return {"notFound": {"frontier": result.frontier,
                                 "stabilityUnknowns": result.stability_unknowns}}
        return {"proof": proof_to_json(result)}

    @app.post("/sessions")
    def create_session(body: SessionBody):
        if body.humanSide != "env":
            raise HTTPException(400, "the human side must be 'env'")
        try:
            seq = parse_sequent(body.sequent)
            proof = proof_from_json(body.proof)
            model = FiniteModel.from_json(body.interpretation)
        except (SyntaxError_, KeyError, ValueError, TypeError) as e:
            raise HTTPException(400, f"bad session spec: {e}")
        report = check_proof(proof)
        if report.overall == "invalid":
            raise HTTPException(400, "proof does not check")
        if render_sequent(proof.conclusion) != render_sequent(seq):
            raise HTTPException(400, "proof conclusion differs from the sequent")
        sid = secrets.token_hex(8)
        s = Session(sid, seq, Interpretation.finite(model),
                    extract_strategy(proof, verify=False), initial_position(seq))
        _machine_turn(s, [])
        s.checkpoint()
        sessions[sid] = s
        save(s)
        return {"id": sid, "state": session_state(s)}

    def _get(sid: str) -> Session:
        if sid not in sessions:
            raise HTTPException(404, "no such session")
        return sessions[sid]

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return session_state(_get(sid))

    @app.post("/sessions/{sid}/moves")
    def post_moves(sid: str, body: MovesBody):
        s = _get(sid)
        if s.status != "awaiting-env":
            raise HTTPException(409, "session is finished")
        applied: list[str] = []
        for m in body.moves:
            lab = LabMove(BOT, m)
            try:
                s.position = apply_move(s.position, lab)
            except IllegalMove:
                s.run.append(lab)
                s.status = "finished"
                s.verdict = TOP  # an illegal environment move loses for it
                s.checkpoint()
                save(s)
                return session_state(s)
            s.run.append(lab)
            applied.append(m)
        _machine_turn(s, applied)
        s.checkpoint()
        save(s)
        return session_state(s)

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str, body: UndoBody):
        s = _get(sid)
        if not 0 <= body.toTick < len(s.history):
            raise HTTPException(400, f"tick out of range 0..{len(s.history) - 1}")
        agent, pos, run, status, verdict = s.history[body.toTick]
        s.agent = agent.checkpoint()
        s.position = pos
        s.run = list(run)
        s.status = status
        s.verdict = verdict
        s.history = s.history[:body.toTick + 1]
        save(s)
        return session_state(s)

    @app.get("/schema")
    def schema():
        return {
            "proof": "steps: [{sequent, rule, params, premises}]",
            "interpretation": "{domain_size, functions:{letter:[[args,value]...]},"
                              " predicates:{letter:[[args,value]...]}}",
            "moves": "0.<slot>.<tree move> | 1.<formula move> | bare constant",
        }

    return app


app = build_app()
