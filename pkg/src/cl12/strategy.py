"""Winning strategies compiled from proofs.

A proof agent replays its proof bottom-up: Choose steps emit the encoded
move and proceed to the premise, Replicate steps emit a replication and
split the address bookkeeping, Wait steps consume the environment's next
move and jump to the premise it selects.  The agent sees only moves; it
never touches an interpretation.
"""

from __future__ import annotations

import copy
import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

from cl12.calculus import (
    AntChooseConjunct, AntChooseInstance, Exchange,
    Proof, Replicate, RuleApp, SuccChooseDisjunct, SuccChooseWitness, Wait,
    Weakening, check_proof, match_obligation, wait_obligation_details,
)
from cl12.bounds import GPlus, GSucc, GVar, GraphTerm
from cl12.games import (
    TOP, IllegalMove, Run, _split_sequent_move,
    _split_tree_move, apply_move, initial_position, tree_leaves,
)
from cl12.syntax import (
    BlindAll, BlindEx, ChoAll, ChoAnd, ChoEx, ChoOr, Const, Formula,
    NUMERAL_RE, ParAnd, ParOr, Term, Var, constants, free_vars,
    numeral_of_int,
)


class AgentStuck(Exception):
    """An observed move matches no premise: checker and engine disagree."""


class Agent:
    """Deterministic interactive contract: delivered adversary moves in, moves out."""

    def on_tick(self, delivered: list[str]) -> list[str]:
        raise NotImplementedError

    def state_snapshot(self):
        return {}

    def state_digest(self) -> str:
        blob = json.dumps(self.state_snapshot(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def checkpoint(self) -> "Agent":
        return copy.deepcopy(self)


# ---------------------------------------------------------------------------
# Move decoding against a formula's written structure


def decode_formula_move(f: Formula, beta: str) -> tuple[tuple[int, ...], type, Union[int, str]]:
    """(occurrence path, choice operator class, branch index or constant)."""
    if isinstance(f, (BlindAll, BlindEx)):
        path, kind, val = decode_formula_move(f.body, beta)
        return (0,) + path, kind, val
    if isinstance(f, (ParAnd, ParOr)):
        head, dot, rest = beta.partition(".")
        if not dot or head not in ("0", "1") or not rest:
            raise AgentStuck(f"cannot route {beta!r} through a parallel node")
        path, kind, val = decode_formula_move(f.left if head == "0" else f.right, rest)
        return (int(head),) + path, kind, val
    if isinstance(f, (ChoAnd, ChoOr)):
        if beta not in ("0", "1"):
            raise AgentStuck(f"{beta!r} does not resolve a choice connective")
        return (), type(f), int(beta)
    if isinstance(f, (ChoAll, ChoEx)):
        if not NUMERAL_RE.fullmatch(beta):
            raise AgentStuck(f"{beta!r} is not a constant")
        return (), type(f), beta
    raise AgentStuck(f"move {beta!r} lands on an elementary position")


def move_prefix_for_path(f: Formula, path: tuple[int, ...]) -> str:
    """The parallel-index move prefix leading to an occurrence."""
    prefix = ""
    for i in path:
        if isinstance(f, (ParAnd, ParOr)):
            prefix += f"{i}."
            f = f.left if i == 0 else f.right
        elif isinstance(f, (BlindAll, BlindEx)):
            f = f.body
        else:
            raise ValueError(f"path {path} crosses a choice operator")
    return prefix


# ---------------------------------------------------------------------------
# The proof agent


@dataclass
class _WaitEntry:
    kind: str
    slot: Optional[int]
    path: tuple[int, ...]
    i: Optional[int]
    premise: int
    fresh: str  # premise's own fresh variable name, "" when vacuous


class ProofAgent(Agent):
    """Plays the sequent game for the proof's conclusion and wins it."""

    def __init__(self, proof: Proof):
        self.proof = proof
        conclusion = proof.conclusion
        self.closure_vars = tuple(sorted(free_vars(conclusion)))
        self.valuation: dict[str, str] = {}
        self.step_idx = len(proof.steps) - 1
        self.slot_map: dict[int, tuple[int, str]] = {
            i: (i, "") for i in range(len(conclusion.antecedent))}
        self.queue: deque = deque()
        self.stuck: Optional[str] = None
        self.tick_count = 0
        self.wait_tables = self._build_wait_tables(proof)

    @staticmethod
    def _build_wait_tables(proof: Proof) -> dict[int, list[_WaitEntry]]:
        tables: dict[int, list[_WaitEntry]] = {}
        for idx, step in enumerate(proof.steps):
            if not isinstance(step.rule, Wait):
                continue
            entries = []
            for ob in wait_obligation_details(step.sequent):
                for j in step.premises:
                    fresh = match_obligation(ob, proof.steps[j].sequent, step.sequent)
                    if fresh is not None:
                        entries.append(_WaitEntry(ob.kind, ob.slot, ob.path, ob.i, j, fresh))
                        break
            tables[idx] = entries
        return tables

    # -- observation intake ---------------------------------------------------

    def _enqueue(self, move: str):
        if self.closure_vars and len(self.valuation) < len(self.closure_vars):
            if not NUMERAL_RE.fullmatch(move):
                self.stuck = f"expected an opening constant, saw {move!r}"
                return
            var = self.closure_vars[len(self.valuation)]
            self.valuation[var] = move
            return
        head, dot, rest = move.partition(".")
        if head == "1" and dot:
            self.queue.append(("succ", rest))
            return
        if head == "0" and dot:
            slot_str, dot2, mu = rest.partition(".")
            if dot2:
                try:
                    kind, addr, beta = _split_tree_move(mu)
                except IllegalMove:
                    self.stuck = f"cannot read antecedent move {move!r}"
                    return
                if kind == "rep":
                    self.stuck = "environment cannot replicate"
                    return
                self.queue.append(("ant", int(slot_str, 2), addr, beta))
                return
        self.stuck = f"cannot read move {move!r}"

    # -- the walk -------------------------------------------------------------

    def on_tick(self, delivered: list[str]) -> list[str]:
        self.tick_count += 1
        for m in delivered:
            if self.stuck is None:
                self._enqueue(m)
        emitted: list[str] = []
        if self.stuck is not None:
            return emitted
        if self.closure_vars and len(self.valuation) < len(self.closure_vars):
            return emitted
        try:
            while self.stuck is None:
                step = self.proof.steps[self.step_idx]
                rule = step.rule
                if isinstance(rule, Wait):
                    if not step.premises:
                        if self.queue:
                            self._drop_or_stick()
                            continue
                        break
                    if not self.queue:
                        break
                    self._consume(step)
                else:
                    move = self._emit(step, rule)
                    if move is not None:
                        emitted.append(move)
                    self.step_idx = step.premises[0]
        except AgentStuck as e:  # checker/engine inconsistency: flag, go silent
            self.stuck = str(e)
        return emitted

    def _resolve_term(self, t: Term) -> str:
        if isinstance(t, Const):
            return t.numeral
        assert isinstance(t, Var)
        if t.name not in self.valuation:
            self.valuation[t.name] = "0"  # out-of-scope witness defaults to 0
        return self.valuation[t.name]

    def _emit(self, step, rule: RuleApp) -> Optional[str]:
        if isinstance(rule, SuccChooseDisjunct):
            prefix = move_prefix_for_path(step.sequent.succedent, rule.occ)
            return f"1.{prefix}{rule.i}"
        if isinstance(rule, SuccChooseWitness):
            prefix = move_prefix_for_path(step.sequent.succedent, rule.occ)
            return f"1.{prefix}{self._resolve_term(rule.t)}"
        if isinstance(rule, AntChooseConjunct):
            rs, addr = self.slot_map[rule.slot]
            prefix = move_prefix_for_path(step.sequent.antecedent[rule.slot], rule.occ)
            return f"0.{numeral_of_int(rs)}.{addr}.{prefix}{rule.i}"
        if isinstance(rule, AntChooseInstance):
            rs, addr = self.slot_map[rule.slot]
            prefix = move_prefix_for_path(step.sequent.antecedent[rule.slot], rule.occ)
            return f"0.{numeral_of_int(rs)}.{addr}.{prefix}{self._resolve_term(rule.t)}"
        if isinstance(rule, Replicate):
            rs, addr = self.slot_map[rule.slot]
            new_slot = len(step.sequent.antecedent)
            self.slot_map[rule.slot] = (rs, addr + "0")
            self.slot_map[new_slot] = (rs, addr + "1")
            return f"0.{numeral_of_int(rs)}.{addr}:"
        if isinstance(rule, Exchange):
            a, b = rule.slot_a, rule.slot_b
            self.slot_map[a], self.slot_map[b] = self.slot_map[b], self.slot_map[a]
            return None
        if isinstance(rule, Weakening):
            kept = [i for i in range(len(step.sequent.antecedent))
                    if i not in rule.inserted_slots]
            self.slot_map = {j: self.slot_map[i] for j, i in enumerate(kept)}
            return None
        raise AgentStuck(f"unplayable rule {rule!r}")

    def _drop_or_stick(self):
        """At a leaf Wait any pending move must be ignorable (weakened slot)."""
        entry = self.queue.popleft()
        if entry[0] == "ant" and not self._matching_slots(entry[1], entry[2]):
            return
        self.stuck = f"no premise handles {entry!r}"

    def _matching_slots(self, real_slot: int, addr: str) -> list[int]:
        return sorted(p for p, (r, a) in self.slot_map.items()
                      if r == real_slot and a.startswith(addr))

    def _consume(self, step):
        table = self.wait_tables[self.step_idx]
        entry = self.queue.popleft()
        if entry[0] == "succ":
            _, beta = entry
            path, op, val = decode_formula_move(step.sequent.succedent, beta)
            if op is ChoAnd:
                hit = self._lookup(table, "cho-and-succ", None, path, val)
                if hit is None:
                    raise AgentStuck(f"no premise for succedent choice at {path}")
                self.step_idx = hit.premise
                return
            if op is ChoAll:
                hit = self._lookup(table, "cho-all-succ", None, path, None)
                if hit is None:
                    raise AgentStuck(f"no premise for succedent constant at {path}")
                if hit.fresh:
                    self.valuation[hit.fresh] = val
                self.step_idx = hit.premise
                return
            raise AgentStuck("environment resolved a machine-owned succedent choice")
        _, real_slot, addr, beta = entry
        slots = self._matching_slots(real_slot, addr)
        if not slots:
            return  # weakened-away copy: irrelevant to the rest of the play
        first, rest = slots[0], slots[1:]
        for p in reversed(rest):
            _, exact = self.slot_map[p]
            self.queue.appendleft(("ant", real_slot, exact, beta))
        path, op, val = decode_formula_move(step.sequent.antecedent[first], beta)
        if op is ChoOr:
            hit = self._lookup(table, "cho-or-ant", first, path, val)
            if hit is None:
                raise AgentStuck(f"no premise for antecedent choice in slot {first}")
            self.step_idx = hit.premise
            return
        if op is ChoEx:
            hit = self._lookup(table, "cho-ex-ant", first, path, None)
            if hit is None:
                raise AgentStuck(f"no premise for antecedent constant in slot {first}")
            if hit.fresh:
                self.valuation[hit.fresh] = val
            self.step_idx = hit.premise
            return
        raise AgentStuck("environment resolved a machine-owned antecedent choice")

    @staticmethod
    def _lookup(table: list[_WaitEntry], kind: str, slot, path, i) -> Optional[_WaitEntry]:
        for e in table:
            if e.kind == kind and e.slot == slot and e.path == path and (i is None or e.i == i):
                return e
        return None

    def state_snapshot(self):
        return {
            "step": self.step_idx,
            "valuation": dict(sorted(self.valuation.items())),
            "slot_map": {str(k): list(v) for k, v in sorted(self.slot_map.items())},
            "queue": [list(map(str, e)) for e in self.queue],
            "stuck": self.stuck,
        }


def extract_strategy(proof: Proof, verify: bool = True, budget: int = 20000) -> ProofAgent:
    """Compile a checked proof into a winning agent for its conclusion."""
    if verify:
        report = check_proof(proof, budget)
        if report.overall == "invalid":
            raise ValueError("cannot extract a strategy from an invalid proof")
    return ProofAgent(proof)


class TraceRecorder(Agent):
    """Wraps an agent, logging one JSON line per tick."""

    def __init__(self, inner: Agent, sink):
        self.inner = inner
        self.sink = sink  # anything with .write()
        self.tick = 0

    def on_tick(self, delivered: list[str]) -> list[str]:
        emitted = self.inner.on_tick(delivered)
        self.sink.write(json.dumps({
            "tick": self.tick,
            "delivered": list(delivered),
            "emitted": list(emitted),
            "state_digest": self.inner.state_digest(),
        }) + "\n")
        self.tick += 1
        return emitted

    def state_snapshot(self):
        return self.inner.state_snapshot()


# ---------------------------------------------------------------------------
# Well-behavedness monitoring


@dataclass
class WellBehavednessReport:
    replicative_count: int
    bound_d: int
    unfocused_violations: list[str] = field(default_factory=list)
    constant_provenance_violations: list[str] = field(default_factory=list)

    @property
    def compliant(self) -> bool:
        return (self.replicative_count <= self.bound_d
                and not self.unfocused_violations
                and not self.constant_provenance_violations)


def monitor_well_behavedness(runs: list[Run], proof: Proof) -> WellBehavednessReport:
    """Replay runs of the conclusion's game, auditing the machine's moves."""
    x = proof.conclusion
    allowed_base = {"0"} | constants(x)
    d = proof.replicate_count()
    worst_reps = 0
    unfocused: list[str] = []
    bad_constants: list[str] = []
    for run in runs:
        pos = initial_position(x)
        reps = 0
        for lab in run:
            if lab.player == TOP and not pos.closure_pending:
                where, slot, mu = _split_sequent_move(lab.move, len(pos.antecedent))
                if where == "ant":
                    kind, addr, beta = _split_tree_move(mu)
                    leaf_addrs = [a for a, _ in tree_leaves(pos.antecedent[slot])]
                    if kind == "rep":
                        reps += 1
                    elif addr not in leaf_addrs:
                        unfocused.append(lab.move)
                    if kind == "nonrep":
                        self_formula = next(g for a, g in tree_leaves(pos.antecedent[slot])
                                            if a.startswith(addr))
                        _, op, val = decode_formula_move(self_formula, beta)
                        if op in (ChoAll, ChoEx) and isinstance(val, str):
                            if val not in allowed_base and val not in pos.env_constants:
                                bad_constants.append(lab.move)
                else:
                    _, op, val = decode_formula_move(pos.succedent, mu)
                    if op in (ChoAll, ChoEx) and isinstance(val, str):
                        if val not in allowed_base and val not in pos.env_constants:
                            bad_constants.append(lab.move)
            pos = apply_move(pos, lab)
        worst_reps = max(worst_reps, reps)
    return WellBehavednessReport(worst_reps, d, unfocused, bad_constants)


# ---------------------------------------------------------------------------
# Per-proof complexity bounds


def bound_from_proof(proof: Proof, var: str = "l") -> GraphTerm:
    """A unary polynomial DAG bounding emitted-move size against the background.

    Wait sums its premise bounds plus one; every other step adds one; a
    premise shared by several steps is shared in the DAG.
    """
    ell = GVar(var)
    memo: dict[int, GraphTerm] = {}

    def bound_of(idx: int) -> GraphTerm:
        if idx in memo:
            return memo[idx]
        step = proof.steps[idx]
        if isinstance(step.rule, Wait):
            if not step.premises:
                out: GraphTerm = GSucc(ell)  # echo agents never exceed l+1
            else:
                acc = bound_of(step.premises[0])
                for j in step.premises[1:]:
                    acc = GPlus(acc, bound_of(j))
                out = GSucc(acc)
        else:
            out = GSucc(bound_of(step.premises[0]))
        memo[idx] = out
        return out

    return bound_of(len(proof.steps) - 1)
