"""Machine-versus-environment plays, counterstrategies, and composition.

The tick loop delivers each side's new moves to the other, validating every
move against the engine; an illegal move ends the play at once, lost by its
author.  Quiescent plays are adjudicated at the reached position.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from cl12.calculus import (
    NotFound, Proof, SearchBudget, search_proof, wait_obligation_details,
)
from cl12.classical import (
    Countermodel, FiniteModel, Valid, find_countermodel,
)
from cl12.games import (
    BOT, TOP, UNKNOWN, IllegalMove, Interpretation, LabMove, Run,
    SequentPosition, adjudicate, apply_move, initial_position,
    legal_move_schemas, tree_leaves, _split_tree_move,
)
from cl12.strategy import (
    Agent, ProofAgent, decode_formula_move, move_prefix_for_path,
)
from cl12.syntax import (
    ChoAll, ChoAnd, ChoEx, ChoOr, Const, Formula, NUMERAL_RE, Sequent, Term,
    Var, constants, elementarize, elementarize_sequent, free_vars,
    int_of_numeral, numeral_of_int, render_sequent, replace_at,
    subformula_at, substitute,
)


@dataclass
class PlayResult:
    run: Run
    verdict: str                 # TOP | BOT | UNKNOWN
    illegal_by: Optional[str]    # player who ended the play illegally, if any
    position: SequentPosition
    ticks: int

    @property
    def top_won(self) -> bool:
        if self.illegal_by is not None:
            return self.illegal_by == BOT
        return self.verdict == TOP


@dataclass
class PlayLimits:
    max_ticks: int = 64
    max_moves: int = 64


def play(machine: Agent, env: Agent, x: Sequent, interp: Interpretation,
         limits: Optional[PlayLimits] = None) -> PlayResult:
    limits = limits or PlayLimits()
    pos = initial_position(x)
    run: list[LabMove] = []
    to_machine: list[str] = []
    to_env: list[str] = []
    ticks = 0
    quiet_ticks = 0
    for _ in range(limits.max_ticks):
        ticks += 1
        quiet = True
        for player, agent, inbox in ((TOP, machine, to_machine), (BOT, env, to_env)):
            moves = agent.on_tick(list(inbox))
            inbox.clear()
            for m in moves:
                quiet = False
                lab = LabMove(player, m)
                try:
                    pos = apply_move(pos, lab)
                except IllegalMove:
                    run.append(lab)
                    return PlayResult(tuple(run), opponent_of(player), player,
                                      pos, ticks)
                run.append(lab)
                (to_env if player == TOP else to_machine).append(m)
        quiet_ticks = quiet_ticks + 1 if quiet else 0
        if quiet_ticks >= 2 or len(run) >= limits.max_moves:
            break
    try:
        verdict = adjudicate(pos, interp)
    except KeyError:
        verdict = UNKNOWN
    return PlayResult(tuple(run), verdict, None, pos, ticks)


def opponent_of(player: str) -> str:
    return BOT if player == TOP else TOP


# ---------------------------------------------------------------------------
# Environment agents


class ScriptedEnv(Agent):
    """Plays fixed move batches, one batch per tick."""

    def __init__(self, batches: list[list[str]]):
        self.batches = [list(b) for b in batches]
        self.cursor = 0

    def on_tick(self, delivered: list[str]) -> list[str]:
        if self.cursor >= len(self.batches):
            return []
        batch = self.batches[self.cursor]
        self.cursor += 1
        return batch

    def state_snapshot(self):
        return {"cursor": self.cursor}


class _Replica:
    """Tracks the current position from both sides' move strings."""

    def __init__(self, x: Sequent):
        self.pos = initial_position(x)

    def observe(self, player: str, move: str):
        self.pos = apply_move(self.pos, LabMove(player, move))


class RandomEnv(Agent):
    """Seeded random legal play; always stops after its move budget."""

    def __init__(self, x: Sequent, seed: int, pool: list[str], max_own_moves: int = 6):
        self.replica = _Replica(x)
        self.rng = random.Random(seed)
        self.pool = list(pool) or ["0"]
        self.left = max_own_moves

    def on_tick(self, delivered: list[str]) -> list[str]:
        for m in delivered:
            self.replica.observe(TOP, m)
        if self.left <= 0:
            return []
        schemas = legal_move_schemas(self.replica.pos, BOT)
        if not schemas:
            return []
        if self.rng.random() < 0.25:  # occasionally sit a tick out
            return []
        schema = self.rng.choice(schemas)
        move = schema.instantiate(self.rng.choice(self.pool)
                                  if schema.kind == "choose-constant" else None)
        self.left -= 1
        self.replica.observe(BOT, move)
        return [move]

    def state_snapshot(self):
        return {"left": self.left}


class SchemaMachine(Agent):
    """Deterministic machine stub: plays legal schema instantiations blindly.

    Not a winning strategy; these are the fixed adversaries the
    counterstrategy is demonstrated against.
    """

    def __init__(self, x: Sequent, pick: str = "first", const: str = "0",
                 replicate_first: bool = False, echo: bool = False,
                 max_own_moves: int = 8):
        self.replica = _Replica(x)
        self.pick = pick
        self.const = const
        self.replicate_first = replicate_first
        self.echo = echo
        self.left = max_own_moves
        self.last_env_const = "0"

    def on_tick(self, delivered: list[str]) -> list[str]:
        for m in delivered:
            self.replica.observe(BOT, m)
            if NUMERAL_RE.fullmatch(m.rpartition(".")[2]):
                self.last_env_const = m.rpartition(".")[2]
        if self.left <= 0 or self.replica.pos.closure_pending:
            return []
        schemas = legal_move_schemas(self.replica.pos, TOP)
        if not schemas:
            return []
        reps = [s for s in schemas if s.kind == "replicate"]
        others = [s for s in schemas if s.kind != "replicate"]
        if self.replicate_first and reps:
            schema = reps[0]
            self.replicate_first = False
        elif others:
            schema = others[0] if self.pick == "first" else others[-1]
        else:
            return []
        const = self.last_env_const if self.echo else self.const
        move = schema.instantiate(const if schema.kind == "choose-constant" else None)
        self.left -= 1
        self.replica.observe(TOP, move)
        return [move]

    def state_snapshot(self):
        return {"left": self.left, "last": self.last_env_const}


def fixed_machine_lineup(x: Sequent) -> list[Agent]:
    """Five deterministic adversaries for completeness demonstrations."""
    return [
        SilentAgent(),
        SchemaMachine(x, pick="first", const="0"),
        SchemaMachine(x, pick="last", const="1"),
        SchemaMachine(x, pick="first", const="0", replicate_first=True),
        SchemaMachine(x, pick="first", echo=True),
    ]


class SilentAgent(Agent):
    def on_tick(self, delivered: list[str]) -> list[str]:
        return []


# ---------------------------------------------------------------------------
# Generic truthful answerer (an oracle-backed solution for simple formulas)


class InterpAnswerer(Agent):
    """Plays a formula game by choosing whatever keeps the residue true.

    Wins choice-over-elementary shapes (protocols like "given x and y, name
    x*y") under the interpretation it was built with; the skew parameter
    deliberately corrupts its constant answers for negative controls.
    """

    def __init__(self, formula: Formula, interp: Interpretation, skew: int = 0):
        self.formula = formula
        self.interp = interp
        self.skew = skew
        self.closure_vars = tuple(sorted(free_vars(formula)))
        self.got: list[str] = []
        self.current = formula
        self.inited = False

    def _start(self):
        binding = {v: Const(c) for v, c in zip(self.closure_vars, self.got)}
        self.current = substitute(self.formula, binding)
        self.inited = True

    def _domain_names(self) -> list[str]:
        if self.interp.is_finite:
            return [numeral_of_int(d) for d in range(self.interp.model.domain_size)]
        return [numeral_of_int(n) for n in range(8)]

    def on_tick(self, delivered: list[str]) -> list[str]:
        rest = list(delivered)
        if not self.inited:
            while rest and len(self.got) < len(self.closure_vars):
                m = rest.pop(0)
                if not NUMERAL_RE.fullmatch(m):
                    return []
                self.got.append(m)
            if len(self.got) < len(self.closure_vars):
                return []
            self._start()
        from cl12.games import formula_apply, formula_schemas, POSITIVE
        for m in rest:
            self.current, _ = formula_apply(self.current, m, BOT, POSITIVE)
        out: list[str] = []
        while True:
            schemas = [s for s in formula_schemas(self.current, POSITIVE) if s.owner == TOP]
            if not schemas:
                return out
            schema = schemas[0]
            if schema.kind in ("choose-left", "choose-right"):
                move = schema.instantiate()
                # prefer the branch whose residue is true
                for token in ("0", "1"):
                    trial, _ = formula_apply(self.current, schema.prefix + token, TOP, POSITIVE)
                    if self.interp.truth_of(elementarize(trial)) is True:
                        move = schema.prefix + token
                        break
            else:
                names = self._domain_names()
                chosen = None
                for c in names:
                    trial, _ = formula_apply(self.current, schema.instantiate(c), TOP, POSITIVE)
                    if self.interp.truth_of(elementarize(trial)) is True:
                        chosen = c
                        break
                if chosen is None:
                    chosen = "0"
                if self.skew and self.interp.is_finite:
                    size = self.interp.model.domain_size
                    chosen = numeral_of_int((int_of_numeral(chosen) + self.skew) % size)
                move = schema.instantiate(chosen)
            self.current, _ = formula_apply(self.current, move, TOP, POSITIVE)
            out.append(move)

    def state_snapshot(self):
        return {"got": list(self.got), "pos": render_sequent(Sequent((), self.current))}


# ---------------------------------------------------------------------------
# Counterstrategy (environment side, for unprovable sequents)


class OracleUndecided(Exception):
    pass


class CounterstrategyEnv(Agent):
    """Environment play driven by unprovability, not by an interpretation.

    Tracks the pair of an unprovable sequent and an injective fresh-constant
    assignment; while the sequent is stable it fires the moves leading to an
    unprovable Wait premise, and while unstable it waits, mirroring machine
    moves back into the bookkeeping (replications by address splitting).
    """

    def __init__(self, x: Sequent, prover_budget: Optional[SearchBudget] = None,
                 require_unprovable: bool = True):
        self.budget = prover_budget or SearchBudget(max_depth=8, max_replications=1)
        result = search_proof(x, self.budget)
        if require_unprovable and not isinstance(result, NotFound):
            raise ValueError("sequent is provable; no counterstrategy exists")
        self.x = x
        self.y = x
        self.e: dict[str, str] = {}
        self.slot_map: dict[int, tuple[int, str]] = {
            i: (i, "") for i in range(len(x.antecedent))}
        self.opened = False
        self.queue: list[tuple] = []
        self.log: list[str] = []
        self.stuck: Optional[str] = None
        self._unprovable_cache: dict[str, bool] = {}

    # -- oracles --------------------------------------------------------------

    def _unprovable(self, z: Sequent) -> bool:
        key = render_sequent(z)
        if key not in self._unprovable_cache:
            result = search_proof(z, self.budget)
            if isinstance(result, NotFound) and result.stability_unknowns:
                self.log.append(f"oracle saw stability unknowns on {key}")
            self._unprovable_cache[key] = isinstance(result, NotFound)
        return self._unprovable_cache[key]

    _stability_cache: dict

    def _stable(self, z: Sequent) -> Optional[bool]:
        from cl12.classical import check_stability
        key = render_sequent(z)
        if not hasattr(self, "_stability_cache"):
            self._stability_cache = {}
        if key not in self._stability_cache:
            verdict = check_stability(z, 8000)
            out = True if isinstance(verdict, Valid) else (
                False if isinstance(verdict, Countermodel) else None)
            self._stability_cache[key] = out
        return self._stability_cache[key]

    def _fresh_constant(self) -> str:
        used = constants(self.y) | set(self.e.values()) | constants(self.x)
        n = 0
        while numeral_of_int(n) in used:
            n += 1
        return numeral_of_int(n)

    # -- machine-move intake ----------------------------------------------------

    def _enqueue(self, move: str):
        head, dot, rest = move.partition(".")
        if head == "1" and dot:
            self.queue.append(("succ", rest))
            return
        if head == "0" and dot:
            slot_str, dot2, mu = rest.partition(".")
            if dot2:
                kind, addr, beta = _split_tree_move(mu)
                if kind == "rep":
                    self.queue.append(("rep", int(slot_str, 2), addr))
                else:
                    self.queue.append(("ant", int(slot_str, 2), addr, beta))
                return
        self.stuck = f"cannot read machine move {move!r}"

    # -- the recursion ----------------------------------------------------------

    def on_tick(self, delivered: list[str]) -> list[str]:
        if self.stuck is not None:
            return []
        for m in delivered:
            self._enqueue(m)
        out: list[str] = []
        if not self.opened:
            self.opened = True
            e: dict[str, str] = {}
            for v in sorted(free_vars(self.x)):
                c = self._next_opening_constant(e)
                e[v] = c
                out.append(c)
            self.e = e
        progress = True
        while progress and self.stuck is None:
            progress = False
            stable = self._stable(self.y)
            if stable is None:
                self.log.append("stability oracle undecided; counterstrategy halts")
                self.stuck = "oracle-undecided"
                break
            if stable:
                moved = self._fire_case1(out)
                if not moved:
                    break
                progress = True
                continue
            if self.queue:
                self._absorb(self.queue.pop(0))
                progress = True
        return out

    def _next_opening_constant(self, taken: dict[str, str]) -> str:
        used = constants(self.x) | set(taken.values())
        n = 0
        while numeral_of_int(n) in used:
            n += 1
        return numeral_of_int(n)

    def _fire_case1(self, out: list[str]) -> bool:
        """Emit the move toward the first unprovable Wait-premise candidate."""
        for ob in wait_obligation_details(self.y):
            if not self._unprovable(ob.expected):
                continue
            if ob.kind == "cho-and-succ":
                prefix = move_prefix_for_path(self.y.succedent, ob.path)
                out.append(f"1.{prefix}{ob.i}")
                self.y = ob.expected
            elif ob.kind == "cho-all-succ":
                c = self._fresh_constant()
                prefix = move_prefix_for_path(self.y.succedent, ob.path)
                out.append(f"1.{prefix}{c}")
                self.y = ob.expected
                self.e[ob.fresh] = c
            elif ob.kind == "cho-or-ant":
                rs, addr = self.slot_map[ob.slot]
                prefix = move_prefix_for_path(self.y.antecedent[ob.slot], ob.path)
                out.append(f"0.{numeral_of_int(rs)}.{addr}.{prefix}{ob.i}")
                self.y = ob.expected
            else:  # cho-ex-ant
                c = self._fresh_constant()
                rs, addr = self.slot_map[ob.slot]
                prefix = move_prefix_for_path(self.y.antecedent[ob.slot], ob.path)
                out.append(f"0.{numeral_of_int(rs)}.{addr}.{prefix}{c}")
                self.y = ob.expected
                self.e[ob.fresh] = c
            return True
        self.log.append("stable but no unprovable Wait premise found")
        self.stuck = "oracle-undecided"
        return False

    def _mirror_term(self, c: str, used_in: Sequent) -> tuple[Term, Optional[str]]:
        """The machine's constant as a rule witness: variable, constant, or fresh."""
        for v, cv in self.e.items():
            if cv == c:
                return Var(v), None
        if c in constants(used_in):
            return Const(c), None
        fresh = self._fresh_var()
        return Var(fresh), fresh

    def _fresh_var(self) -> str:
        from cl12.syntax import all_vars
        used = all_vars(self.y) | set(self.e)
        n = 0
        while f"m{n}" in used:
            n += 1
        return f"m{n}"

    def _absorb(self, entry: tuple):
        if entry[0] == "rep":
            _, rs, addr = entry
            slot = next((p for p, (r, a) in self.slot_map.items()
                         if r == rs and a == addr), None)
            if slot is None:
                self.stuck = f"replication at unknown copy {(rs, addr)}"
                return
            new_slot = len(self.y.antecedent)
            self.y = Sequent(self.y.antecedent + (self.y.antecedent[slot],),
                             self.y.succedent)
            self.slot_map[slot] = (rs, addr + "0")
            self.slot_map[new_slot] = (rs, addr + "1")
            return
        if entry[0] == "succ":
            _, beta = entry
            path, op, val = decode_formula_move(self.y.succedent, beta)
            sub = subformula_at(self.y.succedent, path)
            if op is ChoOr:
                new = sub.left if val == 0 else sub.right
                self.y = Sequent(self.y.antecedent,
                                 replace_at(self.y.succedent, path, new))
            elif op is ChoEx:
                t, fresh = self._mirror_term(val, self.y)
                body = substitute(sub.body, {sub.var: t})
                self.y = Sequent(self.y.antecedent,
                                 replace_at(self.y.succedent, path, body))
                if fresh:
                    self.e[fresh] = val
            else:
                self.stuck = "machine resolved an environment-owned succedent choice"
            return
        _, rs, addr, beta = entry
        slots = sorted(p for p, (r, a) in self.slot_map.items()
                       if r == rs and a.startswith(addr))
        if not slots:
            self.stuck = f"machine move at unknown copy {(rs, addr)}"
            return
        first, rest = slots[0], slots[1:]
        for p in reversed(rest):
            _, exact = self.slot_map[p]
            self.queue.insert(0, ("ant", rs, exact, beta))
        g = self.y.antecedent[first]
        path, op, val = decode_formula_move(g, beta)
        sub = subformula_at(g, path)
        if op is ChoAnd:
            new = replace_at(g, path, sub.left if val == 0 else sub.right)
        elif op is ChoAll:
            t, fresh = self._mirror_term(val, self.y)
            new = replace_at(g, path, substitute(sub.body, {sub.var: t}))
            if fresh:
                self.e[fresh] = val
        else:
            self.stuck = "machine resolved an environment-owned antecedent choice"
            return
        self.y = Sequent(self.y.antecedent[:first] + (new,)
                         + self.y.antecedent[first + 1:], self.y.succedent)

    def state_snapshot(self):
        return {"y": render_sequent(self.y), "e": dict(sorted(self.e.items())),
                "stuck": self.stuck, "log": list(self.log)}


def counterstrategy(x: Sequent, prover_budget: Optional[SearchBudget] = None) -> CounterstrategyEnv:
    return CounterstrategyEnv(x, prover_budget)


def falsifying_interpretation(position: SequentPosition,
                              max_domain: int = 3) -> Optional[FiniteModel]:
    """A finite interpretation under which the reached position is Top-lost."""
    residue = elementarize_sequent(
        Sequent(tuple(g for t in position.antecedent for _, g in tree_leaves(t)),
                position.succedent))
    verdict = find_countermodel(residue, max_domain)
    if isinstance(verdict, Countermodel):
        return verdict.model
    return None


# ---------------------------------------------------------------------------
# Composition: a solution for the succedent from solutions for the antecedent


class FormulaAgentAsSequentAgent(Agent):
    """Adapter: an agent for the game E exposed as a machine for ||- E."""

    def __init__(self, inner: Agent, closure_count: int):
        self.inner = inner
        self.remaining_closure = closure_count

    def on_tick(self, delivered: list[str]) -> list[str]:
        routed = []
        for m in delivered:
            if self.remaining_closure > 0 and NUMERAL_RE.fullmatch(m):
                self.remaining_closure -= 1
                routed.append(m)
            elif m.startswith("1."):
                routed.append(m[2:])
            else:
                routed.append(m)  # antecedent moves cannot occur: no slots exist
        return [f"1.{m}" for m in self.inner.on_tick(routed)]

    def state_snapshot(self):
        return {"closure_left": self.remaining_closure,
                "inner": self.inner.state_snapshot()}


class SequentAgentAsFormulaAgent(Agent):
    """Adapter: a sequent agent for ||- E exposed as an agent for the game E.

    The first ``closure_count`` constants pass through as opening choices;
    everything after is a formula move and gains/loses the succedent prefix.
    """

    def __init__(self, inner: Agent, closure_count: int):
        self.inner = inner
        self.remaining_closure = closure_count

    def on_tick(self, delivered: list[str]) -> list[str]:
        routed = []
        for m in delivered:
            if self.remaining_closure > 0 and NUMERAL_RE.fullmatch(m):
                self.remaining_closure -= 1
                routed.append(m)
            else:
                routed.append(f"1.{m}")
        out = self.inner.on_tick(routed)
        return [m[2:] if m.startswith("1.") else m for m in out]

    def state_snapshot(self):
        return {"closure_left": self.remaining_closure,
                "inner": self.inner.state_snapshot()}


class ComposedAgent(Agent):
    """Realizes logical consequence: plays F using solutions for E1..En.

    Internally runs the proof's sequent agent plus one simulated play of
    each antecedent copy, copycatting moves between the real play, the
    kernel, and the simulations.  Kernel replications fork the affected
    simulation into two identical copies.
    """

    MAX_ROUNDS = 256

    def __init__(self, proof: Proof, solutions: list[Agent]):
        x = proof.conclusion
        if len(solutions) != len(x.antecedent):
            raise ValueError("one solution per antecedent formula is required")
        self.x = x
        self.kernel = ProofAgent(proof)
        self.sims: dict[tuple[int, str], Agent] = {
            (i, ""): agent for i, agent in enumerate(solutions)}
        self.sim_inbox: dict[tuple[int, str], list[str]] = {
            key: [] for key in self.sims}
        self.f_closure = tuple(sorted(free_vars(x.succedent)))
        self.got: list[str] = []
        self.started = len(self.f_closure) == 0
        self.kernel_inbox: list[str] = []
        self.stuck: Optional[str] = None
        if self.started:
            self._start({})

    def _start(self, env_choice: dict[str, str]):
        e = {v: env_choice.get(v, "0") for v in sorted(free_vars(self.x))}
        self.e = e
        self.kernel_inbox.extend(e[v] for v in sorted(free_vars(self.x)))
        for (slot, _), agent in self.sims.items():
            formula = self.x.antecedent[slot]
            self.sim_inbox[(slot, "")].extend(
                e[v] for v in sorted(free_vars(formula)))
        self.started = True

    def on_tick(self, delivered: list[str]) -> list[str]:
        if self.stuck is not None:
            return []
        rest = list(delivered)
        if not self.started:
            while rest and len(self.got) < len(self.f_closure):
                m = rest.pop(0)
                if not NUMERAL_RE.fullmatch(m):
                    self.stuck = f"expected an opening constant, saw {m!r}"
                    return []
                self.got.append(m)
            if len(self.got) < len(self.f_closure):
                return []
            self._start(dict(zip(self.f_closure, self.got)))
        for m in rest:
            self.kernel_inbox.append(f"1.{m}")
        real_out: list[str] = []
        for _ in range(self.MAX_ROUNDS):
            traffic = False
            kernel_out = self.kernel.on_tick(self.kernel_inbox)
            self.kernel_inbox = []
            if self.kernel.stuck:
                self.stuck = f"simulation desync: {self.kernel.stuck}"
                return real_out
            for move in kernel_out:
                traffic = True
                self._route_kernel_move(move, real_out)
                if self.stuck:
                    return real_out
            for key in list(self.sims):
                inbox = self.sim_inbox.get(key, [])
                self.sim_inbox[key] = []
                emitted = self.sims[key].on_tick(inbox)
                for gamma in emitted:
                    traffic = True
                    slot, addr = key
                    self.kernel_inbox.append(
                        f"0.{numeral_of_int(slot)}.{addr}.{gamma}")
            if not traffic:
                break
        else:
            self.stuck = "internal routing did not settle"
        return real_out

    def _route_kernel_move(self, move: str, real_out: list[str]):
        head, dot, rest = move.partition(".")
        if head == "1" and dot:
            real_out.append(rest)
            return
        if head == "0" and dot:
            slot_str, dot2, mu = rest.partition(".")
            if dot2:
                slot = int(slot_str, 2)
                kind, addr, beta = _split_tree_move(mu)
                if kind == "rep":
                    base = self.sims.pop((slot, addr), None)
                    pending = self.sim_inbox.pop((slot, addr), [])
                    if base is None:
                        self.stuck = f"kernel replicated unknown copy {(slot, addr)}"
                        return
                    self.sims[(slot, addr + "0")] = base.checkpoint()
                    self.sims[(slot, addr + "1")] = base
                    self.sim_inbox[(slot, addr + "0")] = list(pending)
                    self.sim_inbox[(slot, addr + "1")] = list(pending)
                    return
                targets = [k for k in self.sims if k[0] == slot and k[1].startswith(addr)]
                if not targets:
                    self.stuck = f"kernel move at unknown copy {(slot, addr)}"
                    return
                for k in targets:
                    self.sim_inbox[k].append(beta)
                return
        self.stuck = f"unroutable kernel move {move!r}"

    def state_snapshot(self):
        return {
            "kernel": self.kernel.state_snapshot(),
            "sims": {f"{s}:{a}": agent.state_digest()
                     for (s, a), agent in sorted(self.sims.items())},
            "stuck": self.stuck,
        }


def compose(proof: Proof, solutions: list[Agent],
            interp: Optional[Interpretation] = None) -> ComposedAgent:
    """Solutions may be sequent agents (auto-adapted) or formula agents."""
    x = proof.conclusion
    adapted = [
        SequentAgentAsFormulaAgent(s, len(free_vars(x.antecedent[i])))
        if isinstance(s, ProofAgent) else s
        for i, s in enumerate(solutions)
    ]
    return ComposedAgent(proof, adapted)


# ---------------------------------------------------------------------------
# Exhaustive environment exploration (small games)


def exhaustive_plays(machine_factory: Callable[[], Agent], x: Sequent,
                     interp: Interpretation, pool: list[str],
                     move_cap: int = 12) -> Iterator[PlayResult]:
    """Every environment behavior over the constant pool, machine fixed.

    The environment moves only at machine-quiescent points; each branch
    either stops (adjudicating) or plays one of its legal moves.
    """

    def env_options(pos: SequentPosition) -> list[str]:
        out = []
        for schema in legal_move_schemas(pos, BOT):
            if schema.kind == "choose-constant":
                out.extend(schema.instantiate(c) for c in pool)
            else:
                out.append(schema.instantiate())
        return out

    def drain(agent: Agent, pos: SequentPosition, inbox: list[str],
              run: list[LabMove]) -> tuple[Optional[SequentPosition], bool]:
        moves = agent.on_tick(inbox)
        while moves:
            for m in moves:
                lab = LabMove(TOP, m)
                try:
                    pos = apply_move(pos, lab)
                except IllegalMove:
                    run.append(lab)
                    return pos, True
                run.append(lab)
            moves = agent.on_tick([])
        return pos, False

    def walk(agent: Agent, pos: SequentPosition, inbox: list[str],
             run: list[LabMove]) -> Iterator[PlayResult]:
        pos2, machine_illegal = drain(agent, pos, inbox, run)
        if machine_illegal:
            yield PlayResult(tuple(run), BOT, TOP, pos2, 0)
            return
        yield PlayResult(tuple(run), adjudicate(pos2, interp), None, pos2, 0)
        if len(run) >= move_cap:
            return
        for move in env_options(pos2):
            lab = LabMove(BOT, move)
            try:
                nxt = apply_move(pos2, lab)
            except IllegalMove:
                continue
            yield from walk(agent.checkpoint(), nxt, [move], run + [lab])

    yield from walk(machine_factory(), initial_position(x), [], [])
