"""Proof objects for the six-rule sequent calculus, checking, and search.

A proof is a sequence of steps; each step names a rule, its parameters and
the indices of earlier steps serving as premises.  The checker recomputes
the expected premises from the conclusion and compares up to renaming of
bound variables (fresh Wait variables match up to one free renaming).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from cl12.classical import Countermodel, Unknown, Valid, check_stability
from cl12.syntax import (
    App, Atom, ChoAll, ChoAnd, ChoEx, ChoOr, Const, Formula,
    Occurrence, Sequent, Term, Var, all_vars, bound_vars,
    canonical_sequent, constants, free_vars, parse_sequent,
    parse_term, render_sequent, render_term, rename_sequent,
    sequents_alpha_equal, subformula_at, substitute, surface_occurrences,
    replace_at,
)

# ---------------------------------------------------------------------------
# Rule applications


@dataclass(frozen=True)
class SuccChooseDisjunct:
    occ: tuple[int, ...]
    i: int
    name = "succ-choose-disjunct"


@dataclass(frozen=True)
class AntChooseConjunct:
    slot: int
    occ: tuple[int, ...]
    i: int
    name = "ant-choose-conjunct"


@dataclass(frozen=True)
class SuccChooseWitness:
    occ: tuple[int, ...]
    t: Term
    name = "succ-choose-witness"


@dataclass(frozen=True)
class AntChooseInstance:
    slot: int
    occ: tuple[int, ...]
    t: Term
    name = "ant-choose-instance"


@dataclass(frozen=True)
class Replicate:
    slot: int
    name = "replicate"


@dataclass(frozen=True)
class Wait:
    name = "wait"


@dataclass(frozen=True)
class Exchange:
    slot_a: int
    slot_b: int
    name = "exchange"


@dataclass(frozen=True)
class Weakening:
    inserted_slots: tuple[int, ...]
    name = "weakening"


RuleApp = Union[SuccChooseDisjunct, AntChooseConjunct, SuccChooseWitness,
                AntChooseInstance, Replicate, Wait, Exchange, Weakening]


@dataclass(frozen=True)
class ProofStep:
    sequent: Sequent
    rule: RuleApp
    premises: tuple[int, ...] = ()


@dataclass(frozen=True)
class Proof:
    steps: tuple[ProofStep, ...]

    @property
    def conclusion(self) -> Sequent:
        return self.steps[-1].sequent

    def replicate_count(self) -> int:
        return sum(1 for s in self.steps if isinstance(s.rule, Replicate))


# ---------------------------------------------------------------------------
# JSON


def rule_to_json(r: RuleApp) -> tuple[str, dict]:
    if isinstance(r, SuccChooseDisjunct):
        return r.name, {"occ": list(r.occ), "i": r.i}
    if isinstance(r, AntChooseConjunct):
        return r.name, {"slot": r.slot, "occ": list(r.occ), "i": r.i}
    if isinstance(r, SuccChooseWitness):
        return r.name, {"occ": list(r.occ), "t": render_term(r.t)}
    if isinstance(r, AntChooseInstance):
        return r.name, {"slot": r.slot, "occ": list(r.occ), "t": render_term(r.t)}
    if isinstance(r, Replicate):
        return r.name, {"slot": r.slot}
    if isinstance(r, Wait):
        return r.name, {}
    if isinstance(r, Exchange):
        return r.name, {"slot_a": r.slot_a, "slot_b": r.slot_b}
    if isinstance(r, Weakening):
        return r.name, {"inserted_slots": list(r.inserted_slots)}
    raise TypeError(r)


def rule_from_json(name: str, params: dict) -> RuleApp:
    if name == "succ-choose-disjunct":
        return SuccChooseDisjunct(tuple(params["occ"]), int(params["i"]))
    if name == "ant-choose-conjunct":
        return AntChooseConjunct(int(params["slot"]), tuple(params["occ"]), int(params["i"]))
    if name == "succ-choose-witness":
        return SuccChooseWitness(tuple(params["occ"]), parse_term(params["t"]))
    if name == "ant-choose-instance":
        return AntChooseInstance(int(params["slot"]), tuple(params["occ"]), parse_term(params["t"]))
    if name == "replicate":
        return Replicate(int(params["slot"]))
    if name == "wait":
        return Wait()
    if name == "exchange":
        return Exchange(int(params["slot_a"]), int(params["slot_b"]))
    if name == "weakening":
        return Weakening(tuple(params["inserted_slots"]))
    raise ValueError(f"unknown rule {name!r}")


def proof_to_json(p: Proof) -> dict:
    steps = []
    for s in p.steps:
        name, params = rule_to_json(s.rule)
        steps.append({"sequent": render_sequent(s.sequent), "rule": name,
                      "params": params, "premises": list(s.premises)})
    return {"steps": steps}


def proof_from_json(data: dict) -> Proof:
    steps = []
    for s in data["steps"]:
        steps.append(ProofStep(parse_sequent(s["sequent"]),
                               rule_from_json(s["rule"], s.get("params", {})),
                               tuple(s.get("premises", ()))))
    return Proof(tuple(steps))


# ---------------------------------------------------------------------------
# Wait obligations


@dataclass(frozen=True)
class Obligation:
    kind: str                 # cho-and-succ | cho-all-succ | cho-or-ant | cho-ex-ant
    slot: Optional[int]       # antecedent slot, None for succedent
    path: tuple[int, ...]
    i: Optional[int]          # branch index for connective obligations
    fresh: Optional[str]      # canonical fresh variable for quantifier obligations
    expected: Sequent


def _fresh_var(used: set[str], counter: int) -> str:
    while f"v{counter}" in used:
        counter += 1
    return f"v{counter}"


def wait_obligation_details(x: Sequent) -> list[Obligation]:
    """The premises Wait demands, one per environment-resolvable occurrence."""
    out: list[Obligation] = []
    used = set(all_vars(x))
    counter = 0
    for occ in surface_occurrences(x.succedent, ChoAnd):
        sub = subformula_at(x.succedent, occ.path)
        for i, kid in enumerate((sub.left, sub.right)):
            out.append(Obligation("cho-and-succ", None, occ.path, i, None,
                                  Sequent(x.antecedent, replace_at(x.succedent, occ.path, kid))))
    for occ in surface_occurrences(x.succedent, ChoAll):
        sub = subformula_at(x.succedent, occ.path)
        y = _fresh_var(used, counter)
        used.add(y)
        body = substitute(sub.body, {sub.var: Var(y)})
        out.append(Obligation("cho-all-succ", None, occ.path, None, y,
                              Sequent(x.antecedent, replace_at(x.succedent, occ.path, body))))
    for slot, g in enumerate(x.antecedent):
        for occ in surface_occurrences(g, ChoOr):
            sub = subformula_at(g, occ.path)
            for i, kid in enumerate((sub.left, sub.right)):
                ante = x.antecedent[:slot] + (replace_at(g, occ.path, kid),) + x.antecedent[slot + 1:]
                out.append(Obligation("cho-or-ant", slot, occ.path, i, None,
                                      Sequent(ante, x.succedent)))
        for occ in surface_occurrences(g, ChoEx):
            sub = subformula_at(g, occ.path)
            y = _fresh_var(used, counter)
            used.add(y)
            body = substitute(sub.body, {sub.var: Var(y)})
            ante = x.antecedent[:slot] + (replace_at(g, occ.path, body),) + x.antecedent[slot + 1:]
            out.append(Obligation("cho-ex-ant", slot, occ.path, None, y,
                                  Sequent(ante, x.succedent)))
    return out


def wait_obligations(x: Sequent) -> list[Sequent]:
    return [ob.expected for ob in wait_obligation_details(x)]


def match_obligation(ob: Obligation, candidate: Sequent, conclusion: Sequent) -> Optional[str]:
    """None if no match; otherwise the candidate's fresh variable ('' if none needed)."""
    if ob.fresh is None or ob.fresh not in free_vars(ob.expected):
        return "" if sequents_alpha_equal(ob.expected, candidate) else None
    conclusion_vars = all_vars(conclusion) | constants(conclusion)
    for y in sorted(free_vars(candidate)):
        if y in all_vars(conclusion):
            continue
        try:
            renamed = rename_sequent(ob.expected, {ob.fresh: y})
        except ValueError:
            continue
        if sequents_alpha_equal(renamed, candidate):
            return y
    return None


# ---------------------------------------------------------------------------
# Step checking


@dataclass(frozen=True)
class StepVerdict:
    status: str  # ok | fail | unverified-stability
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


OK = StepVerdict("ok")


def _fail(reason: str) -> StepVerdict:
    return StepVerdict("fail", reason)


def _check_occurrence(f: Formula, occ: tuple[int, ...], kind, what: str) -> Optional[str]:
    try:
        sub = subformula_at(f, occ)
    except IndexError:
        return f"{what}: path {occ} does not resolve"
    if not isinstance(sub, kind):
        return f"{what}: occurrence is {type(sub).__name__}, expected {kind.__name__}"
    if Occurrence(occ, None) not in [Occurrence(o.path, None) for o in surface_occurrences(f, kind)]:
        return f"{what}: occurrence is not surface"
    return None


def _witness_ok(t: Term, premise: Sequent) -> Optional[str]:
    if isinstance(t, Const):
        return None
    if isinstance(t, Var):
        bound = set()
        for g in premise.antecedent:
            bound |= bound_vars(g)
        bound |= bound_vars(premise.succedent)
        if t.name in bound:
            return f"witness {t.name} has bound occurrences in the premise"
        return None
    return f"witness {render_term(t)} must be a constant or a variable"


def check_step(conclusion: Sequent, app: RuleApp, premises: list[Sequent],
               budget: int = 20000) -> StepVerdict:
    """Verify one rule application; stability failures are reported, never raised."""
    if isinstance(app, Wait):
        obligations = wait_obligation_details(conclusion)
        for ob in obligations:
            if not any(match_obligation(ob, prem, conclusion) is not None for prem in premises):
                return _fail(f"missing Wait premise for {ob.kind} at {ob.path}"
                             + (f" (slot {ob.slot})" if ob.slot is not None else ""))
        verdict = check_stability(conclusion, budget)
        if isinstance(verdict, Valid):
            return OK
        if isinstance(verdict, Countermodel):
            return _fail("conclusion is unstable (elementarization has a countermodel)")
        return StepVerdict("unverified-stability", "stability check exhausted its budget")

    if len(premises) != 1:
        return _fail(f"{app.name} takes exactly one premise")
    premise = premises[0]

    if isinstance(app, SuccChooseDisjunct):
        err = _check_occurrence(conclusion.succedent, app.occ, ChoOr, "succedent")
        if err:
            return _fail(err)
        sub = subformula_at(conclusion.succedent, app.occ)
        expected = Sequent(conclusion.antecedent,
                           replace_at(conclusion.succedent, app.occ,
                                      sub.left if app.i == 0 else sub.right))
    elif isinstance(app, AntChooseConjunct):
        if app.slot >= len(conclusion.antecedent):
            return _fail(f"no antecedent slot {app.slot}")
        g = conclusion.antecedent[app.slot]
        err = _check_occurrence(g, app.occ, ChoAnd, f"antecedent {app.slot}")
        if err:
            return _fail(err)
        sub = subformula_at(g, app.occ)
        new = replace_at(g, app.occ, sub.left if app.i == 0 else sub.right)
        expected = Sequent(conclusion.antecedent[:app.slot] + (new,)
                           + conclusion.antecedent[app.slot + 1:], conclusion.succedent)
    elif isinstance(app, SuccChooseWitness):
        err = _check_occurrence(conclusion.succedent, app.occ, ChoEx, "succedent")
        if err:
            return _fail(err)
        err = _witness_ok(app.t, premise)
        if err:
            return _fail(err)
        sub = subformula_at(conclusion.succedent, app.occ)
        try:
            body = substitute(sub.body, {sub.var: app.t})
        except ValueError as e:
            return _fail(str(e))
        expected = Sequent(conclusion.antecedent,
                           replace_at(conclusion.succedent, app.occ, body))
    elif isinstance(app, AntChooseInstance):
        if app.slot >= len(conclusion.antecedent):
            return _fail(f"no antecedent slot {app.slot}")
        g = conclusion.antecedent[app.slot]
        err = _check_occurrence(g, app.occ, ChoAll, f"antecedent {app.slot}")
        if err:
            return _fail(err)
        err = _witness_ok(app.t, premise)
        if err:
            return _fail(err)
        sub = subformula_at(g, app.occ)
        try:
            body = substitute(sub.body, {sub.var: app.t})
        except ValueError as e:
            return _fail(str(e))
        new = replace_at(g, app.occ, body)
        expected = Sequent(conclusion.antecedent[:app.slot] + (new,)
                           + conclusion.antecedent[app.slot + 1:], conclusion.succedent)
    elif isinstance(app, Replicate):
        if app.slot >= len(conclusion.antecedent):
            return _fail(f"no antecedent slot {app.slot}")
        expected = Sequent(conclusion.antecedent + (conclusion.antecedent[app.slot],),
                           conclusion.succedent)
    elif isinstance(app, Exchange):
        n = len(conclusion.antecedent)
        if app.slot_a >= n or app.slot_b >= n:
            return _fail("exchange slot out of range")
        ante = list(conclusion.antecedent)
        ante[app.slot_a], ante[app.slot_b] = ante[app.slot_b], ante[app.slot_a]
        expected = Sequent(tuple(ante), conclusion.succedent)
    elif isinstance(app, Weakening):
        inserted = set(app.inserted_slots)
        if any(i >= len(conclusion.antecedent) for i in inserted):
            return _fail("weakening slot out of range")
        ante = tuple(g for i, g in enumerate(conclusion.antecedent) if i not in inserted)
        expected = Sequent(ante, conclusion.succedent)
    else:
        return _fail(f"unknown rule {app!r}")

    if not sequents_alpha_equal(expected, premise):
        return _fail(f"premise mismatch: expected {render_sequent(expected)}")
    return OK


# ---------------------------------------------------------------------------
# Proof checking


@dataclass(frozen=True)
class CheckReport:
    verdicts: tuple[StepVerdict, ...]
    overall: str  # valid | invalid | valid-modulo-stability

    def to_json(self):
        return {"steps": [{"status": v.status, "reason": v.reason} for v in self.verdicts],
                "overall": self.overall}


def check_proof(p: Proof, budget: int = 20000) -> CheckReport:
    if not p.steps:
        return CheckReport((_fail("a proof needs at least one step"),), "invalid")
    verdicts: list[StepVerdict] = []
    for idx, step in enumerate(p.steps):
        if any(j >= idx for j in step.premises):
            verdicts.append(_fail("premise indices must reference earlier steps"))
            continue
        premises = [p.steps[j].sequent for j in step.premises]
        verdicts.append(check_step(step.sequent, step.rule, premises, budget))
    if all(v.ok for v in verdicts):
        overall = "valid"
    elif all(v.status in ("ok", "unverified-stability") for v in verdicts):
        overall = "valid-modulo-stability"
    else:
        overall = "invalid"
    return CheckReport(tuple(verdicts), overall)


# ---------------------------------------------------------------------------
# Bottom-up proof search


@dataclass
class SearchBudget:
    max_depth: int = 12
    max_replications: int = 2
    stability_budget: int = 8000
    max_visits: int = 200000


@dataclass
class NotFound:
    frontier: int
    stability_unknowns: int = 0


@dataclass
class _Node:
    sequent: Sequent
    rule: RuleApp
    premises: list["_Node"]


class _Searcher:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.stability_cache: dict[str, object] = {}
        self.proved: dict[str, _Node] = {}
        self.failed: dict[str, list[tuple[int, int]]] = {}  # canon -> failure marks
        self.visits = 0
        self.unknowns = 0
        self.cycle_events = 0

    def stability(self, x: Sequent):
        key = canonical_sequent(x)
        if key not in self.stability_cache:
            self.stability_cache[key] = check_stability(x, self.budget.stability_budget)
        return self.stability_cache[key]

    def witness_pool(self, x: Sequent) -> list[Term]:
        pool: list[Term] = [Const("0")]
        pool += [Const(c) for c in sorted(constants(x)) if c != "0"]
        pool += [Var(v) for v in sorted(free_vars(x))]
        return pool

    def candidates(self, x: Sequent, reps_left: int) -> list[tuple[RuleApp, list[Sequent]]]:
        out: list[tuple[RuleApp, list[Sequent]]] = []
        stab = self.stability(x)
        if isinstance(stab, Unknown):
            self.unknowns += 1
        if isinstance(stab, Valid):
            obs = wait_obligation_details(x)
            out.append((Wait(), [ob.expected for ob in obs]))
        pool = self.witness_pool(x)
        for occ in surface_occurrences(x.succedent, ChoOr):
            sub = subformula_at(x.succedent, occ.path)
            for i, kid in enumerate((sub.left, sub.right)):
                out.append((SuccChooseDisjunct(occ.path, i),
                            [Sequent(x.antecedent, replace_at(x.succedent, occ.path, kid))]))
        for occ in surface_occurrences(x.succedent, ChoEx):
            sub = subformula_at(x.succedent, occ.path)
            for t in pool:
                body = substitute(sub.body, {sub.var: t})
                out.append((SuccChooseWitness(occ.path, t),
                            [Sequent(x.antecedent, replace_at(x.succedent, occ.path, body))]))
        for slot, g in enumerate(x.antecedent):
            for occ in surface_occurrences(g, ChoAnd):
                sub = subformula_at(g, occ.path)
                for i, kid in enumerate((sub.left, sub.right)):
                    new = replace_at(g, occ.path, kid)
                    ante = x.antecedent[:slot] + (new,) + x.antecedent[slot + 1:]
                    out.append((AntChooseConjunct(slot, occ.path, i),
                                [Sequent(ante, x.succedent)]))
            for occ in surface_occurrences(g, ChoAll):
                sub = subformula_at(g, occ.path)
                for t in pool:
                    body = substitute(sub.body, {sub.var: t})
                    new = replace_at(g, occ.path, body)
                    ante = x.antecedent[:slot] + (new,) + x.antecedent[slot + 1:]
                    out.append((AntChooseInstance(slot, occ.path, t),
                                [Sequent(ante, x.succedent)]))
        if reps_left > 0:
            for slot, g in enumerate(x.antecedent):
                if surface_occurrences(g, None):  # a copy with no choices left is dead weight
                    out.append((Replicate(slot),
                                [Sequent(x.antecedent + (g,), x.succedent)]))
        return out

    def prove(self, x: Sequent, depth: int, reps_left: int,
              in_progress: set[str]) -> Optional[_Node]:
        self.visits += 1
        if depth <= 0:
            return None
        if self.visits > self.budget.max_visits:
            self.cycle_events += 1  # taints enclosing failures like a cycle does
            return None
        key = canonical_sequent(x)
        if key in in_progress:
            self.cycle_events += 1
            return None
        hit = self.proved.get(key)
        if hit is not None:
            reused = self._instantiate(hit, x)
            if reused is not None:
                return reused
        if any(d >= depth and r >= reps_left for d, r in self.failed.get(key, [])):
            return None
        cycles_before = self.cycle_events
        in_progress.add(key)
        found: Optional[_Node] = None
        for rule, subgoals in self.candidates(x, reps_left):
            child_reps = reps_left - 1 if isinstance(rule, Replicate) else reps_left
            nodes = []
            for goal in subgoals:
                node = self.prove(goal, depth - 1, child_reps, in_progress)
                if node is None:
                    nodes = None
                    break
                nodes.append(node)
            if nodes is not None:
                found = _Node(x, rule, nodes)
                break
        in_progress.discard(key)
        if found is not None:
            self.proved[key] = found
            return found
        # a failure observed while an ancestor blocked a repeat (or the visit
        # budget ran out) says nothing about other contexts; do not cache it
        if self.cycle_events == cycles_before:
            marks = [m for m in self.failed.get(key, [])
                     if not (depth >= m[0] and reps_left >= m[1])]
            marks.append((depth, reps_left))
            self.failed[key] = marks
        return None

    def _instantiate(self, node: _Node, target: Sequent) -> Optional[_Node]:
        """Rename a memoized fragment so its conclusion becomes `target`."""
        if node.sequent == target:
            return node
        src_order = _free_order(node.sequent)
        dst_order = _free_order(target)
        if len(src_order) != len(dst_order):
            return None
        sigma = dict(zip(src_order, dst_order))
        taken = set(all_vars(target)) | set(sigma.values())

        def collect(n: _Node):
            taken.update(all_vars(n.sequent))
            for k in n.premises:
                collect(k)

        collect(node)
        counter = [0]

        def rename(n: _Node) -> _Node:
            local = dict(sigma)
            for v in sorted(free_vars(n.sequent)):
                if v not in local:
                    counter[0] += 1
                    w = f"w{counter[0]}"
                    while w in taken:
                        counter[0] += 1
                        w = f"w{counter[0]}"
                    taken.add(w)
                    local[v] = w
                    sigma[v] = w
            seq = rename_sequent(n.sequent, local)
            rule = n.rule
            if isinstance(rule, SuccChooseWitness) and isinstance(rule.t, Var):
                rule = SuccChooseWitness(rule.occ, Var(local.get(rule.t.name, rule.t.name)))
            if isinstance(rule, AntChooseInstance) and isinstance(rule.t, Var):
                rule = AntChooseInstance(rule.slot, rule.occ, Var(local.get(rule.t.name, rule.t.name)))
            return _Node(seq, rule, [rename(k) for k in n.premises])

        try:
            out = rename(node)
        except ValueError:
            return None
        if not sequents_alpha_equal(out.sequent, target):
            return None
        return _Node(target, out.rule, out.premises)


def _free_order(x: Sequent) -> list[str]:
    """Free variables in first-occurrence order of the canonical walk."""
    order: list[str] = []
    seen: set[str] = set()

    def walk_term(t: Term, bound: set[str]):
        if isinstance(t, Var):
            if t.name not in bound and t.name not in seen:
                seen.add(t.name)
                order.append(t.name)
        elif isinstance(t, App):
            for a in t.args:
                walk_term(a, bound)

    def walk(f: Formula, bound: set[str]):
        if isinstance(f, Atom):
            for a in f.args:
                walk_term(a, bound)
        elif hasattr(f, "lhs"):
            walk_term(f.lhs, bound)
            walk_term(f.rhs, bound)
        elif hasattr(f, "var"):
            walk(f.body, bound | {f.var})
        elif hasattr(f, "left"):
            walk(f.left, bound)
            walk(f.right, bound)

    for g in x.antecedent:
        walk(g, set())
    walk(x.succedent, set())
    return order


def search_proof(x: Sequent, budget: Optional[SearchBudget] = None) -> Union[Proof, NotFound]:
    budget = budget or SearchBudget()
    searcher = _Searcher(budget)
    root = None
    for depth in range(1, budget.max_depth + 1):
        root = searcher.prove(x, depth, budget.max_replications, set())
        if root is not None:
            break
        if searcher.visits > budget.max_visits:
            break
    if root is None:
        return NotFound(frontier=len(searcher.failed) + len(searcher.proved),
                        stability_unknowns=searcher.unknowns)
    return _assemble(root)


def _assemble(root: _Node) -> Proof:
    steps: list[ProofStep] = []
    index: dict[int, int] = {}

    def emit(node: _Node) -> int:
        if id(node) in index:
            return index[id(node)]
        prem = tuple(emit(k) for k in node.premises)
        steps.append(ProofStep(node.sequent, node.rule, prem))
        index[id(node)] = len(steps) - 1
        return index[id(node)]

    emit(root)
    return Proof(tuple(steps))
