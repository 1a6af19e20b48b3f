"""Classical first-order validity and countermodel search for elementary formulas.

The prover is a ground tableau with iterative deepening on quantifier
instantiation; equality is decided per branch by congruence closure (the
saturation of reflexivity and congruence instances).  Sound always, complete
only in the limit of the budget: verdicts are Valid, Countermodel or Unknown.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from cl12.syntax import (
    App, Atom, Bottom, Const, Equality, Formula, ParAnd, ParOr,
    BlindAll, BlindEx, Sequent, Term, Top, Var,
    elementarize_sequent, free_vars, is_elementary, letters, negate,
    int_of_numeral,
)


@dataclass(frozen=True)
class FiniteModel:
    """A finite universe; naming defaults to c -> c mod domain_size.

    ``naming`` overrides the default per numeral (several numerals may name
    one element).  Function tables map argument tuples to elements;
    predicate tables map argument tuples to booleans; tables are total.
    """

    domain_size: int
    functions: Mapping[str, Mapping[tuple[int, ...], int]] = field(default_factory=dict)
    predicates: Mapping[str, Mapping[tuple[int, ...], bool]] = field(default_factory=dict)
    naming: Mapping[str, int] = field(default_factory=dict)

    def name_of(self, numeral: str) -> int:
        if numeral in self.naming:
            return self.naming[numeral]
        return int_of_numeral(numeral) % self.domain_size

    def to_json(self):
        def table_json(tbl, arity):
            if arity == 0:
                return tbl[()]
            out = []
            for args in itertools.product(range(self.domain_size), repeat=arity):
                out.append([list(args), tbl[args]])
            return out

        fns = {}
        for letter, tbl in self.functions.items():
            arity = len(next(iter(tbl))) if tbl else 0
            fns[letter] = table_json(tbl, arity)
        preds = {}
        for letter, tbl in self.predicates.items():
            arity = len(next(iter(tbl))) if tbl else 0
            preds[letter] = table_json(tbl, arity)
        out = {"domain_size": self.domain_size, "functions": fns, "predicates": preds}
        if self.naming:
            out["naming"] = dict(self.naming)
        return out

    @staticmethod
    def from_json(data) -> "FiniteModel":
        def table(entries):
            if isinstance(entries, (int, bool)):
                return {(): entries}
            return {tuple(args): val for args, val in entries}

        return FiniteModel(
            data["domain_size"],
            {k: table(v) for k, v in data.get("functions", {}).items()},
            {k: {a: bool(b) for a, b in table(v).items()} for k, v in data.get("predicates", {}).items()},
            {k: int(v) for k, v in data.get("naming", {}).items()},
        )


@dataclass(frozen=True)
class Valid:
    certificate: tuple[str, ...] = ()


@dataclass(frozen=True)
class Countermodel:
    model: FiniteModel
    assignment: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Unknown:
    budget_spent: int = 0


ClassicalVerdict = Union[Valid, Countermodel, Unknown]


class UninterpretedLetter(Exception):
    pass


# ---------------------------------------------------------------------------
# Evaluation over finite models


def eval_term(t: Term, m: FiniteModel, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        if t.name not in env:
            raise UninterpretedLetter(f"unassigned variable {t.name}")
        return env[t.name]
    if isinstance(t, Const):
        return m.name_of(t.numeral)
    tbl = m.functions.get(t.letter)
    if tbl is None:
        raise UninterpretedLetter(f"function letter {t.letter}")
    args = tuple(eval_term(a, m, env) for a in t.args)
    return tbl[args]


def eval_elementary(f: Formula, m: FiniteModel, env: Optional[Mapping[str, int]] = None) -> bool:
    """Tarskian truth over the finite domain; blind quantifiers exhaust it."""
    env = dict(env or {})

    def ev(g: Formula, e: dict[str, int]) -> bool:
        if isinstance(g, Top):
            return True
        if isinstance(g, Bottom):
            return False
        if isinstance(g, Equality):
            val = eval_term(g.lhs, m, e) == eval_term(g.rhs, m, e)
            return val != g.negated
        if isinstance(g, Atom):
            tbl = m.predicates.get(g.letter)
            if tbl is None:
                raise UninterpretedLetter(f"predicate letter {g.letter}")
            val = tbl[tuple(eval_term(a, m, e) for a in g.args)]
            return bool(val) != g.negated
        if isinstance(g, ParAnd):
            return ev(g.left, e) and ev(g.right, e)
        if isinstance(g, ParOr):
            return ev(g.left, e) or ev(g.right, e)
        if isinstance(g, BlindAll):
            return all(ev(g.body, {**e, g.var: d}) for d in range(m.domain_size))
        if isinstance(g, BlindEx):
            return any(ev(g.body, {**e, g.var: d}) for d in range(m.domain_size))
        raise ValueError(f"non-elementary formula in eval: {type(g).__name__}")

    return ev(f, env)


def eval_with_vc(f: Formula, m: FiniteModel, vc: Mapping[str, str]) -> bool:
    """Like eval_elementary but the assignment maps variables to constants."""
    return eval_elementary(f, m, {v: m.name_of(c) for v, c in vc.items()})


# ---------------------------------------------------------------------------
# Congruence closure (ground)


class Congruence:
    """Union-find plus congruence fixpoint over ground terms.

    Terms are interned to integer ids on entry, so the union-find never
    rehashes term structures.  Propagation recomputes congruent pairs to a
    fixpoint after each merge; quadratic per round, which is fine at the
    term counts a branch ever sees.
    """

    def __init__(self):
        self.ids: dict[Term, int] = {}
        self.parent: list[int] = []
        self.apps: list[tuple[str, tuple[int, ...]]] = []  # aligned with app_ids
        self.app_ids: list[int] = []

    def add(self, t: Term) -> int:
        tid = self.ids.get(t)
        if tid is not None:
            return tid
        if isinstance(t, App):
            args = tuple(self.add(a) for a in t.args)
            tid = len(self.parent)
            self.ids[t] = tid
            self.parent.append(tid)
            self.apps.append((t.letter, args))
            self.app_ids.append(tid)
        else:
            tid = len(self.parent)
            self.ids[t] = tid
            self.parent.append(tid)
        return tid

    def _find(self, i: int) -> int:
        root = i
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def _union(self, a: int, b: int) -> bool:
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True

    def _propagate(self):
        changed = True
        while changed:
            changed = False
            sigs: dict[tuple, int] = {}
            for (letter, args), tid in zip(self.apps, self.app_ids):
                sig = (letter, tuple(self._find(a) for a in args))
                other = sigs.get(sig)
                if other is not None:
                    changed |= self._union(tid, other)
                else:
                    sigs[sig] = tid

    def merge(self, a: Term, b: Term):
        ia, ib = self.add(a), self.add(b)
        if self._union(ia, ib):
            self._propagate()

    def equal(self, a: Term, b: Term) -> bool:
        ia, ib = self.add(a), self.add(b)
        self._propagate()
        return self._find(ia) == self._find(ib)


# ---------------------------------------------------------------------------
# Tableau prover


@dataclass
class _Branch:
    todo: list[Formula]
    pos_atoms: list[Atom]
    neg_atoms: list[Atom]
    equalities: list[Equality]
    disequalities: list[Equality]
    gammas: list[BlindAll]          # universal premises to re-instantiate
    done_insts: set[tuple[int, Term]]
    fresh_counter: int

    def clone(self) -> "_Branch":
        return _Branch(list(self.todo), list(self.pos_atoms), list(self.neg_atoms),
                       list(self.equalities), list(self.disequalities), list(self.gammas),
                       set(self.done_insts), self.fresh_counter)


def _branch_terms(br: _Branch) -> list[Term]:
    seen: dict[Term, None] = {}

    def add_term(t: Term):
        if t in seen:
            return
        seen[t] = None
        if isinstance(t, App):
            for a in t.args:
                add_term(a)

    for a in br.pos_atoms + br.neg_atoms:
        for t in a.args:
            add_term(t)
    for e in br.equalities + br.disequalities:
        add_term(e.lhs)
        add_term(e.rhs)
    if not seen:
        add_term(Const("0"))
    return list(seen)


def _branch_closed(br: _Branch) -> bool:
    cc = Congruence()
    for e in br.equalities + br.disequalities:
        cc.add(e.lhs)
        cc.add(e.rhs)
    for a in br.pos_atoms + br.neg_atoms:
        for t in a.args:
            cc.add(t)
    for e in br.equalities:
        cc._union(cc.ids[e.lhs], cc.ids[e.rhs])
    cc._propagate()

    def same(x: Term, y: Term) -> bool:
        return cc._find(cc.ids[x]) == cc._find(cc.ids[y])

    for d in br.disequalities:
        if same(d.lhs, d.rhs):
            return True
    by_letter: dict[str, list[Atom]] = {}
    for a in br.pos_atoms:
        by_letter.setdefault(a.letter, []).append(a)
    for n in br.neg_atoms:
        for p in by_letter.get(n.letter, []):
            if len(p.args) == len(n.args) and all(
                    same(x, y) for x, y in zip(p.args, n.args)):
                return True
    return False


_CLOSED, _OPEN, _DEPTH = "closed", "open", "depth"


def prove_valid(f: Formula, budget: int = 20000, max_rounds: int = 5) -> ClassicalVerdict:
    """Valid only if f is classically valid; Unknown absorbs budget exhaustion.

    Free variables of f are read universally (validity of the closure).
    """
    assert is_elementary(f), "prover expects an elementary formula"
    goal = negate(f)  # refute the negation
    spent = 0

    def close(br: _Branch, rounds_left: int) -> str:
        nonlocal spent
        while br.todo:
            spent += 1
            if spent > budget:
                return _DEPTH
            g = br.todo.pop()
            if isinstance(g, Top):
                continue
            if isinstance(g, Bottom):
                return _CLOSED
            if isinstance(g, Atom):
                (br.neg_atoms if g.negated else br.pos_atoms).append(Atom(g.letter, g.args))
            elif isinstance(g, Equality):
                (br.disequalities if g.negated else br.equalities).append(
                    Equality(g.lhs, g.rhs))
            elif isinstance(g, ParAnd):
                br.todo.append(g.left)
                br.todo.append(g.right)
            elif isinstance(g, ParOr):
                left = br.clone()
                left.todo.append(g.left)
                out_left = close(left, rounds_left)
                if out_left == _CLOSED:
                    br.todo.append(g.right)
                    continue
                return out_left
            elif isinstance(g, BlindEx):
                br.fresh_counter += 1
                br.todo.append(_subst_var(g.body, g.var, Var(f"_sk{br.fresh_counter}")))
            elif isinstance(g, BlindAll):
                br.gammas.append(g)
            else:
                raise ValueError(f"non-elementary {type(g).__name__}")
        if _branch_closed(br):
            return _CLOSED
        new_insts = []
        terms = _branch_terms(br)
        if len(terms) > 64:  # congruence stays cheap; deeper growth rarely closes
            return _DEPTH
        for gi in range(len(br.gammas)):
            for t in terms:
                if (gi, t) not in br.done_insts:
                    new_insts.append((gi, t))
        if not new_insts:
            return _OPEN  # saturated: no refutation exists on this branch
        if rounds_left <= 0:
            return _DEPTH
        for gi, t in new_insts:
            br.done_insts.add((gi, t))
            br.todo.append(_subst_var(br.gammas[gi].body, br.gammas[gi].var, t))
        return close(br, rounds_left - 1)

    for rounds in range(1, max_rounds + 1):
        root = _Branch([goal], [], [], [], [], [], set(), 0)
        out = close(root, rounds)
        if out == _CLOSED:
            return Valid((f"tableau closed within {rounds} instantiation rounds",))
        if out == _OPEN:
            return Unknown(spent)
        if spent > budget:
            break
    return Unknown(spent)


def _subst_var(f: Formula, var: str, t: Term) -> Formula:
    from cl12.syntax import substitute
    return substitute(f, {var: t})


# ---------------------------------------------------------------------------
# Finite countermodel search


class _NeedEntry(Exception):
    """A table entry the lazy evaluation needs but has not fixed yet.

    kind: "fn" | "pred" | "name"; fn/name entries live in the function
    table (a naming entry has key ("name", numeral)), pred entries in the
    predicate table.
    """

    def __init__(self, kind: str, letter: str, args: tuple[int, ...]):
        self.kind = kind
        if kind == "name":
            self.key = ("name", letter)
        else:
            self.key = (letter, args)


def _eval_partial(f: Formula, size: int, fns, preds, env) -> bool:
    def term(t: Term, e) -> int:
        if isinstance(t, Var):
            return e[t.name]
        if isinstance(t, Const):
            key = ("name", t.numeral)
            if key not in fns:
                raise _NeedEntry("name", t.numeral, ())
            return fns[key]
        args = tuple(term(a, e) for a in t.args)
        key = (t.letter, args)
        if key not in fns:
            raise _NeedEntry("fn", t.letter, args)
        return fns[key]

    def ev(g: Formula, e) -> bool:
        if isinstance(g, Top):
            return True
        if isinstance(g, Bottom):
            return False
        if isinstance(g, Equality):
            return (term(g.lhs, e) == term(g.rhs, e)) != g.negated
        if isinstance(g, Atom):
            args = tuple(term(a, e) for a in g.args)
            key = (g.letter, args)
            if key not in preds:
                raise _NeedEntry("pred", g.letter, args)
            return preds[key] != g.negated
        if isinstance(g, ParAnd):
            return ev(g.left, e) and ev(g.right, e)
        if isinstance(g, ParOr):
            return ev(g.left, e) or ev(g.right, e)
        if isinstance(g, BlindAll):
            return all(ev(g.body, {**e, g.var: d}) for d in range(size))
        if isinstance(g, BlindEx):
            return any(ev(g.body, {**e, g.var: d}) for d in range(size))
        raise ValueError(f"non-elementary {type(g).__name__}")

    return ev(f, dict(env))


def find_countermodel(f: Formula, max_domain: int = 3, budget: int = 200000) -> ClassicalVerdict:
    """Search finite models (and assignments for free variables) falsifying f.

    Function and predicate tables are grown lazily: only entries the
    evaluation actually touches are branched over, so large tables never get
    fully enumerated.
    """
    assert is_elementary(f), "countermodel search expects an elementary formula"
    fvs = sorted(free_vars(f))
    spent = 0

    for size in range(1, max_domain + 1):
        for assignment in itertools.product(range(size), repeat=len(fvs)):
            env = dict(zip(fvs, assignment))
            fns: dict[tuple[str, tuple[int, ...]], int] = {}
            preds: dict[tuple[str, tuple[int, ...]], bool] = {}

            def search() -> bool:
                nonlocal spent
                spent += 1
                if spent > budget:
                    raise TimeoutError
                try:
                    return not _eval_partial(f, size, fns, preds, env)
                except _NeedEntry as ne:
                    table = preds if ne.kind == "pred" else fns
                    values = (False, True) if ne.kind == "pred" else range(size)
                    for v in values:
                        table[ne.key] = v
                        if search():
                            return True
                    del table[ne.key]
                    return False

            try:
                if search():
                    model = _materialize(f, size, fns, preds)
                    return Countermodel(model, env)
            except TimeoutError:
                return Unknown(spent)
    return Unknown(spent)


def _materialize(f: Formula, size: int, fns, preds) -> FiniteModel:
    """Total tables extending the partial ones (unconstrained entries get 0/False)."""
    pred_letters, fn_letters = letters(f)
    functions: dict[str, dict[tuple[int, ...], int]] = {}
    predicates: dict[str, dict[tuple[int, ...], bool]] = {}
    for letter, arity in fn_letters.items():
        tbl = {}
        for args in itertools.product(range(size), repeat=arity):
            tbl[args] = fns.get((letter, args), 0)
        functions[letter] = tbl
    for letter, arity in pred_letters.items():
        tbl = {}
        for args in itertools.product(range(size), repeat=arity):
            tbl[args] = preds.get((letter, args), False)
        predicates[letter] = tbl
    naming = {key[1]: v for key, v in fns.items() if key[0] == "name"}
    return FiniteModel(size, functions, predicates, naming)


# ---------------------------------------------------------------------------
# Stability


def check_stability(s: Sequent, budget: int = 20000, max_domain: int = 3) -> ClassicalVerdict:
    """Valid = stable, Countermodel = unstable, Unknown otherwise.

    Escalates in phases: a domain-1 countermodel and a short tableau run
    settle almost everything cheaply before the full budgets are spent.
    """
    elz = elementarize_sequent(s)
    spent = 0
    phases = (
        ("cm", 1, min(budget, 2000)),
        ("pv", 3, min(budget, 2500)),
        ("cm", 2, min(budget, 8000)),
        ("pv", 5, budget),
        ("cm", max_domain, budget),
    )
    for kind, level, phase_budget in phases:
        if kind == "pv":
            verdict = prove_valid(elz, phase_budget, max_rounds=level)
            if isinstance(verdict, Valid):
                return verdict
        else:
            verdict = find_countermodel(elz, level, phase_budget)
            if isinstance(verdict, Countermodel):
                return verdict
        spent += getattr(verdict, "budget_spent", 0)
    return Unknown(spent)
