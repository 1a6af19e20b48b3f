"""Sequents as games: positions, legal moves, evolution, adjudication.

A sequent E1,...,En ||- F is played as: one branching-recurrence tree of
evolving formula copies per antecedent slot, a succedent formula, and an
opening phase in which Environment picks constants for the sequent's free
variables (lexicographic order).  Positions are immutable; applying a move
returns a new position.

Move strings (bit-exact):
  - bare constant                during the opening constant phase
  - "0.<slot>.<mu>"              antecedent slot (0-based, binary numeral)
  - "1.<mu>"                     succedent
  - inside a tree, "<w>:" replicates leaf w; "<w>.<beta>" plays beta in
    every leaf whose address extends w
  - inside a formula, "<i>.<beta>" descends parallel component i; "0"/"1"
    resolves a choice connective; a constant resolves a choice quantifier
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Mapping, Optional, Union

from cl12.classical import FiniteModel, eval_elementary
from cl12.syntax import (
    Atom, BlindAll, BlindEx, Bottom, ChoAll, ChoAnd, ChoEx, ChoOr,
    Const, Equality, Formula, NUMERAL_RE, ParAnd, ParOr, Sequent, Term, Top,
    Var, children, elementarize, free_vars, int_of_numeral, is_elementary,
    numeral_of_int, replace_child, substitute,
)

TOP = "T"
BOT = "B"

POSITIVE = "pos"
NEGATIVE = "neg"


def opponent(player: str) -> str:
    return BOT if player == TOP else TOP


@dataclass(frozen=True)
class LabMove:
    player: str  # TOP | BOT
    move: str

    def __post_init__(self):
        if self.player not in (TOP, BOT):
            raise ValueError(f"bad player {self.player!r}")
        if not self.move:
            raise ValueError("empty move")

    def to_json(self):
        return {"player": self.player, "move": self.move}

    @staticmethod
    def from_json(d) -> "LabMove":
        return LabMove(d["player"], d["move"])


Run = tuple[LabMove, ...]


class IllegalMove(Exception):
    def __init__(self, move: str, reason: str):
        super().__init__(f"illegal move {move!r}: {reason}")
        self.move = move
        self.reason = reason


# ---------------------------------------------------------------------------
# Formula-level game


def _choice_owner(f: Formula, role: str) -> str:
    base = BOT if isinstance(f, (ChoAnd, ChoAll)) else TOP
    return base if role == POSITIVE else opponent(base)


def formula_apply(f: Formula, move: str, player: str, role: str) -> tuple[Formula, Optional[str]]:
    """Evolve a formula position by one move; returns (formula, chosen constant)."""
    if isinstance(f, (BlindAll, BlindEx)):
        body, const = formula_apply(f.body, move, player, role)
        return type(f)(f.var, body), const
    if isinstance(f, (ParAnd, ParOr)):
        head, dot, rest = move.partition(".")
        if not dot or head not in ("0", "1") or not rest:
            raise IllegalMove(move, "parallel component moves look like <i>.<move>")
        i = int(head)
        kid = f.left if i == 0 else f.right
        new, const = formula_apply(kid, rest, player, role)
        return replace_child(f, i, new), const
    if isinstance(f, (ChoAnd, ChoOr)):
        if move not in ("0", "1"):
            raise IllegalMove(move, "a choice connective takes the move 0 or 1")
        if player != _choice_owner(f, role):
            raise IllegalMove(move, "choice belongs to the other player")
        return (f.left if move == "0" else f.right), None
    if isinstance(f, (ChoAll, ChoEx)):
        if not NUMERAL_RE.fullmatch(move):
            raise IllegalMove(move, "a choice quantifier takes a constant")
        if player != _choice_owner(f, role):
            raise IllegalMove(move, "choice belongs to the other player")
        return substitute(f.body, {f.var: Const(move)}), move
    raise IllegalMove(move, "no moves exist in an elementary position")


@dataclass(frozen=True)
class MoveSchema:
    """A finite description of a family of legal moves.

    ``prefix`` is the full move-string prefix; instantiate() appends the
    choice token (nothing for replications, 0/1 for connectives, a constant
    for quantifier or opening-phase choices).
    """

    kind: str                    # choose-left | choose-right | choose-constant | replicate
    owner: str                   # TOP | BOT
    prefix: str
    slot: Optional[int] = None   # antecedent slot, None for succedent/opening
    address: Optional[str] = None  # tree address (antecedent only)
    path: tuple[int, ...] = ()   # AST path to the occurrence
    var: Optional[str] = None    # choice/opening variable, if any

    def instantiate(self, constant: Optional[str] = None) -> str:
        if self.kind == "replicate":
            return self.prefix
        if self.kind == "choose-left":
            return self.prefix + "0"
        if self.kind == "choose-right":
            return self.prefix + "1"
        assert self.kind == "choose-constant"
        if constant is None or not NUMERAL_RE.fullmatch(constant):
            raise ValueError(f"schema needs a constant, got {constant!r}")
        return self.prefix + constant

    def to_json(self):
        return {
            "kind": self.kind, "owner": self.owner, "prefix": self.prefix,
            "slot": self.slot, "address": self.address, "path": list(self.path),
            "var": self.var,
        }


def formula_schemas(f: Formula, role: str, prefix: str = "",
                    path: tuple[int, ...] = ()) -> list[MoveSchema]:
    """Schemas for every surface choice occurrence, left to right."""
    if isinstance(f, (BlindAll, BlindEx)):
        return formula_schemas(f.body, role, prefix, path + (0,))
    if isinstance(f, (ParAnd, ParOr)):
        out = formula_schemas(f.left, role, prefix + "0.", path + (0,))
        out += formula_schemas(f.right, role, prefix + "1.", path + (1,))
        return out
    if isinstance(f, (ChoAnd, ChoOr)):
        owner = _choice_owner(f, role)
        return [
            MoveSchema("choose-left", owner, prefix, path=path),
            MoveSchema("choose-right", owner, prefix, path=path),
        ]
    if isinstance(f, (ChoAll, ChoEx)):
        owner = _choice_owner(f, role)
        return [MoveSchema("choose-constant", owner, prefix, path=path, var=f.var)]
    return []


# ---------------------------------------------------------------------------
# Branching-recurrence trees


@dataclass(frozen=True)
class Leaf:
    formula: Formula


@dataclass(frozen=True)
class Node:
    left: "GameTree"
    right: "GameTree"


GameTree = Union[Leaf, Node]


def tree_leaves(t: GameTree, addr: str = "") -> list[tuple[str, Formula]]:
    if isinstance(t, Leaf):
        return [(addr, t.formula)]
    return tree_leaves(t.left, addr + "0") + tree_leaves(t.right, addr + "1")


def tree_map(t: GameTree, fn: Callable[[Formula], Formula]) -> GameTree:
    if isinstance(t, Leaf):
        return Leaf(fn(t.formula))
    return Node(tree_map(t.left, fn), tree_map(t.right, fn))


def _tree_replace_leaf(t: GameTree, addr: str, new: GameTree) -> GameTree:
    if isinstance(t, Leaf):
        assert addr == ""
        return new
    if addr[0] == "0":
        return Node(_tree_replace_leaf(t.left, addr[1:], new), t.right)
    return Node(t.left, _tree_replace_leaf(t.right, addr[1:], new))


def _split_tree_move(move: str) -> tuple[str, str, str]:
    """Returns (kind, address, beta) with kind 'rep' or 'nonrep'."""
    i = 0
    while i < len(move) and move[i] in "01":
        i += 1
    if i == len(move):
        raise IllegalMove(move, "a tree move needs ':' or '.<move>' after the address")
    if move[i] == ":":
        if i != len(move) - 1:
            raise IllegalMove(move, "nothing may follow a replication")
        return "rep", move[:i], ""
    if move[i] == ".":
        beta = move[i + 1:]
        if not beta:
            raise IllegalMove(move, "missing move after the address")
        return "nonrep", move[:i], beta
    raise IllegalMove(move, f"bad character {move[i]!r} in tree address")


def tree_apply(t: GameTree, move: str, player: str, role: str) -> tuple[GameTree, Optional[str]]:
    kind, addr, beta = _split_tree_move(move)
    leaves = tree_leaves(t)
    if kind == "rep":
        owner = BOT if role == POSITIVE else TOP
        if player != owner:
            raise IllegalMove(move, "replication belongs to the other player")
        if addr not in [a for a, _ in leaves]:
            raise IllegalMove(move, f"{addr!r} is not a leaf address")
        leaf = next(l for a, l in leaves if a == addr)
        return _tree_replace_leaf(t, addr, Node(Leaf(leaf), Leaf(leaf))), None
    hit = [(a, g) for a, g in leaves if a.startswith(addr)]
    if not hit:
        raise IllegalMove(move, f"no leaf address extends {addr!r}")
    const: Optional[str] = None
    out = t
    for a, g in hit:
        new, c = formula_apply(g, beta, player, role)
        const = const or c
        out = _tree_replace_leaf(out, a, Leaf(new))
    return out, const


def tree_schemas(t: GameTree, role: str, prefix: str = "") -> list[MoveSchema]:
    """Replications at every leaf plus formula schemas at every address prefix."""
    leaves = tree_leaves(t)
    rep_owner = BOT if role == POSITIVE else TOP
    out: list[MoveSchema] = []
    for addr, _ in leaves:
        out.append(MoveSchema("replicate", rep_owner, f"{prefix}{addr}:", address=addr))
    addresses = {a for a, _ in leaves}
    for addr, _ in leaves:
        for u in {addr[:i] for i in range(len(addr) + 1)}:
            addresses.add(u)
    for u in sorted(addresses):
        under = [g for a, g in leaves if a.startswith(u)]
        if not under:
            continue
        per_leaf = [formula_schemas(g, role) for g in under]
        common = {(s.kind, s.prefix, s.owner, s.var, s.path) for s in per_leaf[0]}
        for schemas in per_leaf[1:]:
            common &= {(s.kind, s.prefix, s.owner, s.var, s.path) for s in schemas}
        for kind, fprefix, owner, var, path in sorted(common):
            out.append(MoveSchema(kind, owner, f"{prefix}{u}.{fprefix}",
                                  address=u, path=path, var=var))
    return out


# ---------------------------------------------------------------------------
# Sequent positions


@dataclass(frozen=True)
class SequentPosition:
    closure_pending: tuple[str, ...]
    valuation: tuple[tuple[str, str], ...]
    antecedent: tuple[GameTree, ...]
    succedent: Formula
    env_constants: tuple[str, ...] = ()

    @property
    def valuation_map(self) -> dict[str, str]:
        return dict(self.valuation)


def initial_position(x: Sequent) -> SequentPosition:
    return SequentPosition(
        closure_pending=tuple(sorted(free_vars(x))),
        valuation=(),
        antecedent=tuple(Leaf(g) for g in x.antecedent),
        succedent=x.succedent,
    )


def _split_sequent_move(move: str, n_slots: int) -> tuple[str, Optional[int], str]:
    head, dot, rest = move.partition(".")
    if not dot or head not in ("0", "1"):
        raise IllegalMove(move, "sequent moves look like 0.<slot>.<move> or 1.<move>")
    if head == "1":
        if not rest:
            raise IllegalMove(move, "missing succedent move")
        return "succ", None, rest
    slot_str, dot, mu = rest.partition(".")
    if not dot or not NUMERAL_RE.fullmatch(slot_str) or not mu:
        raise IllegalMove(move, "antecedent moves look like 0.<slot>.<move>")
    slot = int_of_numeral(slot_str)
    if slot >= n_slots:
        raise IllegalMove(move, f"no antecedent slot {slot}")
    return "ant", slot, mu


def apply_move(p: SequentPosition, lab: LabMove) -> SequentPosition:
    """The evolved position; raises IllegalMove (an illegal move loses for its author)."""
    if p.closure_pending:
        if lab.player != BOT:
            raise IllegalMove(lab.move, "only Environment moves during the opening phase")
        if not NUMERAL_RE.fullmatch(lab.move):
            raise IllegalMove(lab.move, "the opening phase takes bare constants")
        var = p.closure_pending[0]
        binding = {var: Const(lab.move)}
        return SequentPosition(
            closure_pending=p.closure_pending[1:],
            valuation=p.valuation + ((var, lab.move),),
            antecedent=tuple(tree_map(t, lambda g: substitute(g, binding))
                             for t in p.antecedent),
            succedent=substitute(p.succedent, binding),
            env_constants=p.env_constants + (lab.move,),
        )
    where, slot, mu = _split_sequent_move(lab.move, len(p.antecedent))
    if where == "succ":
        succ, const = formula_apply(p.succedent, mu, lab.player, POSITIVE)
        env_constants = p.env_constants
        if const is not None and lab.player == BOT:
            env_constants += (const,)
        return replace(p, succedent=succ, env_constants=env_constants)
    tree, const = tree_apply(p.antecedent[slot], mu, lab.player, NEGATIVE)
    env_constants = p.env_constants
    if const is not None and lab.player == BOT:
        env_constants += (const,)
    ante = p.antecedent[:slot] + (tree,) + p.antecedent[slot + 1:]
    return replace(p, antecedent=ante, env_constants=env_constants)


def apply_run(p: SequentPosition, run: Run) -> SequentPosition:
    for lab in run:
        p = apply_move(p, lab)
    return p


def legal_move_schemas(p: SequentPosition, player: Optional[str] = None) -> list[MoveSchema]:
    if p.closure_pending:
        schemas = [MoveSchema("choose-constant", BOT, "", var=p.closure_pending[0])]
    else:
        schemas = [replace(s, prefix="1." + s.prefix)
                   for s in formula_schemas(p.succedent, POSITIVE)]
        for i, tree in enumerate(p.antecedent):
            slot_prefix = f"0.{numeral_of_int(i)}."
            schemas += [replace(s, slot=i, prefix=slot_prefix + s.prefix)
                        for s in tree_schemas(tree, NEGATIVE)]
    if player is not None:
        schemas = [s for s in schemas if s.owner == player]
    return schemas


# ---------------------------------------------------------------------------
# Interpretations and adjudication


@dataclass
class Interpretation:
    """Meanings for the non-logical letters.

    Finite interpretations evaluate exactly.  Over the ideal universe
    (elements are the constants themselves) ground residues are computed,
    and blind-quantified residues go to ``truth_oracle`` when given.
    """

    model: Optional[FiniteModel] = None
    functions: Mapping[str, Callable[..., int]] = field(default_factory=dict)
    predicates: Mapping[str, Callable[..., bool]] = field(default_factory=dict)
    truth_oracle: Optional[Callable[[Formula], Optional[bool]]] = None

    @staticmethod
    def finite(model: FiniteModel) -> "Interpretation":
        return Interpretation(model=model)

    @staticmethod
    def ideal(functions=None, predicates=None, truth_oracle=None) -> "Interpretation":
        return Interpretation(None, functions or {}, predicates or {}, truth_oracle)

    @property
    def is_finite(self) -> bool:
        return self.model is not None

    def truth_of(self, f: Formula, vc: Optional[Mapping[str, str]] = None) -> Optional[bool]:
        """Truth of an elementary formula; None when undetermined (ideal + blind)."""
        assert is_elementary(f), "truth_of expects an elementary formula"
        if self.model is not None:
            env = {v: self.model.name_of(c) for v, c in (vc or {}).items()}
            return eval_elementary(f, self.model, env)
        if _has_blind(f):
            return self.truth_oracle(f) if self.truth_oracle else None
        env = {v: int_of_numeral(c) for v, c in (vc or {}).items()}
        return self._eval_ideal(f, env)

    def _eval_term(self, t: Term, env) -> int:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return int_of_numeral(t.numeral)
        fn = self.functions.get(t.letter)
        if fn is None:
            raise KeyError(f"uninterpreted function letter {t.letter}")
        return fn(*(self._eval_term(a, env) for a in t.args))

    def _eval_ideal(self, f: Formula, env) -> bool:
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Equality):
            return (self._eval_term(f.lhs, env) == self._eval_term(f.rhs, env)) != f.negated
        if isinstance(f, Atom):
            pred = self.predicates.get(f.letter)
            if pred is None:
                raise KeyError(f"uninterpreted predicate letter {f.letter}")
            return bool(pred(*(self._eval_term(a, env) for a in f.args))) != f.negated
        if isinstance(f, ParAnd):
            return self._eval_ideal(f.left, env) and self._eval_ideal(f.right, env)
        if isinstance(f, ParOr):
            return self._eval_ideal(f.left, env) or self._eval_ideal(f.right, env)
        raise ValueError("blind residue reached the direct ideal evaluator")


def _has_blind(f: Formula) -> bool:
    if isinstance(f, (BlindAll, BlindEx)):
        return True
    return any(_has_blind(k) for k in children(f))


UNKNOWN = "unknown"


def adjudicate_formula(f: Formula, interp: Interpretation, role: str = POSITIVE) -> str:
    """Winner of a formula position if play stops now (its elementarization's truth)."""
    truth = interp.truth_of(elementarize(f))
    if truth is None:
        return UNKNOWN
    if role == NEGATIVE:
        truth = not truth
    return TOP if truth else BOT


def adjudicate(p: SequentPosition, interp: Interpretation) -> str:
    """TOP iff truth of every antecedent leaf residue implies the succedent residue."""
    if p.closure_pending:
        return TOP  # an unanswered opening choice is Environment's failure
    leaf_truths: list[Optional[bool]] = []
    for tree in p.antecedent:
        for _, g in tree_leaves(tree):
            leaf_truths.append(interp.truth_of(elementarize(g)))
    succ_truth = interp.truth_of(elementarize(p.succedent))
    if any(t is False for t in leaf_truths):
        return TOP
    if succ_truth is True:
        return TOP
    if any(t is None for t in leaf_truths) or succ_truth is None:
        return UNKNOWN
    return BOT


# ---------------------------------------------------------------------------
# Run projections and delays


def project_parallel(run: Run, index: str) -> Run:
    """The subrun played in parallel component <index> (moves "<index>.<m>")."""
    prefix = index if index.endswith(".") else index + "."
    return tuple(LabMove(m.player, m.move[len(prefix):])
                 for m in run if m.move.startswith(prefix))


def project_branch(run: Run, v: str) -> Run:
    """The subrun played in the tree copy addressed by bit string v."""
    out = []
    for m in run:
        try:
            kind, addr, beta = _split_tree_move(m.move)
        except IllegalMove:
            continue
        if kind == "nonrep" and v.startswith(addr):
            out.append(LabMove(m.player, beta))
    return tuple(out)


def run_projection(run: Run, component) -> Run:
    """component: ("par", index) or ("tree", bitstring)."""
    kind, arg = component
    if kind == "par":
        return project_parallel(run, str(arg))
    return project_branch(run, arg)


def is_delay(u: Run, g: Run, player: str) -> bool:
    """True iff u is a <player>-delay of g."""
    for who in (TOP, BOT):
        if [m for m in u if m.player == who] != [m for m in g if m.player == who]:
            return False
    other = opponent(player)

    def positions(run: Run, who: str) -> list[int]:
        return [i for i, m in enumerate(run) if m.player == who]

    gp, go = positions(g, player), positions(g, other)
    up, uo = positions(u, player), positions(u, other)
    for n, gpos in enumerate(gp):
        for k, opos in enumerate(go):
            if gpos > opos and not up[n] > uo[k]:
                return False
    return True


# ---------------------------------------------------------------------------
# Play-out enumeration for small games


def formula_initial(f: Formula) -> SequentPosition:
    """A bare formula played as a game (no sequent wrapper, no move prefixes)."""
    return SequentPosition((), (), (), f)


def enumerate_runs(position: SequentPosition, constants: list[str],
                   max_len: int = 8, formula_level: bool = False) -> Iterator[tuple[Run, SequentPosition]]:
    """All legal runs (every prefix included) with choice constants from the pool.

    With formula_level=True the position must be a bare formula game and the
    move strings carry no sequent prefix.
    """

    def moves_of(p: SequentPosition) -> list[LabMove]:
        if formula_level:
            schemas = formula_schemas(p.succedent, POSITIVE)
        else:
            schemas = legal_move_schemas(p)
        out = []
        for s in schemas:
            if s.kind == "choose-constant":
                for c in constants:
                    out.append(LabMove(s.owner, s.instantiate(c)))
            else:
                out.append(LabMove(s.owner, s.instantiate()))
        return out

    def walk(p: SequentPosition, run: Run) -> Iterator[tuple[Run, SequentPosition]]:
        yield run, p
        if len(run) >= max_len:
            return
        for lab in moves_of(p):
            if formula_level:
                succ, _ = formula_apply(p.succedent, lab.move, lab.player, POSITIVE)
                nxt = replace(p, succedent=succ)
            else:
                nxt = apply_move(p, lab)
            yield from walk(nxt, run + (lab,))

    yield from walk(position, ())
