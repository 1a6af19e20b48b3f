"""Formulas, sequents, and the concrete syntax.

Formulas are kept in negation normal form: negation exists only as a flag on
atoms and equalities, and `->` is desugared at parse time.  Choice operators
(`&`, `|`, `!x:`, `?x:`) are the interactive connectives; parallel operators
(`/\\`, `\\/`) and blind quantifiers (`A x:`, `E x:`) are the classical ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    numeral: str  # binary numeral: 0 | 1(0|1)*

    def __post_init__(self):
        if not NUMERAL_RE.fullmatch(self.numeral):
            raise ValueError(f"bad numeral {self.numeral!r}")

    def __str__(self):
        return self.numeral


@dataclass(frozen=True)
class App:
    letter: str
    args: tuple["Term", ...]

    def __str__(self):
        return f"{self.letter}({', '.join(map(str, self.args))})"


Term = Union[Var, Const, App]

NUMERAL_RE = re.compile(r"0|1[01]*")
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def numeral_of_int(n: int) -> str:
    return format(n, "b")


def int_of_numeral(s: str) -> int:
    return int(s, 2)


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    letter: str
    args: tuple[Term, ...] = ()
    negated: bool = False


@dataclass(frozen=True)
class Equality:
    lhs: Term
    rhs: Term
    negated: bool = False


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class ParAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ParOr:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ChoAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ChoOr:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class BlindAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class BlindEx:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ChoAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ChoEx:
    var: str
    body: "Formula"


Formula = Union[
    Atom, Equality, Top, Bottom,
    ParAnd, ParOr, ChoAnd, ChoOr,
    BlindAll, BlindEx, ChoAll, ChoEx,
]

BINARY = (ParAnd, ParOr, ChoAnd, ChoOr)
QUANT = (BlindAll, BlindEx, ChoAll, ChoEx)
CHOICE_OPS = (ChoAnd, ChoOr, ChoAll, ChoEx)
LITERAL = (Atom, Equality, Top, Bottom)


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[Formula, ...]
    succedent: Formula


@dataclass(frozen=True)
class Occurrence:
    """Address of a surface subformula: child indices from the root.

    ``slot`` is None for the succedent, an antecedent index otherwise.
    """

    path: tuple[int, ...]
    slot: Optional[int] = None


class SyntaxError_(Exception):
    def __init__(self, message: str, pos: int = -1):
        super().__init__(message if pos < 0 else f"{message} (at offset {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# Generic traversal helpers


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, QUANT):
        return (f.body,)
    return ()


def replace_child(f: Formula, i: int, sub: Formula) -> Formula:
    if isinstance(f, BINARY):
        if i == 0:
            return type(f)(sub, f.right)
        if i == 1:
            return type(f)(f.left, sub)
    if isinstance(f, QUANT) and i == 0:
        return type(f)(f.var, sub)
    raise IndexError(f"no child {i} in {type(f).__name__}")


def subformula_at(f: Formula, path: tuple[int, ...]) -> Formula:
    for i in path:
        kids = children(f)
        if i >= len(kids):
            raise IndexError(f"path {path} does not resolve")
        f = kids[i]
    return f


def replace_at(f: Formula, path: tuple[int, ...], sub: Formula) -> Formula:
    if not path:
        return sub
    kid = children(f)[path[0]]
    return replace_child(f, path[0], replace_at(kid, path[1:], sub))


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def term_constants(t: Term) -> set[str]:
    if isinstance(t, Const):
        return {t.numeral}
    if isinstance(t, App):
        out: set[str] = set()
        for a in t.args:
            out |= term_constants(a)
        return out
    return set()


def _atom_terms(f: Formula) -> tuple[Term, ...]:
    if isinstance(f, Atom):
        return f.args
    if isinstance(f, Equality):
        return (f.lhs, f.rhs)
    return ()


def free_vars(x: Union[Formula, Sequent]) -> set[str]:
    if isinstance(x, Sequent):
        out: set[str] = set()
        for g in x.antecedent:
            out |= free_vars(g)
        out |= free_vars(x.succedent)
        return out
    f = x
    if isinstance(f, LITERAL):
        out = set()
        for t in _atom_terms(f):
            out |= term_vars(t)
        return out
    if isinstance(f, QUANT):
        return free_vars(f.body) - {f.var}
    out = set()
    for kid in children(f):
        out |= free_vars(kid)
    return out


def bound_vars(f: Formula) -> set[str]:
    if isinstance(f, QUANT):
        return {f.var} | bound_vars(f.body)
    out: set[str] = set()
    for kid in children(f):
        out |= bound_vars(kid)
    return out


def all_vars(x: Union[Formula, Sequent]) -> set[str]:
    if isinstance(x, Sequent):
        out: set[str] = set()
        for g in x.antecedent:
            out |= all_vars(g)
        return out | all_vars(x.succedent)
    return free_vars(x) | bound_vars(x)


def constants(x: Union[Formula, Sequent, Term]) -> set[str]:
    if isinstance(x, Sequent):
        out: set[str] = set()
        for g in x.antecedent:
            out |= constants(g)
        return out | constants(x.succedent)
    if isinstance(x, (Var, Const, App)):
        return term_constants(x)
    f = x
    out = set()
    for t in _atom_terms(f):
        out |= term_constants(t)
    for kid in children(f):
        out |= constants(kid)
    return out


def letters(x: Union[Formula, Sequent]) -> tuple[dict[str, int], dict[str, int]]:
    """All (predicate, function) letters with arities."""
    preds: dict[str, int] = {}
    fns: dict[str, int] = {}

    def walk_term(t: Term):
        if isinstance(t, App):
            fns[t.letter] = len(t.args)
            for a in t.args:
                walk_term(a)

    def walk(f: Formula):
        if isinstance(f, Atom):
            preds[f.letter] = len(f.args)
        for t in _atom_terms(f):
            walk_term(t)
        for kid in children(f):
            walk(kid)

    if isinstance(x, Sequent):
        for g in x.antecedent:
            walk(g)
        walk(x.succedent)
    else:
        walk(x)
    return preds, fns


# ---------------------------------------------------------------------------
# Substitution


def term_substitute(t: Term, bindings: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return bindings.get(t.name, t)
    if isinstance(t, App):
        return App(t.letter, tuple(term_substitute(a, bindings) for a in t.args))
    return t


def substitute(f: Formula, bindings: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-free substitution of free variables."""
    if not bindings:
        return f
    if isinstance(f, Atom):
        return Atom(f.letter, tuple(term_substitute(t, bindings) for t in f.args), f.negated)
    if isinstance(f, Equality):
        return Equality(term_substitute(f.lhs, bindings), term_substitute(f.rhs, bindings), f.negated)
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, QUANT):
        inner = {v: t for v, t in bindings.items() if v != f.var}
        for t in inner.values():
            if f.var in term_vars(t):
                raise ValueError(f"substitution would capture {f.var}")
        return type(f)(f.var, substitute(f.body, inner))
    return type(f)(substitute(f.left, bindings), substitute(f.right, bindings))


def rename_free(f: Formula, renaming: Mapping[str, str]) -> Formula:
    return substitute(f, {v: Var(w) for v, w in renaming.items()})


def rename_sequent(s: Sequent, renaming: Mapping[str, str]) -> Sequent:
    return Sequent(tuple(rename_free(g, renaming) for g in s.antecedent),
                   rename_free(s.succedent, renaming))


# ---------------------------------------------------------------------------
# Negation (NNF) and elementarization


def negate(f: Formula) -> Formula:
    """De Morgan dual; input and output are NNF."""
    if isinstance(f, Atom):
        return Atom(f.letter, f.args, not f.negated)
    if isinstance(f, Equality):
        return Equality(f.lhs, f.rhs, not f.negated)
    if isinstance(f, Top):
        return Bottom()
    if isinstance(f, Bottom):
        return Top()
    if isinstance(f, ParAnd):
        return ParOr(negate(f.left), negate(f.right))
    if isinstance(f, ParOr):
        return ParAnd(negate(f.left), negate(f.right))
    if isinstance(f, ChoAnd):
        return ChoOr(negate(f.left), negate(f.right))
    if isinstance(f, ChoOr):
        return ChoAnd(negate(f.left), negate(f.right))
    if isinstance(f, BlindAll):
        return BlindEx(f.var, negate(f.body))
    if isinstance(f, BlindEx):
        return BlindAll(f.var, negate(f.body))
    if isinstance(f, ChoAll):
        return ChoEx(f.var, negate(f.body))
    if isinstance(f, ChoEx):
        return ChoAll(f.var, negate(f.body))
    raise TypeError(f)


def is_elementary(f: Formula) -> bool:
    if isinstance(f, CHOICE_OPS):
        return False
    return all(is_elementary(k) for k in children(f))


def elementarize(f: Formula) -> Formula:
    """Replace choice-disjunctive subformulas by F and choice-conjunctive by T."""
    if isinstance(f, (ChoOr, ChoEx)):
        return Bottom()
    if isinstance(f, (ChoAnd, ChoAll)):
        return Top()
    if isinstance(f, BINARY):
        return type(f)(elementarize(f.left), elementarize(f.right))
    if isinstance(f, QUANT):
        return type(f)(f.var, elementarize(f.body))
    return f


def elementarize_sequent(s: Sequent) -> Formula:
    """The classical residue: conj of antecedent residues implies succedent residue."""
    succ = elementarize(s.succedent)
    if not s.antecedent:
        return succ
    conj: Formula = elementarize(s.antecedent[-1])
    for g in reversed(s.antecedent[:-1]):
        conj = ParAnd(elementarize(g), conj)
    return ParOr(negate(conj), succ)


# ---------------------------------------------------------------------------
# Surface occurrences and structural measures


def surface_occurrences(f: Formula, kind: Optional[type] = None,
                        slot: Optional[int] = None) -> list[Occurrence]:
    """Surface occurrences (not under any choice operator), left to right.

    With ``kind`` None, every surface choice-operator occurrence is returned.
    """
    out: list[Occurrence] = []

    def walk(g: Formula, path: tuple[int, ...]):
        if isinstance(g, CHOICE_OPS):
            if kind is None or isinstance(g, kind):
                out.append(Occurrence(path, slot))
            return  # nothing below a choice operator is surface
        for i, kid in enumerate(children(g)):
            walk(kid, path + (i,))

    walk(f, ())
    return out


def max_run_length(f: Formula) -> int:
    """Longest legal run of the formula game (branching recurrence aside)."""
    if isinstance(f, LITERAL):
        return 0
    if isinstance(f, (ParAnd, ParOr)):
        return max_run_length(f.left) + max_run_length(f.right)
    if isinstance(f, (ChoAnd, ChoOr)):
        return 1 + max(max_run_length(f.left), max_run_length(f.right))
    if isinstance(f, (ChoAll, ChoEx)):
        return 1 + max_run_length(f.body)
    return max_run_length(f.body)


# ---------------------------------------------------------------------------
# Parser


_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<seq>\|\|-) |
        (?P<arrow>->) |
        (?P<pand>/\\) |
        (?P<por>\\/) |
        (?P<neq>!=) |
        (?P<sym>[~&|=(),:!?]) |
        (?P<numeral>0|1[01]*) |
        (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m or m.end() == m.start():
            stripped = text[i:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise SyntaxError_(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup or "?"
        toks.append(_Tok(kind, m.group(m.lastgroup), m.start(m.lastgroup)))
        i = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    """Recursive-descent parser building raw (pre-NNF) structure.

    Surface negation and ``->`` are desugared on the fly; the result is NNF.
    """

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.pred_arity: dict[str, int] = {}
        self.fn_arity: dict[str, int] = {}

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise SyntaxError_(f"expected {text!r}, found {t.text!r}", t.pos)
        return t

    def fail(self, msg: str):
        raise SyntaxError_(msg, self.peek().pos)

    # -- grammar ------------------------------------------------------------

    def sequent(self) -> Sequent:
        ante: list[Formula] = []
        if self.peek().kind != "seq":
            ante.append(self.formula(positive=True))
            while self.peek().text == ",":
                self.next()
                ante.append(self.formula(positive=True))
        if self.peek().kind != "seq":
            self.fail("expected '||-'")
        self.next()
        succ = self.formula(positive=True)
        self.eof()
        return Sequent(tuple(ante), succ)

    def eof(self):
        if self.peek().kind != "eof":
            self.fail(f"trailing input starting with {self.peek().text!r}")

    def formula(self, positive: bool) -> Formula:
        left = self.orlev(positive)
        if self.peek().kind == "arrow":
            self.next()
            right = self.formula(positive)
            # A -> B desugars to ~A \/ B
            if positive:
                return ParOr(negate(left), right)
            return ParAnd(negate(left), right)
        return left

    def orlev(self, positive: bool) -> Formula:
        items = [self.andlev(positive)]
        op: Optional[str] = None
        while self.peek().text in ("\\/", "|") or self.peek().kind == "por":
            tok = self.next()
            this = "por" if tok.kind == "por" else "chor"
            if op is None:
                op = this
            elif op != this:
                raise SyntaxError_("cannot mix '\\/' and '|' without parentheses", tok.pos)
            items.append(self.andlev(positive))
        if op is None:
            return items[0]
        cls = (ParOr if op == "por" else ChoOr) if positive else (ParAnd if op == "por" else ChoAnd)
        out = items[-1]
        for item in reversed(items[:-1]):
            out = cls(item, out)
        return out

    def andlev(self, positive: bool) -> Formula:
        items = [self.unary(positive)]
        op: Optional[str] = None
        while self.peek().text in ("/\\", "&") or self.peek().kind == "pand":
            tok = self.next()
            this = "pand" if tok.kind == "pand" else "chand"
            if op is None:
                op = this
            elif op != this:
                raise SyntaxError_("cannot mix '/\\' and '&' without parentheses", tok.pos)
            items.append(self.unary(positive))
        if op is None:
            return items[0]
        cls = (ParAnd if op == "pand" else ChoAnd) if positive else (ParOr if op == "pand" else ChoOr)
        out = items[-1]
        for item in reversed(items[:-1]):
            out = cls(item, out)
        return out

    _QUANT_POS = {"A": BlindAll, "E": BlindEx, "!": ChoAll, "?": ChoEx}
    _QUANT_NEG = {"A": BlindEx, "E": BlindAll, "!": ChoEx, "?": ChoAll}

    def unary(self, positive: bool) -> Formula:
        t = self.peek()
        if t.text == "~":
            self.next()
            return self.unary(not positive)
        if t.text in ("!", "?"):
            self.next()
            return self.quant_tail(t.text, positive)
        if t.kind == "ident" and t.text in ("A", "E") and self.peek(1).kind == "ident":
            self.next()
            return self.quant_tail(t.text, positive)
        if t.text == "(":
            self.next()
            f = self.formula(positive)
            self.expect(")")
            return f
        return self.atom(positive)

    def quant_tail(self, marker: str, positive: bool) -> Formula:
        v = self.next()
        if v.kind != "ident":
            raise SyntaxError_(f"expected a variable after {marker!r}", v.pos)
        if self.peek().text == ":":
            self.next()
        cls = (self._QUANT_POS if positive else self._QUANT_NEG)[marker]
        return cls(v.text, self.unary(positive))

    def atom(self, positive: bool) -> Formula:
        t = self.peek()
        if t.kind == "ident" and t.text == "T" and not self._starts_args():
            self.next()
            return Top() if positive else Bottom()
        if t.kind == "ident" and t.text == "F" and not self._starts_args():
            self.next()
            return Bottom() if positive else Top()
        if t.kind in ("ident", "numeral"):
            lhs = self.term()
            nxt = self.peek()
            if nxt.text == "=" or nxt.kind == "neq":
                self.next()
                rhs = self.term()
                neg = nxt.kind == "neq"
                return Equality(lhs, rhs, neg != (not positive))
            # a predicate atom: the parsed term must not be a constant,
            # and a bare variable reads as a 0-ary predicate letter
            if isinstance(lhs, Const):
                raise SyntaxError_("a numeral is not a formula", t.pos)
            if isinstance(lhs, Var):
                self._declare(self.pred_arity, lhs.name, 0, t.pos)
                return Atom(lhs.name, (), not positive)
            assert isinstance(lhs, App)
            if lhs.letter in self.fn_arity:
                del self.fn_arity[lhs.letter]
            self._declare(self.pred_arity, lhs.letter, len(lhs.args), t.pos)
            return Atom(lhs.letter, lhs.args, not positive)
        self.fail(f"expected a formula, found {t.text!r}")

    def _starts_args(self) -> bool:
        return self.peek(1).text == "(" or self.peek(1).text in ("=",) or self.peek(1).kind == "neq"

    def term(self) -> Term:
        t = self.next()
        if t.kind == "numeral":
            return Const(t.text)
        if t.kind != "ident":
            raise SyntaxError_(f"expected a term, found {t.text!r}", t.pos)
        if self.peek().text == "(":
            self.next()
            args = [self.term()]
            while self.peek().text == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            self._declare(self.fn_arity, t.text, len(args), t.pos)
            return App(t.text, tuple(args))
        return Var(t.text)

    def _declare(self, table: dict[str, int], letter: str, arity: int, pos: int):
        old = table.setdefault(letter, arity)
        if old != arity:
            raise SyntaxError_(f"letter {letter!r} used with arities {old} and {arity}", pos)


def _fresh_name(base: str, used: set[str]) -> str:
    if base not in used:
        return base
    n = 1
    while f"{base}{n}" in used:
        n += 1
    return f"{base}{n}"


def rename_apart(f: Formula, avoid: set[str]) -> Formula:
    """Rename binders clashing with `avoid` or an enclosing binder.

    Sibling branches may keep equal binder names; only lexical nesting and
    the avoid set force a rename.
    """

    def walk(g: Formula, scope: Mapping[str, str], used: frozenset[str]) -> Formula:
        if isinstance(g, LITERAL):
            return rename_free(g, dict(scope)) if scope else g
        if isinstance(g, QUANT):
            newv = _fresh_name(g.var, set(used))
            inner = dict(scope)
            if newv != g.var:
                inner[g.var] = newv
            else:
                inner.pop(g.var, None)
            return type(g)(newv, walk(g.body, inner, used | {newv}))
        return type(g)(walk(g.left, scope, used), walk(g.right, scope, used))

    return walk(f, {}, frozenset(avoid))


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula(positive=True)
    p.eof()
    return rename_apart(f, free_vars(f))


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    s = p.sequent()
    fv = free_vars(s)
    return Sequent(tuple(rename_apart(g, fv) for g in s.antecedent),
                   rename_apart(s.succedent, fv))


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.eof()
    return t


# ---------------------------------------------------------------------------
# Rendering

# precedence levels: 1 = or, 2 = and, 3 = unary/atom
_OR_LEVEL, _AND_LEVEL, _UNARY_LEVEL = 1, 2, 3


def _level(f: Formula) -> int:
    if isinstance(f, (ParOr, ChoOr)):
        return _OR_LEVEL
    if isinstance(f, (ParAnd, ChoAnd)):
        return _AND_LEVEL
    return _UNARY_LEVEL


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.numeral
    return f"{t.letter}({','.join(render_term(a) for a in t.args)})"


_QUANT_MARK = {BlindAll: "A ", BlindEx: "E ", ChoAll: "!", ChoEx: "?"}


def render_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Atom):
        body = f.letter if not f.args else f"{f.letter}({','.join(render_term(a) for a in f.args)})"
        return ("~" if f.negated else "") + body
    if isinstance(f, Equality):
        op = "!=" if f.negated else "="
        return f"{render_term(f.lhs)} {op} {render_term(f.rhs)}"
    if isinstance(f, QUANT):
        body = render_formula(f.body)
        if _level(f.body) < _UNARY_LEVEL:
            body = f"({body})"
        return f"{_QUANT_MARK[type(f)]}{f.var}: {body}"
    op = {ParAnd: " /\\ ", ParOr: " \\/ ", ChoAnd: " & ", ChoOr: " | "}[type(f)]
    lvl = _level(f)

    def wrap(kid: Formula, allow_same: bool) -> str:
        text = render_formula(kid)
        klvl = _level(kid)
        if klvl > lvl:
            return text
        if klvl == lvl and allow_same and type(kid) is type(f):
            return text
        return f"({text})"

    return wrap(f.left, False) + op + wrap(f.right, True)


def render_sequent(s: Sequent) -> str:
    ante = ", ".join(render_formula(g) for g in s.antecedent)
    return f"{ante} ||- {render_formula(s.succedent)}" if ante else f"||- {render_formula(s.succedent)}"


# ---------------------------------------------------------------------------
# JSON views (used by the service and CLI)


def term_to_json(t: Term):
    if isinstance(t, Var):
        return {"kind": "var", "name": t.name}
    if isinstance(t, Const):
        return {"kind": "const", "numeral": t.numeral}
    return {"kind": "app", "letter": t.letter, "args": [term_to_json(a) for a in t.args]}


def formula_to_json(f: Formula):
    if isinstance(f, Atom):
        return {"kind": "atom", "letter": f.letter, "args": [term_to_json(a) for a in f.args],
                "negated": f.negated}
    if isinstance(f, Equality):
        return {"kind": "equality", "lhs": term_to_json(f.lhs), "rhs": term_to_json(f.rhs),
                "negated": f.negated}
    if isinstance(f, Top):
        return {"kind": "top"}
    if isinstance(f, Bottom):
        return {"kind": "bottom"}
    if isinstance(f, BINARY):
        kind = {ParAnd: "par-and", ParOr: "par-or", ChoAnd: "cho-and", ChoOr: "cho-or"}[type(f)]
        return {"kind": kind, "left": formula_to_json(f.left), "right": formula_to_json(f.right)}
    kind = {BlindAll: "blind-all", BlindEx: "blind-ex", ChoAll: "cho-all", ChoEx: "cho-ex"}[type(f)]
    return {"kind": kind, "var": f.var, "body": formula_to_json(f.body)}


# ---------------------------------------------------------------------------
# Canonical forms (variable-renaming-invariant keys)


def canonical_sequent(s: Sequent, rename_free_too: bool = True) -> str:
    """Render with variables renamed in first-occurrence order.

    With ``rename_free_too`` False only bound variables are canonicalized,
    which gives alpha-equivalence with rigid free variables.
    """
    mapping: dict[str, str] = {}
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"_v{counter[0]}"

    def canon_term(t: Term, bound: Mapping[str, str]) -> str:
        if isinstance(t, Var):
            if t.name in bound:
                return bound[t.name]
            if not rename_free_too:
                return "." + t.name
            if t.name not in mapping:
                mapping[t.name] = fresh()
            return mapping[t.name]
        if isinstance(t, Const):
            return t.numeral
        return f"{t.letter}({','.join(canon_term(a, bound) for a in t.args)})"

    def canon(f: Formula, bound: Mapping[str, str]) -> str:
        if isinstance(f, Atom):
            neg = "~" if f.negated else ""
            return f"{neg}{f.letter}({','.join(canon_term(a, bound) for a in f.args)})"
        if isinstance(f, Equality):
            op = "!=" if f.negated else "="
            return f"({canon_term(f.lhs, bound)}{op}{canon_term(f.rhs, bound)})"
        if isinstance(f, Top):
            return "T"
        if isinstance(f, Bottom):
            return "F"
        if isinstance(f, QUANT):
            v = fresh()
            inner = dict(bound)
            inner[f.var] = v
            mark = {BlindAll: "A", BlindEx: "E", ChoAll: "!", ChoEx: "?"}[type(f)]
            return f"{mark}{v}.{canon(f.body, inner)}"
        op = {ParAnd: "/\\", ParOr: "\\/", ChoAnd: "&", ChoOr: "|"}[type(f)]
        return f"({canon(f.left, bound)}{op}{canon(f.right, bound)})"

    parts = [canon(g, {}) for g in s.antecedent]
    return " , ".join(parts) + " ||- " + canon(s.succedent, {})


def sequents_alpha_equal(a: Sequent, b: Sequent) -> bool:
    """Equality up to renaming of bound variables (free variables rigid)."""
    return canonical_sequent(a, rename_free_too=False) == canonical_sequent(b, rename_free_too=False)
