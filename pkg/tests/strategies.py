"""Hypothesis generators for formulas, runs and small games."""

import hypothesis.strategies as st

from cl12.syntax import (
    App, Atom, BlindAll, BlindEx, Bottom, ChoAll, ChoAnd, ChoEx, ChoOr,
    Const, Equality, ParAnd, ParOr, Top, Var, rename_apart, free_vars,
)

VARS = ("x", "y", "z")
PRED_ARITY = {"p": 1, "q": 2, "r": 0}
FN_ARITY = {"f": 1, "g": 2}
NUMERALS = ("0", "1", "10")


@st.composite
def terms(draw, max_depth=2):
    kind = draw(st.sampled_from(["var", "const", "app"] if max_depth > 0 else ["var", "const"]))
    if kind == "var":
        return Var(draw(st.sampled_from(VARS)))
    if kind == "const":
        return Const(draw(st.sampled_from(NUMERALS)))
    letter = draw(st.sampled_from(sorted(FN_ARITY)))
    return App(letter, tuple(draw(terms(max_depth - 1))
                             for _ in range(FN_ARITY[letter])))


@st.composite
def literals(draw):
    kind = draw(st.sampled_from(["atom", "eq", "top", "bottom"]))
    if kind == "top":
        return Top()
    if kind == "bottom":
        return Bottom()
    neg = draw(st.booleans())
    if kind == "eq":
        return Equality(draw(terms()), draw(terms()), neg)
    letter = draw(st.sampled_from(sorted(PRED_ARITY)))
    return Atom(letter, tuple(draw(terms()) for _ in range(PRED_ARITY[letter])), neg)


@st.composite
def formulas(draw, max_depth=3, elementary=False, propositional=False):
    if max_depth <= 0:
        if propositional:
            return Atom(draw(st.sampled_from(("a", "b", "c"))), (), draw(st.booleans()))
        return draw(literals())
    options = ["lit", "par-and", "par-or", "blind-all", "blind-ex"]
    if not elementary:
        options += ["cho-and", "cho-or", "cho-all", "cho-ex"]
    if propositional:
        options = [o for o in options if "blind" not in o and "all" not in o and "ex" not in o]
        options += [] if elementary else ["cho-and", "cho-or"]
    kind = draw(st.sampled_from(options))
    if kind == "lit":
        if propositional:
            return Atom(draw(st.sampled_from(("a", "b", "c"))), (), draw(st.booleans()))
        return draw(literals())
    sub = formulas(max_depth - 1, elementary, propositional)
    if kind in ("par-and", "par-or", "cho-and", "cho-or"):
        cls = {"par-and": ParAnd, "par-or": ParOr,
               "cho-and": ChoAnd, "cho-or": ChoOr}[kind]
        return cls(draw(sub), draw(sub))
    cls = {"blind-all": BlindAll, "blind-ex": BlindEx,
           "cho-all": ChoAll, "cho-ex": ChoEx}[kind]
    return cls(draw(st.sampled_from(VARS)), draw(sub))


@st.composite
def tidy_formulas(draw, **kw):
    """Formulas with binders renamed apart, as the parser would produce."""
    f = draw(formulas(**kw))
    return rename_apart(f, free_vars(f))
