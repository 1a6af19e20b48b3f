"""Polynomial bound terms as DAGs with shared subterms.

Nodes compare by identity, so shared children stay shared through
evaluation, substitution and serialization.  Terms are built from 0,
successor, + and x over variables, optionally with unary function
placeholders standing for the antecedent solutions' own bounds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from cl12.syntax import Sequent, max_run_length


@dataclass(eq=False)
class GZero:
    pass


@dataclass(eq=False)
class GVar:
    name: str


@dataclass(eq=False)
class GSucc:
    child: "GraphTerm"


@dataclass(eq=False)
class GPlus:
    left: "GraphTerm"
    right: "GraphTerm"


@dataclass(eq=False)
class GTimes:
    left: "GraphTerm"
    right: "GraphTerm"


@dataclass(eq=False)
class GFn:
    placeholder: str
    child: "GraphTerm"


GraphTerm = Union[GZero, GVar, GSucc, GPlus, GTimes, GFn]


def g_children(t: GraphTerm) -> tuple[GraphTerm, ...]:
    if isinstance(t, (GZero, GVar)):
        return ()
    if isinstance(t, (GSucc, GFn)):
        return (t.child,)
    return (t.left, t.right)


def g_nat(n: int) -> GraphTerm:
    out: GraphTerm = GZero()
    for _ in range(n):
        out = GSucc(out)
    return out


def g_size(t: GraphTerm) -> int:
    seen: set[int] = set()

    def walk(n: GraphTerm):
        if id(n) in seen:
            return
        seen.add(id(n))
        for k in g_children(n):
            walk(k)

    walk(t)
    return len(seen)


def g_vars(t: GraphTerm) -> set[str]:
    out: set[str] = set()
    seen: set[int] = set()

    def walk(n: GraphTerm):
        if id(n) in seen:
            return
        seen.add(id(n))
        if isinstance(n, GVar):
            out.add(n.name)
        for k in g_children(n):
            walk(k)

    walk(t)
    return out


def g_placeholders(t: GraphTerm) -> set[str]:
    out: set[str] = set()
    seen: set[int] = set()

    def walk(n: GraphTerm):
        if id(n) in seen:
            return
        seen.add(id(n))
        if isinstance(n, GFn):
            out.add(n.placeholder)
        for k in g_children(n):
            walk(k)

    walk(t)
    return out


def graphterm_eval(t: GraphTerm, env: Optional[Mapping[str, int]] = None,
                   fns: Optional[Mapping[str, Callable[[int], int]]] = None) -> int:
    """Evaluate with memoization on shared nodes."""
    env = env or {}
    fns = fns or {}
    memo: dict[int, int] = {}

    def ev(n: GraphTerm) -> int:
        key = id(n)
        if key in memo:
            return memo[key]
        if isinstance(n, GZero):
            v = 0
        elif isinstance(n, GVar):
            if n.name not in env:
                raise KeyError(f"unbound variable {n.name}")
            v = env[n.name]
        elif isinstance(n, GSucc):
            v = ev(n.child) + 1
        elif isinstance(n, GPlus):
            v = ev(n.left) + ev(n.right)
        elif isinstance(n, GTimes):
            v = ev(n.left) * ev(n.right)
        else:
            if n.placeholder not in fns:
                raise KeyError(f"unbound placeholder {n.placeholder}")
            v = fns[n.placeholder](ev(n.child))
        memo[key] = v
        return v

    return ev(t)


def g_substitute(t: GraphTerm, var: str, arg: GraphTerm) -> GraphTerm:
    """Replace a variable by a node; subgraphs not touching it stay shared."""
    memo: dict[int, GraphTerm] = {}

    def sub(n: GraphTerm) -> GraphTerm:
        key = id(n)
        if key in memo:
            return memo[key]
        if isinstance(n, GVar):
            out = arg if n.name == var else n
        elif isinstance(n, GZero):
            out = n
        elif isinstance(n, GSucc):
            c = sub(n.child)
            out = n if c is n.child else GSucc(c)
        elif isinstance(n, GFn):
            c = sub(n.child)
            out = n if c is n.child else GFn(n.placeholder, c)
        else:
            l, r = sub(n.left), sub(n.right)
            out = n if (l is n.left and r is n.right) else type(n)(l, r)
        memo[key] = out
        return out

    return sub(t)


# ---------------------------------------------------------------------------
# Serialization: node list with explicit child indices


_OPS = {GZero: "zero", GVar: "var", GSucc: "succ", GPlus: "plus",
        GTimes: "times", GFn: "fn"}


def graphterm_to_json(t: GraphTerm) -> dict:
    nodes: list[dict] = []
    index: dict[int, int] = {}

    def emit(n: GraphTerm) -> int:
        if id(n) in index:
            return index[id(n)]
        kids = [emit(k) for k in g_children(n)]
        entry: dict = {"op": _OPS[type(n)], "children": kids}
        if isinstance(n, GVar):
            entry["name"] = n.name
        if isinstance(n, GFn):
            entry["name"] = n.placeholder
        nodes.append(entry)
        index[id(n)] = len(nodes) - 1
        return index[id(n)]

    root = emit(t)
    return {"nodes": nodes, "root": root}


def graphterm_from_json(data: dict) -> GraphTerm:
    built: list[GraphTerm] = []
    for entry in data["nodes"]:
        op = entry["op"]
        kids = [built[i] for i in entry["children"]]
        if op == "zero":
            built.append(GZero())
        elif op == "var":
            built.append(GVar(entry["name"]))
        elif op == "succ":
            built.append(GSucc(kids[0]))
        elif op == "plus":
            built.append(GPlus(kids[0], kids[1]))
        elif op == "times":
            built.append(GTimes(kids[0], kids[1]))
        elif op == "fn":
            built.append(GFn(entry["name"], kids[0]))
        else:
            raise ValueError(f"unknown op {op!r}")
    return built[data["root"]]


# ---------------------------------------------------------------------------
# Composition bounds


@dataclass
class ComposedBounds:
    time: GraphTerm
    space: GraphTerm
    phi_arg_var: str
    b: int


def run_length_bound(x: Sequent) -> int:
    """Twice the summed maximum run lengths of the sequent's formulas."""
    total = sum(max_run_length(g) for g in x.antecedent) + max_run_length(x.succedent)
    return max(2 * total, len(x.antecedent) + 1)


def compose_bound(xi: GraphTerm, gs: list[Union[GraphTerm, str]], x: Sequent,
                  var: str = "l") -> ComposedBounds:
    """Bounds for a strategy composed from n antecedent solutions.

    phi(v) = g1(v)+...+gn(v)+xi(v); with b the sequent's run-length bound,
    space is b*phi^(b+1)(v) and time is b*phi(phi^b(v)) -- one shared chain,
    iterated by DAG substitution.  Entries of ``gs`` may be graph-terms in
    ``var`` (inlined) or placeholder names (kept as unary letters).
    """
    b = run_length_bound(x)

    def phi(arg: GraphTerm) -> GraphTerm:
        acc = g_substitute(xi, var, arg)
        for g in reversed(gs):
            if isinstance(g, str):
                part: GraphTerm = GFn(g, arg)
            else:
                part = g_substitute(g, var, arg)
            acc = GPlus(part, acc)
        return acc

    chain: GraphTerm = GVar(var)
    for _ in range(b):
        chain = phi(chain)          # chain = phi^b(v)
    top = phi(chain)                # phi^(b+1)(v) == phi(phi^b(v))
    b_node = g_nat(b)
    return ComposedBounds(time=GTimes(b_node, top), space=GTimes(b_node, top),
                          phi_arg_var=var, b=b)


def bound_from_json_arg(text: str, var: str = "l") -> Union[GraphTerm, str]:
    """CLI bound argument: a placeholder name (f1) or arithmetic in ``l``.

    Grammar: sums of products of integers, ``l``, and parenthesized sums.
    """
    text = text.strip()
    if text != var and text.replace("_", "").isalnum() and not text[0].isdigit():
        return text  # placeholder letter

    tokens = re.findall(r"\d+|[A-Za-z_]\w*|[+*()]", text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def eat(expect=None):
        t = peek()
        if t is None or (expect and t != expect):
            raise ValueError(f"bad bound expression {text!r}")
        pos[0] += 1
        return t

    def factor() -> GraphTerm:
        t = eat()
        if t == "(":
            e = expr()
            eat(")")
            return e
        if t.isdigit():
            return g_nat(int(t))
        if t == var:
            return GVar(var)
        raise ValueError(f"unknown name {t!r} in bound expression")

    def term() -> GraphTerm:
        out = factor()
        while peek() == "*":
            eat()
            out = GTimes(out, factor())
        return out

    def expr() -> GraphTerm:
        out = term()
        while peek() == "+":
            eat()
            out = GPlus(out, term())
        return out

    out = expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input in bound expression {text!r}")
    return out


def figure_eight_power(var: str = "y") -> GraphTerm:
    """The shared-squaring DAG computing y^8 (three stacked multiplications)."""
    y = GVar(var)
    m1 = GTimes(y, y)
    m2 = GTimes(m1, m1)
    return GTimes(m2, m2)


def figure_functional(var: str = "y") -> GraphTerm:
    """f2(f1(y) + f2(y)) with placeholders f1, f2."""
    y = GVar(var)
    return GFn("f2", GPlus(GFn("f1", y), GFn("f2", y)))
