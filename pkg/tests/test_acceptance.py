"""Acceptance criteria, one test per criterion, each printing a verdict line.

Every tolerance is pinned here: exact equalities stay exact, counted
corpora state their counts, and timing stays inside each criterion's
budget by construction (the suite is far faster than the limits).
"""

import random
import time

from conftest import CUBE_SEQUENT_TEXT, mod_interp
from cl12.arena import (
    FormulaAgentAsSequentAgent, InterpAnswerer, PlayLimits, RandomEnv,
    ScriptedEnv, SilentAgent, compose, counterstrategy, exhaustive_plays,
    falsifying_interpretation, fixed_machine_lineup, play,
)
from cl12.bounds import (
    GPlus, GVar, compose_bound, figure_eight_power, figure_functional,
    g_nat, graphterm_eval,
)
from cl12.calculus import (
    NotFound, Proof, SearchBudget, check_proof, search_proof,
)
from cl12.classical import Countermodel, FiniteModel, Valid, check_stability
from cl12.games import (
    BOT, TOP, Interpretation, LabMove, Leaf, POSITIVE, adjudicate,
    adjudicate_formula, apply_move, enumerate_runs, formula_apply,
    formula_initial, initial_position, is_delay, tree_apply, tree_leaves,
)
from cl12.strategy import extract_strategy, monitor_well_behavedness
from cl12.syntax import (
    Sequent, numeral_of_int, parse_formula, parse_sequent, render_formula,
)


def report(number: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {number}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {number}: {name} {detail}"


EX39_MOVES = [("T", "0.1.:"), ("B", "1.10"), ("T", "0.1.0.10"), ("T", "0.1.0.10"),
              ("B", "0.1.0.100"), ("T", "0.1.1.100"), ("T", "0.1.1.10"),
              ("B", "0.1.1.1000"), ("T", "1.1000")]
EX39_ENV_SCRIPT = [["1.10"], ["0.1.0.100"], ["0.1.1.1000"]]

NEGATIVE_SET = [
    "||- (!x: p(x)) -> A x: p(x)",
    "||- ?y: !x: (p(x) -> p(y))",
    "||- !x: ?y: y = f(x)",
    "||- (?x: !y: p(x,y)) -> ?x: ((!y: p(x,y)) /\\ (!y: p(x,y)))",
    "||- (?x: !y: p(x,y)) /\\ (?x: !y: p(x,y))"
    " -> ?x: ((!y: p(x,y)) /\\ (!y: p(x,y)))",
    "||- (?x: !y: p(x,y)) /\\ (?x: !y: p(x,y)) /\\ (?x: !y: p(x,y))"
    " -> ?x: ((!y: p(x,y)) /\\ (!y: p(x,y)))",
    "||- p & q -> (p & q) /\\ (p & q)",
]

POSITIVE_SET = [
    "||- (A x: p(x)) -> !x: p(x)",
    "||- !x: ?y: (p(x) -> p(y))",
    "p & q ||- (p & q) /\\ (p & q)",
    "?x: !y: p(x,y) ||- ?x: ((!y: p(x,y)) /\\ (!y: p(x,y)))",
    CUBE_SEQUENT_TEXT,
]


def test_criterion_01_two_choice_game_exhaustion():
    f = parse_formula("(0=0 & 0=1) -> (10=11 & 10=10)")
    winners = {
        (): TOP,
        ("T0.0",): TOP, ("T0.1",): TOP, ("B1.0",): BOT, ("B1.1",): TOP,
        ("T0.0", "B1.0"): BOT, ("B1.0", "T0.0"): BOT,
        ("T0.1", "B1.0"): TOP, ("B1.0", "T0.1"): TOP,
        ("T0.0", "B1.1"): TOP, ("B1.1", "T0.0"): TOP,
        ("T0.1", "B1.1"): TOP, ("B1.1", "T0.1"): TOP,
    }
    seen = {}
    for run, pos in enumerate_runs(formula_initial(f), [], max_len=4,
                                   formula_level=True):
        key = tuple(m.player + m.move for m in run)
        seen[key] = adjudicate_formula(pos.succedent, Interpretation.ideal())
    report(1, "thirteen legal runs with the listed winners",
           len(seen) == 13 and seen == winners, f"{len(seen)} runs")


def test_criterion_02_recurrence_tree_trace():
    g = parse_formula("p | (q & (r & (s | t)))")
    t = Leaf(g)
    trace = [
        ("B", ":", ["p | q & r & (s | t)"] * 2),
        ("T", ".1", ["q & r & (s | t)"] * 2),
        ("B", "0.0", ["q", "q & r & (s | t)"]),
        ("B", "1.1", ["q", "r & (s | t)"]),
        ("B", "1:", ["q", "r & (s | t)", "r & (s | t)"]),
        ("B", "10.0", ["q", "r", "r & (s | t)"]),
        ("B", "11.1", ["q", "r", "s | t"]),
        ("T", "11.0", ["q", "r", "s"]),
    ]
    ok = True
    for player, move, leaves in trace:
        t, _ = tree_apply(t, move, player, POSITIVE)
        ok = ok and [render_formula(x) for _, x in tree_leaves(t)] == leaves
    ok = ok and [a for a, _ in tree_leaves(t)] == ["0", "10", "11"]

    def verdict(**vals):
        interp = Interpretation.finite(FiniteModel(
            1, {}, {k: {(): v} for k, v in vals.items()}))
        truths = [interp.truth_of(x) for _, x in tree_leaves(t)]
        return TOP if all(truths) else BOT

    ok = ok and verdict(q=True, r=True, s=True) == TOP
    ok = ok and verdict(q=True, r=False, s=True) == BOT
    ok = ok and verdict(q=True, r=True, s=False) == BOT
    report(2, "eight labmoves replay the displayed trees; winner is q and r and s", ok)


def test_criterion_03_cube_sequent_trace(mod16):
    seq = parse_sequent(CUBE_SEQUENT_TEXT)
    succedents = ["!x: ?y: y = cube(x)"] + ["?y: y = cube(10)"] * 7 + ["1000 = cube(10)"]
    slot1 = [
        ["!x: !y: ?z: z = mult(x,y)"] * 2,
        ["!x: !y: ?z: z = mult(x,y)"] * 2,
        ["!y: ?z: z = mult(10,y)", "!x: !y: ?z: z = mult(x,y)"],
        ["?z: z = mult(10,10)", "!x: !y: ?z: z = mult(x,y)"],
        ["100 = mult(10,10)", "!x: !y: ?z: z = mult(x,y)"],
        ["100 = mult(10,10)", "!y: ?z: z = mult(100,y)"],
        ["100 = mult(10,10)", "?z: z = mult(100,10)"],
        ["100 = mult(10,10)", "1000 = mult(100,10)"],
        ["100 = mult(10,10)", "1000 = mult(100,10)"],
    ]
    pos = initial_position(seq)
    axiom = render_formula(seq.antecedent[0])
    ok = True
    for (player, move), succ, leaves in zip(EX39_MOVES, succedents, slot1):
        pos = apply_move(pos, LabMove(player, move))
        ok = ok and render_formula(pos.succedent) == render_formula(parse_formula(succ))
        got = [render_formula(g) for _, g in tree_leaves(pos.antecedent[1])]
        ok = ok and got == [render_formula(parse_formula(s)) for s in leaves]
        ok = ok and [render_formula(g) for _, g in tree_leaves(pos.antecedent[0])] == [axiom]
    ok = ok and adjudicate(pos, mod16) == TOP
    report(3, "nine labmoves reproduce the displayed positions; mod-16 verdict Top", ok)


def test_criterion_04_parity_game():
    f = parse_formula("A y: (Even(y) | Odd(y)) -> !x: (Even(plus(x,y)) | Odd(plus(x,y)))")
    cur = f
    for player, move in [("B", "1.11"), ("B", "0.0"), ("T", "1.1")]:
        cur, _ = formula_apply(cur, move, player, POSITIVE)
    model = FiniteModel(
        8,
        {"plus": {(a, b): (a + b) % 8 for a in range(8) for b in range(8)}},
        {"Even": {(a,): a % 2 == 0 for a in range(8)},
         "Odd": {(a,): a % 2 == 1 for a in range(8)}})
    verdict = adjudicate_formula(cur, Interpretation.finite(model))
    report(4, "parity run adjudicates Top over the mod-8 model", verdict == TOP)


def test_criterion_05_proof_corpus(cube_proof):
    t0 = time.time()
    ok = check_proof(cube_proof).overall == "valid"
    from cl12.calculus import ProofStep, SuccChooseWitness, Wait
    from cl12.syntax import Var
    seven_four = Proof((
        ProofStep(parse_sequent("||- p(s) -> p(s)"), Wait()),
        ProofStep(parse_sequent("||- ?y: (p(s) -> p(y))"),
                  SuccChooseWitness((), Var("s")), (0,)),
        ProofStep(parse_sequent("||- !x: ?y: (p(x) -> p(y))"), Wait(), (1,)),
    ))
    ok = ok and check_proof(seven_four).overall == "valid"
    budget = SearchBudget(max_depth=12, max_replications=2)
    for text in NEGATIVE_SET:
        ok = ok and isinstance(search_proof(parse_sequent(text), budget), NotFound)
    for text in POSITIVE_SET:
        result = search_proof(parse_sequent(text), budget)
        ok = ok and isinstance(result, Proof) and check_proof(result).overall == "valid"
    report(5, "proof corpus checks, negatives NotFound, positives found",
           ok, f"{time.time() - t0:.1f}s of 60s")


def test_criterion_06_conservativity():
    t0 = time.time()
    rng = random.Random(11)
    atoms = ["p", "q", "0 = 0", "0 = 1", "x = y", "p \\/ q", "~p", "A x: q"]
    unknown = 0
    mismatches = 0
    for _ in range(50):
        n_ante = rng.randint(0, 2)
        ante = [rng.choice(atoms) for _ in range(n_ante)]
        succ = rng.choice(atoms)
        text = (", ".join(ante) + " ||- " + succ) if ante else ("||- " + succ)
        seq = parse_sequent(text)
        verdict = check_stability(seq)
        if not isinstance(verdict, (Valid, Countermodel)):
            unknown += 1
            continue
        provable = isinstance(search_proof(seq, SearchBudget(max_depth=6)), Proof)
        if provable != isinstance(verdict, Valid):
            mismatches += 1
    report(6, "provability matches classical validity on 50 elementary sequents",
           mismatches == 0 and unknown <= 5,
           f"{mismatches} mismatches, {unknown} unknown, {time.time() - t0:.1f}s of 120s")


def test_criterion_07_strategy_extraction(cube_proof):
    t0 = time.time()
    seq = cube_proof.conclusion
    interps = [(m, mod_interp(m)) for m in (2, 3, 5)]
    runs = []
    wins = 0
    total = 0
    for seed in range(1000):
        m, interp = interps[seed % 3]
        pool = [numeral_of_int(d) for d in range(m)]
        agent = extract_strategy(cube_proof, verify=False)
        result = play(agent, RandomEnv(seq, seed, pool), seq, interp)
        wins += result.top_won
        total += 1
        runs.append(result.run)
    exhaustive_ok = True
    for m, interp in interps:
        pool = [numeral_of_int(d) for d in range(m)]
        for result in exhaustive_plays(
                lambda: extract_strategy(cube_proof, verify=False),
                seq, interp, pool, move_cap=12):
            exhaustive_ok = exhaustive_ok and result.top_won
            runs.append(result.run)
    report_wb = monitor_well_behavedness(runs, cube_proof)
    scripted = play(extract_strategy(cube_proof, verify=False),
                    ScriptedEnv(EX39_ENV_SCRIPT), seq, interps[0][1])
    scripted_wb = monitor_well_behavedness([scripted.run], cube_proof)
    ok = (wins == total == 1000 and exhaustive_ok and report_wb.compliant
          and report_wb.replicative_count <= 1
          and scripted_wb.replicative_count == 1)
    report(7, "extracted agent wins 1000 seeded and all exhaustive plays, well-behaved",
           ok, f"{wins}/1000 wins, {time.time() - t0:.1f}s of 120s")


def _interp_covering(seq: Sequent, size: int, flavor: int) -> Interpretation:
    from cl12.syntax import letters
    preds, fns = letters(seq)
    import itertools
    model = FiniteModel(
        size,
        {letter: {args: (sum(args) + flavor) % size
                  for args in itertools.product(range(size), repeat=arity)}
         for letter, arity in fns.items()},
        {letter: {args: (sum(args) + flavor) % 2 == 0
                  for args in itertools.product(range(size), repeat=arity)}
         for letter, arity in preds.items()},
    )
    return Interpretation.finite(model)


def test_criterion_08_interpretation_blindness(cube_proof):
    corpus = [search_proof(parse_sequent(t), SearchBudget(max_depth=12,
                                                          max_replications=2))
              for t in POSITIVE_SET[:-1]] + [cube_proof]
    ok = True
    for proof in corpus:
        seq = proof.conclusion
        probe = RandomEnv(seq, 5, ["0", "1", "10"])
        capture = play(extract_strategy(proof, verify=False), probe, seq,
                       _interp_covering(seq, 4, 0))
        script = [[m.move] for m in capture.run if m.player == BOT]
        streams = []
        for interp in (_interp_covering(seq, 4, 0), _interp_covering(seq, 7, 1)):
            agent = extract_strategy(proof, verify=False)
            result = play(agent, ScriptedEnv(script), seq, interp)
            streams.append([m.move for m in result.run if m.player == TOP])
        ok = ok and streams[0] == streams[1]
    report(8, "identical emissions under different interpretations", ok)


def test_criterion_09_composition(cube_proof, mod16):
    t0 = time.time()
    mult_formula = cube_proof.conclusion.antecedent[1]
    agent = compose(cube_proof, [SilentAgent(), InterpAnswerer(mult_formula, mod16)])
    answers = agent.on_tick(["11"]) + agent.on_tick([])
    ok = answers == ["1011"]  # eleven: 3 cubed mod 16
    goal = Sequent((), cube_proof.conclusion.succedent)
    pool = [numeral_of_int(d) for d in range(16)]
    wins = 0
    for seed in range(1000):
        composed = FormulaAgentAsSequentAgent(
            compose(cube_proof, [SilentAgent(), InterpAnswerer(mult_formula, mod16)]), 0)
        wins += play(composed, RandomEnv(goal, seed, pool), goal, mod16).top_won
    ok = ok and wins == 1000
    lost = 0
    for seed in range(100):
        sabotaged = FormulaAgentAsSequentAgent(
            compose(cube_proof,
                    [SilentAgent(), InterpAnswerer(mult_formula, mod16, skew=1)]), 0)
        lost += not play(sabotaged, RandomEnv(goal, seed, pool), goal, mod16).top_won
    ok = ok and lost >= 1
    report(9, "composition answers and wins; sabotage loses at least once",
           ok, f"{wins}/1000 wins, {lost} sabotage losses, {time.time() - t0:.1f}s of 60s")


def test_criterion_10_counterstrategy():
    t0 = time.time()
    ok = True
    for text in NEGATIVE_SET:
        seq = parse_sequent(text)
        for machine in fixed_machine_lineup(seq):
            env = counterstrategy(seq, SearchBudget(max_depth=8, max_replications=1))
            result = play(machine, env, seq, Interpretation.ideal(),
                          PlayLimits(max_ticks=24, max_moves=24))
            model = falsifying_interpretation(result.position, max_domain=3)
            good = (result.illegal_by != BOT and model is not None
                    and adjudicate(result.position, Interpretation.finite(model)) == BOT)
            ok = ok and good
    report(10, "counterstrategy residues falsified for every fixed machine",
           ok, f"{time.time() - t0:.1f}s of 120s")


def test_criterion_11_graph_terms():
    ok = all(graphterm_eval(figure_eight_power(), {"y": y}) == y ** 8
             for y in range(7))
    fns = {"f1": lambda v: v ** 2, "f2": lambda v: v ** 3}
    ok = ok and all(graphterm_eval(figure_functional(), {"y": y}, fns)
                    == (y ** 2 + y ** 3) ** 3 for y in range(5))
    from cl12.bounds import GTimes
    xi = GPlus(GVar("l"), g_nat(1))
    x = parse_sequent("p & q ||- p & q")
    out = compose_bound(xi, [GTimes(GVar("l"), GVar("l"))], x)

    def phi(v):
        return v * v + v + 1

    def iterate(k, v):
        for _ in range(k):
            v = phi(v)
        return v

    ok = ok and out.b == 4
    ok = ok and all(graphterm_eval(out.space, {"l": l}) == out.b * iterate(out.b + 1, l)
                    for l in range(4))
    ok = ok and all(graphterm_eval(out.time, {"l": l}) == out.b * phi(iterate(out.b, l))
                    for l in range(4))
    ok = ok and all(phi(l) >= l for l in range(33))
    report(11, "figure DAGs evaluate correctly; composed bounds match the shapes", ok)


def test_criterion_12_static_sampling():
    t0 = time.time()
    rng = random.Random(99)
    interp = Interpretation.finite(FiniteModel(
        1, {}, {k: {(): v} for k, v in {"a": True, "b": False, "c": True}.items()}))
    atoms = ["a", "b", "c", "~a", "~b"]

    def build(depth):
        if depth == 0:
            return rng.choice(atoms)
        op = rng.choice([" & ", " | ", " /\\ ", " \\/ "])
        return "(" + build(depth - 1) + op + build(depth - 1) + ")"

    def make_delay(run, player):
        own = [m for m in run if m.player == player]
        other = [m for m in run if m.player != player]
        need = {}
        seen, k = 0, 0
        for m in run:
            if m.player == player:
                need[k] = seen
                k += 1
            else:
                seen += 1
        out, oi, pi, done = [], 0, 0, 0
        while oi < len(other) or pi < len(own):
            can_own = pi < len(own) and need[pi] <= done
            if oi < len(other) and (not can_own or rng.random() < 0.5):
                out.append(other[oi])
                oi += 1
                done += 1
            else:
                out.append(own[pi])
                pi += 1
        return tuple(out)

    checked = 0
    attempts = 0
    ok = True
    while checked < 500 and attempts < 5000:
        attempts += 1
        f = parse_formula(build(rng.randint(1, 3)))
        runs = [(r, p) for r, p in enumerate_runs(formula_initial(f), [],
                                                  max_len=5, formula_level=True)
                if r and adjudicate_formula(p.succedent, interp) == TOP]
        if not runs:
            continue
        run, _ = runs[rng.randrange(len(runs))]
        delayed = make_delay(run, TOP)
        ok = ok and is_delay(delayed, run, TOP)
        cur = f
        for m in delayed:
            try:
                cur, _ = formula_apply(cur, m.move, m.player, POSITIVE)
            except Exception:
                ok = ok and m.player == BOT
                break
        else:
            ok = ok and adjudicate_formula(cur, interp) == TOP
        checked += 1
    report(12, "500 sampled delay triples keep Top-won runs Top-won",
           ok and checked == 500, f"{checked} triples, {time.time() - t0:.1f}s of 60s")
