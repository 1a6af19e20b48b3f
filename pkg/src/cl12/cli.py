"""Command-line interface: parse | check | prove | play | simulate | compose | bound | serve."""

from __future__ import annotations

import argparse
import json
import sys

from cl12.bounds import (
    bound_from_json_arg, compose_bound, graphterm_to_json,
)
from cl12.calculus import (
    NotFound, SearchBudget, check_proof, proof_from_json, proof_to_json,
    search_proof,
)
from cl12.classical import FiniteModel
from cl12.games import Interpretation
from cl12.strategy import bound_from_proof, extract_strategy, monitor_well_behavedness
from cl12.syntax import (
    SyntaxError_, formula_to_json, free_vars, parse_formula, parse_sequent,
    render_formula, render_sequent,
)


def _err(message: str, code: int = 1):
    print(json.dumps({"error": message}), file=sys.stderr)
    raise SystemExit(code)


def _load_interp(path: str) -> Interpretation:
    with open(path) as fh:
        return Interpretation.finite(FiniteModel.from_json(json.load(fh)))


def _load_proof(path: str):
    with open(path) as fh:
        return proof_from_json(json.load(fh))


def cmd_parse(args):
    try:
        if "||-" in args.text:
            seq = parse_sequent(args.text)
            print(json.dumps({"rendered": render_sequent(seq),
                              "freeVars": sorted(free_vars(seq))}, indent=1))
        else:
            f = parse_formula(args.text)
            print(json.dumps({"rendered": render_formula(f), "ast": formula_to_json(f),
                              "freeVars": sorted(free_vars(f))}, indent=1))
    except SyntaxError_ as e:
        _err(str(e))


def cmd_check(args):
    try:
        proof = _load_proof(args.proof)
    except (OSError, SyntaxError_, KeyError, ValueError) as e:
        _err(f"cannot load proof: {e}")
    report = check_proof(proof, args.budget)
    for i, v in enumerate(report.verdicts):
        line = f"step {i + 1}: {v.status}"
        if v.reason:
            line += f" ({v.reason})"
        print(line)
    labels = {"valid": ("Valid", 0), "valid-modulo-stability": ("ValidModuloStability", 2),
              "invalid": ("Invalid", 1)}
    label, code = labels[report.overall]
    print(label)
    raise SystemExit(code)


def cmd_prove(args):
    try:
        seq = parse_sequent(args.sequent)
    except SyntaxError_ as e:
        _err(str(e))
    budget = SearchBudget(max_depth=args.max_steps, max_replications=args.max_reps)
    result = search_proof(seq, budget)
    if isinstance(result, NotFound):
        print(json.dumps({"notFound": {"frontier": result.frontier,
                                       "stabilityUnknowns": result.stability_unknowns}}),
              file=sys.stderr)
        raise SystemExit(1)
    print(json.dumps(proof_to_json(result), indent=1))


def _env_from_spec(spec: str, sequent, interp: Interpretation):
    from cl12.arena import RandomEnv, ScriptedEnv
    kind, _, arg = spec.partition(":")
    if kind == "random":
        pool = ["0", "1", "10", "11"]
        if interp.is_finite:
            from cl12.syntax import numeral_of_int
            pool = [numeral_of_int(d) for d in range(interp.model.domain_size)]
        return RandomEnv(sequent, int(arg or "0"), pool)
    if kind == "script":
        with open(arg) as fh:
            return ScriptedEnv(json.load(fh))
    _err(f"unknown environment spec {spec!r}")


def cmd_play(args):
    from cl12.arena import PlayLimits, play
    from cl12.strategy import TraceRecorder
    try:
        seq = parse_sequent(args.sequent)
        proof = _load_proof(args.proof)
        interp = _load_interp(args.interp)
    except (OSError, SyntaxError_, KeyError, ValueError) as e:
        _err(str(e))
    machine = extract_strategy(proof)
    if args.trace:
        machine = TraceRecorder(machine, open(args.trace, "w"))
    env = _env_from_spec(args.env, seq, interp)
    result = play(machine, env, seq, interp, PlayLimits(max_moves=args.max_moves))
    print(json.dumps({
        "run": [m.to_json() for m in result.run],
        "verdict": result.verdict,
        "illegalBy": result.illegal_by,
        "topWon": result.top_won,
    }, indent=1))
    raise SystemExit(0 if result.top_won else 1)


def cmd_simulate(args):
    from cl12.arena import PlayLimits, RandomEnv, play
    try:
        seq = parse_sequent(open(args.sequent).read().strip()
                            if args.sequent.endswith(".seq") else args.sequent)
        proof = _load_proof(args.proof)
        interp = _load_interp(args.interp)
    except (OSError, SyntaxError_, KeyError, ValueError) as e:
        _err(str(e))
    from cl12.syntax import numeral_of_int
    pool = [numeral_of_int(d) for d in range(interp.model.domain_size)]
    wins = 0
    runs = []
    for seed in range(args.seeds):
        machine = extract_strategy(proof, verify=False)
        env = RandomEnv(seq, seed, pool)
        result = play(machine, env, seq, interp, PlayLimits(max_moves=args.max_moves))
        wins += result.top_won
        runs.append(tuple(result.run))
    report = monitor_well_behavedness(runs, proof)
    print(f"wins {wins}/{args.seeds}; replications <= {report.bound_d}: "
          f"{report.replicative_count <= report.bound_d}; "
          f"violations: {len(report.unfocused_violations) + len(report.constant_provenance_violations)}")
    raise SystemExit(0 if wins == args.seeds else 1)


def cmd_compose(args):
    from cl12.arena import (
        FormulaAgentAsSequentAgent, InterpAnswerer, PlayLimits, RandomEnv,
        SilentAgent, compose, play,
    )
    try:
        proof = _load_proof(args.proof)
        interp = _load_interp(args.interp)
    except (OSError, SyntaxError_, KeyError, ValueError) as e:
        _err(str(e))
    x = proof.conclusion
    solutions = []
    for i, spec in enumerate(args.solutions.split(",")):
        if spec == "silent":
            solutions.append(SilentAgent())
        elif spec == "answerer":
            solutions.append(InterpAnswerer(x.antecedent[i], interp))
        elif spec.startswith("proof:"):
            solutions.append(extract_strategy(_load_proof(spec[6:])))
        else:
            _err(f"unknown solution spec {spec!r} (use silent | answerer | proof:FILE)")
    from cl12.syntax import Sequent, numeral_of_int
    goal = Sequent((), x.succedent)
    pool = [numeral_of_int(d) for d in range(interp.model.domain_size)]
    wins = 0
    for seed in range(args.seeds):
        agent = FormulaAgentAsSequentAgent(
            compose(proof, [s.checkpoint() for s in solutions]), len(free_vars(goal)))
        env = RandomEnv(goal, seed, pool)
        result = play(agent, env, goal, interp, PlayLimits(max_moves=args.max_moves))
        wins += result.top_won
    print(f"composed agent wins {wins}/{args.seeds}")
    raise SystemExit(0 if wins == args.seeds else 1)


def cmd_bound(args):
    try:
        proof = _load_proof(args.proof)
    except (OSError, SyntaxError_, KeyError, ValueError) as e:
        _err(str(e))
    tau = bound_from_proof(proof)
    if not args.compose:
        print(json.dumps(graphterm_to_json(tau), indent=1))
        return
    gs = [bound_from_json_arg(part) for part in args.compose.split(",")]
    composed = compose_bound(tau, gs, proof.conclusion)
    print(json.dumps({
        "b": composed.b,
        "time": graphterm_to_json(composed.time),
        "space": graphterm_to_json(composed.space),
    }, indent=1))


def cmd_serve(args):
    import uvicorn

    from cl12.service import build_app
    uvicorn.run(build_app(args.persist), host="127.0.0.1", port=args.port)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="cl12")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula or sequent")
    p.add_argument("text")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("proof")
    p.add_argument("--budget", type=int, default=20000)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("prove", help="search for a proof")
    p.add_argument("sequent")
    p.add_argument("--max-steps", type=int, default=12)
    p.add_argument("--max-reps", type=int, default=2)
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("play", help="play a proof's strategy against an environment")
    p.add_argument("sequent")
    p.add_argument("--proof", required=True)
    p.add_argument("--env", default="random:0")
    p.add_argument("--interp", required=True)
    p.add_argument("--max-moves", type=int, default=48)
    p.add_argument("--trace", default=None, help="write per-tick JSON lines here")
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("simulate", help="run seeded random plays and print a win table")
    p.add_argument("--sequent", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--interp", required=True)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--max-moves", type=int, default=48)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("compose", help="compose antecedent solutions into a succedent agent")
    p.add_argument("--proof", required=True)
    p.add_argument("--solutions", required=True)
    p.add_argument("--interp", required=True)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--max-moves", type=int, default=48)
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("bound", help="extract a polynomial bound term from a proof")
    p.add_argument("--proof", required=True)
    p.add_argument("--compose", default="",
                   help="comma-separated antecedent bounds (f1,f2 or terms like l*l)")
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--port", type=int, default=8717)
    p.add_argument("--persist", default=None)
    p.set_defaults(fn=cmd_serve)

    args = parser.parse_args(argv)
    args.fn(args)


if __name__ == "__main__":
    main()
