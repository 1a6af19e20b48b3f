#!/usr/bin/env python3
"""Play the counterstrategy against the fixed machine lineup.

For each unprovable sequent the play ends in a residue that a finite
countermodel falsifies; the demo prints the run, the residue, and the
falsifying interpretation.
"""

import argparse
import json

from cl12.arena import (
    PlayLimits, counterstrategy, falsifying_interpretation,
    fixed_machine_lineup, play,
)
from cl12.calculus import SearchBudget
from cl12.games import BOT, Interpretation, adjudicate, tree_leaves
from cl12.syntax import parse_sequent, render_formula

DEFAULT_SEQUENTS = [
    "||- (!x: p(x)) -> A x: p(x)",
    "||- ?y: !x: (p(x) -> p(y))",
    "||- !x: ?y: y = f(x)",
    "||- p & q -> (p & q) /\\ (p & q)",
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("sequents", nargs="*", default=DEFAULT_SEQUENTS)
    parser.add_argument("--max-moves", type=int, default=24)
    args = parser.parse_args()

    failures = 0
    for text in args.sequents:
        seq = parse_sequent(text)
        print(f"\n== {text}")
        for i, machine in enumerate(fixed_machine_lineup(seq)):
            env = counterstrategy(seq, SearchBudget(max_depth=8, max_replications=1))
            result = play(machine, env, seq, Interpretation.ideal(),
                          PlayLimits(max_ticks=24, max_moves=args.max_moves))
            model = falsifying_interpretation(result.position, max_domain=3)
            beaten = (model is not None
                      and adjudicate(result.position, Interpretation.finite(model)) == BOT)
            failures += not beaten
            run = " ".join(m.player + m.move for m in result.run) or "(silent)"
            leaves = [render_formula(g)
                      for t in result.position.antecedent for _, g in tree_leaves(t)]
            print(f"  machine {i}: {'beaten' if beaten else 'NOT BEATEN'}; run: {run}")
            print(f"    residue: {leaves} ||- {render_formula(result.position.succedent)}")
            if model is not None:
                print(f"    falsified by: {json.dumps(model.to_json())}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
