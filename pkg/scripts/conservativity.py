#!/usr/bin/env python3
"""Provability vs classical validity on random elementary sequents.

For elementary sequents the two notions must coincide; this prints the
agreement table and any unknowns the bounded oracles leave behind.
"""

import argparse
import random
import time

from cl12.calculus import Proof, SearchBudget, search_proof
from cl12.classical import Countermodel, Valid, check_stability
from cl12.syntax import parse_sequent

ATOMS = ["p", "q", "0 = 0", "0 = 1", "x = y", "p \\/ q", "~p", "A x: q",
         "f(x) = f(y)", "x = y -> f(x) = f(y)"]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    agree = disagree = unknown = 0
    t0 = time.time()
    for i in range(args.count):
        ante = [rng.choice(ATOMS) for _ in range(rng.randint(0, 2))]
        succ = rng.choice(ATOMS)
        text = (", ".join(ante) + " ||- " + succ) if ante else ("||- " + succ)
        seq = parse_sequent(text)
        verdict = check_stability(seq)
        if not isinstance(verdict, (Valid, Countermodel)):
            unknown += 1
            print(f"?  {text}")
            continue
        provable = isinstance(search_proof(seq, SearchBudget(max_depth=6)), Proof)
        classical = isinstance(verdict, Valid)
        if provable == classical:
            agree += 1
        else:
            disagree += 1
            print(f"!! {text}: provable={provable} classical={classical}")
    print(f"\n{agree} agree, {disagree} disagree, {unknown} unknown "
          f"({time.time() - t0:.1f}s)")
    raise SystemExit(1 if disagree else 0)


if __name__ == "__main__":
    main()
