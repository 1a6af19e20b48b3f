#!/usr/bin/env python3
"""Regenerate the sample data files under data/."""

import json
import pathlib

from cl12.classical import FiniteModel

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

CUBE_SEQUENT = ("A x: cube(x) = mult(mult(x,x),x), !x: !y: ?z: z = mult(x,y) "
                "||- !x: ?y: y = cube(x)")

CUBE_PROOF = {
    "steps": [
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), t = mult(s,s), r = mult(t,s) ||- r = cube(s)",
         "rule": "wait", "params": {}, "premises": []},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), t = mult(s,s), r = mult(t,s) ||- ?y: y = cube(s)",
         "rule": "succ-choose-witness", "params": {"occ": [], "t": "r"}, "premises": [0]},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), t = mult(s,s), ?z: z = mult(t,s) ||- ?y: y = cube(s)",
         "rule": "wait", "params": {}, "premises": [1]},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), t = mult(s,s), !y: ?z: z = mult(t,y) ||- ?y: y = cube(s)",
         "rule": "ant-choose-instance", "params": {"slot": 2, "occ": [], "t": "s"}, "premises": [2]},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), t = mult(s,s), !x: !y: ?z: z = mult(x,y) ||- ?y: y = cube(s)",
         "rule": "ant-choose-instance", "params": {"slot": 2, "occ": [], "t": "t"}, "premises": [3]},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), ?z: z = mult(s,s), !x: !y: ?z: z = mult(x,y) ||- ?y: y = cube(s)",
         "rule": "wait", "params": {}, "premises": [4]},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), !y: ?z: z = mult(s,y), !x: !y: ?z: z = mult(x,y) ||- ?y: y = cube(s)",
         "rule": "ant-choose-instance", "params": {"slot": 1, "occ": [], "t": "s"}, "premises": [5]},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), !x: !y: ?z: z = mult(x,y), !x: !y: ?z: z = mult(x,y) ||- ?y: y = cube(s)",
         "rule": "ant-choose-instance", "params": {"slot": 1, "occ": [], "t": "s"}, "premises": [6]},
        {"sequent": "A x: cube(x) = mult(mult(x,x),x), !x: !y: ?z: z = mult(x,y) ||- ?y: y = cube(s)",
         "rule": "replicate", "params": {"slot": 1}, "premises": [7]},
        {"sequent": CUBE_SEQUENT,
         "rule": "wait", "params": {}, "premises": [8]},
    ]
}


def mod_model(m: int) -> FiniteModel:
    return FiniteModel(
        m,
        {"mult": {(a, b): (a * b) % m for a in range(m) for b in range(m)},
         "cube": {(a,): (a ** 3) % m for a in range(m)}},
        {},
    )


def main():
    DATA.mkdir(exist_ok=True)
    (DATA / "cube.seq").write_text(CUBE_SEQUENT + "\n")
    (DATA / "cube.proof.json").write_text(json.dumps(CUBE_PROOF, indent=1) + "\n")
    for m in (2, 3, 4, 16):
        path = DATA / f"mod{m}.json"
        path.write_text(json.dumps(mod_model(m).to_json()) + "\n")
    print(f"wrote data files under {DATA}")


if __name__ == "__main__":
    main()
