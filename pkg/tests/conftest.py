import json
import pathlib

import pytest

from cl12.calculus import proof_from_json
from cl12.classical import FiniteModel
from cl12.games import Interpretation

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

CUBE_SEQUENT_TEXT = ("A x: cube(x) = mult(mult(x,x),x), !x: !y: ?z: z = mult(x,y) "
                     "||- !x: ?y: y = cube(x)")


@pytest.fixture(scope="session")
def cube_proof():
    return proof_from_json(json.loads((DATA / "cube.proof.json").read_text()))


@pytest.fixture(scope="session")
def mod16():
    return Interpretation.finite(
        FiniteModel.from_json(json.loads((DATA / "mod16.json").read_text())))


def mod_interp(m: int) -> Interpretation:
    return Interpretation.finite(FiniteModel(
        m,
        {"mult": {(a, b): (a * b) % m for a in range(m) for b in range(m)},
         "cube": {(a,): (a ** 3) % m for a in range(m)}},
        {},
    ))
