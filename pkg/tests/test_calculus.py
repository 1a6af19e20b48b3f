import random

import pytest

from conftest import CUBE_SEQUENT_TEXT
from cl12.calculus import (
    AntChooseInstance, Exchange, NotFound, Proof, ProofStep, Replicate,
    SearchBudget, SuccChooseWitness, Wait, Weakening, check_proof, check_step,
    match_obligation, proof_from_json, proof_to_json, search_proof,
    wait_obligation_details, wait_obligations,
)
from cl12.classical import Countermodel, Valid, check_stability
from cl12.syntax import (
    Var, parse_sequent, parse_term, render_sequent, sequents_alpha_equal,
)


class TestCheckProof:
    def test_cube_proof_valid(self, cube_proof):
        report = check_proof(cube_proof)
        assert report.overall == "valid"
        assert all(v.ok for v in report.verdicts)

    def test_example_74_proof(self):
        proof = Proof((
            ProofStep(parse_sequent("||- p(s) -> p(s)"), Wait()),
            ProofStep(parse_sequent("||- ?y: (p(s) -> p(y))"),
                      SuccChooseWitness((), Var("s")), (0,)),
            ProofStep(parse_sequent("||- !x: ?y: (p(x) -> p(y))"), Wait(), (1,)),
        ))
        assert check_proof(proof).overall == "valid"

    def test_forward_reference_rejected(self, cube_proof):
        steps = list(cube_proof.steps)
        steps[0], steps[1] = (ProofStep(steps[0].sequent, steps[0].rule, (1,)),
                              ProofStep(steps[1].sequent, steps[1].rule, ()))
        report = check_proof(Proof(tuple(steps)))
        assert report.overall == "invalid"

    def test_swapped_steps_invalid(self, cube_proof):
        steps = list(cube_proof.steps)
        steps[0], steps[1] = steps[1], steps[0]
        assert check_proof(Proof(tuple(steps))).overall == "invalid"

    def test_missing_wait_premise(self, cube_proof):
        steps = list(cube_proof.steps)
        last = steps[-1]
        steps[-1] = ProofStep(last.sequent, last.rule, ())
        report = check_proof(Proof(tuple(steps)))
        assert not report.verdicts[-1].ok
        assert "missing Wait premise" in report.verdicts[-1].reason

    def test_unstable_wait_rejected(self):
        proof = Proof((ProofStep(parse_sequent("||- p \\/ q"), Wait()),))
        report = check_proof(proof)
        assert report.overall == "invalid"
        assert "unstable" in report.verdicts[0].reason

    def test_wrong_witness_shape_rejected(self):
        proof = Proof((
            ProofStep(parse_sequent("||- p(f(0)) -> p(f(0))"), Wait()),
            ProofStep(parse_sequent("||- ?y: (p(f(0)) -> p(y))"),
                      SuccChooseWitness((), parse_term("f(0)")), (0,)),
        ))
        report = check_proof(proof)
        assert not report.verdicts[1].ok

    def test_json_round_trip(self, cube_proof):
        again = proof_from_json(proof_to_json(cube_proof))
        assert check_proof(again).overall == "valid"
        assert [render_sequent(s.sequent) for s in again.steps] == \
            [render_sequent(s.sequent) for s in cube_proof.steps]


class TestWaitObligations:
    def test_choice_all_succedent(self):
        obs = wait_obligations(parse_sequent("||- !x: ?y: (p(x) -> p(y))"))
        assert len(obs) == 1
        expect = parse_sequent("||- ?y: (p(v0) -> p(y))")
        assert sequents_alpha_equal(obs[0], expect)

    def test_elementary_sequent_none(self):
        seq = parse_sequent(
            "A x: cube(x) = mult(mult(x,x),x), t = mult(s,s), r = mult(t,s) ||- r = cube(s)")
        assert wait_obligations(seq) == []

    def test_choice_and_antecedent_none(self):
        assert wait_obligations(parse_sequent("p & q ||- p")) == []

    def test_choice_or_antecedent_two(self):
        obs = wait_obligations(parse_sequent("p | q ||- p"))
        assert [render_sequent(s) for s in obs] == ["p ||- p", "q ||- p"]

    def test_matching_modulo_fresh_variable(self):
        x = parse_sequent("||- !x: p(x)")
        ob = wait_obligation_details(x)[0]
        assert match_obligation(ob, parse_sequent("||- p(w9)"), x) == "w9"
        assert match_obligation(ob, parse_sequent("||- p(q0)"), x) == "q0"
        assert match_obligation(ob, parse_sequent("||- q(w9)"), x) is None

    def test_fresh_variable_must_be_new(self):
        x = parse_sequent("||- (!x: p(x)) \\/ q(s)")
        ob = wait_obligation_details(x)[0]
        # s already occurs in the conclusion, so it cannot serve as fresh
        assert match_obligation(ob, parse_sequent("||- p(s) \\/ q(s)"), x) is None


class TestCheckStep:
    def test_replicate_appends_at_end(self):
        conclusion = parse_sequent("p & q, r ||- w")
        good = parse_sequent("p & q, r, p & q ||- w")
        bad = parse_sequent("p & q, p & q, r ||- w")
        assert check_step(conclusion, Replicate(0), [good]).ok
        assert not check_step(conclusion, Replicate(0), [bad]).ok

    def test_exchange(self):
        conclusion = parse_sequent("p, q ||- w")
        assert check_step(conclusion, Exchange(0, 1), [parse_sequent("q, p ||- w")]).ok

    def test_weakening(self):
        conclusion = parse_sequent("p, q, r ||- w")
        assert check_step(conclusion, Weakening((1,)), [parse_sequent("p, r ||- w")]).ok
        assert not check_step(conclusion, Weakening((1,)), [parse_sequent("p, q ||- w")]).ok

    def test_instance_witness_constant(self):
        conclusion = parse_sequent("!x: p(x) ||- q")
        premise = parse_sequent("p(110) ||- q")
        assert check_step(conclusion, AntChooseInstance(0, (), parse_term("110")),
                          [premise]).ok


class TestCheckStepEdges:
    def test_non_surface_occurrence_rejected(self):
        # the inner choice sits under the outer one; resolving it is no rule
        conclusion = parse_sequent("||- p | (q | r)")
        from cl12.calculus import SuccChooseDisjunct
        verdict = check_step(conclusion, SuccChooseDisjunct((1,), 0),
                             [parse_sequent("||- p | q")])
        assert not verdict.ok and "not surface" in verdict.reason

    def test_wait_with_extra_premises_allowed(self):
        conclusion = parse_sequent("p | q ||- p \\/ q")
        required = [parse_sequent("p ||- p \\/ q"), parse_sequent("q ||- p \\/ q")]
        extras = required + [parse_sequent("||- 0 = 0")]
        assert check_step(conclusion, Wait(), extras).ok

    def test_two_quantifier_obligations_distinct_freshes(self):
        x = parse_sequent("||- (!x: p(x)) /\\ (!x: q(x))")
        obs = wait_obligation_details(x)
        assert [ob.kind for ob in obs] == ["cho-all-succ", "cho-all-succ"]
        assert obs[0].fresh != obs[1].fresh
        premises = [parse_sequent("||- p(u1) /\\ (!x: q(x))"),
                    parse_sequent("||- (!x: p(x)) /\\ q(u2)")]
        assert check_step(x, Wait(), premises).ok

    def test_wrong_branch_index_rejected(self):
        conclusion = parse_sequent("||- p | q")
        from cl12.calculus import SuccChooseDisjunct
        verdict = check_step(conclusion, SuccChooseDisjunct((), 0),
                             [parse_sequent("||- q")])
        assert not verdict.ok


class TestSearch:
    POSITIVES = [
        "||- (A x: p(x)) -> !x: p(x)",
        "||- !x: ?y: (p(x) -> p(y))",
        "p & q ||- (p & q) /\\ (p & q)",
        "?x: !y: p(x,y) ||- ?x: ((!y: p(x,y)) /\\ (!y: p(x,y)))",
        CUBE_SEQUENT_TEXT,
    ]
    NEGATIVES = [
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

    @pytest.mark.parametrize("text", POSITIVES)
    def test_positive_set_found_and_checks(self, text):
        result = search_proof(parse_sequent(text),
                              SearchBudget(max_depth=12, max_replications=2))
        assert isinstance(result, Proof)
        assert check_proof(result).overall == "valid"

    @pytest.mark.parametrize("text", NEGATIVES)
    def test_negative_set_not_found(self, text):
        result = search_proof(parse_sequent(text),
                              SearchBudget(max_depth=12, max_replications=2))
        assert isinstance(result, NotFound)

    def test_found_proof_conclusion_matches(self):
        seq = parse_sequent("||- !x: ?y: (p(x) -> p(y))")
        proof = search_proof(seq)
        assert sequents_alpha_equal(proof.conclusion, seq)

    def test_twin_conjuncts_reuse_renamed_fragments(self):
        # the two conjuncts force canonically-equal subgoals under different
        # fresh variables, driving the memo's renaming reuse
        seq = parse_sequent("||- (!x: ?y: (p(x) -> p(y))) /\\ (!u: ?w: (p(u) -> p(w)))")
        result = search_proof(seq, SearchBudget(max_depth=10))
        assert isinstance(result, Proof)
        assert check_proof(result).overall == "valid"

    def test_memo_fragment_renaming(self):
        # a proved fragment for one free-variable spelling transfers to
        # another, with witness parameters renamed along
        from cl12.calculus import _Searcher, _assemble
        searcher = _Searcher(SearchBudget())
        node = searcher.prove(parse_sequent("||- ?y: (p(s) -> p(y))"), 6, 1, set())
        assert node is not None
        target = parse_sequent("||- ?y: (p(t) -> p(y))")
        renamed = searcher._instantiate(node, target)
        assert renamed is not None
        assert renamed.sequent == target
        proof = _assemble(renamed)
        assert check_proof(proof).overall == "valid"
        assert render_sequent(proof.conclusion) == render_sequent(target)


class TestSearchSelfConsistency:
    """Whatever the searcher finds, the checker accepts."""

    def test_random_sequents(self):
        rng = random.Random(23)
        pieces = ["p", "q", "~p", "p & q", "p | q", "!x: p(x)", "?x: p(x)",
                  "p \\/ q", "(!x: p(x)) -> p(y)", "?y: (p(y) & q)"]
        found = 0
        for _ in range(40):
            n_ante = rng.randint(0, 2)
            ante = [rng.choice(pieces) for _ in range(n_ante)]
            succ = rng.choice(pieces)
            text = (", ".join(ante) + " ||- " + succ) if ante else ("||- " + succ)
            try:
                seq = parse_sequent(text)
            except Exception:
                continue
            result = search_proof(seq, SearchBudget(max_depth=6, max_replications=1))
            if isinstance(result, Proof):
                found += 1
                assert check_proof(result).overall == "valid", text
        assert found >= 5  # the corpus is not degenerate


class TestExchangeWeakeningClosure:
    def test_permuted_and_weakened_variants_provable(self, cube_proof):
        base = cube_proof
        conclusion = base.conclusion
        # exchange the two antecedent formulas on top of the existing proof
        swapped = parse_sequent(
            "!x: !y: ?z: z = mult(x,y), A x: cube(x) = mult(mult(x,x),x)"
            " ||- !x: ?y: y = cube(x)")
        steps = base.steps + (
            ProofStep(swapped, Exchange(0, 1), (len(base.steps) - 1,)),)
        assert check_proof(Proof(steps)).overall == "valid"
        # weaken an extra formula into the swapped sequent
        widened = parse_sequent(
            "!x: !y: ?z: z = mult(x,y), q(0), A x: cube(x) = mult(mult(x,x),x)"
            " ||- !x: ?y: y = cube(x)")
        steps2 = steps + (ProofStep(widened, Weakening((1,)), (len(steps) - 1,)),)
        assert check_proof(Proof(steps2)).overall == "valid"


class TestConservativity:
    """Elementary sequents: provability = classical validity of the implication."""

    def test_corpus(self):
        rng = random.Random(11)
        atoms = ["p", "q", "0 = 0", "0 = 1", "x = y", "p \\/ q", "~p"]
        unknown = 0
        for i in range(50):
            n_ante = rng.randint(0, 2)
            ante = [rng.choice(atoms) for _ in range(n_ante)]
            succ = rng.choice(atoms)
            text = (", ".join(ante) + " ||- " + succ) if ante else ("||- " + succ)
            seq = parse_sequent(text)
            verdict = check_stability(seq)
            if not isinstance(verdict, (Valid, Countermodel)):
                unknown += 1
                continue
            classically_valid = isinstance(verdict, Valid)
            result = search_proof(seq, SearchBudget(max_depth=6))
            assert isinstance(result, Proof) == classically_valid, text
        assert unknown <= 5
