"""Satisfiability oracle against brute-force enumeration."""

import random

import pytest

from conftest import brute_models_mask, prop_vocabulary, random_ground_sentence
from plog.errors import CapExceededError
from plog.logic import FALSE, And, Atom, Iff, Not, Or, Vocabulary
from plog.parser import parse_program
from plog.sat import disjoint, implies, is_satisfiable, is_valid, to_cnf
from plog import scenarios


def _p(name):
    return Atom(name)


class TestBasics:
    def test_false_unsatisfiable(self):
        v = prop_vocabulary(1)
        assert not is_satisfiable(FALSE, v)

    def test_excluded_middle_satisfiable_and_valid(self):
        v = prop_vocabulary(1)
        s = Or((_p("p0"), Not(_p("p0"))))
        assert is_satisfiable(s, v)
        assert is_valid(s, v)

    def test_biconditional_chain_unsatisfiable(self):
        # (p<->q) & (q<->r) & (p<->~r): all eight assignments fail
        v = prop_vocabulary(3)
        p, q, r = _p("p0"), _p("p1"), _p("p2")
        s = And((Iff(p, q), Iff(q, r), Iff(p, Not(r))))
        assert not any(brute_models_mask(s, v))
        assert not is_satisfiable(s, v)

    def test_implies_and_disjoint(self):
        v = prop_vocabulary(2)
        p, q = _p("p0"), _p("p1")
        assert implies(And((p, q)), p, v)
        assert disjoint(p, Not(p), v)
        assert not disjoint(p, q, v)

    def test_monty_hall_disjointness_needs_uniqueness(self):
        # the two prize sentences alone are not disjoint; they are under
        # the uniqueness sentence
        program = parse_program(scenarios.MONTY_HALL_KB)
        v = program.vocabulary
        from plog.logic import ground
        phi1 = ground(program.sentences["phi1"], v)
        phi2 = ground(program.sentences["phi2"], v)
        phi3 = ground(program.sentences["phi3"], v)
        assert not disjoint(phi2, phi3, v)
        assert disjoint(And((phi1, phi2)), And((phi1, phi3)), v)


class TestAgainstBruteForce:
    def test_thousand_random_sentences(self):
        rng = random.Random(13)
        for case in range(1000):
            k = rng.randint(1, 12)
            v = prop_vocabulary(k)
            s = random_ground_sentence(rng, v, depth=rng.randint(1, 5),
                                       constant_leaves=True)
            expected = bool(brute_models_mask(s, v).any())
            assert is_satisfiable(s, v) == expected, f"case {case}"

    def test_validity_against_brute_force(self):
        rng = random.Random(17)
        for _ in range(300):
            k = rng.randint(1, 8)
            v = prop_vocabulary(k)
            s = random_ground_sentence(rng, v, depth=4)
            assert is_valid(s, v) == bool(brute_models_mask(s, v).all())


class TestRelationProperties:
    def test_implies_reflexive_and_transitive(self):
        rng = random.Random(19)
        v = prop_vocabulary(5)
        for _ in range(120):
            a = random_ground_sentence(rng, v, depth=3)
            b = random_ground_sentence(rng, v, depth=3)
            c = random_ground_sentence(rng, v, depth=3)
            assert implies(a, a, v)
            if implies(a, b, v) and implies(b, c, v):
                assert implies(a, c, v)

    def test_disjoint_symmetric(self):
        rng = random.Random(23)
        v = prop_vocabulary(5)
        for _ in range(150):
            a = random_ground_sentence(rng, v, depth=3)
            b = random_ground_sentence(rng, v, depth=3)
            assert disjoint(a, b, v) == disjoint(b, a, v)


class TestCapsAndDimacs:
    def test_ground_atom_cap(self):
        v = prop_vocabulary(70)
        with pytest.raises(CapExceededError, match="exceed"):
            is_satisfiable(_p("p0"), v)

    def test_aux_cap(self):
        rng = random.Random(29)
        v = prop_vocabulary(4)
        s = random_ground_sentence(rng, v, depth=10)
        with pytest.raises(CapExceededError, match="auxiliary"):
            is_satisfiable(s, v, aux_cap=2)

    def test_dimacs_dump(self):
        v = prop_vocabulary(2)
        cnf = to_cnf(Or((_p("p0"), Not(_p("p1")))), v)
        text = cnf.to_dimacs()
        header = text.splitlines()[0].split()
        assert header[:2] == ["p", "cnf"]
        assert int(header[2]) == cnf.num_vars
        assert int(header[3]) == len(cnf.clauses)
        assert all(line.endswith(" 0") for line in text.splitlines()[1:])

    def test_unknown_atom_rejected(self):
        v = prop_vocabulary(1)
        from plog.errors import PlogError
        with pytest.raises(PlogError, match="not in the vocabulary"):
            is_satisfiable(_p("nope"), v)
