"""Vocabulary, sentence syntax and grounding."""

import random

import numpy as np
import pytest

from conftest import (
    brute_models_mask,
    prop_vocabulary,
    random_ground_sentence,
    random_predicate_vocabulary,
    random_quantified_sentence,
)
from plog.errors import PlogError
from plog.logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    Equals,
    Exists,
    Forall,
    GroundAtom,
    Implies,
    Not,
    Or,
    Vocabulary,
    fold_constants,
    ground,
    is_ground,
    to_text,
)
from plog.parser import parse_formula_text
from plog.worlds import WorldSpace


class TestVocabulary:
    def test_atom_order_is_predicates_then_propositions(self):
        v = Vocabulary(
            {"D": ("a", "b")},
            {"q": ("D",), "r": ("D", "D")},
            ("p",),
        )
        names = [str(a) for a in v.atoms()]
        assert names == [
            "q(a)", "q(b)",
            "r(a, a)", "r(a, b)", "r(b, a)", "r(b, b)",
            "p",
        ]

    def test_empty_domain_rejected(self):
        with pytest.raises(PlogError, match="empty"):
            Vocabulary({"D": ()}, {}, ())

    def test_repeated_constant_rejected(self):
        with pytest.raises(PlogError, match="repeats"):
            Vocabulary({"D": ("a", "a")}, {}, ())

    def test_cross_domain_constant_rejected(self):
        with pytest.raises(PlogError, match="declared in both"):
            Vocabulary({"D": ("a",), "E": ("a",)}, {}, ())

    def test_predicate_over_undeclared_domain_rejected(self):
        with pytest.raises(PlogError, match="undeclared domain"):
            Vocabulary({"D": ("a",)}, {"q": ("E",)}, ())


class TestGroundingExamples:
    def test_forall_three_element_expansion(self):
        v = Vocabulary({"D": ("a", "b", "c")}, {"q": ("D",)}, ())
        g = ground(Forall("x", "D", Atom("q", ("x",))), v)
        assert g == And((Atom("q", ("a",)), Atom("q", ("b",)), Atom("q", ("c",))))

    def test_exists_singleton_domain(self):
        v = Vocabulary({"D": ("a",)}, {"q": ("D",)}, ())
        g = ground(Exists("x", "D", Atom("q", ("x",))), v)
        assert g == Atom("q", ("a",))

    def test_equality_resolution(self):
        v = Vocabulary({"D": ("a", "b")}, {}, ())
        assert ground(Equals("a", "a"), v) == TRUE
        assert ground(Equals("a", "b"), v) == FALSE

    def test_uniqueness_encoding_matches_truth_table(self):
        # one-prize-door uniqueness over three doors, against the oracle
        v = Vocabulary({"Door": ("d1", "d2", "d3")}, {"p": ("Door",)}, ())
        s = Exists("d", "Door", And((
            Atom("p", ("d",)),
            Forall("x", "Door", Implies(Atom("p", ("x",)), Equals("x", "d"))),
        )))
        g = ground(s, v)
        assert is_ground(g)
        # the grounding is a 3-way disjunction, one disjunct per door
        assert isinstance(g, Or) and len(g.items) == 3
        space = WorldSpace(v)
        assert np.array_equal(space.models(g).mask, brute_models_mask(s, v))
        # exactly the 3 of 8 assignments with a single true atom
        assert len(space.models(g)) == 3

    def test_unbound_variable_rejected(self):
        v = Vocabulary({"D": ("a",)}, {"q": ("D",)}, ())
        with pytest.raises(PlogError, match="unbound variable"):
            ground(Atom("q", ("y",)), v)

    def test_mismatched_equality_domains_rejected(self):
        v = Vocabulary({"D": ("a",), "E": ("b",)}, {}, ())
        with pytest.raises(PlogError, match="different domains"):
            ground(Equals("a", "b"), v)


class TestGroundingSemantics:
    def test_matches_brute_force_on_random_quantified_sentences(self):
        rng = random.Random(7)
        for _ in range(150):
            v = random_predicate_vocabulary(rng, max_atoms=10)
            s = random_quantified_sentence(rng, v)
            space = WorldSpace(v)
            assert np.array_equal(
                space.models(ground(s, v)).mask, brute_models_mask(s, v)
            ), to_text(s)

    def test_ground_idempotent_on_quantifier_free_trees(self):
        rng = random.Random(11)
        v = prop_vocabulary(6)
        for _ in range(200):
            s = random_ground_sentence(rng, v, depth=4, constant_leaves=True)
            once = ground(s, v)
            assert ground(once, v) == once

    def test_fold_constants_reaches_fixed_point(self):
        p = Atom("p")
        assert fold_constants(And((p, TRUE))) == p
        assert fold_constants(Or((p, TRUE))) == TRUE
        assert fold_constants(Implies(p, FALSE)) == Not(p)
        assert fold_constants(Not(FALSE)) == TRUE


class TestRoundTrip:
    def test_print_then_parse_is_structurally_identical(self):
        rng = random.Random(3)
        for _ in range(120):
            v = random_predicate_vocabulary(rng, max_atoms=10)
            s = random_quantified_sentence(rng, v)
            assert parse_formula_text(to_text(s), v) == s

    def test_propositional_round_trip(self):
        rng = random.Random(5)
        v = prop_vocabulary(8)
        for _ in range(200):
            s = random_ground_sentence(rng, v, depth=5)
            assert parse_formula_text(to_text(s), v) == s

    def test_atom_rendering(self):
        assert to_text(Atom("q", ("a", "b"))) == "q(a, b)"
        assert to_text(Forall("x", "D", Implies(Atom("q", ("x",)), Atom("p")))) \
            == "forall x:D. q(x) -> p"
