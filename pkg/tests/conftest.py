"""Shared test helpers: brute-force semantics and random sentence generators.

The brute-force evaluator interprets quantifiers by direct iteration
over domain constants and never touches the grounding or mask machinery,
so it serves as the independent oracle for both.
"""

from __future__ import annotations

import random

import numpy as np

from plog.logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    Equals,
    Exists,
    Forall,
    GroundAtom,
    Iff,
    Implies,
    Not,
    Or,
    Sentence,
    TrueS,
    FalseS,
    Vocabulary,
)


def prop_vocabulary(k: int) -> Vocabulary:
    return Vocabulary({}, {}, tuple(f"p{i}" for i in range(k)))


def brute_truth(s: Sentence, world: int, vocabulary: Vocabulary,
                env: dict[str, str] | None = None) -> bool:
    """Evaluate a sentence in one world by structural recursion, with
    quantifiers iterating over the declared constants."""
    env = env or {}
    index = {a: i for i, a in enumerate(vocabulary.atoms())}

    def ev(node, env):
        if isinstance(node, TrueS):
            return True
        if isinstance(node, FalseS):
            return False
        if isinstance(node, Atom):
            args = tuple(env.get(a, a) for a in node.args)
            return bool((world >> index[GroundAtom(node.name, args)]) & 1)
        if isinstance(node, Equals):
            return env.get(node.left, node.left) == env.get(node.right, node.right)
        if isinstance(node, Not):
            return not ev(node.body, env)
        if isinstance(node, And):
            return all(ev(x, env) for x in node.items)
        if isinstance(node, Or):
            return any(ev(x, env) for x in node.items)
        if isinstance(node, Implies):
            return (not ev(node.antecedent, env)) or ev(node.consequent, env)
        if isinstance(node, Iff):
            return ev(node.left, env) == ev(node.right, env)
        if isinstance(node, Forall):
            return all(ev(node.body, {**env, node.var: c})
                       for c in vocabulary.domains[node.domain])
        if isinstance(node, Exists):
            return any(ev(node.body, {**env, node.var: c})
                       for c in vocabulary.domains[node.domain])
        raise TypeError(node)

    return ev(s, env)


def brute_models_mask(s: Sentence, vocabulary: Vocabulary) -> np.ndarray:
    """Truth value of ``s`` in every world at once.

    Independent of the engine's mask algebra: bits are extracted from
    the world index directly and quantifiers iterate over constants.
    """
    index = {a: i for i, a in enumerate(vocabulary.atoms())}
    worlds = np.arange(1 << len(index), dtype=np.int64)

    def ev(node, env) -> np.ndarray:
        if isinstance(node, TrueS):
            return np.ones(len(worlds), dtype=bool)
        if isinstance(node, FalseS):
            return np.zeros(len(worlds), dtype=bool)
        if isinstance(node, Atom):
            args = tuple(env.get(a, a) for a in node.args)
            bit = index[GroundAtom(node.name, args)]
            return ((worlds >> bit) & 1).astype(bool)
        if isinstance(node, Equals):
            same = env.get(node.left, node.left) == env.get(node.right, node.right)
            return np.full(len(worlds), same, dtype=bool)
        if isinstance(node, Not):
            return ~ev(node.body, env)
        if isinstance(node, And):
            out = ev(node.items[0], env)
            for item in node.items[1:]:
                out = out & ev(item, env)
            return out
        if isinstance(node, Or):
            out = ev(node.items[0], env)
            for item in node.items[1:]:
                out = out | ev(item, env)
            return out
        if isinstance(node, Implies):
            return ~ev(node.antecedent, env) | ev(node.consequent, env)
        if isinstance(node, Iff):
            return ev(node.left, env) == ev(node.right, env)
        if isinstance(node, Forall):
            out = np.ones(len(worlds), dtype=bool)
            for c in vocabulary.domains[node.domain]:
                out = out & ev(node.body, {**env, node.var: c})
            return out
        if isinstance(node, Exists):
            out = np.zeros(len(worlds), dtype=bool)
            for c in vocabulary.domains[node.domain]:
                out = out | ev(node.body, {**env, node.var: c})
            return out
        raise TypeError(node)

    return ev(s, {})


def random_ground_sentence(rng: random.Random, vocabulary: Vocabulary,
                           depth: int = 4, constant_leaves: bool = False) -> Sentence:
    atoms = vocabulary.atoms()

    def build(d):
        if d == 0 or rng.random() < 0.25:
            if constant_leaves and rng.random() < 0.05:
                return TRUE if rng.random() < 0.5 else FALSE
            a = rng.choice(atoms)
            return Atom(a.name, a.args)
        kind = rng.randrange(5)
        if kind == 0:
            return Not(build(d - 1))
        if kind == 1:
            width = rng.randint(2, 3)
            return And(tuple(build(d - 1) for _ in range(width)))
        if kind == 2:
            width = rng.randint(2, 3)
            return Or(tuple(build(d - 1) for _ in range(width)))
        if kind == 3:
            return Implies(build(d - 1), build(d - 1))
        return Iff(build(d - 1), build(d - 1))

    return build(depth)


def random_predicate_vocabulary(rng: random.Random,
                                max_domain_size: int = 4,
                                max_atoms: int = 12) -> Vocabulary:
    """One or two small domains with unary/binary predicates, capped so
    the induced atom count stays within ``max_atoms``."""
    while True:
        n_domains = rng.randint(1, 2)
        domains = {}
        for d in range(n_domains):
            size = rng.randint(1, max_domain_size)
            domains[f"D{d}"] = tuple(f"c{d}_{i}" for i in range(size))
        predicates = {}
        total = 0
        for p in range(rng.randint(1, 3)):
            arity = rng.randint(1, 2)
            arg_domains = tuple(rng.choice(sorted(domains)) for _ in range(arity))
            cells = 1
            for a in arg_domains:
                cells *= len(domains[a])
            if total + cells > max_atoms:
                continue
            predicates[f"q{p}"] = arg_domains
            total += cells
        if predicates:
            return Vocabulary(domains, predicates)


def random_quantified_sentence(rng: random.Random, vocabulary: Vocabulary,
                               depth: int = 3) -> Sentence:
    """A closed sentence mixing quantifiers, equalities and connectives."""
    counter = [0]

    def term(domain, scope):
        in_scope = [v for v, d in scope if d == domain]
        if in_scope and rng.random() < 0.7:
            return rng.choice(in_scope)
        return rng.choice(vocabulary.domains[domain])

    def leaf(scope):
        if rng.random() < 0.2:
            domain = rng.choice(sorted(vocabulary.domains))
            return Equals(term(domain, scope), term(domain, scope))
        name = rng.choice(sorted(vocabulary.predicates))
        args = tuple(term(d, scope) for d in vocabulary.predicates[name])
        return Atom(name, args)

    def build(d, scope):
        if d == 0 or rng.random() < 0.2:
            return leaf(scope)
        kind = rng.randrange(6)
        if kind == 0:
            counter[0] += 1
            var = f"x{counter[0]}"
            domain = rng.choice(sorted(vocabulary.domains))
            cls = Forall if rng.random() < 0.5 else Exists
            return cls(var, domain, build(d - 1, scope + [(var, domain)]))
        if kind == 1:
            return Not(build(d - 1, scope))
        if kind == 2:
            return And(tuple(build(d - 1, scope) for _ in range(rng.randint(2, 3))))
        if kind == 3:
            return Or(tuple(build(d - 1, scope) for _ in range(rng.randint(2, 3))))
        if kind == 4:
            return Implies(build(d - 1, scope), build(d - 1, scope))
        return Iff(build(d - 1, scope), build(d - 1, scope))

    # force at least one quantifier at the root half the time
    if rng.random() < 0.5:
        counter[0] += 1
        var = f"x{counter[0]}"
        domain = rng.choice(sorted(vocabulary.domains))
        cls = Forall if rng.random() < 0.5 else Exists
        return cls(var, domain, build(depth - 1, [(var, domain)]))
    return build(depth, [])


def random_positive_weights(rng: np.random.Generator, size: int,
                            floor: float = 0.01) -> np.ndarray:
    raw = rng.random(size) + floor
    return raw / raw.sum()
