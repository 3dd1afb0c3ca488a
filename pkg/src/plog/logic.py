"""Sentence syntax over finite grounded vocabularies.

A vocabulary declares finite domains of constants, predicates over those
domains, and nullary propositions. Sentences are ordinary connective
trees plus finite-domain quantifiers and equality between domain terms.
Grounding eliminates quantifiers by finite expansion and resolves every
equality to a constant, so the result is a plain propositional tree over
ground atoms ("quantifier-free" below). Satisfiability of that fragment
is decidable, which is what every downstream module relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Union

from .errors import PlogError

# ---------------------------------------------------------------------------
# Vocabulary


@dataclass(frozen=True)
class GroundAtom:
    """A predicate applied to constants, or a bare proposition (no args)."""

    name: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(self.args)})"


@dataclass(frozen=True)
class Vocabulary:
    """Declared domains, predicates and propositions.

    The induced ground-atom list is deterministic: predicates in
    declaration order, each expanded over argument tuples with the
    leftmost argument varying slowest and constants in declared order,
    followed by propositions in declaration order. Constant names must
    be globally unique so that a bare identifier in a term position is
    unambiguous.
    """

    domains: dict[str, tuple[str, ...]]
    predicates: dict[str, tuple[str, ...]]
    propositions: tuple[str, ...] = ()

    def __post_init__(self):
        seen_constants: dict[str, str] = {}
        for dom, constants in self.domains.items():
            if not constants:
                raise PlogError(f"domain {dom!r} is empty")
            if len(set(constants)) != len(constants):
                raise PlogError(f"domain {dom!r} repeats a constant")
            for c in constants:
                if c in seen_constants:
                    raise PlogError(
                        f"constant {c!r} declared in both {seen_constants[c]!r} and {dom!r}"
                    )
                seen_constants[c] = dom
        for pred, arg_domains in self.predicates.items():
            for d in arg_domains:
                if d not in self.domains:
                    raise PlogError(f"predicate {pred!r} uses undeclared domain {d!r}")

    def domain_of_constant(self, constant: str) -> str:
        for dom, constants in self.domains.items():
            if constant in constants:
                return dom
        raise PlogError(f"undeclared constant {constant!r}")

    def atoms(self) -> tuple[GroundAtom, ...]:
        """The deterministic ground-atom order; world bit i is atoms()[i]."""
        out: list[GroundAtom] = []
        for pred, arg_domains in self.predicates.items():
            pools = [self.domains[d] for d in arg_domains]
            for combo in itertools.product(*pools):
                out.append(GroundAtom(pred, combo))
        for prop in self.propositions:
            out.append(GroundAtom(prop))
        return tuple(out)

    def atom_index(self) -> dict[GroundAtom, int]:
        return {a: i for i, a in enumerate(self.atoms())}


# ---------------------------------------------------------------------------
# Sentence nodes


@dataclass(frozen=True)
class TrueS:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class FalseS:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Atom:
    """Predicate application; args are constants or quantifier-bound variables."""

    name: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(self.args)})"


@dataclass(frozen=True)
class Not:
    body: "Sentence"

    def __str__(self) -> str:
        return f"~{_wrap(self.body)}"


@dataclass(frozen=True)
class And:
    items: tuple["Sentence", ...]

    def __str__(self) -> str:
        return " & ".join(_wrap(x) for x in self.items)


@dataclass(frozen=True)
class Or:
    items: tuple["Sentence", ...]

    def __str__(self) -> str:
        return " | ".join(_wrap(x) for x in self.items)


@dataclass(frozen=True)
class Implies:
    antecedent: "Sentence"
    consequent: "Sentence"

    def __str__(self) -> str:
        return f"{_wrap(self.antecedent)} -> {_wrap(self.consequent)}"


@dataclass(frozen=True)
class Iff:
    left: "Sentence"
    right: "Sentence"

    def __str__(self) -> str:
        return f"{_wrap(self.left)} <-> {_wrap(self.right)}"


@dataclass(frozen=True)
class Equals:
    """Equality between two domain terms (constants or bound variables)."""

    left: str
    right: str

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Forall:
    var: str
    domain: str
    body: "Sentence"

    def __str__(self) -> str:
        return f"forall {self.var}:{self.domain}. {self.body}"


@dataclass(frozen=True)
class Exists:
    var: str
    domain: str
    body: "Sentence"

    def __str__(self) -> str:
        return f"exists {self.var}:{self.domain}. {self.body}"


Sentence = Union[
    TrueS, FalseS, Atom, Not, And, Or, Implies, Iff, Equals, Forall, Exists
]

# A GroundSentence is a Sentence containing no quantifier, no variable and
# no Equals node; ground() produces them and is_ground() recognises them.
GroundSentence = Sentence

TRUE = TrueS()
FALSE = FalseS()

_ATOMIC = (TrueS, FalseS, Atom, Equals)


def _wrap(s: Sentence) -> str:
    """Parenthesise non-atomic children so printing round-trips exactly."""
    if isinstance(s, _ATOMIC):
        return str(s)
    return f"({s})"


def to_text(s: Sentence) -> str:
    """Render a sentence in the knowledge-base formula syntax."""
    return str(s)


def check_closed(s: Sentence, vocabulary: Vocabulary) -> None:
    """Raise unless every term resolves to a constant or an enclosing binder."""
    _check_closed(s, vocabulary, frozenset())


def _check_closed(s: Sentence, v: Vocabulary, bound: frozenset[str]) -> None:
    if isinstance(s, (TrueS, FalseS)):
        return
    if isinstance(s, Atom):
        if s.args:
            if s.name not in v.predicates:
                raise PlogError(f"undeclared predicate {s.name!r}")
            arg_domains = v.predicates[s.name]
            if len(arg_domains) != len(s.args):
                raise PlogError(
                    f"predicate {s.name!r} expects {len(arg_domains)} arguments, got {len(s.args)}"
                )
            for term, dom in zip(s.args, arg_domains):
                _check_term(term, dom, v, bound)
        else:
            if s.name not in v.propositions:
                raise PlogError(f"undeclared proposition {s.name!r}")
        return
    if isinstance(s, Equals):
        left_dom = _term_domain(s.left, v, bound)
        right_dom = _term_domain(s.right, v, bound)
        if left_dom is not None and right_dom is not None and left_dom != right_dom:
            raise PlogError(
                f"equality compares terms of different domains: {s.left!r} ({left_dom}) "
                f"and {s.right!r} ({right_dom})"
            )
        return
    if isinstance(s, Not):
        _check_closed(s.body, v, bound)
        return
    if isinstance(s, (And, Or)):
        for item in s.items:
            _check_closed(item, v, bound)
        return
    if isinstance(s, Implies):
        _check_closed(s.antecedent, v, bound)
        _check_closed(s.consequent, v, bound)
        return
    if isinstance(s, Iff):
        _check_closed(s.left, v, bound)
        _check_closed(s.right, v, bound)
        return
    if isinstance(s, (Forall, Exists)):
        if s.domain not in v.domains:
            raise PlogError(f"quantifier over undeclared domain {s.domain!r}")
        _check_closed(s.body, v, bound | {s.var})
        return
    raise TypeError(f"not a sentence node: {s!r}")


def _check_term(term: str, expected_domain: str, v: Vocabulary, bound: frozenset[str]) -> None:
    if term in bound:
        return
    if term in v.domains.get(expected_domain, ()):
        return
    # Constant of the wrong domain, or a free variable.
    for dom, constants in v.domains.items():
        if term in constants:
            raise PlogError(
                f"term {term!r} belongs to domain {dom!r}, expected {expected_domain!r}"
            )
    raise PlogError(f"unbound variable or undeclared constant {term!r}")


def _term_domain(term: str, v: Vocabulary, bound: frozenset[str]):
    if term in bound:
        return None  # variable: its domain is fixed by the binder, checked at ground time
    for dom, constants in v.domains.items():
        if term in constants:
            return dom
    raise PlogError(f"unbound variable or undeclared constant {term!r}")


# ---------------------------------------------------------------------------
# Grounding


def ground(s: Sentence, vocabulary: Vocabulary) -> GroundSentence:
    """Expand quantifiers over their finite domains and resolve equalities.

    The result is logically equivalent to ``s`` under finite-domain
    semantics. Simplification is limited to constant folding: equalities
    become true/false, and true/false are absorbed through connectives.
    Expansion follows the declared constant order, so grounding is
    deterministic. Idempotent: grounding a quantifier-free tree folds
    constants and then reaches a fixed point.
    """
    check_closed(s, vocabulary)
    return _ground(s, vocabulary, {})


def is_ground(s: Sentence) -> bool:
    """True when ``s`` contains no quantifier, variable or equality node."""
    if isinstance(s, (TrueS, FalseS, Atom)):
        return True
    if isinstance(s, Not):
        return is_ground(s.body)
    if isinstance(s, (And, Or)):
        return all(is_ground(x) for x in s.items)
    if isinstance(s, Implies):
        return is_ground(s.antecedent) and is_ground(s.consequent)
    if isinstance(s, Iff):
        return is_ground(s.left) and is_ground(s.right)
    return False


def _ground(s: Sentence, v: Vocabulary, env: dict[str, str]) -> GroundSentence:
    if isinstance(s, (TrueS, FalseS)):
        return s
    if isinstance(s, Atom):
        if not s.args:
            return s
        return Atom(s.name, tuple(env.get(a, a) for a in s.args))
    if isinstance(s, Equals):
        left = env.get(s.left, s.left)
        right = env.get(s.right, s.right)
        return TRUE if left == right else FALSE
    if isinstance(s, Not):
        return _fold_not(_ground(s.body, v, env))
    if isinstance(s, And):
        return _fold_and([_ground(x, v, env) for x in s.items])
    if isinstance(s, Or):
        return _fold_or([_ground(x, v, env) for x in s.items])
    if isinstance(s, Implies):
        return _fold_implies(_ground(s.antecedent, v, env), _ground(s.consequent, v, env))
    if isinstance(s, Iff):
        return _fold_iff(_ground(s.left, v, env), _ground(s.right, v, env))
    if isinstance(s, Forall):
        expansions = []
        for c in v.domains[s.domain]:
            expansions.append(_ground(s.body, v, {**env, s.var: c}))
        return _fold_and(expansions)
    if isinstance(s, Exists):
        expansions = []
        for c in v.domains[s.domain]:
            expansions.append(_ground(s.body, v, {**env, s.var: c}))
        return _fold_or(expansions)
    raise TypeError(f"not a sentence node: {s!r}")


def _fold_not(body: GroundSentence) -> GroundSentence:
    if isinstance(body, TrueS):
        return FALSE
    if isinstance(body, FalseS):
        return TRUE
    return Not(body)


def _fold_and(items: list[GroundSentence]) -> GroundSentence:
    kept = []
    for x in items:
        if isinstance(x, FalseS):
            return FALSE
        if isinstance(x, TrueS):
            continue
        kept.append(x)
    if not kept:
        return TRUE
    if len(kept) == 1:
        return kept[0]
    return And(tuple(kept))


def _fold_or(items: list[GroundSentence]) -> GroundSentence:
    kept = []
    for x in items:
        if isinstance(x, TrueS):
            return TRUE
        if isinstance(x, FalseS):
            continue
        kept.append(x)
    if not kept:
        return FALSE
    if len(kept) == 1:
        return kept[0]
    return Or(tuple(kept))


def _fold_implies(a: GroundSentence, c: GroundSentence) -> GroundSentence:
    if isinstance(a, FalseS) or isinstance(c, TrueS):
        return TRUE
    if isinstance(a, TrueS):
        return c
    if isinstance(c, FalseS):
        return _fold_not(a)
    return Implies(a, c)


def _fold_iff(left: GroundSentence, right: GroundSentence) -> GroundSentence:
    if isinstance(left, TrueS):
        return right
    if isinstance(right, TrueS):
        return left
    if isinstance(left, FalseS):
        return _fold_not(right)
    if isinstance(right, FalseS):
        return _fold_not(left)
    return Iff(left, right)


def conjunction(items: list[Sentence]) -> Sentence:
    """n-ary conjunction with constant folding; empty list is true."""
    return _fold_and(list(items))


def negation(s: Sentence) -> Sentence:
    return _fold_not(s)


def fold_constants(s: GroundSentence) -> GroundSentence:
    """Absorb embedded true/false leaves; the identity on trees without them."""
    if isinstance(s, (TrueS, FalseS, Atom)):
        return s
    if isinstance(s, Not):
        return _fold_not(fold_constants(s.body))
    if isinstance(s, And):
        return _fold_and([fold_constants(x) for x in s.items])
    if isinstance(s, Or):
        return _fold_or([fold_constants(x) for x in s.items])
    if isinstance(s, Implies):
        return _fold_implies(fold_constants(s.antecedent), fold_constants(s.consequent))
    if isinstance(s, Iff):
        return _fold_iff(fold_constants(s.left), fold_constants(s.right))
    raise TypeError(f"expected a quantifier-free tree, got {s!r}")
