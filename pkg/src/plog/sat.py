"""Satisfiability oracle for quantifier-free ground sentences.

The pipeline is: formula tree -> equisatisfiable clause form (one
auxiliary variable per non-literal subformula, introduced only in the
polarities that are actually used) -> DPLL with unit propagation over
two watched literals. No clause learning; at the configured scale
(<= 64 ground atoms) plain DPLL is enough.

Validity, implication and disjointness are the usual reductions to
unsatisfiability of a single formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapExceededError, PlogError
from .logic import (
    And,
    Atom,
    FalseS,
    GroundSentence,
    Iff,
    Implies,
    Not,
    Or,
    TrueS,
    Vocabulary,
    fold_constants,
    negation,
)

DEFAULT_GROUND_CAP = 64
DEFAULT_AUX_CAP = 4096


@dataclass
class Cnf:
    """Clause form over signed variable indices.

    Variables 0..num_ground-1 are ground atoms in vocabulary order;
    variables num_ground.. are auxiliaries from the equisatisfiable
    transformation. A literal is (var << 1) | sign with sign 1 for
    negative, so literal ^ 1 is its complement.
    """

    num_ground: int
    num_aux: int = 0
    clauses: list[list[int]] = field(default_factory=list)

    @property
    def num_vars(self) -> int:
        return self.num_ground + self.num_aux

    def to_dimacs(self) -> str:
        """DIMACS text for cross-checking against external solvers."""
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for clause in self.clauses:
            lines.append(" ".join(str(_to_dimacs_lit(lit)) for lit in clause) + " 0")
        return "\n".join(lines) + "\n"


def _to_dimacs_lit(lit: int) -> int:
    var = (lit >> 1) + 1
    return -var if lit & 1 else var


def _pos(var: int) -> int:
    return var << 1


def _neg(var: int) -> int:
    return (var << 1) | 1


class _ClauseBuilder:
    """Polarity-aware equisatisfiable transformation.

    encode(node, polarity) returns a literal equivalent to the node in
    the requested polarity context; defining clauses are emitted only
    for the polarities in which the subformula can influence the root.
    """

    def __init__(self, atom_index: dict, ground_cap: int, aux_cap: int):
        self.atom_index = atom_index
        self.ground_cap = ground_cap
        self.aux_cap = aux_cap
        self.num_ground = len(atom_index)
        self.num_aux = 0
        self.clauses: list[list[int]] = []
        # cache: (id of node, polarity in {-1, 0, 1}) -> aux literal
        self._cache: dict[tuple[int, int], int] = {}

    def fresh_aux(self) -> int:
        if self.num_aux >= self.aux_cap:
            raise CapExceededError(
                f"auxiliary variable cap {self.aux_cap} exceeded during clause transformation"
            )
        var = self.num_ground + self.num_aux
        self.num_aux += 1
        return var

    def encode(self, node: GroundSentence, polarity: int) -> int:
        if isinstance(node, Atom):
            index = self.atom_index.get(node)
            if index is None:
                raise PlogError(f"atom {node} is not in the vocabulary")
            return _pos(index)
        if isinstance(node, Not):
            return self.encode(node.body, -polarity) ^ 1
        key = (id(node), polarity)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if isinstance(node, And):
            lit = self._define_gate([self.encode(x, polarity) for x in node.items],
                                    conjunctive=True, polarity=polarity)
        elif isinstance(node, Or):
            lit = self._define_gate([self.encode(x, polarity) for x in node.items],
                                    conjunctive=False, polarity=polarity)
        elif isinstance(node, Implies):
            lit = self._define_gate(
                [self.encode(node.antecedent, -polarity) ^ 1,
                 self.encode(node.consequent, polarity)],
                conjunctive=False, polarity=polarity)
        elif isinstance(node, Iff):
            # an iff constrains its children in both polarities
            a = self.encode(node.left, 0)
            b = self.encode(node.right, 0)
            var = self.fresh_aux()
            lit = _pos(var)
            if polarity >= 0:  # lit -> (a <-> b)
                self.clauses.append([lit ^ 1, a ^ 1, b])
                self.clauses.append([lit ^ 1, a, b ^ 1])
            if polarity <= 0:  # (a <-> b) -> lit
                self.clauses.append([lit, a, b])
                self.clauses.append([lit, a ^ 1, b ^ 1])
        else:
            raise TypeError(f"clause transformation expects a ground connective tree, got {node!r}")
        self._cache[key] = lit
        return lit

    def _define_gate(self, child_lits: list[int], conjunctive: bool, polarity: int) -> int:
        var = self.fresh_aux()
        lit = _pos(var)
        if conjunctive:
            if polarity >= 0:  # lit -> every child
                for c in child_lits:
                    self.clauses.append([lit ^ 1, c])
            if polarity <= 0:  # every child -> lit
                self.clauses.append([lit] + [c ^ 1 for c in child_lits])
        else:
            if polarity >= 0:  # lit -> some child
                self.clauses.append([lit ^ 1] + list(child_lits))
            if polarity <= 0:  # some child -> lit
                for c in child_lits:
                    self.clauses.append([lit, c ^ 1])
        return lit


def to_cnf(g: GroundSentence, vocabulary: Vocabulary,
           ground_cap: int = DEFAULT_GROUND_CAP,
           aux_cap: int = DEFAULT_AUX_CAP) -> Cnf:
    """Equisatisfiable clause form of ``g`` with the root asserted true."""
    atom_index = {Atom(a.name, a.args): i for a, i in vocabulary.atom_index().items()}
    if len(atom_index) > ground_cap:
        raise CapExceededError(
            f"{len(atom_index)} ground atoms exceed the cap of {ground_cap}"
        )
    g = fold_constants(g)
    if isinstance(g, TrueS):
        return Cnf(num_ground=len(atom_index), clauses=[])
    if isinstance(g, FalseS):
        return Cnf(num_ground=len(atom_index), clauses=[[]])
    builder = _ClauseBuilder(atom_index, ground_cap, aux_cap)
    root = builder.encode(g, polarity=1)
    builder.clauses.append([root])
    return Cnf(num_ground=builder.num_ground, num_aux=builder.num_aux,
               clauses=builder.clauses)


class _Dpll:
    """Iterative DPLL with two watched literals per clause."""

    def __init__(self, cnf: Cnf):
        self.num_vars = cnf.num_vars
        self.assign: list[int] = [-1] * self.num_vars  # -1 unknown, 0 false, 1 true
        self.clauses = [list(c) for c in cnf.clauses]
        self.watches: list[list[int]] = [[] for _ in range(2 * self.num_vars)]
        self.units: list[int] = []
        self.conflict = False
        for ci, clause in enumerate(self.clauses):
            if not clause:
                self.conflict = True
                return
            if len(clause) == 1:
                self.units.append(clause[0])
            else:
                self.watches[clause[0]].append(ci)
                self.watches[clause[1]].append(ci)

    def value(self, lit: int) -> int:
        v = self.assign[lit >> 1]
        if v < 0:
            return -1
        return v ^ (lit & 1)

    def solve(self) -> bool:
        if self.conflict:
            return False
        trail: list[int] = []
        level_marks: list[tuple[int, int]] = []  # (trail length, decision literal)
        pending = list(self.units)

        def propagate() -> bool:
            while pending:
                lit = pending.pop()
                val = self.value(lit)
                if val == 0:
                    return False
                if val == 1:
                    continue
                self.assign[lit >> 1] = (lit & 1) ^ 1
                trail.append(lit)
                falsified = lit ^ 1
                watching = self.watches[falsified]
                i = 0
                while i < len(watching):
                    ci = watching[i]
                    clause = self.clauses[ci]
                    # keep the falsified literal in slot 1
                    if clause[0] == falsified:
                        clause[0], clause[1] = clause[1], clause[0]
                    other = clause[0]
                    if self.value(other) == 1:
                        i += 1
                        continue
                    moved = False
                    for k in range(2, len(clause)):
                        if self.value(clause[k]) != 0:
                            clause[1], clause[k] = clause[k], clause[1]
                            self.watches[clause[1]].append(ci)
                            watching[i] = watching[-1]
                            watching.pop()
                            moved = True
                            break
                    if moved:
                        continue
                    if self.value(other) == 0:
                        return False
                    pending.append(other)  # unit
                    i += 1
            return True

        def backtrack() -> bool:
            pending.clear()
            while level_marks:
                mark, decision = level_marks.pop()
                while len(trail) > mark:
                    self.assign[trail.pop() >> 1] = -1
                if not (decision & 1):  # tried positive first, now negative
                    level_marks.append((mark, decision | 1))
                    pending.append(decision | 1)
                    return True
            return False

        while True:
            if not propagate():
                if not backtrack():
                    return False
                continue
            decision_var = -1
            for v in range(self.num_vars):
                if self.assign[v] < 0:
                    decision_var = v
                    break
            if decision_var < 0:
                return True
            level_marks.append((len(trail), _pos(decision_var)))
            pending.append(_pos(decision_var))


def is_satisfiable(g: GroundSentence, vocabulary: Vocabulary,
                   ground_cap: int = DEFAULT_GROUND_CAP,
                   aux_cap: int = DEFAULT_AUX_CAP) -> bool:
    """True iff some complete truth assignment makes ``g`` true."""
    cnf = to_cnf(g, vocabulary, ground_cap, aux_cap)
    return _Dpll(cnf).solve()


def is_valid(g: GroundSentence, vocabulary: Vocabulary, **caps) -> bool:
    return not is_satisfiable(negation(g), vocabulary, **caps)


def implies(g1: GroundSentence, g2: GroundSentence, vocabulary: Vocabulary, **caps) -> bool:
    return not is_satisfiable(_fold_conjoin(g1, negation(g2)), vocabulary, **caps)


def disjoint(g1: GroundSentence, g2: GroundSentence, vocabulary: Vocabulary, **caps) -> bool:
    return not is_satisfiable(_fold_conjoin(g1, g2), vocabulary, **caps)


def _fold_conjoin(a: GroundSentence, b: GroundSentence) -> GroundSentence:
    if isinstance(a, TrueS):
        return b
    if isinstance(b, TrueS):
        return a
    if isinstance(a, FalseS) or isinstance(b, FalseS):
        return FalseS()
    return And((a, b))
