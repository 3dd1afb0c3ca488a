"""Extension of partial belief assignments to full probabilities.

A constraint set pairs sentences with target probabilities. Whether the
targets extend to a probability on all sentences reduces to a linear
feasibility problem over one variable per satisfiable partition block:
the block masses must be non-negative, sum to one, vanish on
unsatisfiable blocks, and sum to each target over the blocks containing
it. The necessary structural conditions (subadditivity across disjoint
families, zero targets on unsatisfiable sentences) and the hierarchical
shape that guarantees feasibility are provided as diagnostics; the LP is
the ground truth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import CapExceededError, NumericalFailureError, PlogError
from .logic import Sentence, to_text
from .lp import FEASIBILITY_TOLERANCE, phase_one_feasible
from .worlds import ModelSet, Partition, WorldSpace, partition

MAX_CONSTRAINTS = 20
EXHAUSTIVE_SUBSET_CAP = 12
SUBSET_SAMPLES = 10_000
CHECK_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Constraint:
    sentence: Sentence
    target: float
    label: str = ""

    def describe(self) -> str:
        return self.label or to_text(self.sentence)


@dataclass(frozen=True)
class ConstraintSet:
    entries: tuple[Constraint, ...]

    def __post_init__(self):
        if len(self.entries) > MAX_CONSTRAINTS:
            raise CapExceededError(
                f"{len(self.entries)} constraints exceed the cap of {MAX_CONSTRAINTS}"
            )
        for c in self.entries:
            if not 0.0 <= c.target <= 1.0:
                raise PlogError(f"target {c.target!r} for {c.describe()} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def sentences(self) -> list[Sentence]:
        return [c.sentence for c in self.entries]

    def targets(self) -> np.ndarray:
        return np.array([c.target for c in self.entries])


class EntailmentOracle:
    """Satisfiability, implication and disjointness backed by world masks.

    The SAT module answers the same questions by clause search; the two
    are cross-checked in the test suite, and this mask-backed oracle is
    the one used for the subset scans because it is plain set arithmetic.
    """

    def __init__(self, space: WorldSpace):
        self.space = space
        self._cache: dict[int, ModelSet] = {}

    def models_of(self, s: Sentence) -> ModelSet:
        cached = self._cache.get(id(s))
        if cached is None:
            cached = self.space.models_of(s)
            self._cache[id(s)] = cached
        return cached

    def satisfiable(self, s: Sentence) -> bool:
        return not self.models_of(s).is_empty()

    def implies(self, a: Sentence, b: Sentence) -> bool:
        return self.models_of(a).issubset(self.models_of(b))

    def disjoint(self, a: Sentence, b: Sentence) -> bool:
        return (self.models_of(a) & self.models_of(b)).is_empty()


# ---------------------------------------------------------------------------
# Violations and reports


@dataclass(frozen=True)
class Violation:
    rule: str        # 'SUBADD' | 'ELIG' | 'LP-INFEASIBLE'
    indices: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


@dataclass(frozen=True)
class Feasibility:
    status: str                                        # 'feasible' | 'infeasible'
    witness: dict[frozenset[int], float] | None        # block mass per satisfiable profile
    partition: Partition
    infeasible_subsystem: tuple[int, ...] | None = None  # 1-based constraint indices

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def extend_feasible(constraints: ConstraintSet, space: WorldSpace,
                    tolerance: float = FEASIBILITY_TOLERANCE) -> Feasibility:
    """Decide whether the targets extend to a probability.

    Solves the block-mass system by phase-1 simplex over the variables
    attached to satisfiable partition blocks. On success the witness is
    the block-mass table itself; on failure an irreducible infeasible
    subset of the constraints is identified by a deletion filter.
    """
    part = partition(constraints.sentences(), space)
    profiles = list(part.satisfiable)
    targets = constraints.targets()
    n = len(constraints)

    a = np.zeros((n + 1, len(profiles)))
    a[0, :] = 1.0
    for j, profile in enumerate(profiles):
        for i in profile:
            a[i, j] = 1.0
    b = np.concatenate([[1.0], targets])

    try:
        result = phase_one_feasible(a, b, tolerance)
    except ArithmeticError as exc:
        raise NumericalFailureError(f"feasibility solve failed: {exc}") from exc

    if result.feasible:
        witness = {
            profile: (0.0 if result.witness[j] < 0 else float(result.witness[j]))
            for j, profile in enumerate(profiles)
        }
        return Feasibility("feasible", witness, part)

    # Deletion filter: drop constraints one at a time, keeping the drop
    # whenever the remainder is still infeasible; what survives is an
    # irreducible infeasible core.
    active = list(range(1, n + 1))
    for i in range(1, n + 1):
        trial = [k for k in active if k != i]
        rows = [0] + trial
        trial_result = phase_one_feasible(a[rows, :], b[rows], tolerance)
        if not trial_result.feasible:
            active = trial
    return Feasibility("infeasible", None, part,
                       infeasible_subsystem=tuple(active))


def check_eligible(constraints: ConstraintSet, oracle: EntailmentOracle,
                   tolerance: float = CHECK_TOLERANCE) -> list[Violation]:
    """Unsatisfiable sentences must carry target zero."""
    violations = []
    for i, c in enumerate(constraints, start=1):
        if not oracle.satisfiable(c.sentence) and c.target > tolerance:
            violations.append(Violation(
                "ELIG", (i,),
                f"sentence {i} ({c.describe()}) is unsatisfiable but has target {c.target}"))
    return violations


@dataclass(frozen=True)
class SubadditiveReport:
    violations: list[Violation]
    exhaustive: bool
    warning: str | None = None


def check_subadditive(constraints: ConstraintSet, oracle: EntailmentOracle,
                      exhaustive_cap: int = EXHAUSTIVE_SUBSET_CAP,
                      samples: int = SUBSET_SAMPLES,
                      seed: int = 0,
                      tolerance: float = CHECK_TOLERANCE) -> SubadditiveReport:
    """Scan disjoint families against the targets they are nested under.

    For every family of pairwise-disjoint sentences whose disjunction
    implies another constrained sentence, the family's targets must sum
    to at most the outer target, with equality when the outer sentence
    also implies the disjunction. Exhaustive up to ``exhaustive_cap``
    constraints; beyond that, random families are sampled and the report
    says so.
    """
    n = len(constraints)
    entries = list(constraints)
    disjoint = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = oracle.disjoint(entries[i].sentence, entries[j].sentence)
            disjoint[i][j] = disjoint[j][i] = d

    exhaustive = n <= exhaustive_cap
    families: list[tuple[int, ...]]
    if exhaustive:
        families = []

        def grow(start: int, chosen: list[int]):
            for k in range(start, n):
                if all(disjoint[k][c] for c in chosen):
                    chosen.append(k)
                    families.append(tuple(chosen))
                    grow(k + 1, chosen)
                    chosen.pop()

        grow(0, [])
        warning = None
    else:
        rng = random.Random(seed)
        seen: set[tuple[int, ...]] = set()
        for _ in range(samples):
            size = rng.randint(1, min(n, 6))
            candidate = tuple(sorted(rng.sample(range(n), size)))
            if candidate in seen:
                continue
            if all(disjoint[a][b] for ai, a in enumerate(candidate)
                   for b in candidate[ai + 1:]):
                seen.add(candidate)
        families = sorted(seen)
        warning = (f"{n} constraints exceed the exhaustive subset cap of "
                   f"{exhaustive_cap}; checked {len(families)} sampled families")

    violations: list[Violation] = []
    masks = [oracle.models_of(c.sentence) for c in entries]
    for family in families:
        union = masks[family[0]]
        for k in family[1:]:
            union = union | masks[k]
        family_sum = sum(entries[k].target for k in family)
        for i in range(n):
            if i in family:
                continue
            if not union.issubset(masks[i]):
                continue
            outer = entries[i].target
            one_based = tuple(k + 1 for k in family)
            if family_sum > outer + tolerance:
                violations.append(Violation(
                    "SUBADD", one_based + (i + 1,),
                    f"disjoint family {{{', '.join(map(str, one_based))}}} sums to "
                    f"{family_sum} > target {outer} of sentence {i + 1} it implies"))
            elif masks[i].issubset(union) and abs(family_sum - outer) > tolerance:
                violations.append(Violation(
                    "SUBADD", one_based + (i + 1,),
                    f"disjoint family {{{', '.join(map(str, one_based))}}} covers "
                    f"sentence {i + 1} but sums to {family_sum} != its target {outer}"))
    return SubadditiveReport(violations, exhaustive, warning)


# ---------------------------------------------------------------------------
# Hierarchy recognition


@dataclass(frozen=True)
class HierarchyReport:
    hierarchical: bool
    relations: dict[tuple[int, int], str]   # (i, j) with i < j, 1-based
    depths: dict[int, int] | None           # per 1-based index; None unless hierarchical

    @property
    def depth(self) -> int:
        return max(self.depths.values()) if self.depths else 0


def is_hierarchical(constraints: ConstraintSet, oracle: EntailmentOracle) -> HierarchyReport:
    """Classify every pair and test the one-of-three shape.

    Each unordered pair must be exactly one of: disjoint, left implies
    right, right implies left. Pairs satisfying none are labelled
    'none', pairs satisfying several (duplicates, unsatisfiable members)
    are labelled 'multiple'; either label defeats the hierarchy. On
    success each sentence's depth is the length of its implication chain
    up to a maximal element.
    """
    n = len(constraints)
    entries = list(constraints)
    relations: dict[tuple[int, int], str] = {}
    hierarchical = True
    for i in range(n):
        for j in range(i + 1, n):
            d = oracle.disjoint(entries[i].sentence, entries[j].sentence)
            ij = oracle.implies(entries[i].sentence, entries[j].sentence)
            ji = oracle.implies(entries[j].sentence, entries[i].sentence)
            count = int(d) + int(ij) + int(ji)
            if count == 0:
                label = "none"
                hierarchical = False
            elif count > 1:
                label = "multiple"
                hierarchical = False
            elif d:
                label = "disjoint"
            elif ij:
                label = "left-implies-right"
            else:
                label = "right-implies-left"
            relations[(i + 1, j + 1)] = label

    depths: dict[int, int] | None = None
    if hierarchical:
        depths = {}
        for i in range(n):
            ancestors = 0
            for j in range(n):
                if i == j:
                    continue
                a, b = min(i, j), max(i, j)
                label = relations[(a + 1, b + 1)]
                if (label == "left-implies-right" and a == i) or \
                   (label == "right-implies-left" and b == i):
                    ancestors += 1
            depths[i + 1] = ancestors + 1
    return HierarchyReport(hierarchical, relations, depths)


# ---------------------------------------------------------------------------
# Extension entry point


@dataclass(frozen=True)
class ExtensionDiagnostic:
    feasibility: Feasibility
    eligible_violations: list[Violation]
    subadditive_report: SubadditiveReport
    constraints: ConstraintSet

    def lines(self) -> list[str]:
        out = []
        for v in self.eligible_violations:
            out.append(str(v))
        for v in self.subadditive_report.violations:
            out.append(str(v))
        if self.subadditive_report.warning:
            out.append(f"SUBADD: note: {self.subadditive_report.warning}")
        core = self.feasibility.infeasible_subsystem or ()
        labels = ", ".join(
            f"{i}:{self.constraints.entries[i - 1].describe()}" for i in core
        )
        out.append(f"LP-INFEASIBLE: irreducible subsystem {{{labels}}}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def extend_or_explain(constraints: ConstraintSet, prior) -> Union["object", ExtensionDiagnostic]:
    """Extend the targets through the prior, or explain why that is impossible.

    On feasible constraints, returns the Belief that matches every
    target while staying as close as possible (in relative entropy) to
    the prior; within each partition block the prior's conditional shape
    is untouched. On infeasible constraints, returns the structural
    diagnostics plus the irreducible violated subsystem. Priors must be
    strictly positive so no satisfiable block is starved.
    """
    from . import maxent  # local import: maxent builds on this module

    if not prior.is_strongly_cournot():
        raise PlogError(
            "the prior must give every world positive weight "
            "(zero-weight blocks would make the extension ill-posed)"
        )
    space = prior.space
    feasibility = extend_feasible(constraints, space)
    if feasibility.feasible:
        return maxent.project(prior, constraints).belief
    oracle = EntailmentOracle(space)
    return ExtensionDiagnostic(
        feasibility=feasibility,
        eligible_violations=check_eligible(constraints, oracle),
        subadditive_report=check_subadditive(constraints, oracle),
        constraints=constraints,
    )
