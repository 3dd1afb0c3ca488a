"""Explicit world space: complete truth assignments over the ground atoms.

World i assigns atom k the value of bit k of i, so the space has 2^k
worlds for k atoms. Sentences denote sets of worlds held as boolean
masks; set algebra on masks mirrors the connectives exactly, which makes
the probability layer pure weight arithmetic.

The partition of the space induced by constraint sentences phi_1..phi_n
assigns each world the profile S of the phi_i it satisfies; the block of
profile S is the conjunction of the phi_i for i in S with the negations
of the rest. Blocks are pairwise disjoint and cover the space, and each
Mod(phi_i) is the union of the blocks whose profile contains i.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

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
    Sentence,
    TrueS,
    Vocabulary,
    ground,
    is_ground,
)

DEFAULT_WORLD_CAP = 20          # atoms; 2^20 worlds
HARD_MAX_ATOMS = 24
PARTITION_CAP = 20              # constraint sentences per partition
WORLD_CAP_ENV_VAR = "PLOG_WORLD_CAP"


def world_cap_from_env(default: int = DEFAULT_WORLD_CAP) -> int:
    raw = os.environ.get(WORLD_CAP_ENV_VAR)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise PlogError(f"{WORLD_CAP_ENV_VAR} must be an integer, got {raw!r}") from None


@dataclass(frozen=True, eq=False)
class ModelSet:
    """Set of worlds as a boolean mask; immutable by convention."""

    mask: np.ndarray

    def __post_init__(self):
        self.mask.setflags(write=False)

    def __and__(self, other: "ModelSet") -> "ModelSet":
        return ModelSet(self.mask & other.mask)

    def __or__(self, other: "ModelSet") -> "ModelSet":
        return ModelSet(self.mask | other.mask)

    def __invert__(self) -> "ModelSet":
        return ModelSet(~self.mask)

    def __eq__(self, other) -> bool:
        return isinstance(other, ModelSet) and bool(np.array_equal(self.mask, other.mask))

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    def is_empty(self) -> bool:
        return not self.mask.any()

    def issubset(self, other: "ModelSet") -> bool:
        return not (self.mask & ~other.mask).any()

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def to_int(self) -> int:
        """The mask as an integer bitset (bit i set iff world i included)."""
        out = 0
        for i in self.indices():
            out |= 1 << int(i)
        return out


class WorldSpace:
    """All complete truth assignments over a vocabulary's ground atoms."""

    def __init__(self, vocabulary: Vocabulary, cap: int = DEFAULT_WORLD_CAP):
        atoms = vocabulary.atoms()
        cap = min(cap, HARD_MAX_ATOMS)
        if len(atoms) > cap:
            raise CapExceededError(
                f"{len(atoms)} ground atoms exceed the world cap of {cap} "
                f"(set {WORLD_CAP_ENV_VAR} up to {HARD_MAX_ATOMS} to raise it)"
            )
        self.vocabulary = vocabulary
        self.atoms = atoms
        self.num_atoms = len(atoms)
        self.num_worlds = 1 << self.num_atoms
        self._atom_pos = {Atom(a.name, a.args): i for i, a in enumerate(atoms)}
        self._atom_masks: dict[int, np.ndarray] = {}

    def atom_mask(self, index: int) -> np.ndarray:
        """Boolean mask of worlds where atom ``index`` is true (bit test)."""
        cached = self._atom_masks.get(index)
        if cached is None:
            block = 1 << index
            unit = np.concatenate([
                np.zeros(block, dtype=bool), np.ones(block, dtype=bool),
            ])
            cached = np.tile(unit, self.num_worlds // (2 * block))
            cached.setflags(write=False)
            self._atom_masks[index] = cached
        return cached

    def models(self, g: GroundSentence) -> ModelSet:
        """Worlds satisfying a quantifier-free sentence, by mask algebra."""
        return ModelSet(self._eval(g))

    def _eval(self, g: GroundSentence) -> np.ndarray:
        if isinstance(g, TrueS):
            return np.ones(self.num_worlds, dtype=bool)
        if isinstance(g, FalseS):
            return np.zeros(self.num_worlds, dtype=bool)
        if isinstance(g, Atom):
            pos = self._atom_pos.get(g)
            if pos is None:
                raise PlogError(f"atom {g} is not in the vocabulary")
            return self.atom_mask(pos)
        if isinstance(g, Not):
            return ~self._eval(g.body)
        if isinstance(g, And):
            out = self._eval(g.items[0]).copy()
            for item in g.items[1:]:
                out &= self._eval(item)
            return out
        if isinstance(g, Or):
            out = self._eval(g.items[0]).copy()
            for item in g.items[1:]:
                out |= self._eval(item)
            return out
        if isinstance(g, Implies):
            return ~self._eval(g.antecedent) | self._eval(g.consequent)
        if isinstance(g, Iff):
            return self._eval(g.left) == self._eval(g.right)
        raise TypeError(f"models() expects a quantifier-free tree, got {g!r}")

    def models_of(self, s: Sentence) -> ModelSet:
        """Ground a (possibly quantified) sentence, then take its models."""
        g = s if is_ground(s) else ground(s, self.vocabulary)
        return self.models(g)


@dataclass(frozen=True)
class Partition:
    """Blocks of the world space by constraint-satisfaction profile.

    ``blocks`` maps each profile S (frozenset of 1-based constraint
    indices) with a non-empty block to its ModelSet. Profiles absent
    from the mapping are unsatisfiable; ``satisfiable`` lists the
    present profiles in a deterministic order.
    """

    space: WorldSpace
    n: int
    blocks: dict[frozenset[int], ModelSet]

    @cached_property
    def satisfiable(self) -> tuple[frozenset[int], ...]:
        return tuple(sorted(self.blocks, key=lambda s: (len(s), sorted(s))))

    def block(self, profile: frozenset[int]) -> ModelSet:
        found = self.blocks.get(profile)
        if found is not None:
            return found
        return ModelSet(np.zeros(self.space.num_worlds, dtype=bool))

    def block_masses(self, weights: np.ndarray) -> dict[frozenset[int], float]:
        """Total weight of each non-empty block under a weight vector."""
        return {
            profile: float(weights[ms.mask].sum())
            for profile, ms in self.blocks.items()
        }


def partition(sentences: list[Sentence], space: WorldSpace) -> Partition:
    """Partition the space by which of the given sentences hold.

    Computed by recursive mask splitting with empty blocks pruned, so
    the work is proportional to the number of non-empty blocks rather
    than 2^n.
    """
    if len(sentences) > PARTITION_CAP:
        raise CapExceededError(
            f"{len(sentences)} constraint sentences exceed the partition cap of {PARTITION_CAP}"
        )
    member_masks = [space.models_of(s).mask for s in sentences]
    blocks: dict[frozenset[int], ModelSet] = {}
    frontier: list[tuple[frozenset[int], np.ndarray]] = [
        (frozenset(), np.ones(space.num_worlds, dtype=bool))
    ]
    for i, mask in enumerate(member_masks, start=1):
        next_frontier = []
        for profile, block in frontier:
            inside = block & mask
            outside = block & ~mask
            if inside.any():
                next_frontier.append((profile | {i}, inside))
            if outside.any():
                next_frontier.append((profile, outside))
        frontier = next_frontier
    for profile, block in frontier:
        blocks[profile] = ModelSet(block)
    return Partition(space=space, n=len(sentences), blocks=blocks)


def profile_sentence(sentences: list[Sentence], profile: frozenset[int]) -> Sentence:
    """The conjunction selecting exactly the sentences in ``profile``."""
    items: list[Sentence] = []
    for i, s in enumerate(sentences, start=1):
        items.append(s if i in profile else Not(s))
    if not items:
        return TrueS()
    if len(items) == 1:
        return items[0]
    return And(tuple(items))


# ---------------------------------------------------------------------------
# Tree-coefficient validation

COEFF_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CoefficientViolation:
    rule: str                   # 'negative' | 'unsat-nonzero' | 'split' | 'level-sum'
    level: int
    profile: frozenset[int] | None
    detail: str

    def __str__(self) -> str:
        where = f"level {self.level}"
        if self.profile is not None:
            where += f", profile {{{', '.join(map(str, sorted(self.profile)))}}}"
        return f"{self.rule} at {where}: {self.detail}"


def check_tree_coefficients(
    coefficients: dict[tuple[int, frozenset[int]], float],
    sentences: list[Sentence],
    space: WorldSpace,
    tolerance: float = COEFF_TOLERANCE,
) -> list[CoefficientViolation]:
    """Validate a level-indexed coefficient table against the four rules.

    ``coefficients`` maps (level n, profile S) to a number, for every
    S of each level 1..N where N <= len(sentences). The rules checked,
    each within ``tolerance``:

      negative       coefficients must be non-negative
      unsat-nonzero  an unsatisfiable block must carry coefficient 0
      split          a coefficient equals the sum of its two children
                     on the next level (checked for n < N)
      level-sum      each level's coefficients sum to 1

    A probability induces a table satisfying all four by reading block
    probabilities off each level; conversely any such table extends to
    a probability, which is what makes these rules a faithful gate.
    Raises KeyError on a missing coefficient.
    """
    levels = sorted({n for n, _ in coefficients})
    if not levels:
        return []
    max_level = max(levels)
    if max_level > len(sentences):
        raise PlogError(
            f"coefficient table reaches level {max_level} but only "
            f"{len(sentences)} sentences were given"
        )
    for n in range(1, max_level + 1):
        for size in range(n + 1):
            for combo in itertools.combinations(range(1, n + 1), size):
                if (n, frozenset(combo)) not in coefficients:
                    raise KeyError(f"missing coefficient for level {n}, profile {set(combo) or '{}'}")

    violations: list[CoefficientViolation] = []
    parts = {n: partition(list(sentences[:n]), space) for n in range(1, max_level + 1)}

    for n in range(1, max_level + 1):
        level_sum = 0.0
        for size in range(n + 1):
            for combo in itertools.combinations(range(1, n + 1), size):
                profile = frozenset(combo)
                value = coefficients[(n, profile)]
                level_sum += value
                if value < -tolerance:
                    violations.append(CoefficientViolation(
                        "negative", n, profile, f"coefficient {value!r} is negative"))
                if profile not in parts[n].blocks and abs(value) > tolerance:
                    violations.append(CoefficientViolation(
                        "unsat-nonzero", n, profile,
                        f"block is unsatisfiable but coefficient is {value!r}"))
                if n < max_level:
                    child_sum = (coefficients[(n + 1, profile)]
                                 + coefficients[(n + 1, profile | {n + 1})])
                    if abs(value - child_sum) > tolerance:
                        violations.append(CoefficientViolation(
                            "split", n, profile,
                            f"coefficient {value!r} != children sum {child_sum!r}"))
        if abs(level_sum - 1.0) > tolerance:
            violations.append(CoefficientViolation(
                "level-sum", n, None, f"level sums to {level_sum!r}, expected 1"))
    return violations


def coefficients_from_weights(
    weights: np.ndarray,
    sentences: list[Sentence],
    space: WorldSpace,
    max_level: int | None = None,
) -> dict[tuple[int, frozenset[int]], float]:
    """Read a coefficient table off a weight vector: block masses per level."""
    if max_level is None:
        max_level = len(sentences)
    table: dict[tuple[int, frozenset[int]], float] = {}
    for n in range(1, max_level + 1):
        part = partition(list(sentences[:n]), space)
        masses = part.block_masses(weights)
        for size in range(n + 1):
            for combo in itertools.combinations(range(1, n + 1), size):
                profile = frozenset(combo)
                table[(n, profile)] = masses.get(profile, 0.0)
    return table
