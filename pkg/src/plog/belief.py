"""Beliefs: probability weights over worlds, inducing probabilities on sentences.

A Belief assigns each world a non-negative weight; the weights sum to
one. The probability of a sentence is the total weight of its models,
summed with compensated (exactly rounded) summation so the additivity
identities hold to 1e-12 even over large spaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PlogError, UndefinedConditionalError
from .logic import Sentence
from .worlds import ModelSet, WorldSpace

NORMALIZATION_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Belief:
    """Immutable weight vector over a world space."""

    space: WorldSpace
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (self.space.num_worlds,):
            raise PlogError(
                f"expected {self.space.num_worlds} weights, got shape {w.shape}"
            )
        if (w < 0).any():
            raise PlogError("belief weights must be non-negative")
        total = math.fsum(w.tolist())
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise PlogError(f"belief weights sum to {total!r}, expected 1")
        w = w + 0.0  # clear negative zeros
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    # -- construction -------------------------------------------------------

    @staticmethod
    def uniform(space: WorldSpace) -> "Belief":
        n = space.num_worlds
        return Belief(space, np.full(n, 1.0 / n))

    @staticmethod
    def from_weights(space: WorldSpace, raw: np.ndarray) -> "Belief":
        """Normalize an arbitrary non-negative vector into a Belief."""
        raw = np.asarray(raw, dtype=np.float64)
        if (raw < 0).any():
            raise PlogError("belief weights must be non-negative")
        total = math.fsum(raw.tolist())
        if total <= 0:
            raise PlogError("cannot normalize an all-zero weight vector")
        return Belief(space, raw / total)

    # -- probability --------------------------------------------------------

    def mass(self, models: ModelSet) -> float:
        """Exactly rounded sum of the weights over a model set."""
        selected = self.weights[models.mask]
        if selected.size == 0:
            return 0.0
        return math.fsum(selected.tolist())

    def prob(self, s: Sentence) -> float:
        """Probability of a closed sentence; clamped into [0, 1]."""
        value = self.mass(self.space.models_of(s))
        return min(1.0, max(0.0, value))

    def cond(self, s: Sentence, given: Sentence) -> float:
        """Conditional probability prob(s and given) / prob(given)."""
        denominator = self.mass(self.space.models_of(given))
        if denominator <= 0.0:
            raise UndefinedConditionalError(
                "conditioning on a sentence of probability zero"
            )
        joint = self.mass(self.space.models_of(given) & self.space.models_of(s))
        return min(1.0, max(0.0, joint / denominator))

    def condition(self, given: Sentence) -> "Belief":
        """A fresh Belief with all weight outside the given sentence removed."""
        mask = self.space.models_of(given).mask
        total = self.mass(ModelSet(mask))
        if total <= 0.0:
            raise UndefinedConditionalError(
                "conditioning on a sentence of probability zero"
            )
        w = np.where(mask, self.weights, 0.0)
        return Belief(self.space, w / total)

    # -- information measures ------------------------------------------------

    def kl(self, reference: "Belief") -> float:
        """Relative entropy of ``self`` from ``reference`` (natural log).

        In a finite space the per-block limit over ever-finer sentence
        partitions is attained at single worlds, so this is the plain
        per-world sum, with 0*log(0/x) = 0 and +inf when some world has
        weight here but none under the reference.
        """
        if reference.space is not self.space and reference.space.atoms != self.space.atoms:
            raise PlogError("relative entropy requires a shared world space")
        mu = self.weights
        xi = reference.weights
        positive = mu > 0
        if (xi[positive] == 0).any():
            return math.inf
        terms = mu[positive] * np.log(mu[positive] / xi[positive])
        return math.fsum(terms.tolist())

    def is_strongly_cournot(self) -> bool:
        """Every world carries positive weight.

        In the finite space each world is the model set of its literal
        conjunction, so this is exactly "every satisfiable sentence has
        positive probability" (the strong form of Cournot's principle).
        """
        return bool((self.weights > 0).all())

    # -- serialization -------------------------------------------------------

    def to_text(self) -> str:
        """Round-trippable table: a header with the atom order, then
        one ``world-index weight`` line per world."""
        lines = ["# plog belief v1"]
        lines.append("# atoms: " + " ".join(str(a) for a in self.space.atoms))
        for i, w in enumerate(self.weights):
            lines.append(f"{i} {float(w)!r}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str, space: WorldSpace) -> "Belief":
        expected = "# atoms: " + " ".join(str(a) for a in space.atoms)
        weights = np.zeros(space.num_worlds)
        saw_atoms = False
        for line_no, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# atoms:"):
                    saw_atoms = True
                    if line != expected:
                        raise PlogError(
                            "belief file atom order does not match the vocabulary: "
                            f"{line[8:].strip()!r}"
                        )
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PlogError(f"belief file line {line_no}: expected 'index weight'")
            try:
                index = int(parts[0])
                weight = float(parts[1])
            except ValueError:
                raise PlogError(f"belief file line {line_no}: malformed numbers") from None
            if not 0 <= index < space.num_worlds:
                raise PlogError(f"belief file line {line_no}: world index {index} out of range")
            weights[index] = weight
        if not saw_atoms:
            raise PlogError("belief file is missing the '# atoms:' header")
        return Belief(space, weights)
