"""Analytic priors over infinite 0/1 sequences for confirmation curves.

A sequence prior is a finite mixture of tractable component laws over
sequences indexed by 1, 2, 3, ...: point masses on fixed patterns and
i.i.d. coin laws. These are exactly the ingredients needed to contrast
a prior that can confirm the universal hypothesis "every index is true"
(positive mass on the all-true sequence) with the naive coin prior that
cannot, and every quantity of interest has a closed form:

    prefix(n)         probability that indices 1..n are all true
    universal()       probability that *every* index is true
    posterior(n)      universal() / prefix(n)
    predictive(n)     prefix(n+1) / prefix(n)

prefix(n) is non-increasing and bounded below by universal(); the
posterior tends to 1 exactly when prefix(n) converges to a positive
universal probability, which is the content of the equivalence check.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Union

from .errors import PlogError

MASS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PointMass:
    """All mass on one fixed sequence.

    pattern 'all-true', 'all-false', or 'finite' with ``true_indices``:
    true exactly at the given finite index set.
    """

    pattern: str
    true_indices: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.pattern not in ("all-true", "all-false", "finite"):
            raise PlogError(f"unknown point-mass pattern {self.pattern!r}")
        if self.pattern != "finite" and self.true_indices:
            raise PlogError("true_indices only applies to the 'finite' pattern")
        if any(i < 1 for i in self.true_indices):
            raise PlogError("sequence indices start at 1")

    def all_true_prefix_prob(self, n: int) -> float:
        if n == 0:
            return 1.0
        if self.pattern == "all-true":
            return 1.0
        if self.pattern == "all-false":
            return 0.0
        return 1.0 if all(i in self.true_indices for i in range(1, n + 1)) else 0.0

    def all_true_forever_prob(self) -> float:
        return 1.0 if self.pattern == "all-true" else 0.0

    def prefix_prob(self, bits: tuple[bool, ...]) -> float:
        for index, bit in enumerate(bits, start=1):
            if self.pattern == "all-true":
                actual = True
            elif self.pattern == "all-false":
                actual = False
            else:
                actual = index in self.true_indices
            if bit != actual:
                return 0.0
        return 1.0

    def describe(self) -> str:
        if self.pattern == "finite":
            members = ",".join(map(str, sorted(self.true_indices)))
            return f"finite{{{members}}}"
        return self.pattern


@dataclass(frozen=True)
class Iid:
    """Independent coin with success probability theta at every index."""

    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise PlogError(f"theta {self.theta!r} outside [0, 1]")

    def all_true_prefix_prob(self, n: int) -> float:
        return self.theta ** n

    def all_true_forever_prob(self) -> float:
        return 1.0 if self.theta == 1.0 else 0.0

    def prefix_prob(self, bits: tuple[bool, ...]) -> float:
        p = 1.0
        for bit in bits:
            p *= self.theta if bit else (1.0 - self.theta)
        return p

    def describe(self) -> str:
        return f"iid({self.theta})"


ComponentLaw = Union[PointMass, Iid]


@dataclass(frozen=True)
class SequencePrior:
    """Finite mixture of component laws with strictly positive masses."""

    components: tuple[tuple[float, ComponentLaw], ...]

    def __post_init__(self):
        if not self.components:
            raise PlogError("a sequence prior needs at least one component")
        for mass, _ in self.components:
            if mass <= 0.0:
                raise PlogError("every mixture mass must be strictly positive")
        total = math.fsum(m for m, _ in self.components)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise PlogError(f"mixture masses sum to {total!r}, expected 1")

    def prefix_prob(self, n: int) -> float:
        """Probability that the first n indices are all true."""
        if n < 0:
            raise PlogError("prefix length must be non-negative")
        return math.fsum(m * law.all_true_prefix_prob(n) for m, law in self.components)

    def universal_prob(self) -> float:
        """Probability that every index is true: the mass of components
        whose law makes the all-true sequence certain."""
        return math.fsum(m * law.all_true_forever_prob() for m, law in self.components)

    def posterior_universal(self, n: int) -> float:
        """Posterior of the universal hypothesis after n positive instances."""
        prefix = self.prefix_prob(n)
        if prefix <= 0.0:
            raise PlogError("posterior undefined: the observed prefix has probability zero")
        return self.universal_prob() / prefix

    def predictive(self, n: int) -> float:
        """Probability that index n+1 is true given n positive instances."""
        prefix = self.prefix_prob(n)
        if prefix <= 0.0:
            raise PlogError("predictive undefined: the observed prefix has probability zero")
        return self.prefix_prob(n + 1) / prefix

    def pattern_prob(self, bits: tuple[bool, ...]) -> float:
        """Probability of an explicit finite prefix pattern (for the
        cross-check against the finite world-space engine)."""
        return math.fsum(m * law.prefix_prob(bits) for m, law in self.components)

    def tail_gap_bound(self, n: int) -> float:
        """Analytic bound on prefix_prob(n) - universal_prob().

        Exact for these component laws: the gap is the mass of the
        non-confirming components that still survive an all-true prefix
        of length n.
        """
        bound = 0.0
        for m, law in self.components:
            bound += m * (law.all_true_prefix_prob(n) - law.all_true_forever_prob())
        return bound

    def describe(self) -> str:
        return " + ".join(f"{m}*{law.describe()}" for m, law in self.components)


# ---------------------------------------------------------------------------
# Convergence tables and the equivalence check


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    prefix_prob: float
    posterior_universal: float
    predictive: float


def convergence_table(prior: SequencePrior, n_max: int) -> list[ConvergenceRow]:
    rows = []
    for n in range(n_max + 1):
        prefix = prior.prefix_prob(n)
        if prefix <= 0.0:
            break
        rows.append(ConvergenceRow(
            n=n,
            prefix_prob=prefix,
            posterior_universal=prior.universal_prob() / prefix,
            predictive=prior.prefix_prob(n + 1) / prefix,
        ))
    return rows


def write_csv(rows: list[ConvergenceRow], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["n", "prefix_prob", "posterior_universal", "predictive"])
    for row in rows:
        writer.writerow([row.n, row.prefix_prob, row.posterior_universal, row.predictive])


def csv_text(rows: list[ConvergenceRow]) -> str:
    buffer = io.StringIO()
    write_csv(rows, buffer)
    return buffer.getvalue()


@dataclass(frozen=True)
class EquivalenceReport:
    """Numeric verdict on the confirmation equivalence.

    The posterior of the universal hypothesis tends to 1 if and only if
    the prefix probabilities converge to a positive universal
    probability. Both sides are evaluated at n_max; ``gaps`` holds
    (n, 1 - posterior(n), prefix(n) - universal) for inspection against
    the analytic tail bound.
    """

    prior_description: str
    n_max: int
    universal: float
    left_holds: bool          # posterior -> 1
    right_holds: bool         # prefix -> universal > 0
    gaps: list[tuple[int, float, float]]

    @property
    def equivalent(self) -> bool:
        return self.left_holds == self.right_holds


def cuh_equivalence_check(prior: SequencePrior, n_max: int,
                          tolerance: float | None = None) -> EquivalenceReport:
    """Check both sides of the confirmation equivalence on [0, n_max].

    Left side: the posterior of the universal hypothesis reaches 1 up to
    the analytic tail at n_max. Right side: the prefix probabilities
    reach a strictly positive universal probability up to the same tail.
    For the supported component laws the two verdicts must agree.
    """
    universal = prior.universal_prob()
    gaps = []
    for n in range(n_max + 1):
        prefix = prior.prefix_prob(n)
        posterior = universal / prefix if prefix > 0 else 0.0
        gaps.append((n, 1.0 - posterior, prefix - universal))
    if tolerance is None:
        # the analytic tail at n_max, padded for floating point
        tolerance = prior.tail_gap_bound(n_max) + 1e-12
    final_prefix = prior.prefix_prob(n_max)
    right = universal > 0.0 and (final_prefix - universal) <= tolerance
    if universal > 0.0 and final_prefix > 0.0:
        final_posterior = universal / final_prefix
        left = (1.0 - final_posterior) <= tolerance / universal
    else:
        left = False
    return EquivalenceReport(
        prior_description=prior.describe(),
        n_max=n_max,
        universal=universal,
        left_holds=left,
        right_holds=right,
        gaps=gaps,
    )


# ---------------------------------------------------------------------------
# Mixture spec strings (CLI surface)


def _split_components(spec: str) -> list[str]:
    """Split on commas that are not inside a {...} index set."""
    chunks = []
    depth = 0
    current = []
    for ch in spec:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
        if ch == "," and depth == 0:
            chunks.append("".join(current))
            current = []
        else:
            current.append(ch)
    chunks.append("".join(current))
    return [c.strip() for c in chunks if c.strip()]


def parse_mixture_spec(spec: str) -> SequencePrior:
    """Parse 'alltrue:0.5,iid:0.5@0.5' style component lists.

    Component kinds: ``alltrue:M``, ``allfalse:M``, ``iid:M@THETA`` and
    ``finite:M@{i,j,...}``. Masses must be positive and sum to 1.
    """
    components: list[tuple[float, ComponentLaw]] = []
    for chunk in _split_components(spec):
        kind, _, rest = chunk.partition(":")
        kind = kind.strip().lower()
        if not rest:
            raise PlogError(f"malformed mixture component {chunk!r}")
        mass_text, _, param = rest.partition("@")
        try:
            mass = float(mass_text)
        except ValueError:
            raise PlogError(f"malformed mixture mass in {chunk!r}") from None
        if kind == "alltrue":
            law: ComponentLaw = PointMass("all-true")
        elif kind == "allfalse":
            law = PointMass("all-false")
        elif kind == "iid":
            try:
                theta = float(param)
            except ValueError:
                raise PlogError(f"iid component needs '@theta' in {chunk!r}") from None
            law = Iid(theta)
        elif kind == "finite":
            param = param.strip()
            if not (param.startswith("{") and param.endswith("}")):
                raise PlogError(f"finite component needs '@{{i,j,...}}' in {chunk!r}")
            inner = param[1:-1].strip()
            try:
                indices = frozenset(int(x) for x in inner.split(",") if x.strip())
            except ValueError:
                raise PlogError(f"malformed index set in {chunk!r}") from None
            law = PointMass("finite", indices)
        else:
            raise PlogError(f"unknown mixture component kind {kind!r}")
        components.append((mass, law))
    if not components:
        raise PlogError("empty mixture spec")
    return SequencePrior(tuple(components))
