"""Minimum-relative-entropy extension of constraint targets over a prior.

The projected probability reweights each partition block of the
constraint sentences by an exponential factor exp(sum of the duals of
the constraints that hold on the block), normalized; within a block the
prior's conditional shape is preserved exactly. Targets that are exactly
0 or 1 are handled structurally by conditioning the prior (a finite
solver cannot reach the infinite duals they would require); the
remaining soft targets are solved on the block simplex by damped Newton
on the concave dual, with a multiplicative-scaling fallback when the
Hessian degenerates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .belief import Belief
from .errors import InfeasibleError, NumericalFailureError, PlogError
from .extend import ConstraintSet, extend_feasible
from .worlds import partition

HARD_TARGET_TOLERANCE = 1e-12
RESIDUAL_TARGET = 1e-13
RESIDUAL_ACCEPT = 1e-8
MAX_ITERATIONS = 10_000

# marker for constraints handled by the conditioning pre-pass; their duals
# are not finite (0/1 targets push the exponential weights to a boundary)
HARD_DUAL = -math.inf


@dataclass(frozen=True)
class Projection:
    """Result of projecting a prior onto a constraint set."""

    belief: Belief
    duals: dict[int, float]                       # 1-based index -> dual (HARD_DUAL marker for 0/1 targets)
    block_scales: dict[frozenset[int], float]     # soft-profile -> exp(dual sum)/normalizer
    log_normalizer: float
    kl: float
    iterations: int
    residual: float
    hard: tuple[int, ...]                         # 1-based indices conditioned away
    constraints: ConstraintSet

    def report_lines(self) -> list[str]:
        out = ["projection report"]
        out.append(f"  iterations: {self.iterations}   max residual: {self.residual:.3e}")
        out.append(f"  log normalizer: {self.log_normalizer!r}")
        out.append(f"  relative entropy to prior: {self.kl!r}")
        out.append("  duals:")
        for i, c in enumerate(self.constraints, start=1):
            lam = self.duals[i]
            kind = "hard (conditioned)" if i in self.hard else "soft"
            shown = "-inf" if lam == HARD_DUAL else f"{lam!r}"
            out.append(f"    {i}. {c.describe()}  target={c.target}  dual={shown}  [{kind}]")
        out.append("  block scales over soft-constraint profiles:")
        for profile in sorted(self.block_scales, key=lambda s: (len(s), sorted(s))):
            shown_profile = "{" + ", ".join(map(str, sorted(profile))) + "}"
            out.append(f"    {shown_profile or '{}'}: {self.block_scales[profile]!r}")
        return out


def project(prior: Belief, constraints: ConstraintSet,
            residual_target: float = RESIDUAL_TARGET,
            max_iterations: int = MAX_ITERATIONS) -> Projection:
    """KL-project the prior onto the set of beliefs matching the targets.

    Requires the constraints to be feasible and the prior to put mass on
    every satisfiable block of the constraint partition. Raises
    InfeasibleError otherwise, and NumericalFailureError (carrying the
    best iterate) if the dual solve stalls above the acceptance residual.
    """
    space = prior.space
    feasibility = extend_feasible(constraints, space)
    if not feasibility.feasible:
        core = feasibility.infeasible_subsystem or ()
        raise InfeasibleError(
            "constraints are not extendable; irreducible subsystem: "
            + ", ".join(str(i) for i in core)
        )
    for profile in feasibility.partition.satisfiable:
        if prior.mass(feasibility.partition.block(profile)) <= 0.0:
            raise PlogError(
                "prior gives zero mass to the satisfiable block with profile "
                f"{{{', '.join(map(str, sorted(profile)))}}}; use a strictly positive prior"
            )

    entries = list(constraints)
    hard_indices = tuple(
        i for i, c in enumerate(entries, start=1)
        if c.target <= HARD_TARGET_TOLERANCE or c.target >= 1.0 - HARD_TARGET_TOLERANCE
    )
    soft_indices = [i for i in range(1, len(entries) + 1) if i not in hard_indices]

    # conditioning pre-pass for the 0/1 targets
    conditioned = prior.weights.copy()
    for i in hard_indices:
        c = entries[i - 1]
        mask = space.models_of(c.sentence).mask
        if c.target >= 1.0 - HARD_TARGET_TOLERANCE:
            conditioned = np.where(mask, conditioned, 0.0)
        else:
            conditioned = np.where(mask, 0.0, conditioned)
    total = float(conditioned.sum())
    if total <= 0.0:
        raise InfeasibleError("certain knowledge is jointly unsatisfiable under the prior")
    conditioned = conditioned / total

    duals: dict[int, float] = {i: HARD_DUAL for i in hard_indices}

    if not soft_indices:
        belief = Belief(space, conditioned)
        residual = _max_residual(belief, constraints)
        return Projection(
            belief=belief, duals=duals,
            block_scales={frozenset(): 1.0},
            log_normalizer=0.0, kl=belief.kl(prior),
            iterations=0, residual=residual,
            hard=hard_indices, constraints=constraints,
        )

    soft_sentences = [entries[i - 1].sentence for i in soft_indices]
    soft_targets = np.array([entries[i - 1].target for i in soft_indices])
    part = partition(soft_sentences, space)
    profiles = []
    masses = []
    for profile, block in part.blocks.items():
        q = float(conditioned[block.mask].sum())
        if q > 0.0:
            profiles.append(profile)
            masses.append(q)
    log_q = np.log(np.array(masses))
    features = np.zeros((len(soft_indices), len(profiles)))
    for j, profile in enumerate(profiles):
        for local in profile:  # profiles here index the *soft* subset, 1-based
            features[local - 1, j] = 1.0

    lam, log_norm, _marginals, iterations, residual = _solve_dual(
        features, log_q, soft_targets, residual_target, max_iterations)

    if residual > RESIDUAL_ACCEPT:
        best = _assemble(space, conditioned, part, profiles, features, lam, log_norm)
        raise NumericalFailureError(
            f"dual solve stalled at residual {residual:.3e} after {iterations} iterations",
            best=best,
        )

    belief = _assemble(space, conditioned, part, profiles, features, lam, log_norm)
    for local, i in enumerate(soft_indices):
        duals[i] = float(lam[local])
    scales = {
        profile: float(math.exp(features[:, j] @ lam - log_norm))
        for j, profile in enumerate(profiles)
    }
    return Projection(
        belief=belief, duals=duals, block_scales=scales,
        log_normalizer=float(log_norm), kl=belief.kl(prior),
        iterations=iterations, residual=_max_residual(belief, constraints),
        hard=hard_indices, constraints=constraints,
    )


def _solve_dual(features: np.ndarray, log_q: np.ndarray, targets: np.ndarray,
                residual_target: float, max_iterations: int):
    """Minimize log-normalizer minus dual-weighted targets by damped Newton."""
    m = features.shape[0]
    lam = np.zeros(m)
    gis_damping = max(1.0, float(features.sum(axis=0).max()))

    def evaluate(l):
        scores = features.T @ l + log_q
        top = scores.max()
        weights = np.exp(scores - top)
        z = weights.sum()
        log_norm = top + math.log(z)
        p = weights / z
        return log_norm, p

    log_norm, p = evaluate(lam)
    value = log_norm - lam @ targets
    iterations = 0
    residual = float(np.abs(features @ p - targets).max())

    while residual > residual_target and iterations < max_iterations:
        iterations += 1
        marginals = features @ p
        grad = marginals - targets
        weighted = features * p
        hessian = weighted @ features.T - np.outer(marginals, marginals)
        step = None
        try:
            step = np.linalg.solve(hessian + 1e-12 * np.eye(m), -grad)
        except np.linalg.LinAlgError:
            step = None
        moved = False
        if step is not None and np.isfinite(step).all():
            t = 1.0
            while t >= 1e-10:
                trial = lam + t * step
                trial_log_norm, trial_p = evaluate(trial)
                trial_value = trial_log_norm - trial @ targets
                trial_residual = float(np.abs(features @ trial_p - targets).max())
                # accept on sufficient objective decrease, or on residual
                # contraction once value changes drown in rounding
                if trial_value <= value + 1e-4 * t * (grad @ step) \
                        or trial_residual <= 0.5 * residual:
                    lam, log_norm, p, value = trial, trial_log_norm, trial_p, trial_value
                    residual = trial_residual
                    moved = True
                    break
                t *= 0.5
        if not moved:
            # multiplicative scaling step: robust when the Hessian is
            # singular (duplicated or degenerate constraints)
            safe_marginals = np.clip(features @ p, 1e-300, 1.0)
            safe_targets = np.clip(targets, 1e-300, 1.0)
            trial = lam + np.log(safe_targets / safe_marginals) / gis_damping
            trial_log_norm, trial_p = evaluate(trial)
            trial_residual = float(np.abs(features @ trial_p - targets).max())
            if trial_residual >= residual and residual <= 10 * residual_target:
                break  # numerically converged: no step improves further
            lam, log_norm, p = trial, trial_log_norm, trial_p
            value = log_norm - lam @ targets
            residual = trial_residual

    return lam, log_norm, features @ p, iterations, residual


def _assemble(space, conditioned, part, profiles, features, lam, log_norm) -> Belief:
    """Scale each block of the conditioned prior by its exponential factor."""
    scale = np.zeros(space.num_worlds)
    for j, profile in enumerate(profiles):
        factor = math.exp(float(features[:, j] @ lam) - log_norm)
        scale[part.blocks[profile].mask] = factor
    weights = conditioned * scale
    return Belief.from_weights(space, weights)


def _max_residual(belief: Belief, constraints: ConstraintSet) -> float:
    worst = 0.0
    for c in constraints:
        worst = max(worst, abs(belief.prob(c.sentence) - c.target))
    return worst


def dual_value(lam: np.ndarray, prior: Belief, constraints: ConstraintSet) -> float:
    """The dual objective: dual-weighted targets minus the log-normalizer.

    All duals must be finite (0/1 targets never reach this function; the
    projection handles them by conditioning). At the converged duals of
    an all-soft projection this equals the achieved relative entropy.
    Overflow is guarded by max-subtraction inside the log-sum-exp.
    """
    lam = np.asarray(lam, dtype=np.float64)
    if not np.isfinite(lam).all():
        raise PlogError("dual_value requires finite duals")
    log_norm = _log_normalizer(lam, prior, constraints)
    return float(lam @ constraints.targets() - log_norm)


def dual_gradient(lam: np.ndarray, prior: Belief, constraints: ConstraintSet) -> np.ndarray:
    """Gradient of the minimization form (log-normalizer minus weighted
    targets): current block-weighted marginals minus the targets. Equal
    to the negated gradient of dual_value."""
    lam = np.asarray(lam, dtype=np.float64)
    features, log_q = _system(prior, constraints)
    scores = features.T @ lam + log_q
    top = scores.max()
    p = np.exp(scores - top)
    p /= p.sum()
    return features @ p - constraints.targets()


def _system(prior: Belief, constraints: ConstraintSet):
    part = partition(constraints.sentences(), prior.space)
    profiles = []
    masses = []
    for profile, block in part.blocks.items():
        q = prior.mass(block)
        if q > 0.0:
            profiles.append(profile)
            masses.append(q)
    features = np.zeros((len(constraints), len(profiles)))
    for j, profile in enumerate(profiles):
        for i in profile:
            features[i - 1, j] = 1.0
    return features, np.log(np.array(masses))


def _log_normalizer(lam: np.ndarray, prior: Belief, constraints: ConstraintSet) -> float:
    features, log_q = _system(prior, constraints)
    scores = features.T @ lam + log_q
    top = float(scores.max())
    return top + math.log(float(np.exp(scores - top).sum()))
