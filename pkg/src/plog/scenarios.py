"""Canned knowledge bases and the narratives behind them.

The texts here are the source of truth for the files shipped under
kb/; the CLI's example command runs them without touching the disk.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import induct
from .belief import Belief
from .maxent import project
from .parser import parse_formula_text, parse_program
from .worlds import WorldSpace

MONTY_HALL_KB = """\
# Three doors; a prize behind exactly one, a player pick, a host reveal.
# The host never opens the picked door or the prize door. The prior is
# symmetric across doors and leaves pick and prize uncorrelated, which
# pins the chance of having picked the prize door at 1/3.
domain Door = { d1, d2, d3 }
pred prize : Door
pred picked : Door
pred opened : Door

sentence unique_prize := exists d:Door. (prize(d) & (forall x:Door. (prize(x) -> x = d)))
sentence unique_picked := exists d:Door. (picked(d) & (forall x:Door. (picked(x) -> x = d)))
sentence unique_opened := exists d:Door. (opened(d) & (forall x:Door. (opened(x) -> x = d)))
sentence phi1 := unique_prize & unique_picked & unique_opened
sentence phi2 := prize(d1)
sentence phi3 := prize(d2)
sentence phi4 := picked(d1)
sentence phi5 := picked(d2)
sentence phi6 := forall d:Door. (opened(d) -> (~picked(d) & ~prize(d)))
sentence phi7 := opened(d1)
sentence phi8 := opened(d2)
sentence phi9 := exists d:Door. (picked(d) & prize(d))

believe phi1 = 1
believe phi6 = 1
believe phi2 = 1/3
believe phi3 = 1/3
believe phi4 = 1/3
believe phi5 = 1/3
believe phi9 = 1/3
"""

RAVENS_KB = """\
# Five observed ravens, each known black for certain.
domain Raven = { r1, r2, r3, r4, r5 }
pred B : Raven

believe B(r1) = 1
believe B(r2) = 1
believe B(r3) = 1
believe B(r4) = 1
believe B(r5) = 1
"""

NAIVE_RAVENS_KB = """\
# The same five ravens with no beliefs at all: the uniform prior over
# worlds treats the atoms as independent fair coins, the finite analogue
# of the sequence prior that puts no mass on the universal hypothesis.
domain Raven = { r1, r2, r3, r4, r5 }
pred B : Raven
"""

NESTED_KB = """\
# A three-level nest of strictly shrinking events.
prop p
prop q
prop r

believe p = 0.6
believe p & q = 0.3
believe p & q & r = 0.1
"""

KB_FILES = {
    "monty-hall.plog": MONTY_HALL_KB,
    "ravens.plog": RAVENS_KB,
    "naive-ravens.plog": NAIVE_RAVENS_KB,
    "nested.plog": NESTED_KB,
}

# the canned sequence priors exercised by the convergence machinery
CONFIRMING_MIXTURE = "alltrue:0.5,iid:0.5@0.5"
NAIVE_MIXTURE = "iid:1.0@0.5"
CERTAIN_MIXTURE = "alltrue:1.0"


@dataclass(frozen=True)
class ExampleRun:
    name: str
    lines: list[str]
    table: list[induct.ConvergenceRow] | None = None


def run_monty_hall() -> ExampleRun:
    program = parse_program(MONTY_HALL_KB)
    space = WorldSpace(program.vocabulary)
    projection = project(Belief.uniform(space), program.constraints)
    belief = projection.belief

    picked_then_opened = parse_formula_text(
        "picked(d1) & opened(d3)", program.vocabulary, program.sentences)
    switch_wins_here = parse_formula_text(
        "prize(d2)", program.vocabulary, program.sentences)
    stay_wins_here = parse_formula_text(
        "prize(d1)", program.vocabulary, program.sentences)
    switch_overall = parse_formula_text("~phi9", program.vocabulary, program.sentences)
    stay_overall = program.sentences["phi9"]

    p_switch = belief.cond(switch_wins_here, picked_then_opened)
    p_stay = belief.cond(stay_wins_here, picked_then_opened)
    lines = [
        "A prize hides behind one of three doors. The player picks a door,",
        "the host opens a different door that hides nothing, and the player",
        "may switch to the remaining closed door.",
        "",
        "Extending the symmetric beliefs and conditioning on the player",
        "having picked d1 and the host having opened d3:",
        f"  win by switching (prize at d2): {p_switch:.12f}",
        f"  win by staying   (prize at d1): {p_stay:.12f}",
        "",
        "Unconditionally, switching wins exactly when the first pick missed:",
        f"  P(first pick missed the prize) = {belief.prob(switch_overall):.12f}",
        f"  P(first pick found the prize)  = {belief.prob(stay_overall):.12f}",
        "",
        "Switching doubles the chance of winning.",
    ]
    return ExampleRun("monty-hall", lines)


def run_ravens(n_max: int = 20) -> ExampleRun:
    program = parse_program(RAVENS_KB)
    space = WorldSpace(program.vocabulary)
    projection = project(Belief.uniform(space), program.constraints)
    belief = projection.belief
    all_black = parse_formula_text("forall x:Raven. B(x)", program.vocabulary)
    two_black = parse_formula_text("B(r1) & B(r2)", program.vocabulary)

    prior = induct.parse_mixture_spec(CONFIRMING_MIXTURE)
    table = induct.convergence_table(prior, n_max)
    final = table[-1]
    lines = [
        "Every observed raven is black for certain. Within the finite",
        "fragment the universal claim is then a logical consequence:",
        f"  P(B(r1) & B(r2))        = {belief.prob(two_black):.12f}",
        f"  P(all five ravens black) = {belief.prob(all_black):.12f}",
        "",
        "Over an unbounded sequence of ravens, a prior with positive mass",
        f"on the all-black hypothesis ({prior.describe()}) is needed for",
        "confirmation; its posterior after n black ravens approaches 1:",
        f"  posterior at n={final.n}: {final.posterior_universal:.9f}",
        f"  next-raven prediction at n={final.n}: {final.predictive:.9f}",
    ]
    return ExampleRun("ravens", lines, table)


def run_naive_ravens(n_max: int = 20) -> ExampleRun:
    prior = induct.parse_mixture_spec(NAIVE_MIXTURE)
    table = induct.convergence_table(prior, n_max)
    final = table[-1]
    universal_bound = prior.prefix_prob(final.n + 20) / prior.prefix_prob(final.n)
    lines = [
        "The naive prior treats each raven as an independent fair coin",
        f"({prior.describe()}): the tree weights halve at every level.",
        "No run of black ravens teaches it anything about the next one:",
        f"  next-raven prediction at n={final.n}: {final.predictive:.12f}",
        "",
        "Worse, the universal hypothesis can never be confirmed: after n",
        "black ravens the belief in the next 20 being black is already",
        f"  {universal_bound:.12e}",
        "and the belief that all ravens are black is bounded by every such",
        "power of one half, hence is identically zero.",
        f"  posterior of the universal hypothesis at n={final.n}: "
        f"{final.posterior_universal:.1f}",
    ]
    return ExampleRun("naive-ravens", lines, table)


EXAMPLES = {
    "monty-hall": run_monty_hall,
    "ravens": run_ravens,
    "naive-ravens": run_naive_ravens,
}
