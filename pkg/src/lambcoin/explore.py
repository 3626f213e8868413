"""Exhaustive enumeration of reachable normal-form distributions.

The explorer computes, for a term t, every distribution over normal forms
reachable by repeatedly firing one redex per non-normal support term. It
works recursively: a normal term yields its own dirac distribution; any
other term yields, for every redex position, every convex combination
obtained by independently picking one final distribution for each outcome
of that step. Memoization keys the recursion on the (alpha-canonical) term.

Reduction cycles (possible only for untypable input) contribute no
normal-form distributions; if nothing terminating remains, the exploration
reports divergence. A fuel bound on visited nodes guards the search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .distribution import Distribution, combine, dirac, format_distribution, lift_step
from .rewrite import Position, Strategy, is_normal, redexes, select_redex, step_at
from .syntax import CalculusVariant, Term

DEFAULT_FUEL = 1_000_000


@dataclass(frozen=True, slots=True)
class ExplorationStats:
    nodes: int
    max_depth: int
    fuel_spent: int


class FuelExhausted(Exception):
    """The node budget ran out; carries partial progress."""

    def __init__(self, message: str, stats: ExplorationStats):
        super().__init__(f"{message} ({stats.nodes} nodes visited, "
                         f"max depth {stats.max_depth})")
        self.stats = stats


class DivergenceError(FuelExhausted):
    """Every reduction path from the term revisits a previous term."""


@dataclass(frozen=True, slots=True)
class ExplorationResult:
    final_distributions: tuple[Distribution, ...]
    confluent: bool
    witness: tuple[Distribution, Distribution] | None
    stats: ExplorationStats


@dataclass(frozen=True, slots=True)
class TraceStep:
    fired: tuple[tuple[Term, Position], ...]
    result: Distribution


@dataclass(frozen=True, slots=True)
class Trace:
    initial: Distribution
    steps: tuple[TraceStep, ...]

    @property
    def terminal(self) -> Distribution:
        return self.steps[-1].result if self.steps else self.initial


class Explorer:
    """Reusable exploration state: one variant, one fuel budget, one memo table."""

    def __init__(self, variant: CalculusVariant = CalculusVariant.PLAIN,
                 fuel: int = DEFAULT_FUEL, memoize: bool = True):
        self.variant = variant
        self.fuel = fuel
        self.memoize = memoize
        self._memo: dict[Term, tuple[Distribution, ...]] = {}
        self._nodes = 0
        self._max_depth = 0

    @property
    def stats(self) -> ExplorationStats:
        return ExplorationStats(self._nodes, self._max_depth, self._nodes)

    def normal_form_distributions(self, t: Term) -> tuple[Distribution, ...]:
        """All reachable normal-form distributions, in canonical text order."""
        result, _ = self._explore(t, frozenset(), 0)
        if not result:
            raise DivergenceError(
                "no terminating reduction path found", self.stats)
        return result

    def _explore(self, t: Term, on_stack: frozenset[Term],
                 depth: int) -> tuple[tuple[Distribution, ...], bool]:
        """Returns the reachable final distributions and a cycle flag.

        A result that involved pruning a path back to a term still being
        explored is marked cyclic and never memoized, so the cache stays
        sound for later queries rooted elsewhere.
        """
        if is_normal(t, self.variant):
            return (dirac(t),), False
        if t in on_stack:
            return (), True  # this path loops and never reaches a normal form
        if self.memoize and t in self._memo:
            return self._memo[t], False
        self._nodes += 1
        self._max_depth = max(self._max_depth, depth)
        if self._nodes > self.fuel:
            raise FuelExhausted("exploration fuel exhausted", self.stats)
        on_stack = on_stack | {t}
        results: set[Distribution] = set()
        cyclic = False
        for pos in redexes(t, self.variant):
            outcome = step_at(t, pos, self.variant)
            continuations = []
            for _, r in outcome.outcomes:
                conts, was_cyclic = self._explore(r, on_stack, depth + 1)
                cyclic = cyclic or was_cyclic
                continuations.append(conts)
            if any(not conts for conts in continuations):
                continue  # some outcome diverges along this redex
            probs = [p for p, _ in outcome.outcomes]
            for picks in itertools.product(*continuations):
                results.add(combine(list(zip(probs, picks))))
        ordered = tuple(sorted(results, key=format_distribution))
        if self.memoize and not cyclic:
            self._memo[t] = ordered
        return ordered, cyclic


def normal_form_distributions(t: Term,
                              variant: CalculusVariant = CalculusVariant.PLAIN,
                              fuel: int = DEFAULT_FUEL,
                              memoize: bool = True) -> tuple[Distribution, ...]:
    """All distributions over normal forms reachable from `t`, canonically ordered."""
    return Explorer(variant, fuel, memoize).normal_form_distributions(t)


def reduce_with_strategy(t: Term, strategy: Strategy,
                         variant: CalculusVariant = CalculusVariant.PLAIN,
                         fuel: int = DEFAULT_FUEL) -> Trace:
    """Drive `t` to an all-normal distribution with one deterministic strategy."""
    initial = dirac(t)
    current = initial
    steps: list[TraceStep] = []
    spent = 0
    while True:
        fired = []
        for term in current.support:
            pos = select_redex(term, strategy)
            if pos is not None:
                fired.append((term, pos))
        if not fired:
            return Trace(initial, tuple(steps))
        spent += len(fired)
        if spent > fuel:
            raise FuelExhausted("reduction fuel exhausted",
                                ExplorationStats(spent, len(steps), spent))
        current = lift_step(current, dict(fired), variant)
        steps.append(TraceStep(tuple(fired), current))


def check_probabilistic_confluence(t: Term,
                                   variant: CalculusVariant = CalculusVariant.PLAIN,
                                   fuel: int = DEFAULT_FUEL) -> ExplorationResult:
    """Explore exhaustively; confluent iff exactly one final distribution.

    The witness of non-confluence is the two lexicographically smallest
    distinct members in the canonical text order.
    """
    explorer = Explorer(variant, fuel)
    finals = explorer.normal_form_distributions(t)
    confluent = len(finals) == 1
    witness = None if confluent else (finals[0], finals[1])
    return ExplorationResult(finals, confluent, witness, explorer.stats)
