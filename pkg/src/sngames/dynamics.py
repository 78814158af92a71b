"""Improvement paths: the improvement graph over all joint strategies, FIP and
weak acyclicity checks, and scheduler-driven best/better-response runs."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .equilibria import DEFAULT_GUARD
from .errors import GraphClassError, GuardExceededError, SNGError
from .graphs import topological_order
from .model import (
    NULL,
    JointStrategy,
    SocialNetwork,
    Strategy,
    all_null,
    check_profile,
    cycle_order,
    format_profile,
    format_strategy,
)


def better_responses(net: SocialNetwork, s: JointStrategy, i: str) -> tuple:
    """Strategies that strictly raise i's payoff against s_{-i}."""
    check_profile(net, s)
    g = net._game
    k = net.index(i)
    current = g.value(k, s[k], s)
    return tuple(x for x in g.options[k] if g.value(k, x, s) > current)


# -- improvement graph ------------------------------------------------------

@dataclass
class ImprovementGraph:
    """All joint strategies (canonical product order) with one transition
    per strictly improving unilateral deviation."""

    net: SocialNetwork
    states: list
    transitions: list  # (from index, mover id, to index)
    index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.index = {s: k for k, s in enumerate(self.states)}
        self._succ = [[] for _ in self.states]
        self._moves = [[] for _ in self.states]
        for a, mover, b in self.transitions:
            self._succ[a].append(b)
            self._moves[a].append((mover, b))

    def successors(self, k: int) -> list[int]:
        return self._succ[k]

    def sinks(self) -> list[JointStrategy]:
        return [s for k, s in enumerate(self.states) if not self._succ[k]]

    def has_edge(self, a: JointStrategy, mover: str, b: JointStrategy) -> bool:
        return (mover, self.index[b]) in self._moves[self.index[a]]

    def is_acyclic(self) -> bool:
        return topological_order(range(len(self.states)), self.successors, key=lambda k: k) is not None

    def all_reach_sink(self) -> bool:
        preds = [[] for _ in self.states]
        for a, _, b in self.transitions:
            preds[b].append(a)
        seen = {k for k in range(len(self.states)) if not self._succ[k]}
        queue = deque(seen)
        while queue:
            b = queue.popleft()
            for a in preds[b]:
                if a not in seen:
                    seen.add(a)
                    queue.append(a)
        return len(seen) == len(self.states)

    def to_dot(self) -> str:
        lines = ["digraph improvement {"]
        for k, s in enumerate(self.states):
            shape = "doublecircle" if not self._succ[k] else "ellipse"
            lines.append(f'  s{k} [label="{format_profile(self.net, s)}", shape={shape}];')
        for a, mover, b in self.transitions:
            lines.append(f'  s{a} -> s{b} [label="{mover}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_improvement_graph(net: SocialNetwork, guard: int = DEFAULT_GUARD) -> ImprovementGraph:
    count = net.state_count()
    if count > guard:
        raise GuardExceededError(count, guard)
    g = net._game
    states = list(itertools.product(*g.options))
    index = {s: k for k, s in enumerate(states)}
    transitions = []
    for a, s in enumerate(states):
        for k in range(g.n):
            current = g.value(k, s[k], s)
            for x in g.options[k]:
                if x != s[k] and g.value(k, x, s) > current:
                    t = s[:k] + (x,) + s[k + 1:]
                    transitions.append((a, g.ids[k], index[t]))
    return ImprovementGraph(net, states, transitions)


def has_fip(net: SocialNetwork, guard: int = DEFAULT_GUARD) -> bool:
    """Finite game: every improvement path is finite iff the graph is acyclic."""
    return build_improvement_graph(net, guard).is_acyclic()


def is_weakly_acyclic(net: SocialNetwork, guard: int = DEFAULT_GUARD) -> bool:
    return build_improvement_graph(net, guard).all_reach_sink()


# -- schedulers -------------------------------------------------------------

def _non_best_responders(g, s, order):
    return [k for k in order if g.value(k, s[k], s) < g.best_value(k, s)]


def _first_best(g, k, s):
    return max(g.options[k], key=lambda x: g.value(k, x, s))


@dataclass(frozen=True)
class SmallestIndexBestResponse:
    """Move the first player (in ``order``, default canonical node order)
    that is not best-responding, to its first best response."""

    order: tuple | None = None

    def picker(self, net: SocialNetwork):
        g = net._game
        order = [net.index(i) for i in (self.order or net.nodes)]

        def pick(s):
            movers = _non_best_responders(g, s, order)
            if not movers:
                return None
            k = movers[0]
            return k, _first_best(g, k, s)
        return pick


@dataclass(frozen=True)
class RandomBetterResponse:
    """Uniformly random non-best-responding player and a uniformly random
    better response, drawn from ``random.Random(seed)``."""

    seed: int

    def picker(self, net: SocialNetwork):
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise SNGError(f"seed must be a non-negative integer, got {self.seed!r}",
                           "invalid-scheduler-seed")
        g = net._game
        rng = random.Random(self.seed)
        order = list(range(g.n))

        def pick(s):
            movers = _non_best_responders(g, s, order)
            if not movers:
                return None
            k = rng.choice(movers)
            current = g.value(k, s[k], s)
            better = [x for x in g.options[k] if g.value(k, x, s) > current]
            return k, rng.choice(better)
        return pick


@dataclass(frozen=True)
class FixedOrderBestResponse:
    """Round robin over ``permutation``: after a move, scanning resumes just
    past the last mover and picks the next non-best-responding player."""

    permutation: tuple

    def picker(self, net: SocialNetwork):
        g = net._game
        if sorted(self.permutation) != list(net.nodes):
            raise SNGError("permutation must list every node exactly once", "invalid-permutation")
        order = [net.index(i) for i in self.permutation]
        cursor = [0]

        def pick(s):
            n = len(order)
            for step in range(n):
                k = order[(cursor[0] + step) % n]
                if g.value(k, s[k], s) < g.best_value(k, s):
                    cursor[0] = (cursor[0] + step + 1) % n
                    return k, _first_best(g, k, s)
            return None
        return pick


@dataclass(frozen=True)
class Step:
    state: JointStrategy
    mover: str
    old: Strategy
    new: Strategy
    delta: Fraction


@dataclass(frozen=True)
class DynamicsTrace:
    start: JointStrategy
    steps: tuple
    final: JointStrategy
    reached_ne: bool

    @property
    def outcome(self) -> str:
        return "reached-ne" if self.reached_ne else "step-budget-exhausted"

    def states(self) -> list[JointStrategy]:
        return [st.state for st in self.steps] + [self.final]

    def lines(self) -> list[str]:
        return [f"step {k}: node={st.mover} {format_strategy(st.old)} -> "
                f"{format_strategy(st.new)} delta={st.delta}"
                for k, st in enumerate(self.steps, 1)]


def run_scheduler(net: SocialNetwork, start: JointStrategy, scheduler, max_steps: int) -> DynamicsTrace:
    check_profile(net, start)
    if max_steps < 1:
        raise SNGError("max_steps must be at least 1", "invalid-step-budget")
    g = net._game
    pick = scheduler.picker(net)
    s = tuple(start)
    steps = []
    for _ in range(max_steps):
        choice = pick(s)
        if choice is None:
            return DynamicsTrace(tuple(start), tuple(steps), s, True)
        k, x = choice
        delta = Fraction(g.value(k, x, s) - g.value(k, s[k], s), g.scale)
        steps.append(Step(s, g.ids[k], s[k], x, delta))
        s = s[:k] + (x,) + s[k + 1:]
    reached = pick(s) is None
    return DynamicsTrace(tuple(start), tuple(steps), s, reached)


def random_profile(net: SocialNetwork, seed: int) -> JointStrategy:
    rng = random.Random(seed)
    return tuple(rng.choice(net.strategies(i)) for i in net.nodes)


def cycle_step_bound(net: SocialNetwork) -> int:
    return 3 * len(net.nodes) * max(len(net.strategies(i)) for i in net.nodes)


def uniform_fip_cycle_check(net: SocialNetwork, trials: int = 20, seed: int = 0) -> bool:
    """Run the smallest-index best-response scheduler, indexed along the
    cycle, from random starts plus all-NULL and every uniform product start;
    true iff each run ends in an equilibrium within 3 * n * max |S_i| steps."""
    order = cycle_order(net)
    if order is None:
        raise GraphClassError("the underlying graph is not a simple cycle", "not-a-simple-cycle")
    sched = SmallestIndexBestResponse(tuple(order))
    bound = cycle_step_bound(net)
    common = set(net.products)
    for i in net.nodes:
        common &= net.product_sets[i]
    rng = random.Random(seed)
    starts = [all_null(net)] + [(t,) * len(net.nodes) for t in sorted(common)]
    starts += [random_profile(net, rng.getrandbits(32)) for _ in range(trials)]
    for start in starts:
        trace = run_scheduler(net, start, sched, bound)
        if not trace.reached_ne:
            return False
    return True
