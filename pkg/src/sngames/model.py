"""Social networks, joint strategies and payoffs.

A network is a weighted digraph whose nodes are agents. Each agent owns a
non-empty product set and a threshold per product; the game lets every
agent adopt one of its products or opt out (``NULL``). Node and product ids
are opaque strings ordered lexicographically.

Joint strategies are plain tuples aligned with ``SocialNetwork.nodes``;
``NULL`` (``None``) is the opt-out strategy.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Tuple

from .errors import InvalidProfileError, NetworkError, UnknownNodeError, UnknownProductError
from .graphs import topological_order

NULL = None

Strategy = Optional[str]
JointStrategy = Tuple[Strategy, ...]


def as_rational(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use Fraction, int or 'p/q'")
    return Fraction(value)


def strategy_key(x: Strategy) -> tuple:
    """Canonical strategy order: products lexicographically, NULL last."""
    return (1, "") if x is None else (0, x)


def profile_key(s: JointStrategy) -> tuple:
    return tuple(strategy_key(x) for x in s)


class Edge(NamedTuple):
    source: str
    target: str
    weight: Fraction


@dataclass(frozen=True)
class SocialNetwork:
    """Immutable network. Inputs are normalised (sorted, made exact) but not
    validated; call :func:`validate_network` for that."""

    nodes: tuple
    edges: tuple
    product_sets: Mapping
    thresholds: Mapping
    c0: Fraction = Fraction(1)
    products: tuple = ()

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "nodes", tuple(sorted(self.nodes)))
        edges = [Edge(u, v, as_rational(w)) for u, v, w in self.edges]
        set_(self, "edges", tuple(sorted(edges)))
        psets = {i: frozenset(ps) for i, ps in self.product_sets.items()}
        set_(self, "product_sets", dict(sorted(psets.items())))
        thr = {(i, t): as_rational(v) for (i, t), v in self.thresholds.items()}
        set_(self, "thresholds", dict(sorted(thr.items())))
        set_(self, "c0", as_rational(self.c0))
        universe = set(self.products)
        if not universe:
            for ps in psets.values():
                universe |= ps
        set_(self, "products", tuple(sorted(universe)))

    __hash__ = None

    @cached_property
    def _game(self) -> _Game:
        return _Game(self)

    @cached_property
    def _in_edges(self) -> dict:
        incoming = {i: [] for i in self.nodes}
        for e in self.edges:
            incoming.setdefault(e.target, []).append(e)
        return incoming

    def index(self, node: str) -> int:
        try:
            return self._game.index[node]
        except KeyError:
            raise UnknownNodeError(f"no node {node!r}") from None

    def in_edges(self, node: str) -> list[Edge]:
        if node not in self._in_edges:
            raise UnknownNodeError(f"no node {node!r}")
        return self._in_edges[node]

    def successors(self, node: str) -> list[str]:
        return self._game.succ_ids[self.index(node)]

    def strategies(self, node: str) -> tuple:
        """S_i: the node's products in canonical order, then NULL."""
        return self._game.options[self.index(node)]

    def is_source(self, node: str) -> bool:
        return self._game.source[self.index(node)]

    def weight(self, source: str, target: str) -> Fraction:
        for e in self.in_edges(target):
            if e.source == source:
                return e.weight
        return Fraction(0)

    def state_count(self) -> int:
        return math.prod(len(ps) + 1 for ps in self.product_sets.values())


class _Game:
    """Integer-scaled view of a network used by the hot loops.

    All weights, thresholds and c0 are multiplied by the lcm of their
    denominators, so payoff comparisons are exact integer comparisons.
    """

    def __init__(self, net: SocialNetwork):
        values = [e.weight for e in net.edges] + list(net.thresholds.values()) + [net.c0]
        scale = 1
        for v in values:
            scale = math.lcm(scale, v.denominator)
        self.scale = scale
        self.n = len(net.nodes)
        self.ids = net.nodes
        self.index = {v: k for k, v in enumerate(net.nodes)}
        self.preds = [[] for _ in net.nodes]
        self.succs = [[] for _ in net.nodes]
        for e in net.edges:
            if e.source in self.index and e.target in self.index:
                u, v = self.index[e.source], self.index[e.target]
                self.preds[v].append((u, int(e.weight * scale)))
                self.succs[u].append(v)
        self.succ_ids = [[net.nodes[v] for v in vs] for vs in self.succs]
        self.source = [not p for p in self.preds]
        self.options = []
        self.thr = []
        for i in net.nodes:
            ps = sorted(net.product_sets.get(i, ()))
            self.options.append(tuple(ps) + (NULL,))
            self.thr.append({t: int(net.thresholds[(i, t)] * scale)
                             for t in ps if (i, t) in net.thresholds})
        self.c0 = int(net.c0 * scale)

    def value(self, k: int, x: Strategy, s) -> int:
        """Scaled payoff of node k when it plays x and the others play s."""
        if x is None:
            return 0
        if self.source[k]:
            return self.c0
        return sum(w for j, w in self.preds[k] if s[j] == x) - self.thr[k][x]

    def best_value(self, k: int, s) -> int:
        return max(self.value(k, x, s) for x in self.options[k])


@dataclass(frozen=True)
class GraphClass:
    is_dag: bool
    is_simple_cycle: bool
    has_no_source_nodes: bool


# -- validation -------------------------------------------------------------

def validate_network(net: SocialNetwork) -> None:
    """Raise :class:`NetworkError` with a specific code on the first broken
    constraint; return None when the network is well formed."""
    def fail(code, msg):
        raise NetworkError(msg, code)

    if len(set(net.nodes)) != len(net.nodes):
        fail("duplicate-node", "node ids must be unique")
    nodes = set(net.nodes)
    if net.c0 <= 0:
        fail("nonpositive-c0", f"source payoff c0 = {net.c0} must be positive")
    seen = set()
    for e in net.edges:
        if e.source not in nodes or e.target not in nodes:
            fail("dangling-edge-endpoint", f"edge {e.source}->{e.target} uses an unknown node")
        if e.source == e.target:
            fail("self-loop", f"self-loop on {e.source}")
        if (e.source, e.target) in seen:
            fail("duplicate-edge", f"more than one edge {e.source}->{e.target}")
        seen.add((e.source, e.target))
        if not 0 <= e.weight <= 1:
            fail("weight-out-of-range", f"weight {e.weight} of {e.source}->{e.target} not in [0,1]")
    for i in net.nodes:
        total = sum((e.weight for e in net.in_edges(i)), Fraction(0))
        if total > 1:
            fail("weight-sum-exceeded", f"incoming weights of {i} sum to {total} > 1")
    universe = set(net.products)
    for i in net.nodes:
        ps = net.product_sets.get(i)
        if ps is None:
            fail("missing-product-set", f"node {i} has no product set")
        if not ps:
            fail("empty-product-set", f"node {i} has an empty product set")
        if not ps <= universe:
            fail("unknown-product", f"node {i} uses products outside the universe")
        for t in ps:
            if (i, t) not in net.thresholds:
                fail("threshold-missing", f"no threshold for node {i}, product {t}")
    for (i, t), v in net.thresholds.items():
        if i not in nodes or t not in net.product_sets.get(i, ()):
            fail("threshold-extra", f"threshold given for ({i}, {t}) outside the node's product set")
        if not 0 < v <= 1:
            fail("threshold-out-of-range", f"threshold of ({i}, {t}) is {v}, not in (0,1]")
    extra = set(net.product_sets) - nodes
    if extra:
        fail("dangling-product-set", f"product sets for unknown nodes {sorted(extra)}")


# -- joint strategies -------------------------------------------------------

def check_profile(net: SocialNetwork, s: JointStrategy) -> None:
    if len(s) != len(net.nodes):
        raise InvalidProfileError(f"profile has {len(s)} entries for {len(net.nodes)} nodes")
    for i, x in zip(net.nodes, s):
        if x is not None and x not in net.product_sets.get(i, ()):
            raise InvalidProfileError(f"node {i} cannot play {x!r}")


def profile_from_mapping(net: SocialNetwork, choice: Mapping) -> JointStrategy:
    if set(choice) != set(net.nodes):
        missing = sorted(set(net.nodes) - set(choice))
        extra = sorted(set(choice) - set(net.nodes))
        raise InvalidProfileError(f"profile domain mismatch (missing {missing}, unknown {extra})")
    s = tuple(choice[i] for i in net.nodes)
    check_profile(net, s)
    return s


def as_mapping(net: SocialNetwork, s: JointStrategy) -> dict:
    return dict(zip(net.nodes, s))


def all_null(net: SocialNetwork) -> JointStrategy:
    return (NULL,) * len(net.nodes)


def uniform(net: SocialNetwork, t: str) -> JointStrategy:
    s = (t,) * len(net.nodes)
    check_profile(net, s)
    return s


def format_strategy(x: Strategy) -> str:
    return "_" if x is None else x


def format_profile(net: SocialNetwork, s: JointStrategy) -> str:
    return ",".join(f"{i}={format_strategy(x)}" for i, x in zip(net.nodes, s))


# -- payoffs ----------------------------------------------------------------

def neighbors(net: SocialNetwork, i: str) -> set[str]:
    """N(i): nodes with an edge into i."""
    return {e.source for e in net.in_edges(i)}


def supporters(net: SocialNetwork, s: JointStrategy, i: str, t: str) -> set[str]:
    """Neighbours of i that adopted product t in s."""
    if t not in net.products:
        raise UnknownProductError(f"no product {t!r}")
    idx = net._game.index
    return {e.source for e in net.in_edges(i) if s[idx[e.source]] == t}


def payoff(net: SocialNetwork, s: JointStrategy, i: str) -> Fraction:
    check_profile(net, s)
    g = net._game
    k = net.index(i)
    return Fraction(g.value(k, s[k], s), g.scale)


def deviation_payoff(net: SocialNetwork, s: JointStrategy, i: str, x: Strategy) -> Fraction:
    """Payoff of i after unilaterally switching to x."""
    g = net._game
    k = net.index(i)
    if x not in g.options[k]:
        raise InvalidProfileError(f"node {i} cannot play {x!r}")
    return Fraction(g.value(k, x, s), g.scale)


def social_welfare(net: SocialNetwork, s: JointStrategy) -> Fraction:
    check_profile(net, s)
    g = net._game
    return Fraction(sum(g.value(k, s[k], s) for k in range(g.n)), g.scale)


# -- graph classes ----------------------------------------------------------

def cycle_order(net: SocialNetwork) -> list[str] | None:
    """Nodes along the single directed cycle, starting at the least id, or
    None when the graph is not a simple cycle."""
    g = net._game
    n = g.n
    if n < 2:
        return None
    if any(len(p) != 1 for p in g.preds) or any(len(v) != 1 for v in g.succs):
        return None
    order = [0]
    while len(order) < n:
        nxt = g.succs[order[-1]][0]
        if nxt == 0:
            return None
        order.append(nxt)
    if g.succs[order[-1]][0] != 0:
        return None
    return [g.ids[k] for k in order]


def classify_graph(net: SocialNetwork) -> GraphClass:
    g = net._game
    is_dag = topological_order(range(g.n), lambda k: g.succs[k]) is not None
    return GraphClass(
        is_dag=is_dag,
        is_simple_cycle=cycle_order(net) is not None,
        has_no_source_nodes=not any(g.source),
    )
