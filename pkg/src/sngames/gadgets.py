"""Generators for the example networks, the PARTITION reduction and random
instance ensembles. Every generator is a pure function of its arguments."""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, SNGError
from .model import SocialNetwork, as_rational, validate_network

DAG = "dag"
SIMPLE_CYCLE = "cycle"
NO_SOURCE = "nosource"
GENERAL = "general"
GRAPH_CLASSES = (DAG, SIMPLE_CYCLE, NO_SOURCE, GENERAL)

FIG1_DEFAULTS = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))


def _constraint(ok: bool, msg: str) -> None:
    if not ok:
        raise PreconditionError(msg, "constraint-violated")


@dataclass(frozen=True)
class PartitionInstance:
    values: tuple

    def __post_init__(self):
        values = tuple(as_rational(v) for v in self.values)
        object.__setattr__(self, "values", values)
        _constraint(len(values) > 0, "a PARTITION instance needs at least one value")
        _constraint(all(v > 0 for v in values), "PARTITION values must be positive")
        _constraint(sum(values) == 1, f"values must sum to 1, got {sum(values)}")

    @classmethod
    def normalised(cls, values: Iterable) -> PartitionInstance:
        values = [as_rational(v) for v in values]
        total = sum(values)
        return cls(tuple(v / total for v in values))


def _fig1_parts(theta, w1, w2, prefix="", top="t1", feed=None):
    """Nodes/edges of the no-equilibrium triangle. ``feed`` replaces the
    {top}-source node with an existing node id (used by the reduction)."""
    tri = [f"{prefix}1", f"{prefix}2", f"{prefix}3"]
    src_top = feed or f"{prefix}src_{top}"
    src_t2, src_t3 = f"{prefix}src_t2", f"{prefix}src_t3"
    psets = {
        tri[0]: {top, "t2"}, tri[1]: {top, "t3"}, tri[2]: {"t2", "t3"},
        src_t3: {"t3"}, src_t2: {"t2"},
    }
    edges = [
        (tri[0], tri[1], w2), (tri[1], tri[2], w2), (tri[2], tri[0], w2),
        (src_top, tri[0], w1), (src_t3, tri[1], w1), (src_t2, tri[2], w1),
    ]
    if feed is None:
        psets[src_top] = {top}
    return psets, edges


def _check_fig1_params(theta, w1, w2):
    _constraint(0 < theta < w1 < w2, f"need 0 < theta < w1 < w2, got {theta}, {w1}, {w2}")
    _constraint(w1 + w2 <= 1, f"w1 + w2 = {w1 + w2} exceeds 1")


def gen_fig1(theta=FIG1_DEFAULTS[0], w1=FIG1_DEFAULTS[1], w2=FIG1_DEFAULTS[2],
             c0=1) -> SocialNetwork:
    """Triangle 1->2->3->1 (weight w2) fed by sources {t1}->1, {t3}->2,
    {t2}->3 (weight w1); every threshold equals theta. No equilibrium."""
    theta, w1, w2 = map(as_rational, (theta, w1, w2))
    _check_fig1_params(theta, w1, w2)
    psets, edges = _fig1_parts(theta, w1, w2)
    thr = {(i, t): theta for i, ps in psets.items() for t in ps}
    return SocialNetwork(psets.keys(), edges, psets, thr, c0)


def gen_partition_reduction(inst: PartitionInstance, theta=FIG1_DEFAULTS[0],
                            w1=FIG1_DEFAULTS[1], w2=FIG1_DEFAULTS[2], c0=1) -> SocialNetwork:
    """Network with an equilibrium iff ``inst`` splits into two halves.

    Selector nodes x1..xn pick t1 or t1' and feed nodes a and b with weight
    a_i each. Node a stands in for the {t1}-source of one no-equilibrium
    triangle, node b for the {t1'}-source of a copy with t1 renamed t1'.
    """
    theta, w1, w2 = map(as_rational, (theta, w1, w2))
    _check_fig1_params(theta, w1, w2)
    half = Fraction(1, 2)
    width = len(str(len(inst.values)))
    selectors = [f"x{k:0{width}d}" for k in range(1, len(inst.values) + 1)]
    psets = {x: {"t1", "t1'"} for x in selectors}
    thr = {}
    edges = []
    for x, a_i in zip(selectors, inst.values):
        edges += [(x, "a", a_i), (x, "b", a_i)]
    psets["a"], psets["b"] = {"t1"}, {"t1'"}
    thr[("a", "t1")] = thr[("b", "t1'")] = half
    for prefix, top, feed in (("A", "t1", "a"), ("B", "t1'", "b")):
        ps, es = _fig1_parts(theta, w1, w2, prefix=prefix, top=top, feed=feed)
        psets.update(ps)
        edges += es
    for i, ps in psets.items():
        for t in ps:
            thr.setdefault((i, t), theta)
    return SocialNetwork(psets.keys(), edges, psets, thr, c0)


def gen_fig3(theta=Fraction(1, 4), w=Fraction(1, 2), c0=1) -> SocialNetwork:
    """3-cycle 1->2->3->1 where everyone can pick t1 or t2."""
    theta, w = as_rational(theta), as_rational(w)
    _constraint(0 < theta < w <= 1, f"need 0 < theta < w <= 1, got {theta}, {w}")
    nodes = ["1", "2", "3"]
    psets = {i: {"t1", "t2"} for i in nodes}
    thr = {(i, t): theta for i in nodes for t in ("t1", "t2")}
    edges = [("1", "2", w), ("2", "3", w), ("3", "1", w)]
    return SocialNetwork(nodes, edges, psets, thr, c0)


def gen_pos_witness(c0=1) -> SocialNetwork:
    """2-cycle whose only equilibrium is all-NULL although (t1, t1) has
    welfare 3/10, so the price of stability is infinite."""
    half = Fraction(1, 2)
    psets = {"1": {"t1", "t2"}, "2": {"t1", "t2"}}
    thr = {("1", "t1"): Fraction(1, 10), ("2", "t1"): Fraction(6, 10),
           ("1", "t2"): Fraction(6, 10), ("2", "t2"): Fraction(1, 10)}
    return SocialNetwork(["1", "2"], [("1", "2", half), ("2", "1", half)], psets, thr, c0)


def gen_dag_inefficiency(k: int, c0=1) -> SocialNetwork:
    """DAG family whose unique equilibrium stays near welfare 2*c0 + 1/2
    while the optimum grows by about 9/10 per follower.

    Sources s1 ({t1}, weight 3/5) and s2 ({t2}, weight 2/5) feed a hub that
    prefers t1; followers f1..fk only accept t2 from the hub.
    """
    if k < 1:
        raise PreconditionError("need at least one follower", "constraint-violated")
    tenth = Fraction(1, 10)
    width = len(str(k))
    followers = [f"f{j:0{width}d}" for j in range(1, k + 1)]
    psets = {"s1": {"t1"}, "s2": {"t2"}, "hub": {"t1", "t2"}}
    edges = [("s1", "hub", Fraction(3, 5)), ("s2", "hub", Fraction(2, 5))]
    for f in followers:
        psets[f] = {"t2"}
        edges.append(("hub", f, 1))
    thr = {(i, t): tenth for i, ps in psets.items() for t in ps}
    return SocialNetwork(psets.keys(), edges, psets, thr, c0)


def gen_equitable(nodes: Sequence, edges: Iterable, product_sets: Mapping,
                  thresholds: Mapping, c0=1) -> SocialNetwork:
    """Give every incoming edge of node i the weight 1/|N(i)|.

    ``edges`` are unweighted (source, target) pairs.
    """
    edges = list(edges)
    if any(u == v for u, v in edges):
        raise PreconditionError("equitable shapes must not contain self-loops", "invalid-shape")
    if len(set(edges)) != len(edges):
        raise PreconditionError("duplicate edge in shape", "invalid-shape")
    indeg = {}
    for _, v in edges:
        indeg[v] = indeg.get(v, 0) + 1
    weighted = [(u, v, Fraction(1, indeg[v])) for u, v in edges]
    return SocialNetwork(nodes, weighted, product_sets, thresholds, c0)


def equitable_from(net: SocialNetwork) -> SocialNetwork:
    """Re-weight an existing network equitably, keeping everything else."""
    return gen_equitable(net.nodes, [(e.source, e.target) for e in net.edges],
                         net.product_sets, net.thresholds, net.c0)


# -- random ensembles -------------------------------------------------------

WEIGHT_DENOMINATOR = 16
THRESHOLD_GRID = [Fraction(k, 8) for k in range(1, 9)]


def gen_random(graph_class: str, n: int, product_count: int, seed: int,
               edge_prob: float = 0.4, c0=1) -> SocialNetwork:
    """Reproducible random network of the requested class.

    Uses Python's Mersenne Twister seeded with ``seed``. Weights are k/16,
    rescaled so each node's incoming weights sum to at most 1; thresholds
    come from the grid {1/8, ..., 8/8}.
    """
    if graph_class not in GRAPH_CLASSES:
        raise SNGError(f"unknown graph class {graph_class!r}", "unsatisfiable-class")
    if n < 1 or product_count < 1:
        raise SNGError("need n >= 1 and at least one product", "unsatisfiable-class")
    if graph_class in (SIMPLE_CYCLE, NO_SOURCE) and n < 2:
        raise SNGError(f"a {graph_class} network needs at least two nodes "
                       "(self-loops are not allowed)", "unsatisfiable-class")
    rng = random.Random(seed)
    width = len(str(n - 1))
    ids = [f"n{k:0{width}d}" for k in range(n)]
    products = [f"t{k}" for k in range(1, product_count + 1)]

    order = ids[:]
    rng.shuffle(order)
    pairs: list[tuple[str, str]] = []
    if graph_class == DAG:
        pairs = [(order[a], order[b]) for a in range(n) for b in range(a + 1, n)
                 if rng.random() < edge_prob]
    elif graph_class == SIMPLE_CYCLE:
        pairs = [(order[a], order[(a + 1) % n]) for a in range(n)]
    else:
        pairs = [(u, v) for u in ids for v in ids if u != v and rng.random() < edge_prob]
        if graph_class == NO_SOURCE:
            targets = {v for _, v in pairs}
            for v in ids:
                if v not in targets:
                    u = rng.choice([x for x in ids if x != v])
                    pairs.append((u, v))

    incoming: dict[str, list[str]] = {}
    for u, v in pairs:
        incoming.setdefault(v, []).append(u)
    edges = []
    for v, us in sorted(incoming.items()):
        raw = [Fraction(rng.randint(1, WEIGHT_DENOMINATOR), WEIGHT_DENOMINATOR) for _ in us]
        total = sum(raw)
        if total > 1:
            raw = [w / total for w in raw]
        edges += [(u, v, w) for u, w in zip(us, raw)]

    psets = {}
    thr = {}
    for i in ids:
        ps = {t for t in products if rng.random() < 0.7} or {rng.choice(products)}
        psets[i] = ps
        for t in sorted(ps):
            thr[(i, t)] = rng.choice(THRESHOLD_GRID)
    net = SocialNetwork(ids, edges, psets, thr, c0, products=products)
    validate_network(net)
    return net
