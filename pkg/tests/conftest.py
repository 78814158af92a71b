"""Shared helpers: independent brute-force oracles and network strategies.

The oracles below recompute payoffs straight from the edge list with
Fractions and never touch the package's integer-scaled game view, the
pruned enumerator or the fixpoint code.
"""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from sngames.model import SocialNetwork

F = Fraction


# -- oracles ------------------------------------------------------------------

def oracle_payoff(net, s, i, x="__own__"):
    choice = dict(zip(net.nodes, s))
    x = choice[i] if x == "__own__" else x
    if x is None:
        return F(0)
    incoming = [e for e in net.edges if e.target == i]
    if not incoming:
        return net.c0
    return sum((e.weight for e in incoming if choice[e.source] == x), F(0)) - net.thresholds[(i, x)]


def oracle_strategies(net, i):
    return sorted(net.product_sets[i]) + [None]


def oracle_deviators(net, s):
    out = []
    for i in net.nodes:
        own = oracle_payoff(net, s, i)
        if any(oracle_payoff(net, s, i, x) > own for x in oracle_strategies(net, i)):
            out.append(i)
    return out


def oracle_is_nash(net, s):
    return not oracle_deviators(net, s)


def oracle_profiles(net):
    return itertools.product(*(oracle_strategies(net, i) for i in net.nodes))


def oracle_enumerate(net):
    return {s for s in oracle_profiles(net) if oracle_is_nash(net, s)}


def oracle_welfare(net, s):
    return sum((oracle_payoff(net, s, i) for i in net.nodes), F(0))


def oracle_half_subset(values):
    total = sum(values)
    idx = range(len(values))
    return any(sum(values[k] for k in c) * 2 == total
               for r in range(len(values) + 1) for c in itertools.combinations(idx, r))


def oracle_strongly_connected(net, members):
    members = set(members)
    succ = {i: [e.target for e in net.edges if e.source == i and e.target in members] for i in members}

    def reach(a):
        seen, todo = {a}, [a]
        while todo:
            for b in succ[todo.pop()]:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        return seen
    return all(reach(a) == members for a in members)


def oracle_self_sustaining_sets(net, t):
    """Every self-sustaining strongly connected node set for t, by subsets."""
    capable = [i for i in net.nodes if t in net.product_sets[i]]
    found = []
    for r in range(1, len(capable) + 1):
        for c in itertools.combinations(capable, r):
            c = set(c)
            if not oracle_strongly_connected(net, c):
                continue
            if all(sum((e.weight for e in net.edges if e.target == i and e.source in c), F(0))
                   >= net.thresholds[(i, t)] for i in c):
                found.append(frozenset(c))
    return found


# -- builders -------------------------------------------------------------------

def build(nodes, edges, psets, thresholds, c0=1):
    """Shorthand: thresholds may be a single value applied everywhere."""
    if not isinstance(thresholds, dict):
        thresholds = {(i, t): thresholds for i in nodes for t in psets[i]}
    return SocialNetwork(nodes, edges, psets, thresholds, c0)


def cycle(n, w, theta, products=("t",)):
    nodes = [str(k) for k in range(1, n + 1)]
    edges = [(nodes[k], nodes[(k + 1) % n], w) for k in range(n)]
    return build(nodes, edges, {i: set(products) for i in nodes}, theta)


def random_two_player(seed, shape):
    """Random 2-player game on 1->2 ('dag') or 1<->2 ('cycle'), |P| <= 4."""
    rng = random.Random(seed)
    products = [f"t{k}" for k in range(1, rng.randint(1, 4) + 1)]
    psets = {i: {t for t in products if rng.random() < 0.7} or {products[0]} for i in ("1", "2")}
    edges = [("1", "2", F(rng.randint(1, 16), 16))]
    if shape == "cycle":
        edges.append(("2", "1", F(rng.randint(1, 16), 16)))
    thr = {(i, t): F(rng.randint(1, 8), 8) for i in psets for t in psets[i]}
    return SocialNetwork(["1", "2"], edges, psets, thr)


@st.composite
def networks(draw, max_nodes=4, max_products=3, source_free=False):
    """Small valid networks with arbitrary shape."""
    n = draw(st.integers(2 if source_free else 1, max_nodes))
    nodes = [f"v{k}" for k in range(n)]
    products = [f"p{k}" for k in range(draw(st.integers(1, max_products)))]
    pairs = [(u, v) for u in nodes for v in nodes if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    if source_free:
        for v in nodes:
            if not any(b == v for _, b in chosen):
                chosen.append((draw(st.sampled_from([u for u in nodes if u != v])), v))
    edges = []
    for v in nodes:
        ins = [u for u, b in chosen if b == v]
        raw = [F(draw(st.integers(1, 8)), 8) for _ in ins]
        total = sum(raw)
        if total > 1:
            raw = [w / total for w in raw]
        edges += [(u, v, w) for u, w in zip(ins, raw)]
    psets = {i: set(draw(st.lists(st.sampled_from(products), min_size=1, unique=True))) for i in nodes}
    thr = {(i, t): F(draw(st.integers(1, 8)), 8) for i in nodes for t in psets[i]}
    c0 = F(draw(st.integers(1, 4)), 2)
    return SocialNetwork(nodes, edges, psets, thr, c0)


@st.composite
def network_and_profile(draw, **kw):
    net = draw(networks(**kw))
    s = tuple(draw(st.sampled_from(oracle_strategies(net, i))) for i in net.nodes)
    return net, s


# -- acceptance reporting ---------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    if hasattr(rep, "wasxfail"):
        status = "xfail"
    else:
        status = "pass" if rep.passed else "fail"
    _CRITERIA.setdefault(mark.args[0], []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        failed = [name for name, status in results if status == "fail"]
        known = [name for name, status in results if status == "xfail"]
        verdict = "FAIL" if failed else "PARTIAL" if known else "PASS"
        line = f"criterion {n}: {verdict} ({len(results)} checks"
        if known:
            line += f", {len(known)} literal check(s) unattainable, recorded as strict xfail"
        if failed:
            line += f"; failing: {', '.join(failed)}"
        terminalreporter.write_line(line + ")")
