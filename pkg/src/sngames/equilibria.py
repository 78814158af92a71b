"""Nash equilibria: checking, exhaustive enumeration, and the polynomial
procedures for DAGs, simple cycles and source-free networks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import GraphClassError, GuardExceededError, PreconditionError, UnknownProductError
from .graphs import reachable, strongly_connected_components, topological_order
from .model import (
    NULL,
    JointStrategy,
    SocialNetwork,
    Strategy,
    all_null,
    check_profile,
    classify_graph,
    cycle_order,
    profile_key,
)

DEFAULT_GUARD = 10**6


class NEClass(enum.Enum):
    TRIVIAL = "trivial"
    NON_TRIVIAL_MIXED = "nontrivial-mixed"
    DETERMINED = "determined"


class Method(enum.Enum):
    BRUTE_FORCE = "brute"
    DAG_CONSTRUCTION = "dag"
    CYCLE_PROCEDURE = "cycle"
    SOURCE_FREE_FIXPOINT = "sourcefree"
    DIRECT_CHECK = "direct"


KINDS = ("trivial", "nontrivial", "determined")


def matches_kind(cls: NEClass, kind: str) -> bool:
    if kind == "trivial":
        return cls is NEClass.TRIVIAL
    if kind == "nontrivial":
        return cls is not NEClass.TRIVIAL
    if kind == "determined":
        return cls is NEClass.DETERMINED
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class NEReport:
    exists: bool
    method: Method
    witness: JointStrategy | None = None
    classification: NEClass | None = None
    counterexample: tuple | None = None
    work: int = 0
    note: str | None = None


@dataclass(frozen=True)
class SelfSustainingSCS:
    product: str
    members: frozenset


def classify_ne(s: JointStrategy) -> NEClass:
    nulls = sum(x is None for x in s)
    if nulls == len(s):
        return NEClass.TRIVIAL
    if nulls == 0:
        return NEClass.DETERMINED
    return NEClass.NON_TRIVIAL_MIXED


# -- best responses ---------------------------------------------------------

def best_responses(net: SocialNetwork, s: JointStrategy, i: str) -> tuple:
    """All strategies of i maximising its payoff against s_{-i}, canonical order."""
    check_profile(net, s)
    g = net._game
    k = net.index(i)
    values = [(g.value(k, x, s), x) for x in g.options[k]]
    top = max(v for v, _ in values)
    return tuple(x for v, x in values if v == top)


def nash_violation(net: SocialNetwork, s: JointStrategy) -> tuple | None:
    """First node (canonical order) not best-responding in s, paired with its
    first best response; None when s is an equilibrium."""
    check_profile(net, s)
    g = net._game
    for k in range(g.n):
        current = g.value(k, s[k], s)
        best = max(g.options[k], key=lambda x: g.value(k, x, s))
        if g.value(k, best, s) > current:
            return g.ids[k], best
    return None


def is_nash(net: SocialNetwork, s: JointStrategy) -> bool:
    return nash_violation(net, s) is None


# -- exhaustive enumeration -------------------------------------------------

def _search_order(g) -> list[int]:
    """Nodes grouped by SCC, upstream components first, so each node's
    equilibrium condition can be checked as early as possible."""
    comps = strongly_connected_components(range(g.n), lambda k: g.succs[k])
    return [k for comp in reversed(comps) for k in sorted(comp)]


def enumerate_ne(net: SocialNetwork, guard: int = DEFAULT_GUARD) -> list[JointStrategy]:
    """Every Nash equilibrium, sorted by :func:`profile_key`.

    Exhaustive backtracking over joint strategies. A node's best-response
    condition is tested as soon as it and all its neighbours are assigned,
    which prunes without ever skipping a candidate.
    """
    count = net.state_count()
    if count > guard:
        raise GuardExceededError(count, guard)
    g = net._game
    n = g.n
    order = _search_order(g)
    pos = {k: p for p, k in enumerate(order)}
    checks: list[list[int]] = [[] for _ in range(n)]
    for k in range(n):
        checks[max([pos[k]] + [pos[j] for j, _ in g.preds[k]])].append(k)

    s: list[Strategy] = [NULL] * n
    found: list[JointStrategy] = []

    def extend(p: int) -> None:
        if p == n:
            found.append(tuple(s))
            return
        k = order[p]
        for x in g.options[k]:
            s[k] = x
            if all(g.value(c, s[c], s) >= g.best_value(c, s) for c in checks[p]):
                extend(p + 1)
        s[k] = NULL

    extend(0)
    found.sort(key=profile_key)
    return found


# -- DAGs -------------------------------------------------------------------

def construct_ne_dag(net: SocialNetwork) -> JointStrategy:
    """Greedy equilibrium on a DAG: in topological order every node plays its
    first best response to its (already fixed) predecessors."""
    g = net._game
    order = topological_order(range(g.n), lambda k: g.succs[k])
    if order is None:
        raise GraphClassError("the underlying graph has a cycle", "not-a-dag")
    s: list[Strategy] = [NULL] * g.n
    for k in order:
        s[k] = max(g.options[k], key=lambda x: g.value(k, x, s))
    return tuple(s)


# -- simple cycles ----------------------------------------------------------

def decide_ne_cycle(net: SocialNetwork, kind: str = "nontrivial") -> NEReport:
    """Non-trivial / determined equilibria on a simple cycle.

    In an equilibrium on a cycle a node playing a product needs its unique
    predecessor on the same product with enough weight, so product players
    are closed under predecessors: nobody or everybody plays one product t.
    Both kinds therefore exist iff some t shared by all nodes has
    w(pred(i), i) >= theta(i, t) everywhere. ``work`` counts threshold tests.
    """
    if kind not in ("nontrivial", "determined"):
        raise ValueError(f"kind must be 'nontrivial' or 'determined', not {kind!r}")
    order = cycle_order(net)
    if order is None:
        raise GraphClassError("the underlying graph is not a simple cycle", "not-a-simple-cycle")
    common = set(net.products)
    for i in order:
        common &= net.product_sets[i]
    work = 0
    for t in sorted(common):
        ok = True
        for prev, i in zip([order[-1]] + order[:-1], order):
            work += 1
            if net.weight(prev, i) < net.thresholds[(i, t)]:
                ok = False
                break
        if ok:
            return NEReport(True, Method.CYCLE_PROCEDURE, (t,) * len(order),
                            NEClass.DETERMINED, work=work)
    return NEReport(False, Method.CYCLE_PROCEDURE, work=work)


# -- source-free networks ---------------------------------------------------

def _sustained(net: SocialNetwork, t: str, allowed: set[str]) -> list[frozenset]:
    """Stages of the pruning X^0 = allowed, X^{m+1} = members of ``allowed``
    whose in-weight from X^m reaches theta(i, t); ends at the fixpoint."""
    stages = [frozenset(allowed)]
    while True:
        cur = stages[-1]
        nxt = frozenset(
            i for i in cur
            if sum((e.weight for e in net.in_edges(i) if e.source in cur), Fraction(0))
            >= net.thresholds[(i, t)]
        )
        if nxt == cur:
            return stages
        stages.append(nxt)


def _capable(net: SocialNetwork, t: str) -> set[str]:
    if t not in net.products:
        raise UnknownProductError(f"no product {t!r}")
    return {i for i in net.nodes if t in net.product_sets[i]}


def xt_stages(net: SocialNetwork, t: str) -> list[frozenset]:
    return _sustained(net, t, _capable(net, t))


def compute_xt(net: SocialNetwork, t: str) -> frozenset:
    """Greatest set of t-capable nodes each of which gets at least its
    threshold of weight from inside the set."""
    return xt_stages(net, t)[-1]


def _profile_on(net: SocialNetwork, members, t: str) -> JointStrategy:
    return tuple(t if i in members else NULL for i in net.nodes)


def find_nontrivial_ne_sourcefree(net: SocialNetwork) -> NEReport:
    g = net._game
    if any(g.source):
        raise GraphClassError("network has source nodes", "has-source-nodes")
    work = 0
    for t in net.products:
        stages = xt_stages(net, t)
        work += len(stages)
        if stages[-1]:
            s = _profile_on(net, stages[-1], t)
            return NEReport(True, Method.SOURCE_FREE_FIXPOINT, s, classify_ne(s), work=work)
    return NEReport(False, Method.SOURCE_FREE_FIXPOINT, work=work)


def _induced_sccs(net: SocialNetwork, members) -> list[list[str]]:
    members = set(members)
    succ = lambda i: [j for j in net.successors(i) if j in members]
    return strongly_connected_components(sorted(members), succ)


def is_self_sustaining(net: SocialNetwork, product: str, members) -> bool:
    members = set(members)
    if not members or not members <= set(net.nodes):
        return False
    if len(_induced_sccs(net, members)) != 1:
        return False
    for i in members:
        if product not in net.product_sets[i]:
            return False
        inside = sum((e.weight for e in net.in_edges(i) if e.source in members), Fraction(0))
        if inside < net.thresholds[(i, product)]:
            return False
    return True


def _source_components(net: SocialNetwork, members) -> list[frozenset]:
    """SCCs of the induced subgraph with no edge entering from the rest of it."""
    members = set(members)
    out = []
    for comp in _induced_sccs(net, members):
        comp = set(comp)
        if not any(e.source in members - comp for i in comp for e in net.in_edges(i)):
            out.append(frozenset(comp))
    return out


def find_self_sustaining_scs(net: SocialNetwork, t: str) -> SelfSustainingSCS | None:
    """A self-sustaining strongly connected set for t, or None if none exists.

    Every such set lies inside X_t (the greatest fixpoint), and any source
    component of X_t only receives X_t-weight from itself, so it qualifies.
    Ties go to the component holding the least node id.
    """
    core = compute_xt(net, t)
    if not core:
        return None
    comps = _source_components(net, core)
    return SelfSustainingSCS(t, min(comps, key=min))


def expand_r(net: SocialNetwork, core: SelfSustainingSCS) -> JointStrategy:
    """Grow a self-sustaining core by every node that can adopt its product
    from the already grown set; t on the result, NULL elsewhere."""
    t = core.product
    if t not in net.products or not is_self_sustaining(net, t, core.members):
        raise PreconditionError("core is not a self-sustaining SCS", "invalid-core")
    grown = set(core.members)
    changed = True
    while changed:
        changed = False
        for j in net.nodes:
            if j in grown or t not in net.product_sets[j]:
                continue
            w = sum((e.weight for e in net.in_edges(j) if e.source in grown), Fraction(0))
            if w >= net.thresholds[(j, t)]:
                grown.add(j)
                changed = True
    return _profile_on(net, grown, t)


def verify_support_structure(net: SocialNetwork, s: JointStrategy) -> bool:
    """Check that every adopter of t in the non-trivial equilibrium s is
    reachable from a self-sustaining SCS for t made of t-adopters."""
    g = net._game
    if any(g.source):
        raise GraphClassError("network has source nodes", "has-source-nodes")
    check_profile(net, s)
    if classify_ne(s) is NEClass.TRIVIAL:
        raise PreconditionError("profile is trivial", "trivial-profile")
    if not is_nash(net, s):
        raise PreconditionError("profile is not a Nash equilibrium", "not-a-nash-equilibrium")
    for t in sorted({x for x in s if x is not None}):
        adopters = {i for i, x in zip(net.nodes, s) if x == t}
        # any self-sustaining SCS inside the adopters sits in this fixpoint,
        # and is reachable from one of its source components
        inner = _sustained(net, t, adopters)[-1]
        roots = set().union(*_source_components(net, inner)) if inner else set()
        covered = reachable(roots, net.successors)
        if not adopters <= covered:
            return False
    return True


verify_lemma1_structure = verify_support_structure


# -- dispatch ---------------------------------------------------------------

def solve_ne(net: SocialNetwork, kind: str = "nontrivial", method: str = "auto",
             guard: int = DEFAULT_GUARD) -> NEReport:
    """Decide whether an equilibrium of the given kind exists.

    ``auto`` picks the polynomial procedure for the network's graph class
    and falls back to guarded enumeration.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    cls = classify_graph(net)
    if method == "auto":
        if kind == "trivial":
            s = all_null(net)
            v = nash_violation(net, s)
            if v is None:
                return NEReport(True, Method.DIRECT_CHECK, s, NEClass.TRIVIAL)
            return NEReport(False, Method.DIRECT_CHECK, counterexample=v)
        if cls.is_simple_cycle:
            method = "cycle"
        elif kind == "nontrivial" and cls.is_dag:
            method = "dag"
        elif kind == "nontrivial" and cls.has_no_source_nodes:
            method = "sourcefree"
        else:
            method = "brute"

    if method == "brute":
        note = None
        if kind == "determined" and not cls.is_simple_cycle:
            note = "determined equilibria are NP-complete to decide on this graph class; used exhaustive search"
        for s in enumerate_ne(net, guard):
            c = classify_ne(s)
            if matches_kind(c, kind):
                return NEReport(True, Method.BRUTE_FORCE, s, c, note=note)
        return NEReport(False, Method.BRUTE_FORCE, note=note)
    if kind == "trivial":
        raise PreconditionError(f"method {method!r} does not decide trivial equilibria", "method-unsupported")
    if method == "cycle":
        return decide_ne_cycle(net, kind)
    if kind == "determined":
        raise PreconditionError(f"method {method!r} does not decide determined equilibria", "method-unsupported")
    if method == "dag":
        s = construct_ne_dag(net)
        return NEReport(True, Method.DAG_CONSTRUCTION, s, classify_ne(s))
    if method == "sourcefree":
        return find_nontrivial_ne_sourcefree(net)
    raise ValueError(f"unknown method {method!r}")
