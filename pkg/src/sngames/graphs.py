"""Small directed-graph helpers: SCCs, deterministic topological order,
reachability. Graphs are given as a node list plus a successor function."""

from __future__ import annotations

import heapq
from collections.abc import Callable, Hashable, Iterable
from itertools import count


def strongly_connected_components(nodes: Iterable[Hashable],
                                  successors: Callable) -> list[list]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order of the condensation:
    a component is emitted only after every component it can reach.
    """
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list[list] = []
    counter = count()

    for root in nodes:
        if root in index:
            continue
        index[root] = lowlink[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = lowlink[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    lowlink[parent] = min(lowlink[parent], lowlink[v])
                if lowlink[v] == index[v]:
                    component = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        component.append(w)
                        if w == v:
                            break
                    result.append(component)
    return result


def topological_order(nodes: Iterable, successors: Callable, key=None) -> list | None:
    """Kahn's algorithm, always releasing the least ready node first.

    Returns None when the graph has a cycle.
    """
    nodes = list(nodes)
    key = key or (lambda v: v)
    indegree = {v: 0 for v in nodes}
    for v in nodes:
        for w in successors(v):
            indegree[w] += 1
    ready = [(key(v), v) for v in nodes if indegree[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, v = heapq.heappop(ready)
        order.append(v)
        for w in successors(v):
            indegree[w] -= 1
            if indegree[w] == 0:
                heapq.heappush(ready, (key(w), w))
    return order if len(order) == len(nodes) else None


def reachable(starts: Iterable, successors: Callable) -> set:
    """All nodes reachable from ``starts`` (the starts included)."""
    seen = set(starts)
    frontier = list(seen)
    while frontier:
        v = frontier.pop()
        for w in successors(v):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen
