"""Small shared helpers for directed acyclic graphs.

Both graph flavours in this package (provenance graphs and purpose graphs) are
tiny, so plain dict-based traversals beat pulling in a graph library.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Mapping
from typing import TypeVar

N = TypeVar("N", bound=Hashable)


def topological_order(nodes: Iterable[N], successors: Mapping[N, Iterable[N]]) -> list[N] | None:
    """Kahn's algorithm. Returns None when the edge relation has a cycle."""
    nodes = list(nodes)
    indegree: dict[N, int] = {n: 0 for n in nodes}
    for n in nodes:
        for m in successors.get(n, ()):
            indegree[m] += 1
    queue = deque(n for n in nodes if indegree[n] == 0)
    order: list[N] = []
    while queue:
        n = queue.popleft()
        order.append(n)
        for m in successors.get(n, ()):
            indegree[m] -= 1
            if indegree[m] == 0:
                queue.append(m)
    if len(order) != len(nodes):
        return None
    return order


def reachable_from(start: N, successors: Mapping[N, Iterable[N]]) -> set[N]:
    """All nodes reachable from `start`, including `start` itself."""
    seen = {start}
    stack = [start]
    while stack:
        n = stack.pop()
        for m in successors.get(n, ()):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return seen
