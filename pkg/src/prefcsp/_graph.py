from __future__ import annotations

import heapq
from collections.abc import Iterable, Sequence


def toposort(nodes: Sequence[str], arcs: Iterable[tuple[str, str]]) -> list[str] | None:
    """Lexicographically smallest topological order (by position in ``nodes``).

    Returns None when the graph has a cycle.
    """
    pos = {n: i for i, n in enumerate(nodes)}
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    indeg = dict.fromkeys(nodes, 0)
    for a, b in set(arcs):
        succ[a].append(b)
        indeg[b] += 1
    heap = [pos[n] for n in nodes if indeg[n] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        n = nodes[heapq.heappop(heap)]
        order.append(n)
        for m in succ[n]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(heap, pos[m])
    return order if len(order) == len(nodes) else None


def find_cycle(nodes: Sequence[str], arcs: Iterable[tuple[str, str]]) -> list[str]:
    succ: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in arcs:
        succ[a].append(b)
    color = dict.fromkeys(nodes, 0)
    stack: list[str] = []

    def visit(n: str) -> list[str] | None:
        color[n] = 1
        stack.append(n)
        for m in succ[n]:
            if color[m] == 1:
                return stack[stack.index(m):] + [m]
            if color[m] == 0:
                found = visit(m)
                if found:
                    return found
        stack.pop()
        color[n] = 2
        return None

    for n in nodes:
        if color[n] == 0:
            found = visit(n)
            if found:
                return found
    return []
