"""Hopcroft-Karp maximum bipartite matching on integer-labelled vertices.

Vertices are ``0..n_left-1`` and ``0..n_right-1``; adjacency lists are
scanned in the given order, so the result is fully deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

__all__ = ["hopcroft_karp"]

_FREE = -1


def hopcroft_karp(n_left: int, n_right: int, adj: Sequence[Sequence[int]]) -> list[int]:
    """Return ``mate`` with ``mate[u]`` the right partner of ``u`` or ``-1``."""
    mate_l = [_FREE] * n_left
    mate_r = [_FREE] * n_right
    inf = n_left + 1
    dist = [0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if mate_l[u] == _FREE:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        found = inf
        while queue:
            u = queue.popleft()
            if dist[u] >= found:
                continue
            for v in adj[u]:
                w = mate_r[v]
                if w == _FREE:
                    found = min(found, dist[u] + 1)
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found != inf

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = mate_r[v]
            if w == _FREE or (dist[w] == dist[u] + 1 and dfs(w)):
                mate_l[u], mate_r[v] = v, u
                return True
        dist[u] = inf
        return False

    while bfs():
        for u in range(n_left):
            if mate_l[u] == _FREE:
                dfs(u)
    return mate_l
