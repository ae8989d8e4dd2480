"""Depth-first simple-path search between two containers.

Both searches walk outgoing links in ascending link id and prune a branch
as soon as the end container can no longer be reached within the
remaining length budget, using two bounds recomputed on the subgraph that
excludes already-visited containers:

* the hop distance to the end container (a lower bound on the remainder)
* the number of containers that are reachable from the current one and can
  still reach the end (an upper bound on the remainder)

The pruning is sound, so the searches are exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import Network

MAX_DEPTH = 1000
_INF = float("inf")


@dataclass
class LinkGraph:
    start: int
    end: int
    # container -> [(link id, destination)], ascending link id
    succ: dict[int, list[tuple[int, int]]]
    pred: dict[int, list[int]]

    @classmethod
    def from_network(cls, network: Network) -> "LinkGraph":
        if network.start_container is None or network.end_container is None:
            raise ValueError("network has no start/end containers")
        succ: dict[int, list[tuple[int, int]]] = {cid: [] for cid in network.containers}
        pred: dict[int, list[int]] = {cid: [] for cid in network.containers}
        for lid in sorted(network.links):
            link = network.links[lid]
            succ[link.origin].append((lid, link.destination))
            pred[link.destination].append(link.origin)
        return cls(network.start_container, network.end_container, succ, pred)

    def bounds(self, node: int, visited: set[int]) -> tuple[float, int]:
        """(min hops, max hops) still available from ``node`` to the end.

        ``visited`` holds the containers on the current partial path,
        ``node`` included. Returns ``(inf, 0)`` when the end is unreachable.
        """
        end = self.end
        dist = {end: 0}
        queue = deque([end])
        while queue:
            v = queue.popleft()
            for u in self.pred[v]:
                if u not in dist and u not in visited:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        best = _INF
        seen = set()
        stack = []
        for _, nxt in self.succ[node]:
            if nxt in dist and nxt not in seen:
                best = min(best, dist[nxt] + 1)
                seen.add(nxt)
                stack.append(nxt)
        while stack:
            v = stack.pop()
            if v == end:
                continue
            for _, nxt in self.succ[v]:
                if nxt in dist and nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return best, len(seen)


def _search(graph: LinkGraph, min_len: int, max_len: int) -> list[int] | None:
    """First path in DFS order whose length lies in ``[min_len, max_len]``."""
    start, end = graph.start, graph.end
    visited = {start}
    lo, hi = graph.bounds(start, visited)
    if lo > max_len or hi < min_len:
        return None
    path: list[int] = []
    nodes = [start]
    frames = [iter(graph.succ[start])]
    while frames:
        depth = len(path)
        for lid, nxt in frames[-1]:
            if nxt in visited:
                continue
            if nxt == end:
                if min_len <= depth + 1 <= max_len:
                    return path + [lid]
                continue
            if depth + 1 >= max_len:
                continue
            visited.add(nxt)
            lo, hi = graph.bounds(nxt, visited)
            if depth + 1 + lo > max_len or depth + 1 + hi < min_len:
                visited.discard(nxt)
                continue
            path.append(lid)
            nodes.append(nxt)
            frames.append(iter(graph.succ[nxt]))
            break
        else:
            frames.pop()
            if path:
                path.pop()
                visited.discard(nodes.pop())
    return None


def find_long_path(network: Network, min_len: int, max_len: int = MAX_DEPTH) -> list[int] | None:
    """Any simple start-to-end link path with ``min_len <= length <= max_len``."""
    return _search(LinkGraph.from_network(network), min_len, max_len)


def find_constrained_shortest(
    network: Network, min_len: int, max_len: int = MAX_DEPTH,
) -> list[int] | None:
    """Shortest simple start-to-end path of length >= ``min_len``.

    Ties go to the lexicographically smallest link-id sequence: for each
    candidate length the DFS visits equal-length paths in lexicographic
    order and stops at the first hit.
    """
    graph = LinkGraph.from_network(network)
    upper = min(max_len, len(graph.succ) - 1)
    for length in range(max(min_len, 1), upper + 1):
        found = _search(graph, length, length)
        if found is not None:
            return found
    return None
