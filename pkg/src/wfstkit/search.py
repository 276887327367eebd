"""Shortest distance and single-best-path (Viterbi) search."""

import heapq
from typing import NamedTuple

from ._graph import accessible, topological_order
from .errors import DivergenceError, PreconditionError
from .fst import EPSILON, Fst

FORWARD = "forward"
BACKWARD = "backward"


class Path(NamedTuple):
    ilabels: tuple
    olabels: tuple
    weight: float
    states: tuple


def shortest_distance(fst, direction=FORWARD):
    """Per-state ⊕-sum of path weights.

    ``forward``: from the start (including the initial weight) to each state.
    ``backward``: from each state to the final states, including final weights.

    Acyclic machines work in any semiring.  Cyclic machines need the tropical
    semiring; negative arcs route through Bellman-Ford, which raises
    DivergenceError on a negative cycle.
    """
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    sr = fst.semiring
    order = topological_order(fst)
    if order is not None:
        if direction == FORWARD:
            dist = [sr.zero] * fst.num_states
            dist[fst.start] = fst.initial_weight
            for q in order:
                if sr.is_zero(dist[q]):
                    continue
                for a in fst.arcs(q):
                    dist[a.nextstate] = sr.plus(dist[a.nextstate], sr.times(dist[q], a.weight))
            return dist
        dist = [fst.final(q) for q in fst.states()]
        for q in reversed(order):
            total = dist[q]
            for a in fst.arcs(q):
                total = sr.plus(total, sr.times(a.weight, dist[a.nextstate]))
            dist[q] = total
        return dist
    if not sr.idempotent:
        raise PreconditionError(f"cyclic machine in the non-idempotent {sr.name} semiring")
    if direction == FORWARD:
        edges = [(q, a.nextstate, a.weight) for q in fst.states() for a in fst.arcs(q)]
        sources = {fst.start: fst.initial_weight}
    else:
        edges = [(a.nextstate, q, a.weight) for q in fst.states() for a in fst.arcs(q)]
        sources = fst.finals
    if all(w >= 0 for _, _, w in edges):
        return _dijkstra(fst.num_states, edges, sources)
    return _bellman_ford(fst.num_states, edges, sources)


def _dijkstra(n, edges, sources):
    out = [[] for _ in range(n)]
    for u, v, w in edges:
        out[u].append((v, w))
    dist = [float("inf")] * n
    for s, w in sources.items():
        dist[s] = min(dist[s], w)
    heap = [(d, s) for s, d in enumerate(dist) if d != float("inf")]
    heapq.heapify(heap)
    done = [False] * n
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in out[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _bellman_ford(n, edges, sources, preds=None):
    dist = [float("inf")] * n
    for s, w in sources.items():
        dist[s] = min(dist[s], w)
    for _ in range(n):
        changed = False
        for u, v, w, *extra in edges:
            if dist[u] == float("inf"):
                continue
            nd = dist[u] + w
            if nd < dist[v]:
                dist[v] = nd
                if preds is not None:
                    preds[v] = (u, *extra)
                changed = True
        if not changed:
            return dist
    raise DivergenceError("negative-weight cycle")


def _require_tropical(fst):
    if not (fst.semiring.idempotent and fst.semiring.name == "tropical"):
        raise PreconditionError(f"shortest_path needs the tropical semiring, not {fst.semiring.name}")


def shortest_path(fst):
    """One minimum-weight accepting path, or None if nothing is accepted.

    Works on anything with ``start``/``arcs``/``final`` (including lazy
    compositions, which are expanded only as far as the search needs).
    Weights accumulate left to right exactly as the path weight is defined,
    so the returned weight is the exact minimum.  Ties go to the predecessor
    reached first (lowest state id in Dijkstra order).
    """
    _require_tropical(fst)
    if isinstance(fst, Fst):
        reach = accessible(fst)
        order = topological_order(fst, reach)
        if order is not None:
            return _acyclic_path(fst, order)
        if any(a.weight < 0 for q in reach for a in fst.arcs(q)):
            return _bellman_ford_path(fst, reach)
    return _dijkstra_path(fst)


def _trace(fst, preds, last, weight):
    states, ilabels, olabels = [last], [], []
    q = last
    while q in preds:
        p, arc = preds[q]
        states.append(p)
        if arc.ilabel != EPSILON:
            ilabels.append(arc.ilabel)
        if arc.olabel != EPSILON:
            olabels.append(arc.olabel)
        q = p
    return Path(tuple(reversed(ilabels)), tuple(reversed(olabels)), weight, tuple(reversed(states)))


def _acyclic_path(fst, order):
    sr = fst.semiring
    dist = {fst.start: fst.initial_weight}
    preds = {}
    best, best_q = sr.zero, None
    for q in order:
        d = dist.get(q, sr.zero)
        if sr.is_zero(d):
            continue
        if fst.is_final(q):
            total = sr.times(d, fst.final(q))
            if total < best:
                best, best_q = total, q
        for a in fst.arcs(q):
            nd = sr.times(d, a.weight)
            if nd < dist.get(a.nextstate, sr.zero):
                dist[a.nextstate] = nd
                preds[a.nextstate] = (q, a)
    if best_q is None:
        return None
    return _trace(fst, preds, best_q, best)


def _bellman_ford_path(fst, reach):
    sr = fst.semiring
    n = fst.num_states
    edges = [(q, a.nextstate, a.weight, a) for q in sorted(reach) for a in fst.arcs(q)]
    preds = {}
    dist = _bellman_ford(n, edges, {fst.start: fst.initial_weight}, preds)
    best, best_q = sr.zero, None
    for q in sorted(reach):
        if fst.is_final(q) and dist[q] != sr.zero:
            total = sr.times(dist[q], fst.final(q))
            if total < best:
                best, best_q = total, q
    if best_q is None:
        return None
    return _trace(fst, preds, best_q, best)


def _dijkstra_path(fst):
    sr = fst.semiring
    inf = sr.zero
    dist = {fst.start: fst.initial_weight}
    preds = {}
    done = set()
    # Entries are (distance, kind, state); kind 1 marks "stop at this final state".
    heap = [(fst.initial_weight, 0, fst.start)]
    best = {}
    while heap:
        d, kind, q = heapq.heappop(heap)
        if kind == 1:
            return _trace(fst, preds, q, d)
        if q in done or d > dist.get(q, inf):
            continue
        done.add(q)
        f = fst.final(q)
        if not sr.is_zero(f):
            total = sr.times(d, f)
            if total < best.get(q, inf):
                best[q] = total
                heapq.heappush(heap, (total, 1, q))
        for a in fst.arcs(q):
            if a.weight < 0:
                raise PreconditionError("negative arc weight met during on-the-fly search")
            n = a.nextstate
            nd = sr.times(d, a.weight)
            if n not in done and nd < dist.get(n, inf):
                dist[n] = nd
                preds[n] = (q, a)
                heapq.heappush(heap, (nd, 0, n))
    return None

