"""State-graph utilities over concrete machines."""

from collections import deque


def accessible(fst, arc_filter=None):
    seen = {fst.start}
    queue = deque([fst.start])
    while queue:
        q = queue.popleft()
        for a in fst.arcs(q):
            if arc_filter is not None and not arc_filter(a):
                continue
            if a.nextstate not in seen:
                seen.add(a.nextstate)
                queue.append(a.nextstate)
    return seen


def reverse_adjacency(fst, arc_filter=None):
    incoming = [[] for _ in range(fst.num_states)]
    for q in fst.states():
        for a in fst.arcs(q):
            if arc_filter is None or arc_filter(a):
                incoming[a.nextstate].append((q, a))
    return incoming


def coaccessible(fst):
    incoming = reverse_adjacency(fst)
    seen = set(fst.finals)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for p, _ in incoming[q]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def topological_order(fst, states=None, arc_filter=None):
    """Kahn ordering of ``states`` (default: all); None if the subgraph has a cycle."""
    states = set(fst.states()) if states is None else set(states)
    indeg = dict.fromkeys(states, 0)
    for q in states:
        for a in fst.arcs(q):
            if a.nextstate in states and (arc_filter is None or arc_filter(a)):
                indeg[a.nextstate] += 1
    queue = deque(sorted(q for q in states if indeg[q] == 0))
    order = []
    while queue:
        q = queue.popleft()
        order.append(q)
        for a in fst.arcs(q):
            if a.nextstate in states and (arc_filter is None or arc_filter(a)):
                indeg[a.nextstate] -= 1
                if indeg[a.nextstate] == 0:
                    queue.append(a.nextstate)
    return order if len(order) == len(states) else None


def strongly_connected_components(fst, states, arc_filter=None):
    """Tarjan's algorithm, iterative.  Components come out sinks first."""
    states = set(states)
    index, low, on_stack = {}, {}, set()
    stack, comps = [], []
    counter = 0

    def succ(q):
        return [a.nextstate for a in fst.arcs(q)
                if a.nextstate in states and (arc_filter is None or arc_filter(a))]

    for root in sorted(states):
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            q, it = work[-1]
            advanced = False
            for r in it:
                if r not in index:
                    index[r] = low[r] = counter
                    counter += 1
                    stack.append(r)
                    on_stack.add(r)
                    work.append((r, iter(succ(r))))
                    advanced = True
                    break
                if r in on_stack:
                    low[q] = min(low[q], index[r])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[q])
            if low[q] == index[q]:
                comp = []
                while True:
                    r = stack.pop()
                    on_stack.discard(r)
                    comp.append(r)
                    if r == q:
                        break
                comps.append(comp)
    return comps
