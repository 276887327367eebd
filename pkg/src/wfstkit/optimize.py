"""Epsilon removal, weighted determinization, weight pushing and minimization."""

from ._graph import accessible, coaccessible, strongly_connected_components, topological_order
from .errors import DivergenceError, NonDeterminizableError, PreconditionError
from .fst import EPSILON, Arc, Fst, FstBuilder, SymbolTable
from .search import BACKWARD, shortest_distance

DEFAULT_MAX_STATES = 10_000
WEIGHT_TOL = 1e-9


def _is_eps(arc):
    return arc.ilabel == EPSILON and arc.olabel == EPSILON


def epsilon_closure(fst, states=None):
    """Map each state q to {p: ⊕ of all epsilon:epsilon path weights q ⇝ p}.

    The empty path contributes one at q itself.  Cycles are summed with the
    semiring's closure; DivergenceError if that sum is undefined.  Only
    ``states`` (default: all) and the arcs among them are considered.
    """
    sr = fst.semiring
    states = list(fst.states()) if states is None else sorted(states)
    member = set(states)

    def eps_arcs(q):
        return [a for a in fst.arcs(q) if _is_eps(a) and a.nextstate in member]

    closure = {}
    for comp in strongly_connected_components(fst, member, _is_eps):
        inside = set(comp)
        if len(comp) == 1 and not any(a.nextstate == comp[0] for a in eps_arcs(comp[0])):
            local = {comp[0]: {comp[0]: sr.one}}
        else:
            local = _component_closure(sr, comp, eps_arcs)
        # Sinks come first, so every arc leaving the component lands on a
        # state whose closure is already known.
        exits = {}
        for p in comp:
            out = {p: sr.one}
            for a in eps_arcs(p):
                if a.nextstate in inside:
                    continue
                for r, w in closure[a.nextstate].items():
                    out[r] = sr.plus(out.get(r, sr.zero), sr.times(a.weight, w))
            exits[p] = out
        for q in comp:
            row = {}
            for p, w_qp in local[q].items():
                for r, w in exits[p].items():
                    row[r] = sr.plus(row.get(r, sr.zero), sr.times(w_qp, w))
            closure[q] = row
    return closure


def _component_closure(sr, comp, eps_arcs):
    """All-pairs closure inside a strongly connected component (Lehmann's algorithm)."""
    idx = {q: i for i, q in enumerate(comp)}
    n = len(comp)
    m = [[sr.zero] * n for _ in range(n)]
    for q in comp:
        for a in eps_arcs(q):
            if a.nextstate in idx:
                i, j = idx[q], idx[a.nextstate]
                m[i][j] = sr.plus(m[i][j], a.weight)
    for k in range(n):
        s = sr.star(m[k][k])
        prev = [row[:] for row in m]
        for i in range(n):
            if sr.is_zero(prev[i][k]):
                continue
            left = sr.times(prev[i][k], s)
            for j in range(n):
                if sr.is_zero(prev[k][j]):
                    continue
                m[i][j] = sr.plus(prev[i][j], sr.times(left, prev[k][j]))
    out = {}
    for q in comp:
        i = idx[q]
        row = {}
        for p in comp:
            w = m[i][idx[p]]
            if p == q:
                w = sr.plus(sr.one, w)
            if not sr.is_zero(w):
                row[p] = w
        out[q] = row
    return out


def connect(fst):
    """Drop states that are not both accessible and co-accessible.

    Surviving states keep their relative order.  A machine with an empty
    language becomes a single non-final start state.
    """
    keep = accessible(fst) & coaccessible(fst)
    if fst.start not in keep:
        return Fst(fst.semiring, [[]], 0, {}, initial_weight=fst.initial_weight,
                   isyms=fst.isyms, osyms=fst.osyms)
    order = sorted(keep)
    renum = {q: i for i, q in enumerate(order)}
    states = [[a._replace(nextstate=renum[a.nextstate]) for a in fst.arcs(q) if a.nextstate in keep]
              for q in order]
    finals = {renum[q]: w for q, w in fst.finals.items() if q in keep}
    return fst.replace(states=states, start=renum[fst.start], finals=finals)


def rm_epsilon(fst):
    """Equivalent machine without epsilon:epsilon arcs.

    State numbering is preserved.  Each state's epsilon closure is folded
    into copies of the non-epsilon arcs and final weights it reaches.
    """
    sr = fst.semiring
    closure = epsilon_closure(fst)
    states = []
    finals = {}
    for q in fst.states():
        reach = closure[q]
        row = []
        final = sr.zero
        for p in sorted(reach, key=lambda p: (p != q, p)):
            d = reach[p]
            row.extend(a._replace(weight=sr.times(d, a.weight)) for a in fst.arcs(p) if not _is_eps(a))
            if fst.is_final(p):
                final = sr.plus(final, sr.times(d, fst.final(p)))
        states.append(row)
        if not sr.is_zero(final):
            finals[q] = final
    return fst.replace(states=states, finals=finals)


def _check_determinizable_input(fst):
    if not fst.is_acceptor():
        raise PreconditionError("determinize requires an acceptor (encode transducer labels first)")
    if fst.has_epsilons():
        raise PreconditionError("determinize requires an epsilon-free machine (run rm_epsilon)")


class _SubsetTable:
    """Interns weighted subsets, comparing residuals with a tolerance."""

    def __init__(self, semiring):
        self.sr = semiring
        self.buckets = {}
        self.subsets = []

    def find_or_add(self, subset):
        states = tuple(q for q, _ in subset)
        residuals = [w for _, w in subset]
        bucket = self.buckets.setdefault(states, [])
        for ident in bucket:
            other = self.subsets[ident]
            if all(self.sr.approx_equal(a, b, rel_tol=WEIGHT_TOL, abs_tol=WEIGHT_TOL)
                   for a, (_, b) in zip(residuals, other)):
                return ident, False
        ident = len(self.subsets)
        self.subsets.append(subset)
        bucket.append(ident)
        return ident, True


def determinize(fst, max_states=DEFAULT_MAX_STATES):
    """Weighted subset construction for epsilon-free acceptors.

    Each output state is a set of (state, residual) pairs whose residuals
    ⊕-sum to one.  Raises NonDeterminizableError once more than
    ``max_states`` subsets have been created.
    """
    _check_determinizable_input(fst)
    sr = fst.semiring
    table = _SubsetTable(sr)
    table.find_or_add(((fst.start, sr.one),))
    arcs_out = []
    finals = {}
    pending = 0
    while pending < len(table.subsets):
        subset = table.subsets[pending]
        final = sr.zero
        by_label = {}
        for q, v in subset:
            if fst.is_final(q):
                final = sr.plus(final, sr.times(v, fst.final(q)))
            for a in fst.arcs(q):
                acc = by_label.setdefault(a.ilabel, {})
                acc[a.nextstate] = sr.plus(acc.get(a.nextstate, sr.zero), sr.times(v, a.weight))
        if not sr.is_zero(final):
            finals[pending] = final
        row = []
        for label in sorted(by_label):
            acc = {q: w for q, w in by_label[label].items() if not sr.is_zero(w)}
            if not acc:
                continue
            total = sr.sum(acc.values())
            successor = tuple((q, sr.divide(acc[q], total)) for q in sorted(acc))
            ident, new = table.find_or_add(successor)
            if new and len(table.subsets) > max_states:
                raise NonDeterminizableError(
                    f"more than {max_states} subsets: machine is possibly non-determinizable")
            row.append(Arc(label, label, total, ident))
        arcs_out.append(row)
        pending += 1
    return Fst(sr, arcs_out, 0, finals, initial_weight=fst.initial_weight,
               isyms=fst.isyms, osyms=fst.osyms)


def is_deterministic(fst):
    """At most one arc per input label at every state, and no input epsilons."""
    for q in fst.states():
        labels = [a.ilabel for a in fst.arcs(q)]
        if EPSILON in labels or len(labels) != len(set(labels)):
            return False
    return True


def push_weights(fst):
    """Reweight toward the start state using backward shortest distances.

    Arc q→q' of weight w becomes V(q)⁻¹ ⊗ w ⊗ V(q'), finals f(q) become
    V(q)⁻¹ ⊗ f(q), and the initial weight absorbs V(start).
    """
    sr = fst.semiring
    potential = shortest_distance(fst, BACKWARD)
    dead = [q for q, v in enumerate(potential) if sr.is_zero(v)]
    if dead:
        raise PreconditionError(f"states {dead[:10]} cannot reach a final state; connect() first")
    for v in potential:
        if sr.check(v):
            raise DivergenceError(f"shortest distance undefined: {sr.check(v)}")
    states = [[a._replace(weight=sr.divide(sr.times(a.weight, potential[a.nextstate]), potential[q]))
               for a in fst.arcs(q)] for q in fst.states()]
    finals = {q: sr.divide(w, potential[q]) for q, w in fst.finals.items()}
    initial = sr.times(fst.initial_weight, potential[fst.start])
    return fst.replace(states=states, finals=finals, initial_weight=initial)


def _weight_classes(sr, weights):
    """Map each weight to a class id; weights within tolerance of a class's first member share it."""
    classes = {}
    anchor, ident = None, -1
    for w in sorted(set(weights)):
        if anchor is None or not sr.approx_equal(w, anchor, rel_tol=WEIGHT_TOL, abs_tol=WEIGHT_TOL):
            anchor, ident = w, ident + 1
        classes[w] = ident
    return classes


def minimize(fst):
    """Minimal deterministic acceptor equivalent to ``fst``.

    Trims, pushes weights, then refines a partition of states keyed on
    (label, pushed weight, target block) and (pushed final weight).
    """
    if not fst.is_acceptor():
        raise PreconditionError("minimize requires an acceptor")
    if not is_deterministic(fst):
        raise PreconditionError("minimize requires a deterministic machine (run determinize)")
    sr = fst.semiring
    trimmed = connect(fst)
    if trimmed.num_states == 1 and not trimmed.finals and not trimmed.arcs(0):
        return trimmed
    pushed = push_weights(trimmed)
    all_weights = [a.weight for q in pushed.states() for a in pushed.arcs(q)] + list(pushed.finals.values())
    wclass = _weight_classes(sr, all_weights)

    def final_key(q):
        return wclass[pushed.final(q)] if pushed.is_final(q) else None

    n = pushed.num_states
    block = [0] * n
    keys = {}
    for q in range(n):
        block[q] = keys.setdefault(final_key(q), len(keys))
    count = len(keys)
    while True:
        keys = {}
        new_block = [0] * n
        for q in range(n):
            sig = (block[q], tuple(sorted((a.ilabel, wclass[a.weight], block[a.nextstate])
                                          for a in pushed.arcs(q))))
            new_block[q] = keys.setdefault(sig, len(keys))
        block = new_block
        if len(keys) == count:
            break
        count = len(keys)

    # Number blocks by first appearance in breadth-first order from the start.
    rep = {}
    for q in range(n):
        rep.setdefault(block[q], q)
    order = {block[pushed.start]: 0}
    queue = [block[pushed.start]]
    for b in queue:
        for a in sorted(pushed.arcs(rep[b]), key=lambda a: a.ilabel):
            nb = block[a.nextstate]
            if nb not in order:
                order[nb] = len(order)
                queue.append(nb)
    builder = FstBuilder(sr, fst.isyms, fst.osyms)
    builder.add_states(len(order))
    builder.set_start(0)
    builder.initial_weight = pushed.initial_weight
    for b in queue:
        q = rep[b]
        for a in sorted(pushed.arcs(q), key=lambda a: a.ilabel):
            builder.add_arc(order[b], a.ilabel, a.olabel, a.weight, order[block[a.nextstate]])
        if pushed.is_final(q):
            builder.set_final(order[b], pushed.final(q))
    return builder.build()


def encode_labels(fst):
    """Turn a transducer into an acceptor over (ilabel, olabel) pair labels.

    Returns the acceptor and the list mapping each pair label back to its
    (ilabel, olabel); index 0 is epsilon:epsilon.
    """
    pairs = [(EPSILON, EPSILON)]
    index = {pairs[0]: 0}
    states = []
    for q in fst.states():
        row = []
        for a in fst.arcs(q):
            key = (a.ilabel, a.olabel)
            if key not in index:
                index[key] = len(pairs)
                pairs.append(key)
            row.append(Arc(index[key], index[key], a.weight, a.nextstate))
        states.append(row)
    table = None
    if fst.isyms is not None and fst.osyms is not None:
        table = SymbolTable()
        for label, (i, o) in enumerate(pairs[1:], 1):
            table.add_symbol(f"{fst.isyms.symbol(i)}:{fst.osyms.symbol(o)}", label)
    return fst.replace(states=states, isyms=table, osyms=table), pairs


def decode_labels(acceptor, pairs, isyms=None, osyms=None):
    """Inverse of :func:`encode_labels`."""
    states = [[Arc(*pairs[a.ilabel], a.weight, a.nextstate) for a in acceptor.arcs(q)]
              for q in acceptor.states()]
    return acceptor.replace(states=states, isyms=isyms, osyms=osyms)


def is_acyclic(fst):
    return topological_order(fst) is not None
