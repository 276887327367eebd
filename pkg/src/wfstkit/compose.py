"""Weighted composition with a three-state epsilon filter, eager and lazy.

Composed states are triples (state in A, state in B, filter state).  A
move is one of:

* ``MATCH``: A's output label equals B's input label (both non-epsilon);
  both machines advance.
* ``A_ONLY``: A takes an arc with output epsilon; B stays put.
* ``B_ONLY``: B takes an arc with input epsilon; A stays put.

Without a filter, a pair of paths with k A-side and m B-side epsilon moves
between two matches is produced once per interleaving, which over-counts in
any non-idempotent semiring.  The filter admits exactly one interleaving:
all B-only moves first, then all A-only moves.
"""

import enum
import threading
from collections import deque

from .errors import WfstError
from .fst import EPSILON, Arc, Fst, check_alphabets
from .semiring import same_semiring


class Move(enum.Enum):
    MATCH = "match"
    A_ONLY = "a-only"
    B_ONLY = "b-only"


NEUTRAL, A_RUN, B_RUN = 0, 1, 2

BLOCKED = None

_FILTER = {
    (NEUTRAL, Move.MATCH): NEUTRAL,
    (NEUTRAL, Move.A_ONLY): A_RUN,
    (NEUTRAL, Move.B_ONLY): B_RUN,
    (A_RUN, Move.MATCH): NEUTRAL,
    (A_RUN, Move.A_ONLY): A_RUN,
    (A_RUN, Move.B_ONLY): BLOCKED,
    (B_RUN, Move.MATCH): NEUTRAL,
    (B_RUN, Move.B_ONLY): B_RUN,
    (B_RUN, Move.A_ONLY): A_RUN,
}


def filter_transition(state, move):
    """Next filter state, or ``BLOCKED`` (None) if the move would repeat an interleaving."""
    return _FILTER[state, move]


def _check_operands(a, b):
    sr = same_semiring(a, b)
    check_alphabets(a.osyms, b.isyms, "composition alphabet")
    return sr


def _matches(a_arcs, b_arcs):
    """Pairs (arc of A, arc of B) with a.olabel == b.ilabel != epsilon, by sort-merge."""
    left = sorted((a for a in a_arcs if a.olabel != EPSILON), key=lambda a: a.olabel)
    right = sorted((b for b in b_arcs if b.ilabel != EPSILON), key=lambda b: b.ilabel)
    i = j = 0
    while i < len(left) and j < len(right):
        x, y = left[i].olabel, right[j].ilabel
        if x < y:
            i += 1
        elif x > y:
            j += 1
        else:
            i_end = i
            while i_end < len(left) and left[i_end].olabel == x:
                i_end += 1
            j_end = j
            while j_end < len(right) and right[j_end].ilabel == x:
                j_end += 1
            for arc_a in left[i:i_end]:
                for arc_b in right[j:j_end]:
                    yield arc_a, arc_b
            i, j = i_end, j_end


def _product_arcs(a, b, triple, filtered=True):
    """Yield (ilabel, olabel, weight, target triple) for one composed state."""
    sr = a.semiring
    qa, qb, f = triple
    a_arcs, b_arcs = a.arcs(qa), b.arcs(qb)
    for arc_a, arc_b in _matches(a_arcs, b_arcs):
        nf = filter_transition(f, Move.MATCH) if filtered else NEUTRAL
        yield arc_a.ilabel, arc_b.olabel, sr.times(arc_a.weight, arc_b.weight), (arc_a.nextstate, arc_b.nextstate, nf)
    for arc_a in a_arcs:
        if arc_a.olabel == EPSILON:
            nf = filter_transition(f, Move.A_ONLY) if filtered else NEUTRAL
            if nf is not BLOCKED:
                yield arc_a.ilabel, EPSILON, arc_a.weight, (arc_a.nextstate, qb, nf)
    for arc_b in b_arcs:
        if arc_b.ilabel == EPSILON:
            nf = filter_transition(f, Move.B_ONLY) if filtered else NEUTRAL
            if nf is not BLOCKED:
                yield EPSILON, arc_b.olabel, arc_b.weight, (qa, arc_b.nextstate, nf)


def _final(a, b, triple):
    return a.semiring.times(a.final(triple[0]), b.final(triple[1]))


def _build(a, b, filtered):
    sr = _check_operands(a, b)
    start = (a.start, b.start, NEUTRAL)
    index = {start: 0}
    queue = deque([start])
    states, finals = [], {}
    while queue:
        triple = queue.popleft()
        row = []
        for il, ol, w, target in _product_arcs(a, b, triple, filtered):
            if target not in index:
                index[target] = len(index)
                queue.append(target)
            row.append(Arc(il, ol, w, index[target]))
        states.append(row)
        fw = _final(a, b, triple)
        if not sr.is_zero(fw):
            finals[index[triple]] = fw
    return Fst(sr, states, 0, finals, initial_weight=sr.times(a.initial_weight, b.initial_weight),
               isyms=a.isyms, osyms=b.osyms)


def compose(a, b):
    """Eager composition: (a ∘ b)(r, t) = ⊕_s a(r, s) ⊗ b(s, t).

    Only states reachable from the start triple are built; dead ends are kept.
    Operands may be lazy machines.
    """
    return _build(a, b, filtered=True)


compose_eager = compose


def compose_unfiltered(a, b):
    """Reference product with every epsilon interleaving kept.

    Correct only in idempotent semirings; exists to demonstrate what the
    filter removes.
    """
    return _build(a, b, filtered=False)


class LazyComposeFst:
    """Composition whose states and arcs are created on demand.

    Exposes the same read interface as :class:`~wfstkit.fst.Fst`
    (``start``, ``arcs``, ``final``, ``initial_weight``, ``semiring``,
    ``isyms``, ``osyms``), so searches and further compositions accept it
    unchanged.  With ``cache`` on, expanded arc lists are kept; with it off,
    every ``arcs`` call recomputes from the operands.  State ids are stable
    either way.

    ``operand_scans`` counts how many times operand arcs were read.
    """

    def __init__(self, a, b, cache=True):
        self.semiring = _check_operands(a, b)
        self.a, self.b = a, b
        self.cache = cache
        self.isyms, self.osyms = a.isyms, b.osyms
        self.initial_weight = self.semiring.times(a.initial_weight, b.initial_weight)
        self.start = 0
        self._triples = [(a.start, b.start, NEUTRAL)]
        self._index = {self._triples[0]: 0}
        self._memo = {}
        self._lock = threading.Lock()
        self.operand_scans = 0

    @property
    def num_known_states(self):
        return len(self._triples)

    @property
    def num_expanded(self):
        return len(self._memo)

    def triple(self, state):
        """The (state of A, state of B, filter state) behind ``state``."""
        self._check(state)
        return self._triples[state]

    def _check(self, state):
        if not (isinstance(state, int) and 0 <= state < len(self._triples)):
            raise WfstError(f"unknown lazy state {state!r}")

    def _intern(self, triple):
        ident = self._index.get(triple)
        if ident is None:
            ident = len(self._triples)
            self._index[triple] = ident
            self._triples.append(triple)
        return ident

    def expand(self, state):
        """Return the arcs of ``state`` (a tuple), computing them if needed."""
        self._check(state)
        cached = self._memo.get(state)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._memo.get(state)
            if cached is not None:
                return cached
            self.operand_scans += 1
            arcs = tuple(Arc(il, ol, w, self._intern(t))
                         for il, ol, w, t in _product_arcs(self.a, self.b, self._triples[state]))
            if self.cache:
                self._memo[state] = arcs
            return arcs

    arcs = expand

    def final(self, state):
        self._check(state)
        return _final(self.a, self.b, self._triples[state])

    def is_final(self, state):
        return not self.semiring.is_zero(self.final(state))

    def iter_expand(self):
        """Breadth-first expansion from the start; yields (state, arcs, final weight)."""
        seen = {self.start}
        queue = deque([self.start])
        while queue:
            q = queue.popleft()
            arcs = self.expand(q)
            yield q, arcs, self.final(q)
            for a in arcs:
                if a.nextstate not in seen:
                    seen.add(a.nextstate)
                    queue.append(a.nextstate)

    def to_fst(self):
        """Fully expand into a concrete :class:`Fst` (same state ids)."""
        rows, finals = {}, {}
        for q, arcs, fw in self.iter_expand():
            rows[q] = arcs
            if not self.semiring.is_zero(fw):
                finals[q] = fw
        states = [rows.get(q, ()) for q in range(len(self._triples))]
        return Fst(self.semiring, states, self.start, finals, initial_weight=self.initial_weight,
                   isyms=self.isyms, osyms=self.osyms)

    def __repr__(self):
        return f"<LazyComposeFst known={self.num_known_states} expanded={self.num_expanded}>"


def compose_lazy(a, b, cache=True):
    return LazyComposeFst(a, b, cache=cache)


def lazy_expand(lazy, state):
    """Arc list and final weight of one lazy state."""
    return lazy.expand(state), lazy.final(state)
