"""Union, concatenation and Kleene closure, glued with epsilon:epsilon arcs."""

from ._graph import accessible, coaccessible
from .fst import EPSILON, Arc, Fst, merge_tables
from .optimize import epsilon_closure
from .semiring import same_semiring


def _shifted(fst, offset):
    return [[a._replace(nextstate=a.nextstate + offset) for a in fst.arcs(q)] for q in fst.states()]


def _tables(a, b):
    return merge_tables(a.isyms, b.isyms), merge_tables(a.osyms, b.osyms)


def union(a, b):
    """Machine whose weight for every pair is a(r, s) ⊕ b(r, s)."""
    sr = same_semiring(a, b)
    isyms, osyms = _tables(a, b)
    off_a, off_b = 1, 1 + a.num_states
    start = [Arc(EPSILON, EPSILON, a.initial_weight, a.start + off_a),
             Arc(EPSILON, EPSILON, b.initial_weight, b.start + off_b)]
    states = [start] + _shifted(a, off_a) + _shifted(b, off_b)
    finals = {q + off_a: w for q, w in a.finals.items()}
    finals.update({q + off_b: w for q, w in b.finals.items()})
    return Fst(sr, states, 0, finals, isyms=isyms, osyms=osyms)


def concat(a, b):
    """Machine whose weight for (r, s) sums a(r1, s1) ⊗ b(r2, s2) over all splits."""
    sr = same_semiring(a, b)
    isyms, osyms = _tables(a, b)
    off_b = a.num_states
    states = _shifted(a, 0) + _shifted(b, off_b)
    for q, w in a.finals.items():
        states[q].append(Arc(EPSILON, EPSILON, sr.times(w, b.initial_weight), b.start + off_b))
    finals = {q + off_b: w for q, w in b.finals.items()}
    return Fst(sr, states, a.start, finals, initial_weight=a.initial_weight, isyms=isyms, osyms=osyms)


def closure(a):
    """Kleene star: ⊕ over n ≥ 0 of a concatenated n times.

    Raises DivergenceError when a(ε, ε) makes the infinite sum undefined
    (for example an epsilon language of probability 1).
    """
    sr = a.semiring
    states = [[Arc(EPSILON, EPSILON, a.initial_weight, a.start + 1)]] + _shifted(a, 1)
    for q, w in a.finals.items():
        states[q + 1].append(Arc(EPSILON, EPSILON, w, 0))
    result = Fst(sr, states, 0, {0: sr.one}, isyms=a.isyms, osyms=a.osyms)
    check_epsilon_cycles(result)
    return result


def check_epsilon_cycles(fst):
    """Raise DivergenceError if a useful epsilon:epsilon cycle has a divergent closure sum."""
    epsilon_closure(fst, accessible(fst) & coaccessible(fst))
