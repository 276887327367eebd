"""Random machine generators and brute-force oracles shared by the tests."""

import itertools
import random

from wfstkit.fst import EPSILON, FstBuilder
from wfstkit.semiring import PROBABILITY


def random_weight(rng, semiring):
    if semiring is PROBABILITY:
        return rng.uniform(0.05, 0.95)
    return rng.uniform(0.0, 5.0)


def random_fst(rng, semiring, max_states=6, n_symbols=3, eps_prob=0.0, acyclic=False,
               acceptor=False, max_arcs=3, final_prob=0.4, weight=None, min_states=1):
    """Random machine over labels 1..n_symbols.

    With ``acyclic``, arcs only go to higher-numbered states.  Epsilon labels
    appear on each side with probability ``eps_prob``.
    """
    weight = weight or (lambda: random_weight(rng, semiring))
    n = rng.randint(min_states, max_states)
    b = FstBuilder(semiring)
    b.add_states(n)
    b.set_start(0)
    for q in range(n):
        targets = list(range(q + 1, n)) if acyclic else list(range(n))
        if not targets:
            continue
        for _ in range(rng.randint(0, max_arcs)):
            il = EPSILON if rng.random() < eps_prob else rng.randint(1, n_symbols)
            if acceptor:
                ol = il
            else:
                ol = EPSILON if rng.random() < eps_prob else rng.randint(1, n_symbols)
            b.add_arc(q, il, ol, weight(), rng.choice(targets))
    for q in range(n):
        if rng.random() < final_prob or q == n - 1:
            b.set_final(q, weight())
    return b.build()


def random_deterministic_acceptor(rng, semiring, max_states=6, n_symbols=3, weights=(0.0, 1.0, 2.0, 3.0)):
    """Acyclic deterministic acceptor with small integer weights (so merges happen)."""
    n = rng.randint(1, max_states)
    b = FstBuilder(semiring)
    b.add_states(n)
    b.set_start(0)
    for q in range(n - 1):
        labels = rng.sample(range(1, n_symbols + 1), rng.randint(0, n_symbols))
        for label in sorted(labels):
            b.add_arc(q, label, label, rng.choice(weights), rng.randint(q + 1, n - 1))
    for q in range(n):
        if rng.random() < 0.4 or q == n - 1:
            b.set_final(q, rng.choice(weights))
    return b.build()


def all_strings(n_symbols, max_len):
    for length in range(max_len + 1):
        yield from itertools.product(range(1, n_symbols + 1), repeat=length)


def accepting_paths(fst, max_len=50):
    """Every accepting path of an acyclic machine as (arcs, weight) with left-to-right weights."""
    sr = fst.semiring
    out = []
    stack = [(fst.start, (), fst.initial_weight)]
    while stack:
        q, arcs, w = stack.pop()
        if fst.is_final(q):
            out.append((arcs, sr.times(w, fst.final(q))))
        if len(arcs) == max_len:
            continue
        for a in fst.arcs(q):
            stack.append((a.nextstate, arcs + (a,), sr.times(w, a.weight)))
    return out


def composition_oracle(rel_a, rel_b, semiring):
    """⊕_s A(r, s) ⊗ B(s, t) over explicit relation tables."""
    by_s = {}
    for (s, t), w in rel_b.items():
        by_s.setdefault(s, []).append((t, w))
    out = {}
    for (r, s), wa in rel_a.items():
        for t, wb in by_s.get(s, ()):
            key = (r, t)
            out[key] = semiring.plus(out.get(key, semiring.zero), semiring.times(wa, wb))
    return out


def tables_agree(x, y, semiring, rel_tol=1e-9, abs_tol=1e-12):
    """True if two {pair: weight} tables agree on every key either mentions."""
    for key in set(x) | set(y):
        a = x.get(key, semiring.zero)
        b = y.get(key, semiring.zero)
        if not semiring.approx_equal(a, b, rel_tol=rel_tol, abs_tol=abs_tol):
            return False
    return True


def restrict(table, max_in, max_out):
    return {k: v for k, v in table.items() if len(k[0]) <= max_in and len(k[1]) <= max_out}


def residual_classes(fst, max_len=50):
    """Number of distinct weighted residual languages among useful states (tropical, acyclic).

    Two states are equivalent when their residual weight functions differ by a
    constant; each residual is normalized by subtracting its minimum.
    """
    sr = fst.semiring
    from wfstkit._graph import accessible

    signatures = set()
    for q in accessible(fst):
        residual = {}
        stack = [(q, (), sr.one)]
        while stack:
            p, labels, w = stack.pop()
            if fst.is_final(p):
                residual[labels] = sr.plus(residual.get(labels, sr.zero), sr.times(w, fst.final(p)))
            if len(labels) < max_len:
                for a in fst.arcs(p):
                    stack.append((a.nextstate, labels + (a.ilabel,), sr.times(w, a.weight)))
        if not residual:
            continue
        low = min(residual.values())
        signatures.add(tuple(sorted((k, round(v - low, 6)) for k, v in residual.items())))
    return len(signatures)


def seeded(seed):
    return random.Random(seed)
