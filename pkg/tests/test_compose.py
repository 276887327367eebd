import itertools
import threading

import pytest

from wfstkit.compose import (
    A_RUN,
    B_RUN,
    BLOCKED,
    NEUTRAL,
    Move,
    compose,
    compose_lazy,
    compose_unfiltered,
    filter_transition,
)
from wfstkit.errors import SemiringMismatchError, SymbolTableError, WfstError
from wfstkit.fst import FstBuilder, SymbolTable, isomorphic, linear_fst, relation, transduction_weight
from wfstkit.semiring import LOG, PROBABILITY, TROPICAL

from fstgen import composition_oracle, random_fst, restrict, seeded, tables_agree


def one_arc(il, ol, w, sr=PROBABILITY):
    b = FstBuilder(sr)
    b.add_arc(0, il, ol, w, 1)
    b.set_final(1)
    return b.build()


def test_filter_table():
    assert filter_transition(NEUTRAL, Move.MATCH) == NEUTRAL
    assert filter_transition(NEUTRAL, Move.A_ONLY) == A_RUN
    assert filter_transition(NEUTRAL, Move.B_ONLY) == B_RUN
    assert filter_transition(A_RUN, Move.A_ONLY) == A_RUN
    assert filter_transition(A_RUN, Move.B_ONLY) is BLOCKED
    assert filter_transition(B_RUN, Move.B_ONLY) == B_RUN
    assert filter_transition(B_RUN, Move.A_ONLY) == A_RUN
    for f in (NEUTRAL, A_RUN, B_RUN):
        assert filter_transition(f, Move.MATCH) == NEUTRAL


def test_matched_labels_multiply():
    a = one_arc(1, 2, 0.5)
    b = one_arc(2, 3, 0.4)
    c = compose(a, b)
    assert transduction_weight(c, [1], [3]) == pytest.approx(0.2)
    assert relation(c, 2, 2) == pytest.approx({((1,), (3,)): 0.2})


def test_no_shared_middle_is_empty():
    c = compose(one_arc(1, 2, 0.5), one_arc(3, 3, 0.4))
    assert relation(c, 2, 2) == {}


def test_epsilon_pair_counted_once():
    a = one_arc(1, 0, 0.5)
    b = one_arc(0, 2, 0.4)
    assert transduction_weight(compose(a, b), [1], [2]) == pytest.approx(0.2)
    # both interleavings survive without the filter
    assert transduction_weight(compose_unfiltered(a, b), [1], [2]) == pytest.approx(0.4)


def test_identity_composition():
    syms = SymbolTable(["a", "b"])
    rng = seeded(3)
    for _ in range(20):
        t = random_fst(rng, TROPICAL, max_states=4, n_symbols=2, eps_prob=0.2, acyclic=True)
        t = t.with_symbols(syms)
        # Σ* identity: one looping state
        b = FstBuilder(TROPICAL, syms, syms)
        for label in (1, 2):
            b.add_arc(0, label, label, 0.0, 0)
        b.set_final(0)
        ident = b.build()
        assert tables_agree(relation(compose(t, ident), 3, 3), relation(t, 3, 3), TROPICAL)
        assert tables_agree(relation(compose(ident, t), 3, 3), relation(t, 3, 3), TROPICAL)


def test_operand_checks():
    with pytest.raises(SemiringMismatchError):
        compose(one_arc(1, 1, 0.5), one_arc(1, 1, 0.5, TROPICAL))
    x = linear_fst("a", osyms=SymbolTable(["a"]), isyms=SymbolTable(["a"]))
    y = linear_fst("b", isyms=SymbolTable(["b"]))
    with pytest.raises(SymbolTableError):
        compose(x, y)


@pytest.mark.parametrize("sr", [PROBABILITY, LOG, TROPICAL])
def test_random_against_oracle(sr):
    rng = seeded(17)
    for _ in range(30):
        a = random_fst(rng, sr, max_states=4, eps_prob=0.25, acyclic=True)
        b = random_fst(rng, sr, max_states=4, eps_prob=0.25, acyclic=True)
        expected = restrict(composition_oracle(relation(a, 3, 8), relation(b, 8, 3), sr), 3, 3)
        got = relation(compose(a, b), 3, 3)
        assert tables_agree(got, expected, sr)


def test_filtered_support_equals_unfiltered_support():
    rng = seeded(18)
    for _ in range(30):
        a = random_fst(rng, PROBABILITY, max_states=4, eps_prob=0.3, acyclic=True)
        b = random_fst(rng, PROBABILITY, max_states=4, eps_prob=0.3, acyclic=True)
        assert set(relation(compose(a, b), 3, 3)) == set(relation(compose_unfiltered(a, b), 3, 3))


def test_associativity():
    rng = seeded(19)
    for _ in range(15):
        a, b, c = (random_fst(rng, PROBABILITY, max_states=3, eps_prob=0.2, acyclic=True) for _ in range(3))
        left = relation(compose(compose(a, b), c), 2, 2)
        right = relation(compose(a, compose(b, c)), 2, 2)
        assert tables_agree(left, right, PROBABILITY)


def test_lazy_creates_nothing_until_asked():
    a = random_fst(seeded(4), TROPICAL, max_states=6)
    lazy = compose_lazy(a, a)
    assert lazy.num_known_states == 1 and lazy.num_expanded == 0
    lazy.arcs(lazy.start)
    assert lazy.num_expanded == 1


def test_lazy_memoizes():
    a = random_fst(seeded(5), TROPICAL, max_states=6, max_arcs=4)
    lazy = compose_lazy(a, a)
    first = lazy.arcs(0)
    scans = lazy.operand_scans
    assert lazy.arcs(0) is first and lazy.operand_scans == scans
    uncached = compose_lazy(a, a, cache=False)
    uncached.arcs(0)
    uncached.arcs(0)
    assert uncached.operand_scans == 2


def test_lazy_unknown_state():
    lazy = compose_lazy(one_arc(1, 1, 0.5), one_arc(1, 1, 0.5))
    with pytest.raises(WfstError):
        lazy.arcs(5)


def test_lazy_full_expansion_matches_eager():
    rng = seeded(6)
    for _ in range(30):
        a = random_fst(rng, TROPICAL, max_states=5, eps_prob=0.2)
        b = random_fst(rng, TROPICAL, max_states=5, eps_prob=0.2)
        assert isomorphic(compose_lazy(a, b).to_fst(), compose(a, b))


def test_lazy_operands_compose():
    rng = seeded(7)
    a, b, c = (random_fst(rng, PROBABILITY, max_states=3, eps_prob=0.2, acyclic=True) for _ in range(3))
    nested = compose(compose_lazy(a, b), c)
    assert tables_agree(relation(nested, 2, 2), relation(compose(compose(a, b), c), 2, 2), PROBABILITY)


def test_lazy_concurrent_expansion_is_consistent():
    a = random_fst(seeded(8), TROPICAL, max_states=6, max_arcs=4)
    lazy = compose_lazy(a, a)
    results = []

    def walk():
        results.append(lazy.to_fst())

    threads = [threading.Thread(target=walk) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for r in results[1:]:
        assert r == results[0]
    assert isomorphic(results[0], compose(a, a))


def test_interleavings_are_not_duplicated():
    # k epsilon moves on each side: exactly one path survives
    for k, m in itertools.product(range(3), repeat=2):
        a = linear_fst([1] * k, [0] * k, weight=0.5, semiring=PROBABILITY)
        b = linear_fst([0] * m, [2] * m, weight=0.5, semiring=PROBABILITY)
        got = transduction_weight(compose(a, b), [1] * k, [2] * m)
        assert got == pytest.approx(0.25)
