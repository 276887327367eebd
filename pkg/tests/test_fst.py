import pytest

from wfstkit.errors import EnumerationLimitError, PreconditionError, WfstError
from wfstkit.fst import (
    Arc,
    Fst,
    FstBuilder,
    SymbolTable,
    as_identity_transducer,
    empty_fst,
    isomorphic,
    linear_fst,
    relation,
    transduction_weight,
    validate,
)
from wfstkit.semiring import PROBABILITY, TROPICAL

from fstgen import random_fst, seeded


@pytest.fixture
def syms():
    return SymbolTable(["a", "b", "c"])


def single_arc(syms, weight=1.0):
    b = FstBuilder(TROPICAL, syms, syms)
    b.add_arc(0, syms.label("a"), syms.label("a"), weight, 1)
    b.set_final(1, 0.0)
    return b.build()


def test_symbol_table_basics(syms):
    assert syms.find("<eps>") == 0
    assert syms.label("a") == 1 and syms.symbol(3) == "c"
    assert SymbolTable.from_text(syms.to_text()) == syms
    other = SymbolTable(["a", "x"])
    assert not syms.compatible(other)
    assert syms.compatible(SymbolTable(["a", "b"]))


def test_oracle_single_arc(syms):
    f = single_arc(syms)
    assert transduction_weight(f, "a", "a") == 1.0
    assert transduction_weight(f, "b", "b") == TROPICAL.zero


def test_oracle_sums_parallel_paths():
    b = FstBuilder(PROBABILITY)
    b.add_arc(0, 1, 1, 0.3, 1)
    b.add_arc(0, 1, 1, 0.2, 1)
    b.set_final(1)
    f = b.build()
    assert transduction_weight(f, [1], [1]) == pytest.approx(0.5)


def test_oracle_counts_epsilon_paths():
    # 0 -a:eps-> 1 -eps:b-> 2 and 0 -a:b-> 2
    b = FstBuilder(PROBABILITY)
    b.add_arc(0, 1, 0, 0.5, 1)
    b.add_arc(1, 0, 2, 0.5, 2)
    b.add_arc(0, 1, 2, 0.1, 2)
    b.set_final(2)
    f = b.build()
    assert transduction_weight(f, [1], [2]) == pytest.approx(0.35)
    assert relation(f, 2, 2) == pytest.approx({((1,), (2,)): 0.35})


def test_oracle_enumeration_cap():
    b = FstBuilder(TROPICAL)
    b.add_arc(0, 0, 0, 0.0, 0)
    b.add_arc(0, 0, 0, 0.0, 0)
    b.set_final(0)
    with pytest.raises(EnumerationLimitError):
        transduction_weight(b.build(), [], [], max_path_len=30, max_paths=1000)


def test_identity_transducer(syms):
    f = as_identity_transducer(single_arc(syms))
    assert f.arcs(0) == (Arc(1, 1, 1.0, 1),)
    assert not validate(f)
    empty = as_identity_transducer(empty_fst())
    assert empty.finals == {}
    ab = linear_fst("a b", weight=3.0, isyms=syms)
    assert transduction_weight(as_identity_transducer(ab), "a b", "a b") == 3.0
    with pytest.raises(PreconditionError):
        as_identity_transducer(linear_fst("a", "b", isyms=syms))


def test_acceptor_weight_matches_identity_view():
    rng = seeded(5)
    for _ in range(30):
        f = random_fst(rng, TROPICAL, acceptor=True, acyclic=True)
        g = as_identity_transducer(f)
        for w, weight in relation(f, 4, 4).items():
            assert transduction_weight(g, w[0], w[0]) == weight


def test_validate():
    b = FstBuilder(TROPICAL)
    b.add_arc(0, 1, 1, 0.5, 1)
    b.set_final(1)
    assert validate(b.build()) == []
    bad_target = Fst(TROPICAL, [[Arc(1, 1, 0.0, 7)], [], []], 0, {})
    assert len(validate(bad_target)) == 1
    zero_final = Fst(TROPICAL, [[], []], 0, {1: TROPICAL.zero})
    assert len(validate(zero_final)) == 1
    with pytest.raises(WfstError):
        FstBuilder(TROPICAL).add_arc(0, -1, 1, 0.0, 0).build()


def test_builder_zero_final_means_non_final():
    b = FstBuilder(TROPICAL)
    b.set_final(0, 1.0)
    b.set_final(0, TROPICAL.zero)
    assert b.build().finals == {}


def test_isomorphic_ignores_numbering():
    a = Fst(TROPICAL, [[Arc(1, 1, 0.5, 1)], []], 0, {1: 0.0})
    b = Fst(TROPICAL, [[], [Arc(1, 1, 0.5, 0)]], 1, {0: 0.0})
    assert isomorphic(a, b)
    assert not isomorphic(a, a.replace(finals={1: 1.0}))
