# # Determinize, push, minimize
#
# Tropical weights are costs: lower is better and alternatives combine by
# taking the minimum.

# %%
from wfstkit import FstBuilder, SymbolTable, TROPICAL, determinize, minimize, push_weights, relation
from wfstkit.textio import format_text

syms = SymbolTable(["a", "b", "c"])


def acceptor(arcs, finals):
    b = FstBuilder(TROPICAL, syms, syms)
    for src, sym, w, dst in arcs:
        label = syms.label(sym)
        b.add_arc(src, label, label, w, dst)
    for q in finals:
        b.set_final(q)
    return b.build()


# %%
# Two arcs leave the start on "a".  Ordinary subset construction over
# (label, weight) pairs would keep both since a/1 and a/2 are different
# symbols.  The weighted version emits one arc carrying the cheaper weight
# and remembers that state 2 is one unit behind.

nd = acceptor([(0, "a", 1.0, 1), (0, "a", 2.0, 2)], [1, 2])
print(format_text(determinize(nd)))

# %%
# States 1 and 2 below accept the same suffix "c", but at costs 1 and 4.
# Pushing moves weight toward the start until the two look alike, and then
# they merge.

m = acceptor([(0, "a", 5.0, 1), (0, "b", 2.0, 2), (1, "c", 1.0, 3), (2, "c", 4.0, 3)], [3])
print(format_text(push_weights(m)))
small = minimize(m)
print(format_text(small))
print(m.num_states, "->", small.num_states, "states")

# %%
# Same weights on every string before and after.

print(relation(m, 2, 2) == relation(small, 2, 2))
