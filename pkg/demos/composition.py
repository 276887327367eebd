# # Composing weighted transducers
#
# Two small machines in the probability semiring.  A rewrites "a" as
# nothing, B rewrites nothing as "b".  Composed, they should map "a" to "b"
# with probability 0.5 * 0.4 = 0.2.

# %%
from wfstkit import FstBuilder, PROBABILITY, SymbolTable, compose, compose_lazy, transduction_weight
from wfstkit.compose import compose_unfiltered
from wfstkit.textio import format_text

syms = SymbolTable(["a", "b"])

a = FstBuilder(PROBABILITY, syms, syms)
a.add_arc(0, syms.label("a"), 0, 0.5, 1)
a.set_final(1)
A = a.build()

b = FstBuilder(PROBABILITY, syms, syms)
b.add_arc(0, 0, syms.label("b"), 0.4, 1)
b.set_final(1)
B = b.build()

# %%
# The composed machine, in the text format used by the command-line tool.

C = compose(A, B)
print(format_text(C))
print("C(a, b) =", transduction_weight(C, "a", "b"))

# %%
# Drop the filter and both orders of the two epsilon moves survive: A first
# then B, or B first then A.  Summing them doubles the weight.

print("unfiltered:", transduction_weight(compose_unfiltered(A, B), "a", "b"))

# %%
# A lazy composition builds nothing up front.  States appear as arcs are
# requested and are then kept for reuse.

lazy = compose_lazy(A, B)
print(lazy)
lazy.arcs(lazy.start)
print(lazy)
full = lazy.to_fst()
print("expanded:", full.num_states, "states,", full.num_arcs(), "arcs")
