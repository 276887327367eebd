# # A two-word recognizer
#
# Observations are symbols o1, o2, o3 standing in for acoustic frames.
# Units are context-dependent phones written left-center+right, with "#"
# at word edges.  Probabilities become negative logs, so the best answer is
# the cheapest path.

# %%
import math

from wfstkit import Recognizer

phone_models = {
    "#-d+uw": [("o1", 0.9), ("o2", 0.1)],
    "#-t+uw": [("o2", 0.8), ("o1", 0.2)],
    "d-uw+#": [("o3", 0.7)],
    "t-uw+#": [("o3", 0.6)],
}
lexicon = {"do": [("d uw", 1.0)], "to": [("t uw", 1.0)]}
bigrams = {("<s>", "do"): 1, ("<s>", "to"): 3}

rec = Recognizer(phone_models, lexicon, bigrams)

# %%
# The grammar prefers "to" three to one, but the first frame decides.

for obs in ("o1 o3", "o2 o3"):
    words, cost = rec.decode(obs)
    print(obs, "->", " ".join(words), f"cost {cost:.4f}", f"p {math.exp(-cost):.4f}")

# %%
# By hand: 0.9 * 0.7 * 0.25 for "do", 0.8 * 0.6 * 0.75 for "to".

print(0.9 * 0.7 * 0.25, 0.8 * 0.6 * 0.75)

# %%
# The pieces of the cascade, in composition order.

for name, part in zip(("O", "A", "C", "D", "M"), rec.cascade("o1 o3")):
    print(name, part)
