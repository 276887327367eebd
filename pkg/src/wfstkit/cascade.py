"""Toy recognition cascade: observations ∘ phone models ∘ context ∘ lexicon ∘ grammar.

All builders take probabilities and convert them with the target
semiring's ``from_probability`` (negative logs for tropical and log).
"""

from collections import defaultdict
from typing import NamedTuple

from .compose import compose, compose_lazy
from .errors import NoPathError, PreconditionError, SymbolTableError
from .fst import EPSILON, FstBuilder, SymbolTable
from .rational import closure, union
from .search import shortest_path
from .semiring import TROPICAL, get_semiring

BOUNDARY = "#"
SENTENCE_START = "<s>"


class CdPhone(NamedTuple):
    left: str
    center: str
    right: str

    @property
    def name(self):
        return cd_unit_name(self.left, self.center, self.right)


class Biphone(NamedTuple):
    first: str
    second: str


def cd_unit_name(left, center, right):
    """Symbol for a context-dependent unit, e.g. ``d-ey+t``."""
    return f"{left}-{center}+{right}"


def observation_acceptor(observations, symbols, semiring=TROPICAL):
    """Linear acceptor with one arc per observation; state i is time t_i."""
    if isinstance(observations, str):
        observations = observations.split()
    if not observations:
        raise PreconditionError("observation sequence is empty")
    sr = get_semiring(semiring)
    b = FstBuilder(sr, symbols, symbols)
    b.add_states(len(observations) + 1)
    b.set_start(0)
    for t, obs in enumerate(observations):
        label = symbols.label(obs)
        b.add_arc(t, label, label, sr.one, t + 1)
    b.set_final(len(observations))
    return b.build()


def segment_model(output, realizations, isyms, osyms, semiring=TROPICAL):
    """Transducer mapping each listed input sequence to the single symbol ``output``.

    ``realizations`` is a list of (input symbols, probability).  The output
    symbol and the probability go on the first arc of each realization; the
    remaining arcs output epsilon.
    """
    sr = get_semiring(semiring)
    if not realizations:
        raise PreconditionError(f"no realizations given for {output!r}")
    out = osyms.label(output)
    b = FstBuilder(sr, isyms, osyms)
    start = b.add_state()
    b.set_start(start)
    for seq, prob in realizations:
        if isinstance(seq, str):
            seq = seq.split()
        if not seq:
            raise PreconditionError(f"empty realization for {output!r}")
        labels = [isyms.label(s) for s in seq]
        q = start
        for i, label in enumerate(labels):
            nxt = b.add_state()
            w = sr.from_probability(prob) if i == 0 else sr.one
            b.add_arc(q, label, out if i == 0 else EPSILON, w, nxt)
            q = nxt
        b.set_final(q)
    return b.build()


def cd_phone_model(unit, observation_paths, obs_symbols, unit_symbols, semiring=TROPICAL):
    """One context-dependent phone model: acoustic realizations -> ``unit``."""
    return segment_model(unit, observation_paths, obs_symbols, unit_symbols, semiring)


def _closure_of_union(models):
    if not models:
        raise PreconditionError("at least one model is required")
    combined = models[0]
    for m in models[1:]:
        combined = union(combined, m)
    return closure(combined)


def phone_model_transducer(models):
    """Acoustic transducer: the closure of the union of phone models."""
    return _closure_of_union(list(models))


def context_dependency(inventory, phone_symbols=None, unit_symbols=None, semiring=TROPICAL):
    """Transducer from context-dependent units to context-independent phones.

    States are biphones over the inventory plus the boundary ``#``.  For a
    unit with center c, left l and right r there is an arc (l, c) -> (c, r)
    reading the unit and writing r; writing ``#`` is written as epsilon.
    The start (#, #) has an arc (#, #) -> (#, r) reading epsilon and writing
    r, so the first phone is emitted before its unit is read; every (c, #)
    is final.  The output phone string therefore equals the center phones of
    the unit string.

    Returns (fst, phone_symbols, unit_symbols); tables are created or
    extended as needed.
    """
    inventory = list(dict.fromkeys(inventory))
    if not inventory:
        raise PreconditionError("phone inventory is empty")
    if BOUNDARY in inventory:
        raise PreconditionError(f"{BOUNDARY!r} is reserved for the boundary")
    sr = get_semiring(semiring)
    phone_symbols = phone_symbols if phone_symbols is not None else SymbolTable()
    unit_symbols = unit_symbols if unit_symbols is not None else SymbolTable()
    for p in inventory:
        phone_symbols.add_symbol(p)
    contexts = [BOUNDARY] + inventory
    for l in contexts:
        for c in inventory:
            for r in contexts:
                unit_symbols.add_symbol(cd_unit_name(l, c, r))

    b = FstBuilder(sr, unit_symbols, phone_symbols)
    state = {}
    for x in contexts:
        for y in contexts:
            state[Biphone(x, y)] = b.add_state()
    b.set_start(state[Biphone(BOUNDARY, BOUNDARY)])
    for r in inventory:
        b.add_arc(state[Biphone(BOUNDARY, BOUNDARY)], EPSILON, phone_symbols.label(r), sr.one,
                  state[Biphone(BOUNDARY, r)])
    for l in contexts:
        for c in inventory:
            for r in contexts:
                out = EPSILON if r == BOUNDARY else phone_symbols.label(r)
                b.add_arc(state[Biphone(l, c)], unit_symbols.label(cd_unit_name(l, c, r)), out, sr.one,
                          state[Biphone(c, r)])
    for c in inventory:
        b.set_final(state[Biphone(c, BOUNDARY)])
    return b.build(), phone_symbols, unit_symbols


def lexicon(entries, phone_symbols, word_symbols, semiring=TROPICAL):
    """Pronunciation transducer: closure of the union of word models.

    ``entries`` maps word -> list of (phone sequence, probability).
    """
    if not entries:
        raise PreconditionError("lexicon is empty")
    models = []
    for word, prons in entries.items():
        for phones, _ in prons:
            seq = phones.split() if isinstance(phones, str) else phones
            for p in seq:
                if p not in phone_symbols:
                    raise SymbolTableError(f"unknown phone {p!r} in pronunciation of {word!r}")
        models.append(segment_model(word, prons, phone_symbols, word_symbols, semiring))
    return _closure_of_union(models)


def ngram_model(counts, word_symbols, semiring=TROPICAL):
    """Bigram acceptor with maximum-likelihood arc weights.

    ``counts`` maps (previous word, word) -> count.  There is one state per
    conditioning word plus a start state.  If any count has ``<s>`` as its
    previous word, the start state uses those counts; otherwise it uses the
    unigram distribution of second words.  Every state is final with weight
    one.
    """
    sr = get_semiring(semiring)
    by_context = defaultdict(dict)
    for (prev, word), count in counts.items():
        if count < 0:
            raise PreconditionError(f"negative count for {(prev, word)}")
        if word not in word_symbols:
            raise SymbolTableError(f"word {word!r} not in vocabulary")
        if prev != SENTENCE_START and prev not in word_symbols:
            raise SymbolTableError(f"word {prev!r} not in vocabulary")
        by_context[prev][word] = by_context[prev].get(word, 0) + count
    if SENTENCE_START not in by_context:
        unigram = defaultdict(int)
        for (_, word), count in counts.items():
            unigram[word] += count
        by_context[SENTENCE_START] = dict(unigram)

    b = FstBuilder(sr, word_symbols, word_symbols)
    start = b.add_state()
    b.set_start(start)
    b.set_final(start)
    state = {}
    for word, label in word_symbols:
        if label == EPSILON:
            continue
        state[word] = b.add_state()
        b.set_final(state[word])
    for prev in [SENTENCE_START] + [w for w, label in word_symbols if label != EPSILON]:
        following = by_context.get(prev)
        if not following:
            continue
        total = sum(following.values())
        if total <= 0:
            raise PreconditionError(f"zero total count for context {prev!r}")
        src = start if prev == SENTENCE_START else state[prev]
        for word in sorted(following, key=word_symbols.label):
            c = following[word]
            if c == 0:
                continue
            label = word_symbols.label(word)
            b.add_arc(src, label, label, sr.from_probability(c / total), state[word])
    return b.build()


def decode(o, a, c, d, m, lazy=True):
    """Best word sequence for an observation acceptor through the cascade.

    Composes left to right (lazily by default) and takes the single best
    path.  Returns (words, weight); words are symbols when the grammar has a
    symbol table, labels otherwise.  Raises NoPathError if nothing matches.
    """
    join = compose_lazy if lazy else compose
    machine = o
    for nxt in (a, c, d, m):
        machine = join(machine, nxt)
    path = shortest_path(machine)
    if path is None:
        raise NoPathError("utterance not in model: no accepting path")
    table = m.osyms
    words = tuple(table.symbol(x) for x in path.olabels) if table is not None else path.olabels
    return words, path.weight


class Recognizer:
    """Holds the static cascade parts and decodes observation sequences."""

    def __init__(self, phone_models, lexicon_entries, bigram_counts, use_context=True, semiring=TROPICAL):
        self.semiring = get_semiring(semiring)
        self.obs_symbols = SymbolTable()
        self.phone_symbols = SymbolTable()
        self.word_symbols = SymbolTable()
        for word, prons in lexicon_entries.items():
            self.word_symbols.add_symbol(word)
            for phones, _ in prons:
                for p in (phones.split() if isinstance(phones, str) else phones):
                    self.phone_symbols.add_symbol(p)
        for prev, word in bigram_counts:
            for w in (prev, word):
                if w != SENTENCE_START and w not in self.word_symbols:
                    raise SymbolTableError(f"grammar word {w!r} missing from the lexicon")
        for realizations in phone_models.values():
            for obs, _ in realizations:
                for o in (obs.split() if isinstance(obs, str) else obs):
                    self.obs_symbols.add_symbol(o)
        inventory = [p for p, label in self.phone_symbols if label != EPSILON]
        if use_context:
            self.context, _, self.unit_symbols = context_dependency(inventory, self.phone_symbols,
                                                                    semiring=self.semiring)
        else:
            self.context = None
            self.unit_symbols = self.phone_symbols
        models = []
        for unit in phone_models:
            if unit not in self.unit_symbols:
                kind = "context-dependent unit" if use_context else "phone"
                raise SymbolTableError(f"acoustic model for unknown {kind} {unit!r}")
            models.append(cd_phone_model(unit, phone_models[unit], self.obs_symbols, self.unit_symbols,
                                         self.semiring))
        self.acoustic = phone_model_transducer(models)
        self.lexicon = lexicon(lexicon_entries, self.phone_symbols, self.word_symbols, self.semiring)
        self.grammar = ngram_model(bigram_counts, self.word_symbols, self.semiring)

    def observations(self, observations):
        if isinstance(observations, str):
            observations = observations.split()
        for o in observations:
            if o not in self.obs_symbols:
                raise SymbolTableError(f"unknown observation symbol {o!r}")
        return observation_acceptor(observations, self.obs_symbols, self.semiring)

    def cascade(self, observations):
        """The five (or four, without context) machines in composition order."""
        parts = [self.observations(observations), self.acoustic]
        if self.context is not None:
            parts.append(self.context)
        return parts + [self.lexicon, self.grammar]

    def decode(self, observations, lazy=True):
        parts = self.cascade(observations)
        if self.context is None:
            parts.insert(2, _identity(self.phone_symbols, self.semiring))
        return decode(*parts, lazy=lazy)


def _identity(symbols, semiring):
    b = FstBuilder(semiring, symbols, symbols)
    q = b.add_state()
    b.set_start(q)
    b.set_final(q)
    for _, label in symbols:
        if label != EPSILON:
            b.add_arc(q, label, label, b.semiring.one, q)
    return b.build()

