"""Weighted transducer data model.

An :class:`Fst` is immutable once built.  Use :class:`FstBuilder` to
construct one, or the module-level helpers for common shapes.  Label 0 is
reserved for epsilon in every machine.
"""

from collections import deque
from typing import NamedTuple

from .errors import EnumerationLimitError, PreconditionError, SymbolTableError, WfstError
from .semiring import TROPICAL, get_semiring

EPSILON = 0
EPSILON_SYMBOL = "<eps>"
DEFAULT_MAX_PATHS = 10**6


class SymbolTable:
    """Bijection between symbol strings and integer labels; ``<eps>`` is always 0."""

    def __init__(self, symbols=()):
        self._sym2id = {EPSILON_SYMBOL: EPSILON}
        self._id2sym = {EPSILON: EPSILON_SYMBOL}
        for sym in symbols:
            self.add_symbol(sym)

    @classmethod
    def from_pairs(cls, pairs):
        table = cls()
        for sym, label in pairs:
            table.add_symbol(sym, label)
        return table

    def add_symbol(self, sym, label=None):
        """Add ``sym`` (idempotent) and return its label."""
        if sym in self._sym2id:
            found = self._sym2id[sym]
            if label is not None and label != found:
                raise SymbolTableError(f"symbol {sym!r} already has id {found}, not {label}")
            return found
        if label is None:
            label = max(self._id2sym) + 1
        elif label in self._id2sym:
            raise SymbolTableError(f"id {label} already bound to {self._id2sym[label]!r}")
        if label < 0:
            raise SymbolTableError(f"negative id {label} for {sym!r}")
        if sym == EPSILON_SYMBOL or label == EPSILON:
            raise SymbolTableError(f"{EPSILON_SYMBOL} must map to 0")
        self._sym2id[sym] = label
        self._id2sym[label] = sym
        return label

    def find(self, key):
        """Label for a symbol string, or symbol for a label; KeyError if absent."""
        if isinstance(key, str):
            return self._sym2id[key]
        return self._id2sym[key]

    def label(self, sym):
        try:
            return self._sym2id[sym]
        except KeyError:
            raise SymbolTableError(f"unknown symbol {sym!r}") from None

    def symbol(self, label):
        try:
            return self._id2sym[label]
        except KeyError:
            raise SymbolTableError(f"unknown label {label}") from None

    def __contains__(self, key):
        return key in (self._sym2id if isinstance(key, str) else self._id2sym)

    def __len__(self):
        return len(self._sym2id)

    def __iter__(self):
        """Yield (symbol, label) pairs in label order."""
        for label in sorted(self._id2sym):
            yield self._id2sym[label], label

    def __eq__(self, other):
        return isinstance(other, SymbolTable) and self._sym2id == other._sym2id

    def __repr__(self):
        return f"SymbolTable({len(self)} symbols)"

    def copy(self):
        return SymbolTable.from_pairs(p for p in self if p[1] != EPSILON)

    def compatible(self, other):
        """True if no symbol or label is bound differently in the two tables."""
        for sym, label in other:
            if self._sym2id.get(sym, label) != label or self._id2sym.get(label, sym) != sym:
                return False
        return True

    def merged(self, other):
        if not self.compatible(other):
            raise SymbolTableError("symbol tables conflict")
        table = self.copy()
        for sym, label in other:
            if label != EPSILON:
                table.add_symbol(sym, label)
        return table

    def to_text(self):
        return "".join(f"{sym}\t{label}\n" for sym, label in self)

    @classmethod
    def from_text(cls, text):
        from .errors import FormatError

        table = cls()
        seen_eps = False
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2:
                raise FormatError("expected '<symbol><TAB><id>'", lineno)
            sym, raw = parts[0].strip(), parts[1].strip()
            try:
                label = int(raw)
            except ValueError:
                raise FormatError(f"bad id {raw!r}", lineno) from None
            if sym == EPSILON_SYMBOL or label == EPSILON:
                if sym != EPSILON_SYMBOL or label != EPSILON:
                    raise FormatError(f"{EPSILON_SYMBOL} must map to 0", lineno)
                seen_eps = True
                continue
            try:
                table.add_symbol(sym, label)
            except SymbolTableError as e:
                raise FormatError(str(e), lineno) from None
        if not seen_eps:
            raise FormatError(f"symbol table lacks the mandatory '{EPSILON_SYMBOL}\t0' entry")
        return table


def merge_tables(a, b):
    """Union of two optional symbol tables; None is treated as 'unknown'."""
    if a is None:
        return b
    if b is None or a is b:
        return a
    return a.merged(b)


def check_alphabets(out_table, in_table, what="alphabet"):
    if out_table is not None and in_table is not None and out_table is not in_table:
        if not out_table.compatible(in_table):
            raise SymbolTableError(f"{what} mismatch: symbol tables bind labels differently")


class Arc(NamedTuple):
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


class Fst:
    """An immutable weighted transducer.

    ``states`` is a sequence of arc sequences indexed by state id.  ``finals``
    maps final states to their (non-zero) final weights.  The constructor
    stores what it is given without checking; :func:`validate` reports
    problems.
    """

    __slots__ = ("semiring", "_arcs", "start", "initial_weight", "_finals", "isyms", "osyms")

    def __init__(self, semiring, states, start, finals, initial_weight=None, isyms=None, osyms=None):
        self.semiring = get_semiring(semiring)
        self._arcs = tuple(tuple(Arc(*a) for a in arcs) for arcs in states)
        self.start = start
        self.initial_weight = self.semiring.one if initial_weight is None else initial_weight
        self._finals = dict(finals)
        self.isyms = isyms
        self.osyms = osyms

    @property
    def num_states(self):
        return len(self._arcs)

    def states(self):
        return range(len(self._arcs))

    def arcs(self, state):
        return self._arcs[state]

    def final(self, state):
        return self._finals.get(state, self.semiring.zero)

    def is_final(self, state):
        return state in self._finals

    @property
    def finals(self):
        return dict(self._finals)

    def num_arcs(self, state=None):
        if state is None:
            return sum(len(a) for a in self._arcs)
        return len(self._arcs[state])

    def is_acceptor(self):
        return all(a.ilabel == a.olabel for arcs in self._arcs for a in arcs)

    def has_epsilons(self):
        return any(a.ilabel == EPSILON or a.olabel == EPSILON for arcs in self._arcs for a in arcs)

    def replace(self, **changes):
        """Copy with some fields replaced (``states``, ``start``, ``finals``, ...)."""
        fields = dict(
            semiring=self.semiring,
            states=self._arcs,
            start=self.start,
            finals=self._finals,
            initial_weight=self.initial_weight,
            isyms=self.isyms,
            osyms=self.osyms,
        )
        fields.update(changes)
        return Fst(**fields)

    def with_symbols(self, isyms, osyms=None):
        return self.replace(isyms=isyms, osyms=isyms if osyms is None else osyms)

    def __eq__(self, other):
        if not isinstance(other, Fst):
            return NotImplemented
        return (
            self.semiring is other.semiring
            and self.start == other.start
            and self.initial_weight == other.initial_weight
            and self._arcs == other._arcs
            and self._finals == other._finals
        )

    __hash__ = None

    def __repr__(self):
        return f"<Fst {self.semiring.name} states={self.num_states} arcs={self.num_arcs()}>"


class FstBuilder:
    """Mutable staging area for an :class:`Fst`."""

    def __init__(self, semiring=TROPICAL, isyms=None, osyms=None):
        self.semiring = get_semiring(semiring)
        self.isyms = isyms
        self.osyms = osyms
        self._arcs = []
        self._finals = {}
        self.start = None
        self.initial_weight = self.semiring.one

    @property
    def num_states(self):
        return len(self._arcs)

    def add_state(self):
        self._arcs.append([])
        return len(self._arcs) - 1

    def add_states(self, n):
        first = len(self._arcs)
        self._arcs.extend([] for _ in range(n))
        return range(first, first + n)

    def _ensure(self, state):
        while state >= len(self._arcs):
            self._arcs.append([])

    def add_arc(self, src, ilabel, olabel, weight, dst):
        self._ensure(max(src, dst))
        self._arcs[src].append(Arc(ilabel, olabel, weight, dst))
        return self

    def set_start(self, state):
        self._ensure(state)
        self.start = state
        return self

    def set_final(self, state, weight=None):
        """Mark ``state`` final.  A zero weight removes finality."""
        self._ensure(state)
        weight = self.semiring.one if weight is None else weight
        if self.semiring.is_zero(weight):
            self._finals.pop(state, None)
        else:
            self._finals[state] = weight
        return self

    def build(self):
        if self.start is None:
            if not self._arcs:
                self.add_state()
            self.start = 0
        fst = Fst(
            self.semiring,
            self._arcs,
            self.start,
            self._finals,
            initial_weight=self.initial_weight,
            isyms=self.isyms,
            osyms=self.osyms,
        )
        problems = validate(fst)
        if problems:
            raise WfstError("invalid machine: " + "; ".join(problems))
        return fst


def validate(fst):
    """Return a list of invariant violations; empty means ``fst`` is well formed."""
    problems = []
    sr = fst.semiring
    n = fst.num_states
    if n == 0:
        problems.append("machine has no states")
    elif not (isinstance(fst.start, int) and 0 <= fst.start < n):
        problems.append(f"start state {fst.start} out of range")
    bad = sr.check(fst.initial_weight)
    if bad:
        problems.append(f"initial weight: {bad}")
    for q in range(n):
        for i, arc in enumerate(fst.arcs(q)):
            where = f"state {q} arc {i}"
            if not (isinstance(arc.nextstate, int) and 0 <= arc.nextstate < n):
                problems.append(f"{where}: nextstate {arc.nextstate} out of range")
            for side, label, table in (("ilabel", arc.ilabel, fst.isyms), ("olabel", arc.olabel, fst.osyms)):
                if not isinstance(label, int) or label < 0:
                    problems.append(f"{where}: {side} {label!r} is not a non-negative integer")
                elif table is not None and label not in table:
                    problems.append(f"{where}: {side} {label} missing from symbol table")
            bad = sr.check(arc.weight)
            if bad:
                problems.append(f"{where}: {bad}")
    for q, w in fst.finals.items():
        if not (isinstance(q, int) and 0 <= q < n):
            problems.append(f"final state {q} out of range")
        bad = sr.check(w)
        if bad:
            problems.append(f"final weight of state {q}: {bad}")
        elif sr.is_zero(w):
            problems.append(f"state {q} listed final with zero weight")
    return problems


def linear_fst(ilabels, olabels=None, weight=None, semiring=TROPICAL, isyms=None, osyms=None):
    """Chain machine mapping one input sequence to one output sequence.

    The shorter side is padded with epsilons; the weight sits on the final state.
    Symbols may be given as strings when the matching table is supplied.
    """
    semiring = get_semiring(semiring)
    ilabels = to_labels(ilabels, isyms)
    olabels = ilabels if olabels is None else to_labels(olabels, osyms if osyms is not None else isyms)
    length = max(len(ilabels), len(olabels))
    b = FstBuilder(semiring, isyms, osyms if osyms is not None else isyms)
    b.add_states(length + 1)
    b.set_start(0)
    for i in range(length):
        il = ilabels[i] if i < len(ilabels) else EPSILON
        ol = olabels[i] if i < len(olabels) else EPSILON
        b.add_arc(i, il, ol, semiring.one, i + 1)
    b.set_final(length, semiring.one if weight is None else weight)
    return b.build()


def empty_fst(semiring=TROPICAL, isyms=None, osyms=None):
    """One-state machine with the empty language."""
    b = FstBuilder(semiring, isyms, osyms)
    b.set_start(b.add_state())
    return b.build()


def to_labels(seq, table=None):
    """Normalize a string / symbol list / label list to a tuple of labels."""
    if isinstance(seq, str):
        seq = seq.split()
    labels = []
    for item in seq:
        if isinstance(item, str):
            if table is None:
                raise SymbolTableError(f"symbol {item!r} given but machine has no symbol table")
            labels.append(table.label(item))
        else:
            labels.append(item)
    return tuple(labels)


def as_identity_transducer(acceptor):
    """View an acceptor as the identity transduction restricted to its language."""
    if not acceptor.is_acceptor():
        raise PreconditionError("as_identity_transducer requires an acceptor")
    states = [[Arc(a.ilabel, a.ilabel, a.weight, a.nextstate) for a in acceptor.arcs(q)] for q in acceptor.states()]
    return acceptor.replace(states=states, osyms=acceptor.isyms)


def _default_path_bound(fst, max_in, max_out):
    # Exact unless the machine has an epsilon:epsilon cycle: an acyclic run of
    # non-consuming arcs is shorter than the state count.
    return (max_in + max_out + 1) * max(fst.num_states, 1)


def transduction_weight(fst, input, output, max_path_len=None, max_paths=DEFAULT_MAX_PATHS):
    """Brute-force weight assigned by ``fst`` to the pair (input, output).

    Enumerates every accepting path whose epsilon-free labels spell the two
    strings and sums their weights.  Paths longer than ``max_path_len`` arcs
    are dropped.  Raises EnumerationLimitError after ``max_paths`` path
    extensions.
    """
    sr = fst.semiring
    inp = to_labels(input, fst.isyms)
    out = to_labels(output, fst.osyms)
    if max_path_len is None:
        max_path_len = _default_path_bound(fst, len(inp), len(out))
    total = sr.zero
    steps = 0
    stack = [(fst.start, 0, 0, fst.initial_weight, 0)]
    while stack:
        q, i, j, w, depth = stack.pop()
        if i == len(inp) and j == len(out) and fst.is_final(q):
            total = sr.plus(total, sr.times(w, fst.final(q)))
        if depth == max_path_len:
            continue
        for arc in fst.arcs(q):
            ni, nj = i, j
            if arc.ilabel != EPSILON:
                if i == len(inp) or inp[i] != arc.ilabel:
                    continue
                ni += 1
            if arc.olabel != EPSILON:
                if j == len(out) or out[j] != arc.olabel:
                    continue
                nj += 1
            steps += 1
            if steps > max_paths:
                raise EnumerationLimitError(f"more than {max_paths} partial paths enumerated")
            stack.append((arc.nextstate, ni, nj, sr.times(w, arc.weight), depth + 1))
    return total


def relation(fst, max_input_len, max_output_len, max_path_len=None, max_paths=DEFAULT_MAX_PATHS):
    """Brute-force table {(input, output): weight} of all pairs within the length bounds.

    Same enumeration as :func:`transduction_weight`, but without fixing the
    strings in advance.  Pairs of weight zero are omitted.
    """
    sr = fst.semiring
    if max_path_len is None:
        max_path_len = _default_path_bound(fst, max_input_len, max_output_len)
    table = {}
    steps = 0
    stack = [(fst.start, (), (), fst.initial_weight, 0)]
    while stack:
        q, inp, out, w, depth = stack.pop()
        if fst.is_final(q):
            key = (inp, out)
            table[key] = sr.plus(table.get(key, sr.zero), sr.times(w, fst.final(q)))
        if depth == max_path_len:
            continue
        for arc in fst.arcs(q):
            ni = inp if arc.ilabel == EPSILON else inp + (arc.ilabel,)
            no = out if arc.olabel == EPSILON else out + (arc.olabel,)
            if len(ni) > max_input_len or len(no) > max_output_len:
                continue
            steps += 1
            if steps > max_paths:
                raise EnumerationLimitError(f"more than {max_paths} partial paths enumerated")
            stack.append((arc.nextstate, ni, no, sr.times(w, arc.weight), depth + 1))
    return {k: v for k, v in table.items() if not sr.is_zero(v)}


def canonical_form(fst):
    """Structure of the accessible part renumbered in breadth-first arc order.

    Two machines with equal canonical forms are isomorphic.
    """
    order = {fst.start: 0}
    queue = deque([fst.start])
    arcs, finals = [], []
    while queue:
        q = queue.popleft()
        row = []
        for arc in fst.arcs(q):
            if arc.nextstate not in order:
                order[arc.nextstate] = len(order)
                queue.append(arc.nextstate)
            row.append((arc.ilabel, arc.olabel, arc.weight, order[arc.nextstate]))
        arcs.append(tuple(row))
        finals.append(fst.final(q))
    return fst.initial_weight, tuple(arcs), tuple(finals)


def isomorphic(a, b):
    return a.semiring is b.semiring and canonical_form(a) == canonical_form(b)
