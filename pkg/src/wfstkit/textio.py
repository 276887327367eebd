"""Line-oriented text format for machines and symbol tables.

::

    #semiring tropical
    #initial 0.5
    0 1 a b 1.25
    1 2 <eps> c
    2 0.5

Arc lines are ``src dst isym osym [weight]``; final lines are
``state [weight]``; omitted weights are the semiring one.  The source of
the first arc line (or the state of the first final line) is the start
state.  Two further headers are written only when needed: ``#start N``
when the start state has no lines of its own, and ``#states N`` when
trailing states would otherwise be invisible.

Without a symbol table, symbols are decimal labels (``<eps>`` is also
accepted for 0).
"""

from pathlib import Path

from .errors import FormatError, UnknownSymbolError
from .fst import EPSILON, EPSILON_SYMBOL, Arc, Fst, SymbolTable, validate
from .semiring import get_semiring


def _parse_symbol(token, table, lineno):
    if table is not None:
        if token in table:
            return table.find(token)
        raise UnknownSymbolError(f"unknown symbol {token!r}", lineno)
    if token == EPSILON_SYMBOL:
        return EPSILON
    if token.isdigit():
        return int(token)
    raise UnknownSymbolError(f"symbol {token!r} is not a label and no symbol table was given", lineno)


def _parse_state(token, lineno):
    if not token.isdigit():
        raise FormatError(f"bad state id {token!r}", lineno)
    return int(token)


def parse_text(text, isyms=None, osyms=None, semiring=None, check=True):
    """Parse ``text`` into an :class:`Fst`.

    ``semiring`` is used when the text has no ``#semiring`` header; if both
    are present they must agree.  Defaults to tropical.  With ``check`` off,
    structural problems found by :func:`~wfstkit.fst.validate` are left for
    the caller to report.
    """
    declared = None
    initial = None
    start = None
    n_states = None
    arcs = {}
    finals = {}
    first_state = None
    max_state = -1
    body = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(" ")
            value = value.strip()
            if key == "semiring":
                try:
                    declared = get_semiring(value)
                except ValueError as e:
                    raise FormatError(str(e), lineno) from None
            elif key in ("initial", "start", "states"):
                if not value:
                    raise FormatError(f"#{key} needs a value", lineno)
                if key == "initial":
                    initial = (value, lineno)
                elif key == "start":
                    start = _parse_state(value, lineno)
                else:
                    n_states = _parse_state(value, lineno)
            else:
                raise FormatError(f"unknown directive #{key}", lineno)
            continue
        body.append((lineno, line.split()))

    if semiring is not None:
        semiring = get_semiring(semiring)
        if declared is not None and declared is not semiring:
            raise FormatError(f"text declares semiring {declared.name}, caller asked for {semiring.name}")
    sr = declared or semiring or get_semiring("tropical")

    for lineno, fields in body:
        if len(fields) in (4, 5):
            src = _parse_state(fields[0], lineno)
            dst = _parse_state(fields[1], lineno)
            il = _parse_symbol(fields[2], isyms, lineno)
            ol = _parse_symbol(fields[3], osyms, lineno)
            w = sr.one if len(fields) == 4 else _weight(sr, fields[4], lineno)
            arcs.setdefault(src, []).append(Arc(il, ol, w, dst))
            max_state = max(max_state, src, dst)
            if first_state is None:
                first_state = src
        elif len(fields) in (1, 2):
            q = _parse_state(fields[0], lineno)
            w = sr.one if len(fields) == 1 else _weight(sr, fields[1], lineno)
            if q in finals:
                raise FormatError(f"state {q} listed final twice", lineno)
            if sr.is_zero(w):
                raise FormatError(f"final weight of state {q} is zero; omit the line instead", lineno)
            finals[q] = w
            max_state = max(max_state, q)
            if first_state is None:
                first_state = q
        else:
            raise FormatError(f"expected 1, 2, 4 or 5 fields, got {len(fields)}", lineno)

    if start is None:
        start = first_state
    if start is None:
        raise FormatError("no start state: the text has no arc or final lines")
    max_state = max(max_state, start)
    count = max_state + 1
    if n_states is not None:
        if n_states < count:
            raise FormatError(f"#states {n_states} but state {max_state} is used")
        count = n_states
    states = [arcs.get(q, []) for q in range(count)]
    iw = sr.one if initial is None else _weight(sr, *initial)
    fst = Fst(sr, states, start, finals, initial_weight=iw, isyms=isyms, osyms=osyms)
    problems = validate(fst) if check else None
    if problems:
        raise FormatError("; ".join(problems))
    return fst


def _weight(sr, token, lineno):
    try:
        return sr.parse_weight(token)
    except FormatError as e:
        raise FormatError(str(e), lineno) from None


def _symbol(label, table):
    if table is None:
        return EPSILON_SYMBOL if label == EPSILON else str(label)
    return table.symbol(label)


def format_state(fst, q, isyms=None, osyms=None):
    """Text lines (without newline) for one state's arcs and final weight."""
    sr = fst.semiring
    lines = []
    for a in fst.arcs(q):
        parts = [str(q), str(a.nextstate), _symbol(a.ilabel, isyms), _symbol(a.olabel, osyms)]
        if not sr.is_one(a.weight):
            parts.append(sr.format_weight(a.weight))
        lines.append(" ".join(parts))
    if fst.is_final(q):
        w = fst.final(q)
        lines.append(str(q) if sr.is_one(w) else f"{q} {sr.format_weight(w)}")
    return lines


def format_header(fst, start_needed=False):
    sr = fst.semiring
    lines = [f"#semiring {sr.name}"]
    if not sr.is_one(fst.initial_weight):
        lines.append(f"#initial {sr.format_weight(fst.initial_weight)}")
    if start_needed:
        lines.append(f"#start {fst.start}")
    return lines


def format_text(fst, symbols=True):
    """Render ``fst``.  The start state's lines come first, then states in id order.

    With ``symbols`` false, labels are written as integers even when the
    machine carries symbol tables.
    """
    isyms = fst.isyms if symbols else None
    osyms = fst.osyms if symbols else None
    start_lines = format_state(fst, fst.start, isyms, osyms)
    lines = format_header(fst, start_needed=not start_lines)
    highest = fst.start
    for q in range(fst.num_states):
        if fst.arcs(q) or fst.is_final(q):
            highest = max(highest, q, *(a.nextstate for a in fst.arcs(q)))
    if highest + 1 < fst.num_states:
        lines.append(f"#states {fst.num_states}")
    lines.extend(start_lines)
    for q in range(fst.num_states):
        if q != fst.start:
            lines.extend(format_state(fst, q, isyms, osyms))
    return "\n".join(lines) + "\n"


def read_fst(path, isyms=None, osyms=None, semiring=None):
    return parse_text(Path(path).read_text(), isyms, osyms, semiring)


def write_fst(fst, path, symbols=True):
    Path(path).write_text(format_text(fst, symbols))


def read_symbols(path):
    return SymbolTable.from_text(Path(path).read_text())


def write_symbols(table, path):
    Path(path).write_text(table.to_text())
