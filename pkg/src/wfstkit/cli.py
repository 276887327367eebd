"""``wfstkit`` command-line tool.

Machines travel between subcommands in the text format with integer
labels; ``compile`` maps symbols to labels and ``print`` maps them back.
``-`` reads standard input.  Exit status: 0 on success, 1 on domain errors,
2 on usage errors.
"""

import argparse
import sys
from pathlib import Path

from . import cascade, optimize, rational, search, textio
from .compose import LazyComposeFst, compose
from .errors import FormatError, WfstError
from .fst import validate

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text()


def _load(path, **kw):
    return textio.parse_text(_read_text(path), **kw)


def _symbols(path):
    return None if path is None else textio.SymbolTable.from_text(_read_text(path))


def _emit(args, text):
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_fst(args, fst):
    _emit(args, textio.format_text(fst, symbols=False))


def cmd_compile(args):
    isyms = _symbols(args.isyms)
    osyms = _symbols(args.osyms) if args.osyms else isyms
    fst = _load(args.input, isyms=isyms, osyms=osyms, semiring=args.semiring)
    _emit_fst(args, fst)


def cmd_print(args):
    fst = _load(args.input)
    isyms = _symbols(args.isyms)
    osyms = _symbols(args.osyms) if args.osyms else isyms
    fst = fst.with_symbols(isyms, osyms)
    problems = validate(fst)
    if problems:
        raise WfstError("; ".join(problems))
    _emit(args, textio.format_text(fst, symbols=True))


def _binary(op):
    def run(args):
        _emit_fst(args, op(_load(args.a), _load(args.b)))
    return run


def _unary(op):
    def run(args):
        _emit_fst(args, op(_load(args.input)))
    return run


def cmd_compose(args):
    a, b = _load(args.a), _load(args.b)
    if not args.lazy:
        _emit_fst(args, compose(a, b))
        return
    lazy = LazyComposeFst(a, b, cache=not args.no_cache)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        first = True
        for q, arcs, final in lazy.iter_expand():
            if first:
                header = textio.format_header(lazy, start_needed=not arcs and lazy.semiring.is_zero(final))
                out.write("\n".join(header) + "\n")
                first = False
            lines = textio.format_state(_StateView(lazy, q, arcs, final), q)
            if lines:
                out.write("\n".join(lines) + "\n")
            out.flush()
    finally:
        if args.output:
            out.close()


class _StateView:
    """Adapts one expanded lazy state to what ``format_state`` reads."""

    def __init__(self, lazy, q, arcs, final):
        self.semiring = lazy.semiring
        self._q, self._arcs, self._final = q, arcs, final

    def arcs(self, q):
        return self._arcs

    def is_final(self, q):
        return not self.semiring.is_zero(self._final)

    def final(self, q):
        return self._final


def cmd_determinize(args):
    _emit_fst(args, optimize.determinize(_load(args.input), max_states=args.max_states))


def cmd_shortestpath(args):
    fst = _load(args.input)
    path = search.shortest_path(fst)
    if path is None:
        raise WfstError("no path: machine accepts nothing")
    isyms = _symbols(args.isyms)
    osyms = _symbols(args.osyms) if args.osyms else isyms

    def render(labels, table):
        return " ".join(table.symbol(x) if table is not None else str(x) for x in labels)

    w = fst.semiring.format_weight(path.weight)
    _emit(args, f"{render(path.ilabels, isyms)}\t{render(path.olabels, osyms)}\t{w}\n")


def cmd_validate(args):
    try:
        fst = textio.parse_text(_read_text(args.input), check=False)
    except FormatError as e:
        print(e, file=sys.stderr)
        return EXIT_DOMAIN
    isyms = _symbols(args.isyms)
    osyms = _symbols(args.osyms) if args.osyms else isyms
    if isyms is not None:
        fst = fst.with_symbols(isyms, osyms)
    problems = validate(fst)
    for p in problems:
        print(p)
    if not problems:
        print("ok")
    return EXIT_DOMAIN if problems else EXIT_OK


def _read_tsv(path, fields):
    rows = []
    for lineno, line in enumerate(_read_text(path).splitlines(), 1):
        # no comment syntax: unit names such as #-d+uw start with '#'
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != fields:
            raise FormatError(f"{path}: expected {fields} tab-separated fields", lineno)
        rows.append((lineno, [p.strip() for p in parts]))
    return rows


def _number(text, path, lineno):
    try:
        return float(text)
    except ValueError:
        raise FormatError(f"{path}: bad number {text!r}", lineno) from None


def load_acoustic_models(directory):
    """Read every ``*.tsv`` in ``directory``: ``unit<TAB>obs obs ...<TAB>prob`` lines."""
    d = Path(directory)
    if not d.is_dir():
        raise UsageError(f"no such directory: {directory}")
    models = {}
    for path in sorted(d.glob("*.tsv")):
        for lineno, (unit, obs, prob) in _read_tsv(str(path), 3):
            models.setdefault(unit, []).append((obs.split(), _number(prob, path, lineno)))
    if not models:
        raise WfstError(f"no acoustic models found in {directory}")
    return models


def load_lexicon(path):
    entries = {}
    for lineno, (word, phones, prob) in _read_tsv(path, 3):
        entries.setdefault(word, []).append((phones.split(), _number(prob, path, lineno)))
    return entries


def load_bigrams(path):
    counts = {}
    for lineno, (w1, w2, count) in _read_tsv(path, 3):
        counts[(w1, w2)] = counts.get((w1, w2), 0) + _number(count, path, lineno)
    return counts


def cmd_decode(args):
    recognizer = cascade.Recognizer(
        load_acoustic_models(args.am), load_lexicon(args.lex), load_bigrams(args.lm), use_context=args.cd)
    observations = _read_text(args.obs).split()
    words, weight = recognizer.decode(observations)
    _emit(args, f"{' '.join(words)}\t{recognizer.semiring.format_weight(weight)}\n")


def build_parser():
    parser = argparse.ArgumentParser(prog="wfstkit", description="Weighted finite-state transducer toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, inputs=("input",)):
        p = sub.add_parser(name, help=help)
        for i in inputs:
            p.add_argument(i, help="machine file, or - for stdin")
        p.add_argument("-o", "--output", help="write result here instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("compile", cmd_compile, "map symbols to labels")
    p.add_argument("--isyms")
    p.add_argument("--osyms", help="defaults to --isyms")
    p.add_argument("--semiring", default="tropical", choices=["tropical", "log", "prob"])
    p = add("print", cmd_print, "map labels back to symbols")
    p.add_argument("--isyms")
    p.add_argument("--osyms", help="defaults to --isyms")
    add("union", _binary(rational.union), "a ⊕ b", ("a", "b"))
    add("concat", _binary(rational.concat), "a followed by b", ("a", "b"))
    add("closure", _unary(rational.closure), "Kleene star")
    p = add("compose", cmd_compose, "a ∘ b", ("a", "b"))
    p.add_argument("--lazy", action="store_true", help="expand on demand, streaming states as produced")
    p.add_argument("--expand-from-start", action="store_true",
                   help="with --lazy: expand every state reachable from the start (the default)")
    p.add_argument("--no-cache", action="store_true", help="with --lazy: do not memoize expanded states")
    add("rmepsilon", _unary(optimize.rm_epsilon), "remove epsilon:epsilon arcs")
    p = add("determinize", cmd_determinize, "weighted subset construction")
    p.add_argument("--max-states", type=int, default=optimize.DEFAULT_MAX_STATES)
    add("push", _unary(optimize.push_weights), "push weights toward the start")
    add("minimize", _unary(optimize.minimize), "minimal deterministic acceptor")
    p = add("shortestpath", cmd_shortestpath, "best path: ilabels TAB olabels TAB weight")
    p.add_argument("--isyms")
    p.add_argument("--osyms")
    p = add("validate", cmd_validate, "report structural problems")
    p.add_argument("--isyms")
    p.add_argument("--osyms")

    p = sub.add_parser("decode", help="recognize an observation sequence with the toy cascade")
    p.add_argument("--obs", required=True, help="whitespace-separated observation symbols")
    p.add_argument("--am", required=True, help="directory of unit<TAB>observations<TAB>prob files")
    p.add_argument("--cd", action="store_true", help="units are context-dependent (l-c+r); insert C")
    p.add_argument("--lex", required=True, help="word<TAB>phones<TAB>prob")
    p.add_argument("--lm", required=True, help="w1<TAB>w2<TAB>count")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decode)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args)
    except UsageError as e:
        print(f"wfstkit {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except WfstError as e:
        print(f"wfstkit {args.command}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
