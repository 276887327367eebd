"""Semiring-generic weighted finite-state transducers."""

from .cascade import Recognizer, decode
from .compose import LazyComposeFst, compose, compose_eager, compose_lazy, compose_unfiltered, lazy_expand
from .errors import (
    DivergenceError,
    EnumerationLimitError,
    FormatError,
    NoPathError,
    NonDeterminizableError,
    PreconditionError,
    SemiringMismatchError,
    SymbolTableError,
    UnknownSymbolError,
    WfstError,
)
from .fst import (
    EPSILON,
    Arc,
    Fst,
    FstBuilder,
    SymbolTable,
    as_identity_transducer,
    isomorphic,
    linear_fst,
    relation,
    transduction_weight,
    validate,
)
from .optimize import connect, determinize, minimize, push_weights, rm_epsilon
from .rational import closure, concat, union
from .search import Path, shortest_distance, shortest_path
from .semiring import LOG, PROBABILITY, TROPICAL, get_semiring
from .textio import format_text, parse_text, read_fst, write_fst

__version__ = "0.1.0"
