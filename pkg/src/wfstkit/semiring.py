"""Weight semirings.

Weights are plain Python floats; a :class:`Semiring` instance supplies the
operations that give them meaning.  Three instances ship:

* ``TROPICAL``: (min, +, +inf, 0) over negative-log costs.
* ``LOG``: (-log(e^-a + e^-b), +, +inf, 0) over negative-log costs.
* ``PROBABILITY``: (+, *, 0, 1) over non-negative reals.
"""

import math

from .errors import DivergenceError, FormatError, SemiringMismatchError

INF = math.inf

REL_TOL = 1e-9
ABS_TOL = 1e-12


class Semiring:
    """Base class; subclasses define ``plus``, ``times``, ``divide`` and ``star``."""

    name = None
    zero = None
    one = None
    idempotent = False

    def plus(self, a, b):
        raise NotImplementedError

    def times(self, a, b):
        raise NotImplementedError

    def divide(self, a, b):
        """Return x with ``b (x) x == a``.  Raises ZeroDivisionError if b is zero."""
        raise NotImplementedError

    def star(self, w):
        """Return the closure sum 1 (+) w (+) w(x)w (+) ...; DivergenceError if undefined."""
        raise NotImplementedError

    def from_probability(self, p):
        """Map a probability into this semiring's weight domain."""
        raise NotImplementedError

    def sum(self, weights):
        total = self.zero
        for w in weights:
            total = self.plus(total, w)
        return total

    def product(self, weights):
        total = self.one
        for w in weights:
            total = self.times(total, w)
        return total

    def is_zero(self, w):
        return w == self.zero

    def is_one(self, w):
        return w == self.one

    def approx_equal(self, a, b, rel_tol=REL_TOL, abs_tol=ABS_TOL):
        if a == b:
            return True
        if math.isinf(a) or math.isinf(b):
            return False
        return math.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol)

    def check(self, w):
        """Return None if ``w`` is a member of the carrier set, else a reason string."""
        if not isinstance(w, (int, float)):
            return f"weight {w!r} is not a number"
        if math.isnan(w):
            return "weight is NaN"
        return None

    def parse_weight(self, text):
        try:
            w = float(text)
        except ValueError:
            raise FormatError(f"bad weight {text!r}") from None
        problem = self.check(w)
        if problem:
            raise FormatError(f"{problem} ({text!r}) in {self.name} semiring")
        return w

    def format_weight(self, w):
        if w == INF:
            return "inf"
        return f"{w:.9g}"

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r}>"

    def __reduce__(self):
        return (get_semiring, (self.name,))


class TropicalSemiring(Semiring):
    name = "tropical"
    zero = INF
    one = 0.0
    idempotent = True

    def plus(self, a, b):
        return a if a <= b else b

    def times(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def divide(self, a, b):
        if b == INF:
            raise ZeroDivisionError("division by tropical zero")
        if a == INF:
            return INF
        return a - b

    def star(self, w):
        if w < 0:
            raise DivergenceError(f"cycle of negative weight {w:g} in the tropical semiring")
        return 0.0

    def from_probability(self, p):
        return -math.log(p) if p > 0 else INF

    def check(self, w):
        problem = super().check(w)
        if problem is None and w == -INF:
            problem = "weight is -inf"
        return problem


class LogSemiring(Semiring):
    name = "log"
    zero = INF
    one = 0.0

    def plus(self, a, b):
        if a == INF:
            return b
        if b == INF:
            return a
        lo = a if a <= b else b
        return lo - math.log1p(math.exp(-abs(a - b)))

    def times(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def divide(self, a, b):
        if b == INF:
            raise ZeroDivisionError("division by log-semiring zero")
        if a == INF:
            return INF
        return a - b

    def star(self, w):
        if w == INF:
            return 0.0
        if w <= 0:
            raise DivergenceError(f"cycle of weight {w:g} diverges in the log semiring")
        return math.log(-math.expm1(-w))

    def from_probability(self, p):
        return -math.log(p) if p > 0 else INF

    def check(self, w):
        problem = super().check(w)
        if problem is None and w == -INF:
            problem = "weight is -inf"
        return problem


class ProbabilitySemiring(Semiring):
    name = "prob"
    zero = 0.0
    one = 1.0

    def plus(self, a, b):
        return a + b

    def times(self, a, b):
        return a * b

    def divide(self, a, b):
        if b == 0.0:
            raise ZeroDivisionError("division by probability zero")
        return a / b

    def star(self, w):
        if w >= 1.0:
            raise DivergenceError(f"cycle of weight {w:g} diverges in the probability semiring")
        return 1.0 / (1.0 - w)

    def from_probability(self, p):
        return float(p)

    def check(self, w):
        problem = super().check(w)
        if problem is None and (w < 0 or math.isinf(w)):
            problem = "weight outside [0, inf)"
        return problem


TROPICAL = TropicalSemiring()
LOG = LogSemiring()
PROBABILITY = ProbabilitySemiring()

SEMIRINGS = {s.name: s for s in (TROPICAL, LOG, PROBABILITY)}


def get_semiring(name):
    if isinstance(name, Semiring):
        return name
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise ValueError(f"unknown semiring {name!r}; expected one of {sorted(SEMIRINGS)}") from None


def same_semiring(*machines):
    """Return the semiring shared by all ``machines``; raise if they differ."""
    semiring = machines[0].semiring
    for m in machines[1:]:
        if m.semiring is not semiring:
            raise SemiringMismatchError(f"semiring mismatch: {semiring.name} vs {m.semiring.name}")
    return semiring
