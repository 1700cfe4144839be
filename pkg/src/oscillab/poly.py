"""Sparse multivariate real polynomials with exact rational coefficients.

Variables are named x1..xn.  Coefficients are stored as ``fractions.Fraction``
so polytope arithmetic downstream stays exact; numeric evaluation converts to
binary floats (or complex).  Polynomials are immutable value objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

__all__ = [
    "Polynomial",
    "ParseError",
    "parse",
]

Exponent = tuple  # tuple[int, ...]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<var>x\d+)|(?P<num>\d+(?:\.\d+)?(?:/\d+)?)"
    r"|(?P<op>[-+*^()]))"
)


class ParseError(ValueError):
    """Syntax error in a polynomial expression; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in n variables as a map exponent tuple -> nonzero Fraction."""

    n: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be at least 1")
        clean = {}
        for exp, coeff in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.n:
                raise ValueError(f"exponent {exp} has wrong dimension (expected {self.n})")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _as_fraction(coeff)
            if c != 0:
                clean[exp] = c
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "Polynomial":
        return Polynomial(n, {})

    @staticmethod
    def constant(n: int, c) -> "Polynomial":
        return Polynomial(n, {tuple([0] * n): _as_fraction(c)})

    @staticmethod
    def monomial(n: int, exponent: Sequence[int], coeff=1) -> "Polynomial":
        return Polynomial(n, {tuple(exponent): _as_fraction(coeff)})

    @staticmethod
    def variable(n: int, i: int) -> "Polynomial":
        """The variable x_i (1-based) in ambient dimension n."""
        if not 1 <= i <= n:
            raise ValueError(f"variable index {i} out of range 1..{n}")
        exp = [0] * n
        exp[i - 1] = 1
        return Polynomial(n, {tuple(exp): Fraction(1)})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return Polynomial(self.n, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.n, out)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        return Polynomial(self.n, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and dict(self.terms) == dict(other.terms)
        )

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> frozenset:
        return frozenset(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self) -> Optional[int]:
        """The common total degree of all terms, or None if degrees are mixed."""
        if not self.terms:
            raise ValueError("zero polynomial")
        degs = {sum(e) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    # -- calculus ----------------------------------------------------------

    def partial(self, i: int) -> "Polynomial":
        """Partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} out of range")
        out = {}
        for exp, c in self.terms.items():
            k = exp[i - 1]
            if k == 0:
                continue
            e = list(exp)
            e[i - 1] = k - 1
            key = tuple(e)
            out[key] = out.get(key, Fraction(0)) + c * k
        return Polynomial(self.n, out)

    def evaluate(self, point: Sequence) -> Union[float, complex]:
        if len(point) != self.n:
            raise ValueError(f"point has dimension {len(point)}, expected {self.n}")
        total = 0.0
        for exp, c in self.terms.items():
            v = float(c)
            for x, k in zip(point, exp):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def evaluate_and_gradient(self, point: Sequence):
        """Value and all n partials at ``point`` (floats, or complex for complex input)."""
        value = self.evaluate(point)
        grad = [self.partial(i).evaluate(point) for i in range(1, self.n + 1)]
        return value, grad

    # -- structural maps -----------------------------------------------------

    def involution_pullback(self) -> "Polynomial":
        """Pullback under x_i -> -x_i: each coefficient picks up (-1)^|exponent|."""
        return Polynomial(
            self.n,
            {e: (c if sum(e) % 2 == 0 else -c) for e, c in self.terms.items()},
        )

    def restrict_to_weights(self, weights: Sequence[Fraction], level: Fraction) -> "Polynomial":
        """Partial sum over terms lying on the hyperplane sum(w_i * e_i) == level.

        Raises ValueError when the weights do not support the polynomial at
        ``level`` (i.e. some term lies strictly below it).
        """
        if len(weights) != self.n:
            raise ValueError("weight vector has wrong dimension")
        w = [_as_fraction(x) for x in weights]
        lv = _as_fraction(level)
        vals = {e: sum(wi * ei for wi, ei in zip(w, e)) for e in self.terms}
        if vals and min(vals.values()) < lv:
            raise ValueError("face is not incident to the polynomial's polytope")
        picked = {e: c for e, c in self.terms.items() if vals[e] == lv}
        if not picked:
            raise ValueError("no terms on the given face")
        return Polynomial(self.n, picked)

    def substitute_one(self, i: int) -> "Polynomial":
        """Set x_i = 1 and drop the variable; result lives in n-1 variables."""
        if self.n < 2:
            raise ValueError("cannot drop a variable from a univariate polynomial")
        if not 1 <= i <= self.n:
            raise ValueError("variable index out of range")
        out: dict = {}
        for exp, c in self.terms.items():
            e = tuple(exp[:i - 1] + exp[i:])
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.n - 1, out)

    # -- text form -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e)))
        pieces = []
        for exp in keys:
            c = self.terms[exp]
            factors = []
            if abs(c) != 1 or all(k == 0 for k in exp):
                factors.append(str(abs(c)))
            for i, k in enumerate(exp):
                if k == 1:
                    factors.append(f"x{i + 1}")
                elif k > 1:
                    factors.append(f"x{i + 1}^{k}")
            mono = "*".join(factors)
            if not pieces:
                pieces.append(mono if c > 0 else f"-{mono}")
            else:
                pieces.append(f"+ {mono}" if c > 0 else f"- {mono}")
        return " ".join(pieces)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Parsing
#
# expr   := ['+'|'-'] term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := base ('^' uint)?
# base   := var | rational | '(' expr ')'
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                if text[pos:].strip() == "":
                    break
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            self.tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def _next(self):
        tok = self._peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val, pos = self._peek()
        if kind is not None:
            raise ParseError(f"unexpected token {val!r}", pos)
        return p

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _ = self._peek()
        if kind == "op" and val in "+-":
            self._next()
            sign = -1 if val == "-" else 1
        p = self.term()
        if sign < 0:
            p = -p
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val in "+-":
                self._next()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, val, _ = self._peek()
            if kind == "op" and val == "*":
                self._next()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        p = self.base()
        kind, val, pos = self._peek()
        if kind == "op" and val == "^":
            self._next()
            kind, val, pos = self._next()
            if kind != "num" or "/" in val or "." in val:
                raise ParseError("exponent must be a nonnegative integer", pos)
            p = p ** int(val)
        return p

    def base(self) -> Polynomial:
        kind, val, pos = self._next()
        if kind == "var":
            idx = int(val[1:])
            if not 1 <= idx <= self.n:
                raise ParseError(f"variable {val} exceeds dimension {self.n}", pos)
            return Polynomial.variable(self.n, idx)
        if kind == "num":
            return Polynomial.constant(self.n, Fraction(val))
        if kind == "op" and val == "(":
            p = self.expr()
            kind, val, pos = self._next()
            if not (kind == "op" and val == ")"):
                raise ParseError("expected ')'", pos)
            return p
        raise ParseError(f"unexpected token {val!r}", pos)


def parse(text: str, n: int) -> Polynomial:
    """Parse an expression in variables x1..xn into expanded normal form."""
    return _Parser(text, n).parse()
