"""Parse and format ket sums such as ``(1/sqrt2)(|1110> - |1101>)``.

Coefficients are exact: each is a Gaussian integer over a power of
``sqrt(2)``.  Accepted scalar atoms are integers, ``i``, ``sqrt2`` (also
``√2``), products of those, reciprocals ``1/x`` and parenthesised
groups, so ``1/2``, ``i/2``, ``1/sqrt2``, ``1/(2sqrt2)`` and
``-i/(2*sqrt2)`` all work.  A scalar immediately before a parenthesised
sum distributes over it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .exact_state import DIM, NQUBITS, ExactState, GaussianInt, canonicalize


class KetSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Scalar:
    """``num / sqrt(2)**k`` with ``num`` a Gaussian integer (``k`` may be negative)."""

    num: GaussianInt
    k: int = 0

    def __mul__(self, other: Scalar) -> Scalar:
        return Scalar(self.num * other.num, self.k + other.k).reduced()

    def reciprocal(self) -> Scalar:
        n = self.num.norm()
        if n == 0:
            raise KetSyntaxError("division by zero")
        # 1/z = conj(z)/|z|^2; only powers of two are representable
        if n & (n - 1):
            raise KetSyntaxError(f"cannot invert {self.num} exactly")
        e = n.bit_length() - 1
        return Scalar(self.num.conj(), 2 * e - self.k).reduced()

    def reduced(self) -> Scalar:
        num, k = self.num, self.k
        while k < 0:
            # sqrt2 = 2/sqrt2, so a numerator sqrt2 moves below the bar
            num, k = num * 2, k + 2
        return Scalar(num, k)

    def aligned(self, k: int) -> GaussianInt:
        """Numerator over ``sqrt2**k`` (``k >= self.k`` with even difference)."""
        d = k - self.k
        if d < 0 or d % 2:
            raise KetSyntaxError("terms mix incompatible powers of sqrt2")
        return self.num * (2 ** (d // 2))


ONE = Scalar(GaussianInt(1, 0))

_TOKEN = re.compile(r"""
    \s*(?:
      (?P<ket>[|][01]{4}\s*(?:>|⟩))
    | (?P<sqrt>(?:sqrt|√)\s*(?:\(\s*2\s*\)|2))
    | (?P<int>\d+)
    | (?P<i>i)
    | (?P<op>[-+*/()])
    )""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise KetSyntaxError(f"unexpected input at {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    """Recursive descent over a tiny grammar.

    sum     := ['+'|'-'] product (('+'|'-') product)*
    product := factor (['*'|'/'] factor)*      (juxtaposition = '*')
    factor  := int | 'i' | 'sqrt2' | ket | '(' sum ')'

    Values are dicts ``{basis index: Scalar}``; a pure scalar is stored
    under key ``None``.
    """

    def __init__(self, tokens, reverse_kets: bool):
        self.toks = tokens
        self.pos = 0
        self.reverse = reverse_kets

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        val = self.sum()
        if self.pos != len(self.toks):
            raise KetSyntaxError(f"trailing input near token {self.peek()[1]!r}")
        return val

    def sum(self):
        sign = 1
        kind, tok = self.peek()
        if kind == "op" and tok in "+-":
            self.take()
            sign = -1 if tok == "-" else 1
        val = _scale(self.product(), sign)
        while True:
            kind, tok = self.peek()
            if kind == "op" and tok in "+-":
                self.take()
                rhs = self.product()
                val = _add(val, _scale(rhs, -1 if tok == "-" else 1))
            else:
                return val

    def product(self):
        val = self.factor()
        while True:
            kind, tok = self.peek()
            if kind == "op" and tok == "*":
                self.take()
                val = _mul(val, self.factor())
            elif kind == "op" and tok == "/":
                self.take()
                val = _div(val, self.factor())
            elif kind in ("int", "i", "sqrt", "ket") or (kind == "op" and tok == "("):
                val = _mul(val, self.factor())
            else:
                return val

    def factor(self):
        kind, tok = self.take()
        if kind == "int":
            return {None: Scalar(GaussianInt(int(tok), 0))}
        if kind == "i":
            return {None: Scalar(GaussianInt(0, 1))}
        if kind == "sqrt":
            return {None: Scalar(GaussianInt(2, 0), 1)}
        if kind == "ket":
            bits = tok[1:1 + NQUBITS]
            if self.reverse:
                bits = bits[::-1]
            return {int(bits, 2): ONE}
        if kind == "op" and tok == "(":
            val = self.sum()
            kind, tok = self.take()
            if tok != ")":
                raise KetSyntaxError("missing ')'")
            return val
        if kind == "op" and tok == "-":
            return _scale(self.factor(), -1)
        raise KetSyntaxError(f"unexpected token {tok!r}")


def _scale(val, sign):
    if sign == 1:
        return val
    m = Scalar(GaussianInt(-1, 0))
    return {b: c * m for b, c in val.items()}


def _add(a, b):
    if (None in a) != (None in b):
        raise KetSyntaxError("cannot add a scalar to a ket")
    out = dict(a)
    for key, c in b.items():
        if key in out:
            k = max(out[key].k, c.k)
            out[key] = Scalar(out[key].aligned(k) + c.aligned(k), k)
        else:
            out[key] = c
    return out


def _mul(a, b):
    if None in a and None in b:
        return {None: a[None] * b[None]}
    if None in a:
        return {key: c * a[None] for key, c in b.items()}
    if None in b:
        return {key: c * b[None] for key, c in a.items()}
    raise KetSyntaxError("cannot multiply two kets")


def _div(a, b):
    if None not in b:
        raise KetSyntaxError("cannot divide by a ket")
    inv = b[None].reciprocal()
    return {key: c * inv for key, c in a.items()}


def parse_state(text: str, *, reverse_kets: bool = False) -> ExactState:
    """Parse a ket sum into a canonical :class:`ExactState`.

    With ``reverse_kets=True`` each ket string is read right to left, i.e.
    the rightmost character is qubit 1.
    """
    val = _Parser(_tokenize(text), reverse_kets).parse()
    if None in val:
        raise KetSyntaxError("expression has no ket")
    k = max(c.k for c in val.values())
    if any((k - c.k) % 2 for c in val.values()):
        raise KetSyntaxError("terms mix incompatible powers of sqrt2")
    amps = [GaussianInt(0, 0)] * DIM
    for b, c in val.items():
        amps[b] = c.aligned(k)
    k = max(k, 0)
    raw = ExactState(tuple(amps), k)
    return canonicalize(raw)


def _format_coef(z: GaussianInt) -> tuple[str, str]:
    if z.im == 0:
        return ("-" if z.re < 0 else "+"), ("" if abs(z.re) == 1 else str(abs(z.re)))
    if z.re == 0:
        mag = "" if abs(z.im) == 1 else str(abs(z.im))
        return ("-" if z.im < 0 else "+"), f"{mag}i"
    sign = "-" if z.re < 0 else "+"
    w = -z if z.re < 0 else z
    return sign, f"({w.re}{'+' if w.im > 0 else '-'}{abs(w.im)}i)"


def format_state(s: ExactState, *, reverse_kets: bool = False) -> str:
    terms = []
    for b, z in enumerate(s.amps):
        if not z:
            continue
        sign, mag = _format_coef(z)
        bits = format(b, f"0{NQUBITS}b")
        if reverse_kets:
            bits = bits[::-1]
        terms.append((sign, f"{mag}|{bits}>"))
    if not terms:
        return "0"
    body = " ".join(f"{sg} {t}" for sg, t in terms)
    body = body[2:] if body.startswith("+ ") else "-" + body[2:]
    if s.k == 0:
        pre = ""
    elif s.k == 1:
        pre = "1/sqrt2"
    elif s.k % 2 == 0:
        pre = f"1/{2 ** (s.k // 2)}"
    else:
        pre = f"1/({2 ** (s.k // 2)}sqrt2)"
    if not pre:
        return body
    return f"{pre}({body})"
