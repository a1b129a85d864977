"""Parser and evaluator for positive-sequence formulas in n.

Grammar (the public contract):

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := atom ("^" factor)?
    atom   := NUMBER | "n" | "ln" "(" expr ")" | "(" expr ")" | "-" atom

"^" is right-associative and binds tighter than "*"; unary minus lives at
atom level, so "-n^2" is (-n)^2. NUMBER is an integer or decimal literal
and is held exactly as a rational, so an exponent like 1.5 loses nothing
at parse time. Only n and ln are built in: ln-based closed forms cover
the sequence families this library analyzes, and anything else would be
an untestable extension.

Two evaluation lanes: eval_sequence computes one value through mpmath at
extended precision; eval_array is the float64 bulk lane used for partial
sums and range comparisons over millions of indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath
import numpy as np

from .errors import EvalError, ExprSyntaxError, PositivityError, UnknownIdentifierError

__all__ = [
    "Number",
    "Var",
    "Ln",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "SequenceExpr",
    "parse_sequence",
    "format_sequence",
    "eval_sequence",
    "eval_sequence_mp",
    "eval_array",
]

EVAL_DPS = 30


@dataclass(frozen=True)
class Number:
    value: Fraction
    lexeme: str = field(default="", compare=False)


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Ln:
    arg: "SequenceExpr"


@dataclass(frozen=True)
class Neg:
    arg: "SequenceExpr"


@dataclass(frozen=True)
class Add:
    left: "SequenceExpr"
    right: "SequenceExpr"


@dataclass(frozen=True)
class Sub:
    left: "SequenceExpr"
    right: "SequenceExpr"


@dataclass(frozen=True)
class Mul:
    left: "SequenceExpr"
    right: "SequenceExpr"


@dataclass(frozen=True)
class Div:
    left: "SequenceExpr"
    right: "SequenceExpr"


@dataclass(frozen=True)
class Pow:
    base: "SequenceExpr"
    exponent: "SequenceExpr"


SequenceExpr = Union[Number, Var, Ln, Neg, Add, Sub, Mul, Div, Pow]


# ---------------------------------------------------------------------------
# tokenizer

_OPERATORS = "+-*/^()"


@dataclass(frozen=True)
class _Token:
    kind: str  # NUMBER | IDENT | one of + - * / ^ ( ) | EOF
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _OPERATORS:
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        if c.isdigit():
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == ".":
                j += 1
                if j >= len(text) or not text[j].isdigit():
                    raise ExprSyntaxError(
                        f"malformed number at offset {i}: digits must follow '.'",
                        position=j,
                        expected=("digit",),
                    )
                while j < len(text) and text[j].isdigit():
                    j += 1
            tokens.append(_Token("NUMBER", text[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            if name not in ("n", "ln"):
                raise UnknownIdentifierError(
                    f"unknown identifier {name!r} at offset {i}: only 'n' and 'ln' are available",
                    position=i,
                    expected=("n", "ln"),
                )
            tokens.append(_Token("IDENT", name, i))
            i = j
            continue
        raise ExprSyntaxError(
            f"unexpected character {c!r} at offset {i}",
            position=i,
            expected=("NUMBER", "n", "ln", "(", "-"),
        )
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# recursive-descent parser

_ATOM_STARTERS = ("NUMBER", "n", "ln", "(", "-")


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r} at offset {tok.pos}, found {tok.text or 'end of input'!r}",
                position=tok.pos,
                expected=(kind,),
            )
        return self.advance()

    def parse(self) -> SequenceExpr:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ExprSyntaxError(
                f"unexpected {tok.text!r} at offset {tok.pos}",
                position=tok.pos,
                expected=("+", "-", "*", "/", "^", "end of input"),
            )
        return node

    def expr(self) -> SequenceExpr:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> SequenceExpr:
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> SequenceExpr:
        node = self.atom()
        if self.peek().kind == "^":
            self.advance()
            # right-associative: the exponent is itself a factor
            return Pow(node, self.factor())
        return node

    def atom(self) -> SequenceExpr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Number(Fraction(tok.text), lexeme=tok.text)
        if tok.kind == "IDENT" and tok.text == "n":
            self.advance()
            return Var()
        if tok.kind == "IDENT" and tok.text == "ln":
            self.advance()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return Ln(inner)
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "-":
            self.advance()
            return Neg(self.atom())
        raise ExprSyntaxError(
            f"expected a value at offset {tok.pos}, found {tok.text or 'end of input'!r}",
            position=tok.pos,
            expected=_ATOM_STARTERS,
        )


def parse_sequence(text: str) -> SequenceExpr:
    """Parse a formula in n into its syntax tree.

    Raises ExprSyntaxError with the byte offset and expected-token set on
    malformed input, and UnknownIdentifierError for identifiers other
    than n and ln.
    """
    if not text or text.isspace():
        raise ExprSyntaxError("empty expression", position=0, expected=_ATOM_STARTERS)
    return _Parser(_tokenize(text)).parse()


# ---------------------------------------------------------------------------
# pretty-printer

_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _decimal_str(value: Fraction) -> str | None:
    """Exact decimal literal for value, or None if it has no finite one."""
    if value < 0:
        return None
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    k = max(twos, fives)
    scaled = value.numerator * 10**k // value.denominator
    if k == 0:
        return str(scaled)
    digits = str(scaled).rjust(k + 1, "0")
    return f"{digits[:-k]}.{digits[-k:]}"


def _fmt(node: SequenceExpr, min_prec: int) -> str:
    if isinstance(node, Number):
        if node.lexeme:
            return node.lexeme
        dec = _decimal_str(node.value)
        if dec is not None:
            return dec
        if node.value < 0:
            return "-" + _fmt(Number(-node.value), _PREC_ATOM)
        return f"({node.value.numerator}/{node.value.denominator})"
    if isinstance(node, Var):
        return "n"
    if isinstance(node, Ln):
        return f"ln({_fmt(node.arg, _PREC_ADD)})"
    if isinstance(node, Neg):
        # grammar: "-" atom; parenthesize anything that is not atom-shaped
        inner = _fmt(node.arg, _PREC_ATOM)
        if not isinstance(node.arg, (Number, Var, Ln, Neg)):
            inner = f"({inner})"
        text = "-" + inner
        return text if _PREC_ATOM >= min_prec else f"({text})"
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        text = f"{_fmt(node.left, _PREC_ADD)} {op} {_fmt(node.right, _PREC_ADD + 1)}"
        return text if _PREC_ADD >= min_prec else f"({text})"
    if isinstance(node, (Mul, Div)):
        op = "*" if isinstance(node, Mul) else "/"
        text = f"{_fmt(node.left, _PREC_MUL)}{op}{_fmt(node.right, _PREC_MUL + 1)}"
        return text if _PREC_MUL >= min_prec else f"({text})"
    if isinstance(node, Pow):
        text = f"{_fmt(node.base, _PREC_ATOM)}^{_fmt(node.exponent, _PREC_POW)}"
        return text if _PREC_POW >= min_prec else f"({text})"
    raise TypeError(f"not a sequence expression node: {node!r}")


def format_sequence(expr: SequenceExpr) -> str:
    """Render the tree back to text; parsing the result rebuilds the same tree."""
    return _fmt(expr, _PREC_ADD)


# ---------------------------------------------------------------------------
# evaluation: exact/extended scalar lane

def _eval_mp(node: SequenceExpr, x, n: int):
    if isinstance(node, Number):
        return mpmath.mpf(node.value.numerator) / node.value.denominator
    if isinstance(node, Var):
        return x
    if isinstance(node, Ln):
        v = _eval_mp(node.arg, x, n)
        if v <= 0:
            raise EvalError(
                f"ln of nonpositive argument in '{format_sequence(node)}' at n={n}",
                node=format_sequence(node),
                n=n,
            )
        return mpmath.ln(v)
    if isinstance(node, Neg):
        return -_eval_mp(node.arg, x, n)
    if isinstance(node, Add):
        return _eval_mp(node.left, x, n) + _eval_mp(node.right, x, n)
    if isinstance(node, Sub):
        return _eval_mp(node.left, x, n) - _eval_mp(node.right, x, n)
    if isinstance(node, Mul):
        return _eval_mp(node.left, x, n) * _eval_mp(node.right, x, n)
    if isinstance(node, Div):
        den = _eval_mp(node.right, x, n)
        if den == 0:
            raise EvalError(
                f"division by zero in '{format_sequence(node)}' at n={n}",
                node=format_sequence(node),
                n=n,
            )
        return _eval_mp(node.left, x, n) / den
    if isinstance(node, Pow):
        base = _eval_mp(node.base, x, n)
        expo = _eval_mp(node.exponent, x, n)
        if base == 0 and expo < 0:
            raise EvalError(
                f"zero raised to a negative power in '{format_sequence(node)}' at n={n}",
                node=format_sequence(node),
                n=n,
            )
        if base < 0 and expo != mpmath.floor(expo):
            raise EvalError(
                f"fractional power of a negative base in '{format_sequence(node)}' at n={n}",
                node=format_sequence(node),
                n=n,
            )
        return mpmath.power(base, expo)
    raise TypeError(f"not a sequence expression node: {node!r}")


def eval_sequence_mp(expr: SequenceExpr, n: int):
    """Evaluate at integer n >= 1 in extended precision; returns an mpf.

    Nonpositive results raise PositivityError: the sequences this library
    analyzes must have positive terms.
    """
    if n < 1:
        raise ValueError(f"sequence index must be >= 1, got {n}")
    with mpmath.workdps(EVAL_DPS):
        val = _eval_mp(expr, mpmath.mpf(n), n)
        if not mpmath.isfinite(val):
            raise EvalError(
                f"evaluation of '{format_sequence(expr)}' is not finite at n={n}",
                node=format_sequence(expr),
                n=n,
            )
        if val <= 0:
            raise PositivityError(
                f"not a positive sequence at n={n}: '{format_sequence(expr)}' = {mpmath.nstr(val, 8)}",
                node=format_sequence(expr),
                n=n,
            )
        return val


def eval_sequence(expr: SequenceExpr, n: int) -> float:
    """Evaluate at integer n >= 1; extended precision inside, float out."""
    return float(eval_sequence_mp(expr, n))


# ---------------------------------------------------------------------------
# evaluation: float64 bulk lane

def _first_bad(ns: np.ndarray, mask) -> int:
    idx = int(np.argmax(mask))
    return int(ns[idx]) if np.ndim(mask) else int(ns[0])


def _eval_np(node: SequenceExpr, x: np.ndarray, ns: np.ndarray):
    if isinstance(node, Number):
        return float(node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Ln):
        v = _eval_np(node.arg, x, ns)
        bad = np.asarray(v) <= 0
        if bad.any():
            raise EvalError(
                f"ln of nonpositive argument in '{format_sequence(node)}' at n={_first_bad(ns, bad)}",
                node=format_sequence(node),
                n=_first_bad(ns, bad),
            )
        return np.log(v)
    if isinstance(node, Neg):
        return -_eval_np(node.arg, x, ns)
    if isinstance(node, Add):
        return _eval_np(node.left, x, ns) + _eval_np(node.right, x, ns)
    if isinstance(node, Sub):
        return _eval_np(node.left, x, ns) - _eval_np(node.right, x, ns)
    if isinstance(node, Mul):
        return _eval_np(node.left, x, ns) * _eval_np(node.right, x, ns)
    if isinstance(node, Div):
        den = _eval_np(node.right, x, ns)
        bad = np.asarray(den) == 0
        if bad.any():
            raise EvalError(
                f"division by zero in '{format_sequence(node)}' at n={_first_bad(ns, bad)}",
                node=format_sequence(node),
                n=_first_bad(ns, bad),
            )
        return _eval_np(node.left, x, ns) / den
    if isinstance(node, Pow):
        base = _eval_np(node.base, x, ns)
        expo = _eval_np(node.exponent, x, ns)
        base_arr = np.asarray(base, dtype=np.float64)
        expo_arr = np.asarray(expo, dtype=np.float64)
        if (base_arr < 0).any() and not np.all(expo_arr == np.floor(expo_arr)):
            bad = (base_arr < 0) | np.zeros_like(np.asarray(x), dtype=bool)
            raise EvalError(
                f"fractional power of a negative base in '{format_sequence(node)}' "
                f"at n={_first_bad(ns, bad)}",
                node=format_sequence(node),
                n=_first_bad(ns, bad),
            )
        if ((base_arr == 0) & (expo_arr < 0)).any():
            bad = (base_arr == 0) & (expo_arr < 0) | np.zeros_like(np.asarray(x), dtype=bool)
            raise EvalError(
                f"zero raised to a negative power in '{format_sequence(node)}' "
                f"at n={_first_bad(ns, bad)}",
                node=format_sequence(node),
                n=_first_bad(ns, bad),
            )
        with np.errstate(over="ignore"):
            return np.power(base, expo)
    raise TypeError(f"not a sequence expression node: {node!r}")


def eval_array(expr: SequenceExpr, ns: np.ndarray) -> np.ndarray:
    """Evaluate at every index in ns (float64 lane).

    Same error contract as eval_sequence, reported at the first offending
    index; the whole result must be finite and strictly positive.
    """
    ns = np.asarray(ns)
    if ns.size == 0:
        return np.zeros(0, dtype=np.float64)
    if int(ns.min()) < 1:
        raise ValueError(f"sequence indices must be >= 1, got {int(ns.min())}")
    x = ns.astype(np.float64)
    out = _eval_np(expr, x, ns)
    out = np.broadcast_to(np.asarray(out, dtype=np.float64), x.shape).copy()
    nonfinite = ~np.isfinite(out)
    if nonfinite.any():
        raise EvalError(
            f"evaluation of '{format_sequence(expr)}' is not finite at n={_first_bad(ns, nonfinite)}",
            node=format_sequence(expr),
            n=_first_bad(ns, nonfinite),
        )
    bad = out <= 0
    if bad.any():
        n_bad = _first_bad(ns, bad)
        hint = ""
        if out[int(np.argmax(bad))] == 0.0:
            hint = " (exact zero; rapidly decaying sequences can underflow the float64 lane)"
        raise PositivityError(
            f"not a positive sequence at n={n_bad}: '{format_sequence(expr)}'{hint}",
            node=format_sequence(expr),
            n=n_bad,
        )
    return out
