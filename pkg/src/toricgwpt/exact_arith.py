"""Exact arithmetic: Gaussian rationals, truncated Laurent series in ``u``,
and rational forms in ``q`` with denominators drawn from ``1 - (-q)^a``.

Rationals are plain :class:`fractions.Fraction` values.  Every object here is
immutable.
"""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "GaussianRational",
    "TruncatedULaurent",
    "QForm",
    "I",
    "as_fraction",
    "series_product",
    "series_inverse",
    "exp_series",
    "substitute_q_to_u",
]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_fraction(re))
        object.__setattr__(self, "im", as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not exact")
        return cls(x, 0)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational(self.re * other, self.im * other)
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.im:
            return GaussianRational(self.re * o.re, self.im * o.re)
        if not o.re:
            return GaussianRational(-self.im * o.im, self.re * o.im)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = GaussianRational(1)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        imag = _imag_text(abs(self.im))
        if self.re == 0:
            return imag if self.im > 0 else "-" + imag
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {imag}"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: accepts ``"a/b"``, ``"c/d i"``, ``"a/b + c/d i"``."""
        m = _GAUSS_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"malformed Gaussian rational: {text!r}")
        real, sign, imag, lone = m.group("re", "sign", "im", "lone")
        if lone is not None:
            return cls(0, _parse_imag(lone))
        value = _parse_imag(imag) if imag is not None else Fraction(0)
        if sign == "-":
            value = -value
        return cls(Fraction(real), value)


def _imag_text(x: Fraction) -> str:
    return "i" if x == 1 else f"{x} i"


def _parse_imag(text: str) -> Fraction:
    text = text.replace(" ", "")
    neg = text.startswith("-")
    body = text.lstrip("+-")[:-1]  # drop trailing "i"
    value = Fraction(body) if body else Fraction(1)
    return -value if neg else value


_NUM = r"-?\d+(?:/\d+)?"
_GAUSS_RE = re.compile(
    rf"(?:(?P<re>{_NUM})(?:\s*(?P<sign>[+-])\s*(?P<im>(?:\d+(?:/\d+)?\s*)?i))?)"
    rf"|(?P<lone>-?(?:\d+(?:/\d+)?\s*)?i)"
)

I = GaussianRational(0, 1)
_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


class TruncatedULaurent:
    """Laurent series in ``u`` known exactly for exponents ``min_exponent..order``.

    Coefficients below ``min_exponent`` are zero; those above ``order`` are
    unknown.  The coefficient tuple therefore has ``order - min_exponent + 1``
    entries (possibly none).
    """

    __slots__ = ("min_exponent", "coefficients", "order")

    def __init__(self, min_exponent: int, coefficients: Iterable, order: int | None = None):
        coeffs = tuple(GaussianRational.coerce(c) for c in coefficients)
        if order is None:
            order = min_exponent + len(coeffs) - 1
        if len(coeffs) != order - min_exponent + 1 and not (
                len(coeffs) == 0 and order < min_exponent):
            raise ValueError(
                f"coefficient count {len(coeffs)} does not match exponent range "
                f"{min_exponent}..{order}")
        object.__setattr__(self, "min_exponent", int(min_exponent))
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "order", int(order))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedULaurent is immutable")

    @classmethod
    def monomial(cls, exponent: int, coeff, order: int) -> "TruncatedULaurent":
        if order < exponent:
            return cls(exponent, (), order)
        coeffs = [_ZERO] * (order - exponent + 1)
        coeffs[0] = GaussianRational.coerce(coeff)
        return cls(exponent, coeffs, order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedULaurent":
        return cls(0, [_ZERO] * (order + 1), order) if order >= 0 else cls(0, (), order)

    def __getitem__(self, k: int) -> GaussianRational:
        if k > self.order:
            raise IndexError(f"coefficient of u^{k} is beyond the truncation order {self.order}")
        if k < self.min_exponent:
            return _ZERO
        return self.coefficients[k - self.min_exponent]

    def valuation(self) -> int | None:
        """Exponent of the lowest known nonzero coefficient, or None."""
        for offset, c in enumerate(self.coefficients):
            if c:
                return self.min_exponent + offset
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def truncate(self, order: int) -> "TruncatedULaurent":
        if order > self.order:
            raise ValueError(f"cannot extend truncation order {self.order} to {order}")
        return TruncatedULaurent(self.min_exponent,
                                 self.coefficients[:max(0, order - self.min_exponent + 1)],
                                 order)

    def strip(self) -> "TruncatedULaurent":
        """Drop leading zero coefficients (raising ``min_exponent``)."""
        v = self.valuation()
        if v is None or v == self.min_exponent:
            return self
        return TruncatedULaurent(v, self.coefficients[v - self.min_exponent:], self.order)

    def items(self):
        for offset, c in enumerate(self.coefficients):
            yield self.min_exponent + offset, c

    def _binary(self, other, op):
        other = _as_series(other, self.order)
        lo = min(self.min_exponent, other.min_exponent)
        hi = min(self.order, other.order)
        return TruncatedULaurent(lo, [op(self[k], other[k]) for k in range(lo, hi + 1)], hi)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return TruncatedULaurent(self.min_exponent, [-c for c in self.coefficients], self.order)

    def scale(self, c) -> "TruncatedULaurent":
        c = GaussianRational.coerce(c)
        return TruncatedULaurent(self.min_exponent, [c * x for x in self.coefficients], self.order)

    def shift(self, k: int) -> "TruncatedULaurent":
        """Multiply by ``u^k``."""
        return TruncatedULaurent(self.min_exponent + k, self.coefficients, self.order + k)

    def __mul__(self, other):
        if isinstance(other, TruncatedULaurent):
            return series_product(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        return self.scale(other)

    def first_mismatch(self, other: "TruncatedULaurent") -> int | None:
        """Lowest exponent in the common known range where the series differ."""
        lo = min(self.min_exponent, other.min_exponent)
        hi = min(self.order, other.order)
        for k in range(lo, hi + 1):
            if self[k] != other[k]:
                return k
        return None

    def agrees_with(self, other: "TruncatedULaurent") -> bool:
        return self.first_mismatch(other) is None

    def __eq__(self, other):
        if not isinstance(other, TruncatedULaurent):
            return NotImplemented
        return self.order == other.order and self.agrees_with(other)

    __hash__ = None

    def __repr__(self):
        return f"TruncatedULaurent({self})"

    def __str__(self):
        terms = []
        for k, c in self.items():
            if c:
                text = str(c)
                if c.re and c.im:
                    text = f"({text})"
                terms.append(f"{text} * u^{k}")
        terms.append(f"O(u^{self.order + 1})")
        return " + ".join(terms)

    @classmethod
    def parse(cls, text: str) -> "TruncatedULaurent":
        """Read the canonical text form produced by ``str``."""
        parts = _split_top_level(text.strip())
        tail = parts.pop()
        m = re.fullmatch(r"O\(u\^(-?\d+)\)", tail.strip())
        if not m:
            raise ValueError(f"series text must end with an O(u^k) term: {text!r}")
        order = int(m.group(1)) - 1
        terms = {}
        for part in parts:
            m = re.fullmatch(r"\(?(.*?)\)?\s*\*\s*u\^(-?\d+)", part.strip())
            if not m:
                raise ValueError(f"malformed series term {part!r}")
            k = int(m.group(2))
            if k in terms:
                raise ValueError(f"repeated exponent {k} in series text")
            terms[k] = GaussianRational.parse(m.group(1))
        lo = min(terms, default=0)
        lo = min(lo, order + 1)
        if terms and max(terms) > order:
            raise ValueError("term beyond the declared truncation order")
        return cls(lo, [terms.get(k, _ZERO) for k in range(lo, order + 1)], order)


def _split_top_level(text: str) -> list[str]:
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(" + ", i):
            parts.append(text[start:i])
            start = i + 3
            i += 3
            continue
        i += 1
    parts.append(text[start:])
    return parts


def _as_series(x, order: int) -> TruncatedULaurent:
    if isinstance(x, TruncatedULaurent):
        return x
    return TruncatedULaurent.monomial(0, x, order)


def series_product(a: TruncatedULaurent, b: TruncatedULaurent) -> TruncatedULaurent:
    lo = a.min_exponent + b.min_exponent
    hi = min(a.order + b.min_exponent, b.order + a.min_exponent)
    n = hi - lo + 1
    if n <= 0:
        return TruncatedULaurent(lo, (), hi)
    ac, bc = a.coefficients, b.coefficients
    out = []
    for k in range(n):
        acc = _ZERO
        for j in range(max(0, k - len(bc) + 1), min(k, len(ac) - 1) + 1):
            x, y = ac[j], bc[k - j]
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return TruncatedULaurent(lo, out, hi)


def series_inverse(a: TruncatedULaurent) -> TruncatedULaurent:
    """Multiplicative inverse; relative precision is preserved."""
    s = a.strip()
    v = s.valuation()
    if v is None:
        raise ZeroDivisionError("cannot invert a series with no known nonzero coefficient")
    coeffs = s.coefficients
    inv0 = coeffs[0].inverse()
    out = [inv0]
    for k in range(1, len(coeffs)):
        acc = _ZERO
        for j in range(1, k + 1):
            if coeffs[j]:
                acc = acc + coeffs[j] * out[k - j]
        out.append(-(acc * inv0))
    return TruncatedULaurent(-v, out, s.order - 2 * v)


def exp_series(c, order: int) -> TruncatedULaurent:
    """``e^{c u}`` to the given order."""
    if order < 0:
        raise ValueError("exp_series needs a nonnegative order")
    c = GaussianRational.coerce(c)
    out = [_ONE]
    term = _ONE
    for k in range(1, order + 1):
        term = term * c * Fraction(1, k)
        out.append(term)
    return TruncatedULaurent(0, out, order)


class QForm:
    """A rational form ``N((-q)) / prod_a (1 - (-q)^a)^{e_a}``.

    The numerator is a Laurent polynomial in ``s = -q`` with exponents in
    ``Z/2`` and rational coefficients; it is stored as ``{exponent: coeff}``
    keyed on powers of ``s``.  Use :meth:`from_q` to build forms from
    coefficients of ``q``.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Mapping = (), denominator: Mapping[int, int] | Iterable = ()):
        num = {}
        for e, c in dict(numerator).items():
            e = as_fraction(e)
            if e.denominator not in (1, 2):
                raise ValueError(f"exponent {e} of (-q) is not in Z/2")
            c = as_fraction(c)
            if c:
                num[e] = num.get(e, Fraction(0)) + c
                if not num[e]:
                    del num[e]
        if isinstance(denominator, Mapping):
            den_items = denominator.items()
        else:
            den_items = list(denominator)
        den = Counter()
        for a, mult in den_items:
            if not isinstance(a, int) or isinstance(a, bool) or a < 1:
                raise ValueError(f"denominator factor (1-(-q)^a) needs integer a >= 1, got {a!r}")
            if not isinstance(mult, int) or mult < 0:
                raise ValueError(f"denominator multiplicity must be a nonnegative integer, got {mult!r}")
            den[a] += mult
        den = {a: e for a, e in den.items() if e}
        if not num:
            den = {}
        object.__setattr__(self, "numerator", dict(sorted(num.items())))
        object.__setattr__(self, "denominator", dict(sorted(den.items())))

    def __setattr__(self, name, value):
        raise AttributeError("QForm is immutable")

    @classmethod
    def from_q(cls, coeffs: Mapping[int, object], denominator=()) -> "QForm":
        """Build from ``{k: c}`` meaning ``sum c q^k``."""
        num = {}
        for k, c in coeffs.items():
            if not isinstance(k, int):
                raise ValueError("q exponents must be integers; put half-integers on (-q)")
            num[Fraction(k)] = as_fraction(c) * (-1) ** (k % 2)
        return cls(num, denominator)

    @classmethod
    def monomial(cls, exponent, coeff=1) -> "QForm":
        """``coeff * (-q)^exponent``."""
        return cls({as_fraction(exponent): coeff})

    @classmethod
    def one(cls) -> "QForm":
        return cls({Fraction(0): 1})

    @classmethod
    def zero(cls) -> "QForm":
        return cls()

    def is_zero(self) -> bool:
        return not self.numerator

    def q_coefficients(self) -> dict[int, Fraction] | None:
        """Numerator coefficients in powers of ``q``; None if a half-integer exponent occurs."""
        if any(e.denominator != 1 for e in self.numerator):
            return None
        return {int(e): c * (-1) ** (int(e) % 2) for e, c in self.numerator.items()}

    def pole_order(self) -> int:
        return sum(self.denominator.values())

    def __mul__(self, other):
        if not isinstance(other, QForm):
            try:
                c = as_fraction(other)
            except TypeError:
                return NotImplemented
            return QForm({e: c * v for e, v in self.numerator.items()}, self.denominator)
        return QForm(_poly_mul(self.numerator, other.numerator),
                     Counter(self.denominator) + Counter(other.denominator))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __add__(self, other):
        if not isinstance(other, QForm):
            return NotImplemented
        den = {a: max(self.denominator.get(a, 0), other.denominator.get(a, 0))
               for a in set(self.denominator) | set(other.denominator)}
        num = _poly_add(self._lift_to(den), other._lift_to(den))
        return QForm(num, den).reduce()

    def __sub__(self, other):
        return self + (-other)

    def _lift_to(self, den: Mapping[int, int]) -> dict:
        num = dict(self.numerator)
        for a, e in den.items():
            for _ in range(e - self.denominator.get(a, 0)):
                num = _poly_mul(num, {Fraction(0): Fraction(1), Fraction(a): Fraction(-1)})
        return num

    def reduce(self) -> "QForm":
        """Cancel every denominator factor that divides the numerator exactly."""
        num = dict(self.numerator)
        den = dict(self.denominator)
        for a in sorted(den, reverse=True):
            while den[a]:
                quotient = _divide_by_one_minus(num, Fraction(a))
                if quotient is None:
                    break
                num = quotient
                den[a] -= 1
        return QForm(num, den)

    def __eq__(self, other):
        if not isinstance(other, QForm):
            return NotImplemented
        return self._cross(other) == other._cross(self)

    def _cross(self, other: "QForm") -> dict:
        num = dict(self.numerator)
        for a, e in other.denominator.items():
            for _ in range(e):
                num = _poly_mul(num, {Fraction(0): Fraction(1), Fraction(a): Fraction(-1)})
        return {k: v for k, v in num.items() if v}

    __hash__ = None

    def __repr__(self):
        return f"QForm({self})"

    def __str__(self):
        poly = _poly_text(self.numerator)
        if not self.denominator:
            return poly
        factors = " ".join(f"(1-(-q)^{a})" + (f"^{e}" if e != 1 else "")
                           for a, e in self.denominator.items())
        if len(self.numerator) > 1:
            poly = f"({poly})"
        return f"{poly} / {factors}"

    @classmethod
    def parse(cls, text: str) -> "QForm":
        """Read the canonical text form produced by ``str``."""
        text = text.strip()
        den = Counter()
        if " / " in text:
            text, den_text = text.split(" / ", 1)
            pos = 0
            for m in re.finditer(r"\(1-\(-q\)\^(\d+)\)(?:\^(\d+))?", den_text):
                if den_text[pos:m.start()].strip():
                    raise ValueError(f"malformed denominator {den_text!r}")
                den[int(m.group(1))] += int(m.group(2) or 1)
                pos = m.end()
            if den_text[pos:].strip() or not den:
                raise ValueError(f"malformed denominator {den_text!r}")
            text = text.strip()
            if text.startswith("(") and text.endswith(")"):
                text = text[1:-1]
        return cls(_parse_poly(text), den)


def _poly_mul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_add(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def _divide_by_one_minus(num: Mapping, a: Fraction) -> dict | None:
    """Exact quotient ``num / (1 - s^a)`` or None when it does not divide."""
    if not num:
        return {}
    # Work in t = s^(1/2) so every exponent is an integer.
    k = int(2 * a)
    t = {int(2 * e): c for e, c in num.items()}
    lo, hi = min(t), max(t)
    coeffs = [t.get(lo + j, Fraction(0)) for j in range(hi - lo + 1)]
    deg = len(coeffs) - 1
    if deg < k:
        return None
    quot = []
    for j in range(deg - k + 1):
        quot.append(coeffs[j] + (quot[j - k] if j >= k else 0))
    for j in range(deg - k + 1, deg + 1):
        if coeffs[j] + (quot[j - k] if j - k >= 0 else 0) != 0:
            return None
    return {Fraction(lo + j, 2): c for j, c in enumerate(quot) if c}


def _frac_exp_text(e: Fraction) -> str:
    return str(e) if e.denominator == 1 else f"({e})"


def _poly_text(num: Mapping) -> str:
    if not num:
        return "0"
    qc = None
    if all(e.denominator == 1 for e in num):
        qc = {int(e): c * (-1) ** (int(e) % 2) for e, c in num.items()}
        var = "q"
        items = sorted(qc.items())
    else:
        var = "(-q)"
        items = sorted(num.items())
    out = ""
    for idx, (e, c) in enumerate(items):
        if e == 0:
            body = str(abs(c))
        else:
            mono = var if e == 1 else f"{var}^{_frac_exp_text(Fraction(e))}"
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        if idx == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


_TERM_RE = re.compile(
    r"(?:(?P<coef>\d+(?:/\d+)?)(?:\*(?=[q(]))?)?"
    r"(?P<var>q|\(-q\))?(?:\^(?P<exp>-?\d+|\(-?\d+/\d+\)))?"
)


def _parse_poly(text: str) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    tokens = re.split(r"\s+([+-])\s+", text)
    first = tokens[0]
    sign0 = "+"
    if first.startswith("-"):
        sign0, first = "-", first[1:]
    pieces = [(sign0, first)] + [(tokens[i], tokens[i + 1]) for i in range(1, len(tokens), 2)]
    out: dict = {}
    for sign, body in pieces:
        m = _TERM_RE.fullmatch(body.strip())
        if not m or not (m.group("coef") or m.group("var")):
            raise ValueError(f"malformed polynomial term {body!r}")
        coef = Fraction(m.group("coef") or 1)
        if sign == "-":
            coef = -coef
        var, exp = m.group("var"), m.group("exp")
        if var is None:
            if exp is not None:
                raise ValueError(f"malformed polynomial term {body!r}")
            e = Fraction(0)
        else:
            e = Fraction(exp.strip("()")) if exp else Fraction(1)
        if var == "q":
            if e.denominator != 1:
                raise ValueError("half-integer exponents must be written on (-q)")
            coef = coef * (-1) ** (int(e) % 2)
        out[e] = out.get(e, Fraction(0)) + coef
    return {e: c for e, c in out.items() if c}


def substitute_q_to_u(f: QForm, order: int) -> TruncatedULaurent:
    """Expand ``f`` under ``q = -e^{iu}`` exactly up to ``u^order``."""
    if not isinstance(f, QForm):
        raise TypeError("substitute_q_to_u expects a QForm")
    poles = f.pole_order()
    if f.is_zero():
        return TruncatedULaurent.zero(order)
    num_order = order + poles
    num = TruncatedULaurent.zero(num_order)
    for e, c in f.numerator.items():
        num = num + exp_series(GaussianRational(0, e), num_order).scale(c)
    if not poles:
        return num.truncate(order)
    den_order = order + 2 * poles
    den = TruncatedULaurent.monomial(0, 1, den_order)
    for a, mult in f.denominator.items():
        factor = TruncatedULaurent.monomial(0, 1, den_order) - exp_series(GaussianRational(0, a), den_order)
        for _ in range(mult):
            den = series_product(den, factor)
    inv = series_inverse(den)
    return series_product(num, inv).truncate(order)
