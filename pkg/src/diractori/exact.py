"""Exact arithmetic in real quadratic fields Q(sqrt d)."""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering


class IncompatibleFields(ValueError):
    pass


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """n = k^2 * s with s squarefree; returns (k, s)."""
    if n <= 0:
        raise ValueError("n must be positive")
    k, s, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            s *= p
        p += 1
    return k, s * n


def is_squarefree(d: int) -> bool:
    return d >= 1 and squarefree_decomposition(d)[0] == 1


@total_ordering
class QuadraticScalar:
    """a + b sqrt(d) with rational a, b and squarefree d >= 1.

    Scalars with b = 0 are plain rationals and mix freely with any field.
    """
    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 1):
        if not is_squarefree(d):
            raise ValueError(f"d = {d} is not a squarefree positive integer")
        a, b = Fraction(a), Fraction(b)
        if d == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            d = 1
        self.a, self.b, self.d = a, b, d

    @classmethod
    def coerce(cls, x) -> "QuadraticScalar":
        if isinstance(x, QuadraticScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        return NotImplemented

    def _field(self, other: "QuadraticScalar") -> int:
        if self.d == 1:
            return other.d
        if other.d == 1 or other.d == self.d:
            return self.d
        raise IncompatibleFields(f"cannot mix sqrt({self.d}) and sqrt({other.d})")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def conjugate(self) -> "QuadraticScalar":
        return QuadraticScalar(self.a, -self.b, self.d)

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa if sa else sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with d b^2
        return sa if self.a * self.a > self.d * self.b * self.b else -sa

    def __add__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return QuadraticScalar(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return other
        d = self._field(other)
        return QuadraticScalar(self.a * other.a + d * self.b * other.b,
                               self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return other
        nrm = other.field_norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        conj = other.conjugate()
        return QuadraticScalar((self * conj).a / nrm, (self * conj).b / nrm, self._field(other))

    def __rtruediv__(self, other):
        return self.coerce(other) / self

    def __eq__(self, other):
        other = self.coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b and (self.b == 0 or self.d == other.d)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else 1))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadraticScalar({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if abs(self.b) == 1:
            tail = f"{'-' if self.b < 0 else ''}sqrt({self.d})"
        else:
            tail = f"{self.b}*sqrt({self.d})"
        if self.a == 0:
            return tail
        return f"{self.a}{'+' if self.b > 0 else ''}{tail}"


_RAT = r"[+-]?\d+(?:\.\d*)?(?:/\d+)?"
_SURD = re.compile(rf"^(?:(?P<c>{_RAT})\*)?sqrt\((?P<d>\d+)\)(?:/(?P<den>\d+))?$")


def _split_terms(s: str) -> list[str]:
    terms, depth, cur = [], 0, ""
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and cur[-1] not in "*/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    if cur:
        terms.append(cur)
    return terms


def parse_scalar(text: str, d: int | None = None) -> QuadraticScalar:
    """Parse "a/b", "a/b+c/e*sqrt(d)", "sqrt(2)", "1-sqrt(3)/2" and similar.

    Decimals are read exactly ("0.5" is 1/2).  If ``d`` is given every surd
    must use it.
    """
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    total = QuadraticScalar(0)
    for term in _split_terms(s):
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        if re.fullmatch(r"\d+(?:\.\d*)?(?:/\d+)?", body):
            total = total + sign * Fraction(body)
            continue
        m = _SURD.match(body)
        if not m:
            raise ValueError(f"cannot parse exact scalar {text!r}")
        coef = Fraction(m.group("c")) if m.group("c") else Fraction(1)
        if m.group("den"):
            coef /= int(m.group("den"))
        k, sq = squarefree_decomposition(int(m.group("d")))
        if d is not None and sq not in (1, d):
            raise ValueError(f"surd sqrt({m.group('d')}) is not in Q(sqrt {d})")
        total = total + QuadraticScalar(0, sign * coef * k, sq)
    return total


def parse_exact_complex(text: str, d: int | None = None) -> "ExactComplex":
    """Parse "i", "2i", "1/2+sqrt(3)/2*i" (a trailing i marks imaginary terms)."""
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty complex number")
    re_part, im_part = QuadraticScalar(0), QuadraticScalar(0)
    for term in _split_terms(s):
        if term.endswith("i"):
            body = term[:-1].rstrip("*")
            if body in ("", "+", "-"):
                body += "1"
            im_part = im_part + parse_scalar(body, d)
        else:
            re_part = re_part + parse_scalar(term, d)
    return ExactComplex(re_part, im_part)


class ExactComplex:
    """re + i im with components in a common Q(sqrt d)."""
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = QuadraticScalar.coerce(re) if not isinstance(re, QuadraticScalar) else re
        self.im = QuadraticScalar.coerce(im) if not isinstance(im, QuadraticScalar) else im

    def __add__(self, o):
        return ExactComplex(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def scale(self, k) -> "ExactComplex":
        return ExactComplex(self.re * k, self.im * k)

    def dot(self, o) -> QuadraticScalar:
        """<u, v> = Re(conj(u) v)."""
        return self.re * o.re + self.im * o.im

    def cross(self, o) -> QuadraticScalar:
        return self.re * o.im - self.im * o.re

    def norm_sq(self) -> QuadraticScalar:
        return self.dot(self)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, o):
        return isinstance(o, ExactComplex) and self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re}) + ({self.im})i"

    def to_json(self) -> list[str]:
        return [str(self.re), str(self.im)]
