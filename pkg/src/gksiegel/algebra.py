"""Exact Laurent-polynomial and quadratic-extension arithmetic.

Exponents of ``X`` and ``Y`` may be half-integers; they are stored doubled so
every key is a plain ``int``.  Nothing in this module touches floating point
except :meth:`QuadExt.to_decimal`, which is only used for report rendering.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from functools import lru_cache
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

RationalLike = Union[int, Fraction]

__all__ = [
    "HalfExpLaurent",
    "BivariateLaurent",
    "QuadExt",
    "MultiQuad",
    "laurent_arith",
    "substitute",
    "series_expand_quotient",
    "multiquad_mul",
    "format_exponent",
    "squarefree_part",
]


def format_exponent(doubled: int) -> str:
    """Render a doubled exponent: 2 -> '1', -1 -> '(-1/2)', 3 -> '(3/2)'."""
    if doubled % 2:
        return f"({doubled}/2)"
    e = doubled // 2
    return str(e) if e >= 0 else f"({e})"


def _monomial(var: str, doubled: int) -> str:
    if doubled == 0:
        return ""
    if doubled == 2:
        return var
    return f"{var}^{format_exponent(doubled)}"


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class HalfExpLaurent:
    """Laurent polynomial in one variable with half-integer exponents.

    ``terms`` maps doubled exponent to a nonzero :class:`Fraction`.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[int(e)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c: RationalLike) -> "HalfExpLaurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, doubled_exp: int, c: RationalLike = 1) -> "HalfExpLaurent":
        return cls({doubled_exp: c})

    @classmethod
    def _raw(cls, terms: Dict[int, Fraction]) -> "HalfExpLaurent":
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items()))
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coeff(self, doubled_exp: int) -> Fraction:
        return self._terms.get(doubled_exp, Fraction(0))

    def min_exp(self) -> int:
        return next(iter(self._terms))

    def max_exp(self) -> int:
        return next(reversed(self._terms))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = HalfExpLaurent.constant(other)
        if not isinstance(other, HalfExpLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # -- ring operations ----------------------------------------------
    @staticmethod
    def _coerce(x) -> "HalfExpLaurent":
        if isinstance(x, HalfExpLaurent):
            return x
        if isinstance(x, (int, _RationalABC)):
            return HalfExpLaurent.constant(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to HalfExpLaurent")

    def __add__(self, other) -> "HalfExpLaurent":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return HalfExpLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "HalfExpLaurent":
        return HalfExpLaurent._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "HalfExpLaurent":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "HalfExpLaurent":
        return self._coerce(other) - self

    def __mul__(self, other) -> "HalfExpLaurent":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, HalfExpLaurent):
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return HalfExpLaurent({e: c for e, c in out.items()})

    __rmul__ = __mul__

    def scale(self, c: RationalLike) -> "HalfExpLaurent":
        c = Fraction(c)
        if not c:
            return HalfExpLaurent()
        return HalfExpLaurent._raw({e: v * c for e, v in self._terms.items()})

    def shift(self, doubled: int) -> "HalfExpLaurent":
        """Multiply by the monomial of doubled exponent ``doubled``."""
        if not doubled:
            return self
        return HalfExpLaurent._raw({e + doubled: c for e, c in self._terms.items()})

    def inverse_monomial(self) -> "HalfExpLaurent":
        if not self.is_monomial():
            raise ZeroDivisionError("only monomials are invertible")
        (e, c), = self._terms.items()
        return HalfExpLaurent._raw({-e: 1 / c})

    def reflect(self) -> "HalfExpLaurent":
        """Substitute the variable by its inverse."""
        return HalfExpLaurent._raw({-e: c for e, c in self._terms.items()})

    def evaluate(self, x):
        """Evaluate at ``x`` (doubled exponents must all be even)."""
        total = 0
        for e, c in self._terms.items():
            if e % 2:
                raise ValueError("half-integer exponent; evaluate at the square root instead")
            total = total + c * (x ** (e // 2))
        return total

    def evaluate_sqrt(self, root):
        """Evaluate with the square root ``root`` of the variable supplied."""
        total = 0
        for e, c in self._terms.items():
            total = total + c * (root ** e)
        return total

    def to_text(self, var: str = "Y") -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            parts.append(_term_text(c, [_monomial(var, e)]))
        return _join_terms(parts)

    def __repr__(self) -> str:
        return f"HalfExpLaurent({self.to_text()})"


def _term_text(c: Fraction, monos: Iterable[str]) -> str:
    monos = [m for m in monos if m]
    if not monos:
        return _fmt_coeff(c)
    body = "*".join(monos)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{_fmt_coeff(c)}*{body}"


def _join_terms(parts) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


_ZERO = HalfExpLaurent()
_ONE = HalfExpLaurent.constant(1)


class BivariateLaurent:
    """Laurent polynomial in ``X^(1/2)`` with coefficients in ``Q[Y^(1/2), Y^(-1/2)]``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, HalfExpLaurent] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = HalfExpLaurent._coerce(c)
                if c:
                    clean[int(e)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, terms) -> "BivariateLaurent":
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items()))
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "BivariateLaurent":
        return cls({0: HalfExpLaurent._coerce(c)})

    @classmethod
    def monomial(cls, x_doubled: int, y_doubled: int = 0, c: RationalLike = 1) -> "BivariateLaurent":
        return cls({x_doubled: HalfExpLaurent.monomial(y_doubled, c)})

    @classmethod
    def from_pairs(cls, pairs: Mapping[Tuple[int, int], RationalLike]) -> "BivariateLaurent":
        """Build from ``{(2*x_exp, 2*y_exp): coeff}``."""
        acc: Dict[int, Dict[int, Fraction]] = {}
        for (xe, ye), c in pairs.items():
            row = acc.setdefault(xe, {})
            row[ye] = row.get(ye, 0) + Fraction(c)
        return cls({xe: HalfExpLaurent(row) for xe, row in acc.items()})

    @property
    def terms(self) -> Dict[int, HalfExpLaurent]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms.items())

    def coeff(self, x_doubled: int) -> HalfExpLaurent:
        return self._terms.get(x_doubled, _ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def min_x(self) -> int:
        return next(iter(self._terms))

    def max_x(self) -> int:
        return next(reversed(self._terms))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, HalfExpLaurent)):
            other = BivariateLaurent.constant(other)
        if not isinstance(other, BivariateLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(x) -> "BivariateLaurent":
        if isinstance(x, BivariateLaurent):
            return x
        return BivariateLaurent.constant(x)

    def __add__(self, other) -> "BivariateLaurent":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out[e] + c if e in out else c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return BivariateLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BivariateLaurent":
        return BivariateLaurent._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "BivariateLaurent":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BivariateLaurent":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BivariateLaurent":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: Dict[int, HalfExpLaurent] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return BivariateLaurent(out)

    __rmul__ = __mul__

    def scale(self, c) -> "BivariateLaurent":
        if isinstance(c, HalfExpLaurent):
            return BivariateLaurent({e: v * c for e, v in self._terms.items()})
        c = Fraction(c)
        if not c:
            return BivariateLaurent()
        return BivariateLaurent._raw({e: v.scale(c) for e, v in self._terms.items()})

    def shift(self, x_doubled: int = 0, y_doubled: int = 0) -> "BivariateLaurent":
        """Multiply by ``X^(x_doubled/2) * Y^(y_doubled/2)``."""
        return BivariateLaurent._raw(
            {e + x_doubled: c.shift(y_doubled) for e, c in self._terms.items()}
        )

    def truncate(self, max_x_doubled: int) -> "BivariateLaurent":
        return BivariateLaurent._raw({e: c for e, c in self._terms.items() if e <= max_x_doubled})

    def pairs(self) -> Dict[Tuple[int, int], Fraction]:
        return {(xe, ye): c for xe, row in self._terms.items() for ye, c in row.items()}

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        keyed = sorted(self.pairs().items())
        parts = [_term_text(c, [_monomial("Y", ye), _monomial("X", xe)]) for (xe, ye), c in keyed]
        return _join_terms(parts)

    def __repr__(self) -> str:
        return f"BivariateLaurent({self.to_text()})"


def laurent_arith(op: str, lhs: BivariateLaurent, rhs=None) -> BivariateLaurent:
    """Dispatch ``add``, ``mul``, ``neg`` or ``scale`` on bivariate Laurent polynomials."""
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    if op == "neg":
        return -lhs
    if op == "scale":
        return lhs.scale(rhs)
    raise ValueError(f"unknown operation {op!r}")


def substitute(P: BivariateLaurent, rule: str) -> BivariateLaurent:
    """Apply one of the monomial substitutions ``X->YX``, ``X->YX^-1``, ``X->X^-1``.

    Under ``X -> Y*X`` the term ``c Y^a X^b`` becomes ``c Y^(a+b) X^b``.
    """
    out: Dict[int, HalfExpLaurent] = {}
    for xe, row in P.items():
        if rule == "X->YX":
            out[xe] = row.shift(xe)
        elif rule == "X->YX^-1":
            out[-xe] = row.shift(xe)
        elif rule == "X->X^-1":
            out[-xe] = row
        else:
            raise ValueError(f"unknown substitution {rule!r}")
    return BivariateLaurent._raw(out)


def series_expand_quotient(numer: BivariateLaurent, denom: BivariateLaurent, order) -> BivariateLaurent:
    """Ascending X-series of ``numer/denom``, keeping X-exponents ``<= order``.

    ``order`` is an ordinary (not doubled) exponent and may be a half-integer
    given as a Fraction.  The lowest X-coefficient of ``denom`` must be a
    monomial in Y.
    """
    if denom.is_zero():
        raise ZeroDivisionError("zero denominator")
    limit = int(Fraction(order) * 2)
    d0 = denom.min_x()
    lead = denom.coeff(d0)
    if not lead.is_monomial():
        raise ZeroDivisionError("lowest X-coefficient of the denominator is not invertible")
    lead_inv = lead.inverse_monomial()
    if numer.is_zero():
        return BivariateLaurent()
    rem: Dict[int, HalfExpLaurent] = dict(numer.terms)
    out: Dict[int, HalfExpLaurent] = {}
    den_tail = [(e - d0, c) for e, c in denom.items() if e != d0]
    k = numer.min_x()
    while k - d0 <= limit:
        c = rem.pop(k, None)
        if c is not None and c:
            q = c * lead_inv
            out[k - d0] = q
            for de, dc in den_tail:
                key = k + de
                val = rem.get(key, _ZERO) - q * dc
                if val:
                    rem[key] = val
                else:
                    rem.pop(key, None)
        if not rem:
            break
        k = min(rem)
    return BivariateLaurent(out)


def squarefree_part(m: int) -> Tuple[int, int]:
    """Return ``(s, g)`` with ``m = s*g^2`` and ``s`` squarefree (sign kept in ``s``)."""
    if m == 0:
        raise ValueError("zero has no squarefree part")
    sign = -1 if m < 0 else 1
    m = abs(m)
    s, g = 1, 1
    d = 2
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
            g *= d
        if m % d == 0:
            m //= d
            s *= d
        d += 1 if d == 2 else 2
    s *= m
    return sign * s, g


@lru_cache(maxsize=1024)
def _is_squarefree_positive(d: int) -> bool:
    return d >= 1 and squarefree_part(d)[1] == 1


class QuadExt:
    """Element ``u + v*sqrt(d)`` of ``Q(sqrt(d))`` with ``d`` squarefree and positive."""

    __slots__ = ("d", "u", "v")

    def __init__(self, d: int, u: RationalLike = 0, v: RationalLike = 0):
        if not _is_squarefree_positive(d):
            raise ValueError(f"radicand {d} is not a squarefree positive integer")
        u, v = Fraction(u), Fraction(v)
        if d == 1:
            u, v = u + v, Fraction(0)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __setattr__(self, key, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(d, 0, 1)

    @classmethod
    def sqrt_power(cls, d: int, k: int) -> "QuadExt":
        """``sqrt(d)**k`` for any integer ``k``."""
        if k % 2 == 0:
            return cls(d, Fraction(d) ** (k // 2), 0)
        return cls(d, 0, Fraction(d) ** ((k - 1) // 2))

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d == self.d:
                return other
            if other.v == 0:
                return QuadExt(self.d, other.u)
            if self.v == 0 and self.d != other.d:
                return other  # caller re-dispatches
            raise ValueError(f"radicand mismatch {self.d} vs {other.d}")
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.d, other)
        raise TypeError

    def _align(self, other) -> Tuple["QuadExt", "QuadExt"]:
        if isinstance(other, QuadExt) and other.d != self.d:
            if self.v == 0:
                return QuadExt(other.d, self.u), other
            if other.v == 0:
                return self, QuadExt(self.d, other.u)
            raise ValueError(f"radicand mismatch {self.d} vs {other.d}; use MultiQuad")
        return self, self._coerce(other)

    def __add__(self, other) -> "QuadExt":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return QuadExt(a.d, a.u + b.u, a.v + b.v)

    __radd__ = __add__

    def __neg__(self) -> "QuadExt":
        return QuadExt(self.d, -self.u, -self.v)

    def __sub__(self, other) -> "QuadExt":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return QuadExt(a.d, a.u - b.u, a.v - b.v)

    def __rsub__(self, other) -> "QuadExt":
        return (-self) + other

    def __mul__(self, other) -> "QuadExt":
        try:
            a, b = self._align(other)
        except TypeError:
            return NotImplemented
        return QuadExt(a.d, a.u * b.u + a.v * b.v * a.d, a.u * b.v + a.v * b.u)

    __rmul__ = __mul__

    def conj(self) -> "QuadExt":
        return QuadExt(self.d, self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u - self.d * self.v * self.v

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt zero")
        return QuadExt(self.d, self.u / n, -self.v / n)

    def __truediv__(self, other) -> "QuadExt":
        a, b = self._align(other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> "QuadExt":
        return self.inverse() * other

    def __pow__(self, k: int) -> "QuadExt":
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(self.d, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        if not isinstance(other, QuadExt):
            return NotImplemented
        if self.v == 0 and other.v == 0:
            return self.u == other.u
        return (self.d, self.u, self.v) == (other.d, other.u, other.v)

    def __hash__(self) -> int:
        if self.v == 0:
            return hash(self.u)
        return hash((self.d, self.u, self.v))

    def __bool__(self) -> bool:
        return bool(self.u) or bool(self.v)

    def is_rational(self) -> bool:
        return self.v == 0

    def sign(self) -> int:
        """Exact sign, decided by comparing ``u^2`` with ``d v^2``."""
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if sv == 0 or su == sv:
            return su if su else sv
        if su == 0:
            return sv
        return su if self.u * self.u > self.d * self.v * self.v else sv

    def __abs__(self) -> "QuadExt":
        return -self if self.sign() < 0 else self

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def to_decimal(self, digits: int = 50) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            val = Decimal(self.u.numerator) / Decimal(self.u.denominator)
            if self.v:
                val += Decimal(self.v.numerator) / Decimal(self.v.denominator) * Decimal(self.d).sqrt()
            ctx.prec = digits
            return +val

    def __float__(self) -> float:
        return float(self.to_decimal(20))

    def __repr__(self) -> str:
        if self.v == 0:
            return f"QuadExt({_fmt_coeff(self.u)})"
        return f"QuadExt({_fmt_coeff(self.u)} + {_fmt_coeff(self.v)}*sqrt({self.d}))"


class MultiQuad:
    """Finite sum ``sum_r c_r sqrt(r)`` over squarefree positive ``r``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        clean: Dict[int, Fraction] = {}
        for r, c in (terms or {}).items():
            if not _is_squarefree_positive(r):
                raise ValueError(f"key {r} is not squarefree")
            c = Fraction(c)
            if c:
                clean[r] = clean.get(r, 0) + c
        self._terms = {r: c for r, c in sorted(clean.items()) if c}

    @classmethod
    def from_value(cls, x) -> "MultiQuad":
        if isinstance(x, MultiQuad):
            return x
        if isinstance(x, QuadExt):
            return cls({1: x.u, x.d: x.v}) if x.d != 1 else cls({1: x.u})
        return cls({1: Fraction(x)})

    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def support(self) -> Tuple[int, ...]:
        return tuple(self._terms)

    def is_rational(self) -> bool:
        return set(self._terms) <= {1}

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"irrational support {self.support()}")
        return self._terms.get(1, Fraction(0))

    def __add__(self, other) -> "MultiQuad":
        other = MultiQuad.from_value(other)
        out = dict(self._terms)
        for r, c in other._terms.items():
            out[r] = out.get(r, 0) + c
        return MultiQuad(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiQuad":
        return MultiQuad({r: -c for r, c in self._terms.items()})

    def __sub__(self, other) -> "MultiQuad":
        return self + (-MultiQuad.from_value(other))

    def __mul__(self, other) -> "MultiQuad":
        return multiquad_mul(self, MultiQuad.from_value(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = MultiQuad.from_value(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "MultiQuad(0)"
        parts = [
            _fmt_coeff(c) if r == 1 else f"{_fmt_coeff(c)}*sqrt({r})" for r, c in self._terms.items()
        ]
        return "MultiQuad(" + " + ".join(parts) + ")"


def multiquad_mul(a: MultiQuad, b: MultiQuad) -> MultiQuad:
    """Product with ``sqrt(r)*sqrt(s) = g*sqrt(rs/g^2)``, ``g = gcd(r, s)``."""
    out: Dict[int, Fraction] = {}
    for r, c1 in a.terms.items():
        for s, c2 in b.terms.items():
            g = gcd(r, s)
            key = (r // g) * (s // g)
            out[key] = out.get(key, 0) + c1 * c2 * g
    return MultiQuad(out)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
