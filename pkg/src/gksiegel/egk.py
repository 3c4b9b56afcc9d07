"""Naive EGK data and the Laurent polynomials F(H;Y,X), G(H;Y,X) they define.

Two independent routes compute G:

* :func:`f_poly` runs a division-free coefficient recursion on the
  coefficients ``b_i(Y)`` of the length-(n-1) truncation;
* :func:`f_poly_series` evaluates the defining rational-function recursion
  literally, expanding each quotient as an ascending series in ``X``.

The recursion in :func:`f_poly` was rederived from the defining recursion
(see the decisions ledger): with ``e = e_n`` and ``e' = e_{n-1}``,

* n even, ``xi = eps_n``: ``G (1 - X^2) = (1 - xi X/Y) G'(YX) - X^(e+2) (1 - xi/(XY)) G'(Y/X)``;
* n odd, ``xi = eps_{n-1}``: ``G (1 - xi X) = G'(YX) - eps_n xi X^(e+1) G'(Y/X)``;
  when ``xi = 0`` this degenerates to ``G = G'(YX) + eps_n X^e G'(Y/X)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from .algebra import (
    BivariateLaurent,
    HalfExpLaurent,
    QuadExt,
    series_expand_quotient,
    substitute,
)
from .errors import InvariantViolation, ValidationError


class NEGKError(ValidationError):
    """A sequence pair violates one of the naive EGK conditions."""

    def __init__(self, condition: str, message: str):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


def ei_ledger(a: Sequence[int]) -> Tuple[int, ...]:
    """Partial sums, rounded down to even at even positions (1-based)."""
    out, s = [], 0
    for i, x in enumerate(a, start=1):
        s += x
        out.append(s if i % 2 else s - (s % 2))
    return tuple(out)


@dataclass(frozen=True)
class NaiveEGKDatum:
    a: Tuple[int, ...]
    eps: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def ledger(self) -> Tuple[int, ...]:
        return ei_ledger(self.a)

    @property
    def eN(self) -> int:
        return self.ledger[-1]

    @property
    def zeta(self) -> int:
        return self.eps[-1] if self.n % 2 else 1

    def truncate(self, m: int) -> "NaiveEGKDatum":
        return NaiveEGKDatum(self.a[:m], self.eps[:m])

    def __str__(self) -> str:
        return f"({','.join(map(str, self.a))}; {','.join(map(str, self.eps))})"


def validate_negk(a: Sequence[int], eps: Sequence[int]) -> NaiveEGKDatum:
    """Check the naive EGK conditions, reporting the first violated one."""
    a, eps = tuple(a), tuple(eps)
    if len(a) != len(eps):
        raise ValidationError("a and eps must have the same length")
    if not a:
        raise ValidationError("empty datum")
    for x in a:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise ValidationError(f"a entries must be nonnegative integers, got {x!r}")
    for e in eps:
        if e not in (-1, 0, 1):
            raise ValidationError(f"eps entries must lie in {{-1,0,1}}, got {e!r}")
    n = len(a)
    for i in range(1, n):
        if a[i] < a[i - 1]:
            raise NEGKError("N1", f"a is not nondecreasing at position {i + 1}")
    sums = [sum(a[: i + 1]) for i in range(n)]
    for i in range(2, n + 1, 2):
        if (eps[i - 1] != 0) != (sums[i - 1] % 2 == 0):
            raise NEGKError("N2", f"eps_{i} = {eps[i - 1]} but a_1+...+a_{i} = {sums[i - 1]}")
    for i in range(1, n + 1, 2):
        if eps[i - 1] == 0:
            raise NEGKError("N3", f"eps_{i} must be nonzero")
    if eps[0] != 1:
        raise NEGKError("N4", "eps_1 must be 1")
    for i in range(3, n + 1, 2):
        if sums[i - 2] % 2 == 0:
            forced = eps[i - 2] ** (a[i - 1] + a[i - 2]) * eps[i - 3]
            if eps[i - 1] != forced:
                raise NEGKError("N5", f"eps_{i} must equal {forced}")
    return NaiveEGKDatum(a, eps)


def random_negk(rng: random.Random, n: int, max_a: int) -> NaiveEGKDatum:
    """Draw a valid datum of length ``n`` with entries at most ``max_a``."""
    a = sorted(rng.randint(0, max_a) for _ in range(n))
    eps: List[int] = []
    s = 0
    for i in range(1, n + 1):
        s += a[i - 1]
        if i == 1:
            eps.append(1)
        elif i % 2 == 0:
            eps.append(rng.choice((-1, 1)) if s % 2 == 0 else 0)
        elif (s - a[i - 1]) % 2 == 0:
            eps.append(eps[-1] ** (a[i - 1] + a[i - 2]) * eps[-2])
        else:
            eps.append(rng.choice((-1, 1)))
    return validate_negk(a, eps)


@dataclass(frozen=True)
class GPoly:
    """``G(H;Y,X) = sum_i coeffs[i](Y) X^i``, of degree ``eN`` in ``X``."""

    coeffs: Tuple[HalfExpLaurent, ...]
    eN: int
    zeta: int = 1
    n: int = 0

    def to_bivariate(self) -> BivariateLaurent:
        return BivariateLaurent({2 * i: c for i, c in enumerate(self.coeffs)})

    def F(self) -> BivariateLaurent:
        """``F = X^(-eN/2) G``."""
        return self.to_bivariate().shift(-self.eN)

    def at_sqrt_q(self, q: int) -> Tuple[QuadExt, ...]:
        root = QuadExt.sqrt(q)
        return tuple(_eval_y(c, root, q) for c in self.coeffs)

    def to_text(self) -> str:
        return self.to_bivariate().to_text()


def _eval_y(c: HalfExpLaurent, root: QuadExt, q: int) -> QuadExt:
    """Substitute ``Y = sqrt(q)``; coefficients of G only carry integral Y-exponents."""
    total = QuadExt(q, 0)
    for e, v in c.items():
        if e % 2:
            raise InvariantViolation("half-integral Y exponent in a coefficient of G")
        total = total + QuadExt.sqrt_power(q, e // 2) * v
    return total


# -- division-free recursion --------------------------------------------------

@lru_cache(maxsize=8192)
def _g_coeffs(H: NaiveEGKDatum) -> Tuple[HalfExpLaurent, ...]:
    n = H.n
    led = H.ledger
    if n == 1:
        return tuple(HalfExpLaurent.constant(1) for _ in range(H.a[0] + 1))
    b = _g_coeffs(H.truncate(n - 1))
    e, ep = led[-1], led[-2]
    if len(b) != ep + 1:
        raise InvariantViolation("previous G has the wrong degree")
    zero = HalfExpLaurent()

    def bY(j: int, power: int) -> HalfExpLaurent:
        # b_j(Y) Y^power, with b_j = 0 outside [0, e']
        if j < 0 or j > ep:
            return zero
        return b[j].shift(2 * power)

    out: List[HalfExpLaurent] = []
    if n % 2 == 0:
        xi = H.eps[-1]
        p = [
            bY(m, m) - bY(m - 1, m - 2).scale(xi) - bY(e + 2 - m, e + 2 - m) + bY(e + 1 - m, e - m).scale(xi)
            for m in range(e + 1)
        ]
        for l in range(e + 1):
            acc = zero
            for m in range(l, -1, -2):
                acc = acc + p[m]
            out.append(acc)
    else:
        xi = H.eps[-2]
        en = H.eps[-1]
        if xi == 0:
            out = [bY(l, l) + bY(e - l, e - l).scale(en) for l in range(e + 1)]
        else:
            p = [bY(m, m) - bY(e + 1 - m, e + 1 - m).scale(en * xi) for m in range(e + 1)]
            for l in range(e + 1):
                acc = zero
                for j in range(l + 1):
                    acc = acc + p[l - j].scale(xi**j)
                out.append(acc)
    return tuple(out)


def f_poly(H: NaiveEGKDatum) -> GPoly:
    """Compute ``G(H;Y,X)`` by the division-free coefficient recursion."""
    H = validate_negk(H.a, H.eps)
    return GPoly(_g_coeffs(H), H.eN, H.zeta, H.n)


# -- literal route through the defining rational functions --------------------

def _x(doubled: int, y_doubled: int = 0, c=1) -> BivariateLaurent:
    return BivariateLaurent.monomial(doubled, y_doubled, c)


@lru_cache(maxsize=4096)
def _f_series(H: NaiveEGKDatum) -> BivariateLaurent:
    n = H.n
    if n == 1:
        a1 = H.a[0]
        return BivariateLaurent({2 * k - a1: HalfExpLaurent.constant(1) for k in range(a1 + 1)})
    Fp = _f_series(H.truncate(n - 1))
    led = H.ledger
    e, et = led[-1], led[-2]
    upper = e + 4  # doubled; two extra half-steps to witness the vanishing tail
    f_yx = substitute(Fp, "X->YX")
    f_yxinv = substitute(Fp, "X->YX^-1")
    one = BivariateLaurent.constant(1)
    if n % 2 == 0:
        xi, zeta = H.eps[-1], 1
        # C(X) = Y^(et/2) X^(-(e-et)/2-1) (1 - xi Y^-1 X) / (X^-1 - X)
        num1 = _x(-(e - et) - 2, et) * (one - _x(2, -2, xi)) * f_yx
        den1 = _x(-2) - _x(2)
        # C(X^-1) = Y^(et/2) X^((e-et)/2+1) (1 - xi Y^-1 X^-1) / (X - X^-1)
        num2 = _x((e - et) + 2, et) * (one - _x(-2, -2, xi)) * f_yxinv
        den2 = _x(2) - _x(-2)
    else:
        xi, zeta = H.eps[-2], H.eps[-1]
        # D(X) = Y^(et/2) X^(-(e-et)/2) / (1 - xi X)
        num1 = _x(-(e - et), et) * f_yx
        den1 = one - _x(2, 0, xi)
        num2 = _x(e - et, et) * f_yxinv
        den2 = one - _x(-2, 0, xi)
    order = Fraction(upper, 2)
    total = series_expand_quotient(num1, den1, order) + series_expand_quotient(num2, den2, order).scale(zeta)
    for xe, _ in total.items():
        if xe < -e or xe > e:
            raise InvariantViolation(f"series route left a nonzero term at X^({xe}/2) outside [-e/2, e/2]")
    return total


def f_poly_series(H: NaiveEGKDatum, q_symbolic: bool = True) -> GPoly:
    """Compute ``G(H;Y,X)`` by expanding the defining recursion as power series.

    ``q_symbolic`` is accepted for interface symmetry; ``Y`` always stays symbolic.
    """
    H = validate_negk(H.a, H.eps)
    F = _f_series(H)
    e = H.eN
    G = F.shift(e)
    coeffs = []
    for xe, _ in G.items():
        if xe % 2 or xe < 0 or xe > 2 * e:
            raise InvariantViolation(f"G has a term at X^({xe}/2)")
    for i in range(e + 1):
        coeffs.append(G.coeff(2 * i))
    return GPoly(tuple(coeffs), e, H.zeta, H.n)


def functional_eq_defect(H: NaiveEGKDatum) -> BivariateLaurent:
    """``F(H;Y,X^-1) - zeta F(H;Y,X)``; zero for every valid datum."""
    G = f_poly(H)
    F = G.F()
    return substitute(F, "X->X^-1") - F.scale(H.zeta)


# -- specialisation ----------------------------------------------------------

def chebyshev_v(k: int, t):
    """``V_k(t)`` with ``V_k(x + 1/x) = x^k + x^-k``."""
    if k == 0:
        return 2 * (t ** 0 if not isinstance(t, QuadExt) else QuadExt(t.d, 1))
    prev, cur = (QuadExt(t.d, 2) if isinstance(t, QuadExt) else Fraction(2)), t
    for _ in range(k - 1):
        prev, cur = cur, t * cur - prev
    return cur


def specialize(
    G: GPoly,
    q: int,
    t: Union[QuadExt, Fraction, int, None] = None,
    x: Union[QuadExt, Fraction, int, None] = None,
) -> QuadExt:
    """Evaluate ``F(H; sqrt(q), X)`` exactly.

    Supply exactly one of ``t`` (with ``X + 1/X = t``, even-length data only)
    or an explicit point ``x``.
    """
    if (t is None) == (x is None):
        raise ValidationError("give exactly one of t or x")
    vals = G.at_sqrt_q(q)
    e = G.eN
    if t is not None:
        if G.n % 2:
            raise ValidationError("the t-route needs an even-length datum")
        if isinstance(t, QuadExt) and t.v == 0:
            t = t.u
        if not isinstance(t, QuadExt):
            t = QuadExt(q, t)
        if t.d != q and t.v != 0:
            raise ValidationError("t must lie in Q(sqrt(q))")
        if e % 2:
            raise InvariantViolation("even-length datum with odd e_n")
        h = e // 2
        for i in range(e + 1):
            if vals[i] != vals[e - i]:
                raise InvariantViolation("G is not palindromic at sqrt(q)")
        total = vals[h]
        for k in range(1, h + 1):
            total = total + vals[h + k] * chebyshev_v(k, t)
        return total
    if e % 2:
        raise ValidationError("explicit points need integral exponents; use an even e_n")
    if not isinstance(x, QuadExt):
        x = QuadExt(q, x)
    h = e // 2
    total = QuadExt(x.d if x.v else q, 0)
    for i, v in enumerate(vals):
        total = total + v * x ** (i - h)
    return total


# -- coefficient and value bounds ---------------------------------------------

def _unit_points() -> List[Tuple[Fraction, Fraction]]:
    """Rational points ``(c, s)`` on the unit circle, including 1 and -1."""
    pts = []
    for m in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(-1, 2), Fraction(-3)):
        den = 1 + m * m
        pts.append(((1 - m * m) / den, 2 * m / den))
    pts.append((Fraction(-1), Fraction(0)))
    return pts


def _powers(c: Fraction, s: Fraction, count: int) -> List[Tuple[Fraction, Fraction]]:
    out = [(Fraction(1), Fraction(0))]
    for _ in range(count - 1):
        re, im = out[-1]
        out.append((re * c - im * s, re * s + im * c))
    return out


@dataclass
class BoundReport:
    datum: str
    q: int
    r0: Fraction
    coeff_checks: int = 0
    value_checks: int = 0
    violations: List[str] = field(default_factory=list)
    max_coeff_ratio: Decimal = Decimal(0)
    max_value_ratio: Decimal = Decimal(0)
    max_cor_ratio: Optional[Decimal] = None

    @property
    def ok(self) -> bool:
        return not self.violations


class _MaxRatio:
    """Running exact maximum of ``num/den``; rendered as a decimal on demand."""

    def __init__(self):
        self.best: Optional[QuadExt] = None

    def feed(self, num: QuadExt, den: QuadExt) -> None:
        r = num / den
        if self.best is None or r > self.best:
            self.best = r

    def decimal(self) -> Decimal:
        return Decimal(0) if self.best is None else self.best.to_decimal(30)


def bound_check(H: NaiveEGKDatum, q: int, r0: Union[Fraction, int, str] = 0) -> BoundReport:
    """Verify the coefficient bound and both value bounds on sampled points.

    Value bounds are sampled at ``X = q^sigma * w`` with ``|w| = 1`` and
    ``sigma`` running over the half-integers in ``[-r0, r0]``.  All
    comparisons are exact; decimal ratios are for the report only.
    """
    r0 = Fraction(r0)
    if r0 < 0 or (2 * r0).denominator != 1:
        raise ValidationError("r0 must be a nonnegative multiple of 1/2")
    G = f_poly(H)
    n, e = H.n, H.eN
    led = H.ledger
    rep = BoundReport(str(H), q, r0)
    vals = G.at_sqrt_q(q)
    coeff_max, value_max, cor_max = _MaxRatio(), _MaxRatio(), _MaxRatio()

    prod_lt = 1
    for l in range(n - 1):
        prod_lt *= led[l] + 1
    s_lt = sum(led[: n - 1])
    coeff_bound = QuadExt.sqrt_power(q, s_lt) * prod_lt
    for i, v in enumerate(vals):
        rep.coeff_checks += 1
        if abs(v) > coeff_bound:
            rep.violations.append(f"coefficient bound fails at a_{i}")
        coeff_max.feed(abs(v), coeff_bound)

    prod_all = prod_lt * (led[-1] + 1)
    # squared bounds; q^(e*r0) is an integer power of sqrt(q) because 2*r0 is integral
    two_r0 = int(2 * r0)
    val_bound2 = QuadExt.sqrt_power(q, e * two_r0 + 2 * s_lt) * (prod_all * prod_all)
    cor_bound2 = None
    if n % 2 == 0:
        cor_bound2 = QuadExt.sqrt_power(q, e * two_r0 + (n - 1) * e) * (prod_all * prod_all)
    points = [_powers(c, sn, e + 1) for c, sn in _unit_points()]
    for two_sigma in range(-two_r0, two_r0 + 1):
        # X = q^sigma * w with |w| = 1, so G(X) = sum a_i q^(i sigma) w^i
        scaled = [v * QuadExt.sqrt_power(q, i * two_sigma) for i, v in enumerate(vals)]
        for wp in points:
            re = QuadExt(q, 0)
            im = QuadExt(q, 0)
            for v, (wr, wi) in zip(scaled, wp):
                re = re + v * wr
                im = im + v * wi
            # |F|^2 = |X|^(-e) |G|^2
            f2 = (re * re + im * im) * QuadExt.sqrt_power(q, -e * two_sigma)
            rep.value_checks += 1
            if f2 > val_bound2:
                rep.violations.append(f"value bound fails at sigma={Fraction(two_sigma, 2)}")
            value_max.feed(f2, val_bound2)
            if cor_bound2 is not None:
                if f2 > cor_bound2:
                    rep.violations.append(f"even-length value bound fails at sigma={Fraction(two_sigma, 2)}")
                cor_max.feed(f2, cor_bound2)
    rep.max_coeff_ratio = coeff_max.decimal()
    # value comparisons were made on squared moduli
    rep.max_value_ratio = value_max.decimal().sqrt()
    if cor_bound2 is not None:
        rep.max_cor_ratio = cor_max.decimal().sqrt()
    return rep
