"""Fourier coefficients of the Duke-Imamoglu-Ikeda lift and their bounds.

``c(B) = c_h(|d_B|) f_B^(k-(n+1)/2) prod_p Ftilde_p(B, alpha_p)`` where only
primes dividing the conductor ``f_B`` contribute.  Each local factor lives in
``Q(sqrt p)``; the product is assembled in a multiquadratic field and must
come out rational.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import gcd
from typing import Dict, Mapping, Optional, Tuple, Union

from .algebra import MultiQuad, QuadExt
from .arith import ord_p, prime_divisors, require_prime
from .attach import attach
from .egk import ei_ledger, f_poly, specialize
from .errors import InvariantViolation, ValidationError
from .gk import gk_invariant
from .matrices import G_r, HalfIntegralMatrix, global_discriminant, local_invariants

DIGITS = 30


@dataclass(frozen=True)
class EigenformData:
    k: int
    n: int
    cH: Mapping[int, Fraction]
    cF: Mapping[int, Fraction]

    def __post_init__(self):
        if self.n <= 0 or self.n % 2:
            raise ValidationError("the lift needs an even positive genus n")
        if self.k % 2 or self.k < self.n + 2:
            raise ValidationError(f"weight k={self.k} must be even and at least n+2")
        sign = (-1) ** (self.n // 2)
        for m in self.cH:
            if m <= 0 or (sign * m) % 4 not in (0, 1):
                raise ValidationError(f"c_h index {m} is outside the plus space support")
        for p in self.cF:
            require_prime(p)

    @classmethod
    def from_dict(cls, obj: Mapping) -> "EigenformData":
        try:
            k, n = obj["k"], obj["n"]
            ch = {int(m): Fraction(str(v)) for m, v in obj["c_h"].items()}
            cf = {int(p): Fraction(str(v)) for p, v in obj.get("c_f", {}).items()}
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"malformed eigenform data: {exc}") from None
        if not isinstance(k, int) or not isinstance(n, int):
            raise ValidationError("k and n must be integers")
        return cls(k, n, ch, cf)

    @classmethod
    def load(cls, path: str) -> "EigenformData":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ValidationError(f"cannot read eigenform file {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed eigenform JSON: {exc}") from None
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "c_h": {str(m): str(v) for m, v in sorted(self.cH.items())},
            "c_f": {str(p): str(v) for p, v in sorted(self.cF.items())},
        }

    def ch(self, m: int) -> Fraction:
        if m not in self.cH:
            raise ValidationError(f"c_h({m}) missing from the eigenform table")
        return self.cH[m]


@dataclass(frozen=True)
class SatakeParameter:
    p: int
    t: QuadExt
    ramanujan_ok: bool


def satake_t(cf_p: Union[Fraction, int], k: int, n: int, p: int) -> SatakeParameter:
    """``t_p = alpha_p + 1/alpha_p = c_f(p) / p^((2k-n-1)/2)`` exactly in ``Q(sqrt p)``."""
    require_prime(p)
    t = QuadExt.sqrt_power(p, -(2 * k - n - 1)) * Fraction(cf_p)
    # t is a rational multiple of a power of sqrt(p), so t^2 is rational
    sq = t * t
    return SatakeParameter(p, t, sq.u <= 4)


@dataclass(frozen=True)
class LiftCoefficient:
    value: Fraction
    per_prime: Dict[int, QuadExt]
    dB: int
    fB: int
    ch: Fraction
    ramanujan_flags: Tuple[int, ...] = ()


def lift_coefficient(B: HalfIntegralMatrix, data: EigenformData) -> LiftCoefficient:
    if B.n != data.n:
        raise ValidationError(f"matrix size {B.n} differs from the genus {data.n}")
    gd = global_discriminant(B)
    ch = data.ch(abs(gd.dB))
    k, n = data.k, data.n
    total = MultiQuad.from_value(ch)
    per: Dict[int, QuadExt] = {}
    flags = []
    for p in prime_divisors(B.det_two_b()):
        e = local_invariants(B, p).eB
        if gd.fB % p:
            if e != 0:
                raise InvariantViolation(f"e_B = {e} at p={p} although p does not divide f_B")
            continue
        if p not in data.cF:
            raise ValidationError(f"c_f({p}) missing from the eigenform table")
        sat = satake_t(data.cF[p], k, n, p)
        if not sat.ramanujan_ok:
            flags.append(p)
        H = attach(B, p).datum
        local = specialize(f_poly(H), p, t=sat.t)
        factor = QuadExt.sqrt_power(p, int(ord_p(gd.fB, p)) * (2 * k - n - 1)) * local
        per[p] = factor
        total = total * MultiQuad.from_value(factor)
    if not total.is_rational():
        raise InvariantViolation(f"lift coefficient has irrational support {total.support()}")
    return LiftCoefficient(total.rational_value(), per, gd.dB, gd.fB, ch, tuple(flags))


def maass_check(B: HalfIntegralMatrix, data: EigenformData) -> Tuple[bool, Fraction, Fraction]:
    """Compare with ``sum_{d | gcd(a,b,c)} d^(k-1) c_h(4 det B / d^2)`` for ``B = [[a, b/2], [b/2, c]]``."""
    if B.n != 2 or data.n != 2:
        raise ValidationError("the Maass relation check is for 2x2 matrices")
    a, b, c = B.two_b[0][0] // 2, B.two_b[0][1], B.two_b[1][1] // 2
    D = B.det_two_b()
    g = gcd(gcd(a, b), c)
    rhs = Fraction(0)
    for d in range(1, g + 1):
        if g % d == 0:
            rhs += Fraction(d) ** (data.k - 1) * data.ch(D // (d * d))
    lhs = lift_coefficient(B, data).value
    return lhs == rhs, lhs, rhs


def alpha_n(n: int) -> Fraction:
    return 1 / (4 * (n - 1) + 4 * ((n - 1) // 2) + Fraction(2, n + 2))


def _dec(x: Union[Fraction, int]) -> Decimal:
    x = Fraction(x)
    return Decimal(x.numerator) / Decimal(x.denominator)


def _dpow(base: Union[Fraction, int], exp: Union[Fraction, int]) -> Decimal:
    b = _dec(base)
    if b == 0:
        return Decimal(0)
    return (b.ln() * _dec(exp)).exp()


@dataclass
class BoundRow:
    det2B: int
    dB: int
    fB: int
    c: Fraction
    hecke: Decimal
    bk: Decimal
    thm31: Decimal
    thm32: Decimal
    thm641: Fraction
    thm642_sq: Fraction
    thm642: Decimal
    lemma63: Dict[int, int]
    ledgers: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    ok641: bool = True
    ok642: bool = True
    maass: str = "n/a"


def bound_report(
    B: HalfIntegralMatrix,
    data: EigenformData,
    epsilon: Union[Fraction, str, int] = Fraction(1, 100),
    coefficient: Optional[LiftCoefficient] = None,
) -> BoundRow:
    """All bounds for ``|c(B)|``; the two exact rows are checked, the others only reported."""
    eps = Fraction(epsilon)
    k, n = data.k, data.n
    lc = coefficient or lift_coefficient(B, data)
    d2 = B.det_two_b()
    det = Fraction(d2, 2**n)
    gd = global_discriminant(B)
    ledgers: Dict[int, Tuple[int, ...]] = {}
    prod_e = 1
    for p in prime_divisors(gd.fB) if gd.fB > 1 else ():
        led = ei_ledger(gk_invariant(B, p).a)
        ledgers[p] = led
        for e in led:
            prod_e *= 1 + e
    lemma63 = {r: _lemma63(ledgers, r) for r in range(1, n + 1)}
    if gd.fB > 1 and lemma63[n] != gd.fB**2:
        raise InvariantViolation(f"prod p^e_n = {lemma63[n]} differs from f_B^2 = {gd.fB ** 2}")
    G_prod = 1
    for i in range(1, n):
        G_prod *= G_r(B, i)
    ch = abs(lc.ch)
    thm641 = ch * Fraction(gd.fB) ** (k - 1) * prod_e
    # square of ch * f^(k-(n+1)/2) * prod G_i^(1/2) * prod_e
    thm642_sq = ch * ch * Fraction(gd.fB) ** (2 * k - n - 1) * G_prod * prod_e * prod_e
    c = lc.value
    with localcontext() as ctx:
        ctx.prec = 50
        an = alpha_n(n)
        hecke = _dpow(det, Fraction(k, 2))
        bk = _dpow(det, Fraction(k, 2) - Fraction(1, 2 * n) - (1 - Fraction(1, n)) * an + eps)
        thm31 = _dpow(abs(gd.dB), Fraction(-n, 4) + Fraction(5, 12)) * _dpow(d2, Fraction(k - 1, 2) + eps)
        thm32 = (
            _dpow(abs(gd.dB), Fraction(1, 6))
            * _dpow(d2, Fraction(k, 2) - Fraction(n + 1, 4) + eps)
            * _dec(G_prod).sqrt()
        )
        thm642 = _dec(thm642_sq).sqrt()
    return BoundRow(
        det2B=d2,
        dB=gd.dB,
        fB=gd.fB,
        c=c,
        hecke=hecke,
        bk=bk,
        thm31=thm31,
        thm32=thm32,
        thm641=thm641,
        thm642_sq=thm642_sq,
        thm642=thm642,
        lemma63=lemma63,
        ledgers=ledgers,
        ok641=abs(c) <= thm641,
        ok642=c * c <= thm642_sq,
    )


def _lemma63(ledgers: Mapping[int, Tuple[int, ...]], r: int) -> int:
    out = 1
    for p, led in ledgers.items():
        out *= p ** led[r - 1]
    return out


def fmt_decimal(x: Union[Decimal, Fraction, int], digits: int = DIGITS) -> str:
    if not isinstance(x, Decimal):
        with localcontext() as ctx:
            ctx.prec = 50
            x = _dec(x)
    return f"{x:.{digits}g}"
