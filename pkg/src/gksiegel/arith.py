"""Elementary p-adic and integer helpers."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Tuple, Union

from sympy import isprime as _isprime

from .errors import ValidationError

DEFAULT_TRIAL_BOUND = 10**6


def is_prime(p: int) -> bool:
    return isinstance(p, int) and p >= 2 and bool(_isprime(p))


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    return p


def ord_p(x: Union[int, Fraction], p: int) -> float | int:
    """p-adic valuation; ``inf`` for zero."""
    if isinstance(x, Fraction):
        if x == 0:
            return float("inf")
        return ord_p(x.numerator, p) - ord_p(x.denominator, p)
    if x == 0:
        return float("inf")
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def split_p(x: int, p: int) -> Tuple[int, int]:
    """Return ``(k, u)`` with ``x = p^k u`` and ``p`` not dividing ``u``."""
    if x == 0:
        raise ValueError("zero has no p-adic unit part")
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k, x


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=4096)
def factorize(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND) -> Tuple[Tuple[int, int], ...]:
    """Factor ``|n|`` by trial division up to ``trial_bound`` plus a primality test on the cofactor."""
    if n == 0:
        raise ValidationError("cannot factor zero")
    n = abs(n)
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n and d <= trial_bound:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if d * d > n or _isprime(n):
            out[n] = out.get(n, 0) + 1
        else:
            raise ValidationError(f"cofactor {n} is composite and beyond the trial-division bound")
    return tuple(sorted(out.items()))


def prime_divisors(n: int) -> Tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def quadratic_class(D: int, p: int) -> Tuple[int, int]:
    """Splitting type of ``Q_p(sqrt(D))`` and the valuation of its discriminant ideal.

    Returns ``(xi, ord_disc)`` with ``xi`` = 1 (split), -1 (unramified), 0 (ramified).
    """
    if D == 0:
        raise ValidationError("degenerate discriminant")
    k, u = split_p(D, p)
    if p != 2:
        if k % 2:
            return 0, 1
        return legendre(u, p), 0
    if k % 2:
        return 0, 3
    r = u % 8
    if r == 1:
        return 1, 0
    if r == 5:
        return -1, 0
    return 0, 2


def squarefree_decomposition(m: int) -> Tuple[int, int]:
    """``m = s * g^2`` with ``s`` squarefree, sign carried by ``s``."""
    if m == 0:
        raise ValidationError("zero has no squarefree part")
    s, g = (-1 if m < 0 else 1), 1
    for q, e in factorize(m):
        g *= q ** (e // 2)
        if e % 2:
            s *= q
    return s, g


def fundamental_discriminant(m: int) -> Tuple[int, int]:
    """Write a discriminant ``m`` (``m`` = 0 or 1 mod 4) as ``d * f^2`` with ``d`` fundamental."""
    if m % 4 not in (0, 1):
        raise ValidationError(f"{m} is not a discriminant (must be 0 or 1 mod 4)")
    s, g = squarefree_decomposition(m)
    if s % 4 == 1:
        return s, g
    if g % 2:
        raise ValidationError(f"{m} has no fundamental factorisation")
    return 4 * s, g // 2


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
