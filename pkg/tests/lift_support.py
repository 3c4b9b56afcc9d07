"""Eigenform tables for the lift tests."""

from __future__ import annotations

import os
import random
from fractions import Fraction
from typing import Iterable, Optional

from gksiegel.arith import prime_divisors
from gksiegel.lift import EigenformData
from gksiegel.matrices import HalfIntegralMatrix, global_discriminant

HERE = os.path.dirname(__file__)
GENUINE_ENV = "GKSIEGEL_EIGENFORM_TABLE"


def synthetic_table(mats: Iterable[HalfIntegralMatrix], k: int = 10, n: int = 2, seed: int = 0) -> EigenformData:
    """Arbitrary rational values at every index the given matrices need.

    ``c_f(p)`` is drawn inside the Ramanujan range so Satake parameters are
    genuine unit-circle points; ``c_h`` values are arbitrary rationals.
    """
    rng = random.Random(seed)
    ch, cf = {}, {}
    for B in mats:
        g = global_discriminant(B)
        m = abs(g.dB)
        if m not in ch:
            ch[m] = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 50)) or Fraction(1)
        for p in prime_divisors(g.fB) if g.fB > 1 else ():
            if p not in cf:
                bound = 2 * int(p ** Fraction(2 * k - n - 1, 2))
                cf[p] = Fraction(rng.randint(-bound, bound))
    return EigenformData(k, n, ch, cf)


def genuine_table_path() -> Optional[str]:
    path = os.environ.get(GENUINE_ENV) or os.path.join(HERE, "data", "genuine_k10_n2.json")
    return path if os.path.isfile(path) else None
