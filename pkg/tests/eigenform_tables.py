"""Genuine eigenform data for weight k = 10, genus 2.

``f`` spans the weight-18 cusp forms and equals ``Delta * E_6``.  ``h``
corresponds to the weight-10 index-1 Jacobi cusp form ``eta^18 theta_1^2``;
its coefficients depend only on ``4N - r^2``.
"""

from __future__ import annotations

import json
from typing import Dict, List


def _mul(a: List[int], b: List[int], size: int) -> List[int]:
    out = [0] * size
    for i, x in enumerate(a[:size]):
        if x:
            for j, y in enumerate(b[: size - i]):
                out[i + j] += x * y
    return out


def _euler_power(power: int, size: int) -> List[int]:
    """Coefficients of ``prod_m (1 - q^m)^power`` up to ``q^(size-1)``."""
    out = [1] + [0] * (size - 1)
    for m in range(1, size):
        fac = [0] * size
        fac[0], fac[m] = 1, -1
        for _ in range(power):
            out = _mul(out, fac, size)
    return out


def weight18_coefficients(size: int) -> List[int]:
    delta = [0] + _euler_power(24, size)[: size - 1]
    e6 = [1] + [-504 * sum(d**5 for d in range(1, m + 1) if m % d == 0) for m in range(1, size)]
    return _mul(delta, e6, size)


def jacobi_coefficients(max_D: int) -> Dict[int, int]:
    """``c(D)`` for ``D = 4N - r^2 <= max_D`` from ``eta^18 theta_1^2``."""
    size = max_D // 4 + 3
    P = _euler_power(18, size)
    tri = []
    t = 0
    while t * (t + 1) // 2 < size:
        tri.append(t)
        t += 1
    coeff: Dict[tuple, int] = {}
    ns = [x for t in tri for x in (t, -t - 1)]
    for n1 in ns:
        for n2 in ns:
            base = 1 + n1 * (n1 + 1) // 2 + n2 * (n2 + 1) // 2
            r = n1 + n2 + 1
            sign = -1 if (n1 + n2) % 2 == 0 else 1
            for j, pj in enumerate(P):
                N = base + j
                if N >= size:
                    break
                if pj:
                    coeff[(N, r)] = coeff.get((N, r), 0) + sign * pj
    out: Dict[int, int] = {}
    for (N, r), v in coeff.items():
        D = 4 * N - r * r
        if D <= 0 or D > max_D:
            continue
        if D in out and out[D] != v:
            raise AssertionError(f"Jacobi coefficients disagree at D={D}")
        out[D] = v
    return out


def genuine_table(max_D: int = 400) -> dict:
    cf = weight18_coefficients(8)
    ch = jacobi_coefficients(max_D)
    return {
        "k": 10,
        "n": 2,
        "c_h": {str(D): str(v) for D, v in sorted(ch.items())},
        "c_f": {str(p): str(cf[p]) for p in (2, 3, 5, 7)},
    }


if __name__ == "__main__":
    import sys

    json.dump(genuine_table(), sys.stdout, indent=1)
