"""Gross-Keating invariants over Z_p and the minor-valuation bounds.

Odd primes use a Jordan splitting.  At ``p = 2`` the closed forms cover
``n <= 2``; for ``n >= 3`` every candidate sequence allowed by the proven
constraints is tested, lexicographically from the top, by an exhaustive
search for a basis realising it (:func:`find_optimal_basis`).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import combinations, product
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import ord_p, quadratic_class, require_prime
from .config import get_budget
from .egk import ei_ledger
from .errors import BudgetExceeded, InvariantViolation, ValidationError
from .matrices import (
    HalfIntegralMatrix,
    all_minor_norms,
    bareiss_det,
    local_invariants,
    mat_mul,
    transpose,
)

__all__ = [
    "GKInvariant",
    "JordanForm",
    "s_membership",
    "jordan_odd",
    "gk_invariant",
    "ei_ledger",
    "gr_at_p",
    "dr_enumerate",
    "find_optimal_basis",
    "candidate_sequences",
]

EXACT = "exact"
CERTIFIED = "search-certified"
UNVERIFIED = "search-unverified"


@dataclass(frozen=True)
class JordanForm:
    p: int
    blocks: Tuple[Tuple[int, int], ...]  # (exponent, unit) for B, sorted by exponent
    precision: int

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(a for a, _ in self.blocks)


@dataclass(frozen=True)
class GKInvariant:
    p: int
    a: Tuple[int, ...]
    certificate: str
    witness: Optional[Tuple[Tuple[int, ...], ...]] = None
    jordan: Optional[JordanForm] = None
    refuted: Tuple[Tuple[int, ...], ...] = field(default=(), compare=False)

    @property
    def ledger(self) -> Tuple[int, ...]:
        return ei_ledger(self.a)


def _ord(x: int, p: int) -> float:
    return ord_p(x, p)


def s_membership(B: HalfIntegralMatrix, p: int, a: Sequence[int]) -> bool:
    """Whether ``a`` lies in ``S(B)``: ord b_ii >= a_i and 2 ord(2 b_ij) >= a_i + a_j."""
    n = B.n
    a = tuple(a)
    if len(a) != n:
        return False
    for i in range(n):
        if _ord(B.two_b[i][i] // 2, p) < a[i]:
            return False
        for j in range(i + 1, n):
            if 2 * _ord(B.two_b[i][j], p) < a[i] + a[j]:
                return False
    return True


# -- odd primes ---------------------------------------------------------------

def jordan_odd(B: HalfIntegralMatrix, p: int, precision: Optional[int] = None) -> JordanForm:
    """Diagonalise ``2B`` over ``Z/p^N`` by symmetric elimination with minimal pivots."""
    require_prime(p)
    if p == 2:
        raise ValidationError("jordan_odd needs an odd prime")
    d2 = B.det_two_b()
    if d2 == 0:
        raise ValidationError("degenerate matrix")
    N = _ord(d2, p) + 3 if precision is None else precision
    mod = p**N
    n = B.n
    A = [[x % mod for x in row] for row in B.two_b]
    live = list(range(n))
    blocks: List[Tuple[int, int]] = []
    inv2 = pow(2, -1, mod)
    while live:
        best = None
        for i in live:
            for j in live:
                if A[i][j] % mod:
                    v = _ord(A[i][j], p)
                    key = (v, 0 if i == j else 1)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            raise ValidationError(f"precision {N} too small: remaining block vanishes mod p^{N}")
        (v, offdiag), i, j = best
        if v >= N:
            raise ValidationError(f"precision {N} too small for a pivot of valuation {v}")
        if offdiag:
            # diagonal entries have larger valuation; replace e_i by e_i + e_j
            for r in range(n):
                A[r][i] = (A[r][i] + A[r][j]) % mod
            for c in range(n):
                A[i][c] = (A[i][c] + A[j][c]) % mod
            if _ord(A[i][i], p) != v:
                raise InvariantViolation("off-diagonal pivot did not produce a diagonal pivot")
        piv = A[i][i]
        unit = (piv // p**v) % mod
        uinv = pow(unit, -1, mod)
        for r in live:
            if r == i or A[r][i] % mod == 0:
                continue
            f = (A[r][i] // p**v) * uinv % mod
            for c in range(n):
                A[r][c] = (A[r][c] - f * A[i][c]) % mod
            for c in range(n):
                A[c][r] = A[r][c]
        for c in live:
            if c != i:
                A[i][c] = A[c][i] = 0
        # B = A/2, so the unit of B is unit/2
        blocks.append((v, unit * inv2 % p ** max(N - v, 1)))
        live.remove(i)
    blocks.sort(key=lambda t: t[0])
    return JordanForm(p, tuple(blocks), N)


def block_xi(jf: JordanForm, i: int) -> int:
    """Splitting type of the leading ``i x i`` block of a Jordan form."""
    D = (-4) ** (i // 2)
    for a, u in jf.blocks[:i]:
        D *= jf.p**a * u
    return quadratic_class(D, jf.p)[0]


# -- dyadic search ------------------------------------------------------------

class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(f"search budget {self.limit} exhausted")


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def _matvec(A: Sequence[Sequence[int]], u: Sequence[int]) -> List[int]:
    return [_dot(row, u) for row in A]


def _divisible(x: int, p: int, k: int) -> bool:
    return k <= 0 or x % p**k == 0


def find_optimal_basis(
    B: HalfIntegralMatrix, p: int, a: Sequence[int], budget: Optional[_Budget] = None
) -> Optional[List[List[int]]]:
    """Search for ``U`` in ``GL_n(Z_p)`` with ``a`` in ``S(B[U])``; ``None`` if none exists.

    Columns are chosen from the largest ``a_j`` down.  Adding multiples of a
    column with larger ``a`` to one with smaller ``a`` and rescaling by units
    preserve validity, so each new column is normalised to vanish at earlier
    pivots, to carry 1 at its own pivot and to be divisible by ``p`` at the free
    positions before that pivot.  The search is exhaustive over these normal
    forms.  Column ``j`` only matters modulo ``p^c_j`` with
    ``c_j = max_i ceil((a_i + a_j)/2)``; the diagonal condition of the top
    column is then linear in any lift and is decided by a gcd test.
    """
    n = B.n
    a = list(a)
    if len(a) != n or any(x < 0 for x in a) or a != sorted(a):
        raise ValidationError("a must be a nondecreasing sequence of length n")
    budget = budget or _Budget(get_budget())
    A = [list(r) for r in B.two_b]
    o2 = 1 if p == 2 else 0
    cij = [[ceil((a[i] + a[j]) / 2) for j in range(n)] for i in range(n)]
    c = [max([1] + [cij[i][j] for i in range(n) if i != j]) for j in range(n)]
    target = [a[j] + o2 for j in range(n)]
    chosen: Dict[int, List[int]] = {}
    used_pivots: List[int] = []

    def diag_ok(j: int, u: List[int], k: int, final: bool) -> bool:
        g = _dot(u, _matvec(A, u))
        if not final:
            return _divisible(g, p, min(target[j], k + o2))
        if _divisible(g, p, target[j]):
            return True
        # any lift u + p^c w changes g by 2 p^c (Au).w modulo p^target
        mu = min((_ord(x, p) for x in _matvec(A, u)), default=float("inf"))
        reach = o2 + c[j] + mu
        return _divisible(g, p, min(target[j], reach))

    def cross_ok(j: int, u: List[int], k: int) -> bool:
        Au = _matvec(A, u)
        for i, v in chosen.items():
            if not _divisible(_dot(v, Au), p, min(cij[i][j], k)):
                return False
        return True

    def lift(j: int, u: List[int], before: List[int], after: List[int], k: int, piv: int) -> bool:
        # u is fixed modulo p^k at this point (level k)
        budget.tick()
        final = k >= c[j]
        if not cross_ok(j, u, k) or not diag_ok(j, u, k, final):
            return False
        if final:
            chosen[j] = list(u)
            used_pivots.append(piv)
            ok = extend(j - 1)
            if not ok:
                del chosen[j]
                used_pivots.pop()
            return ok
        step = p**k
        positions = before + after
        # positions before the pivot vanish mod p, so they only move from level 1 on
        for digits in product(range(p), repeat=len(positions)):
            w = list(u)
            for pos, d in zip(positions, digits):
                w[pos] += d * step
            if lift(j, w, before, after, k + 1, piv):
                return True
        return False

    def extend(j: int) -> bool:
        # level 1: residues mod p at the free positions after the pivot
        if j < 0:
            return True
        free_all = [x for x in range(n) if x not in used_pivots]
        for piv in free_all:
            before = [x for x in free_all if x < piv]
            after = [x for x in free_all if x > piv]
            for digits in product(range(p), repeat=len(after)):
                u = [0] * n
                u[piv] = 1
                for pos, d in zip(after, digits):
                    u[pos] = d
                if lift(j, u, before, after, 1, piv):
                    return True
        return False

    if not extend(n - 1):
        return None
    U = [[chosen[j][r] for j in range(n)] for r in range(n)]
    # realise the linear lift of the diagonal condition exactly
    for j in range(n):
        col = [U[r][j] for r in range(n)]
        g = _dot(col, _matvec(A, col))
        if _divisible(g, p, target[j]):
            continue
        col = _solve_diag_lift(A, col, p, c[j], target[j])
        for r in range(n):
            U[r][j] = col[r]
    return U


def _solve_diag_lift(A, u: List[int], p: int, cj: int, target: int) -> List[int]:
    """Find ``u + p^cj w`` with ``(u + p^cj w)^t A (u + p^cj w) = 0 mod p^target``."""
    mod = p**target
    for _ in range(target + 2):
        g = _dot(u, _matvec(A, u)) % mod
        if g == 0:
            return u
        Au = _matvec(A, u)
        k = min(range(len(u)), key=lambda t: _ord(Au[t], p))
        coef = 2 * p**cj * Au[k]
        vg, vc = _ord(g, p), _ord(coef, p)
        if vg < vc:
            break
        # cancel the lowest digit of g
        unit_c = (coef // p**vc) % mod
        x = (-(g // p**vc)) * pow(unit_c, -1, mod) % mod
        u = list(u)
        u[k] += p**cj * x
    if _dot(u, _matvec(A, u)) % mod:
        raise InvariantViolation("diagonal lift failed although the gcd test passed")
    return u


def candidate_sequences(B: HalfIntegralMatrix, p: int) -> List[Tuple[int, ...]]:
    """Nondecreasing ``a`` with ``a_1 = g_1``, ``e_r <= g_r`` (r < n), ``e_n = e_B``; lex-descending."""
    n = B.n
    eB = local_invariants(B, p).eB
    g = [gr_at_p(B, p, r) for r in range(1, n)]
    a1 = g[0] if n > 1 else eB
    out: List[Tuple[int, ...]] = []

    def rec(prefix: List[int]):
        r = len(prefix)
        led = ei_ledger(prefix)
        if r < n and r >= 1 and led[-1] > g[r - 1]:
            return
        if r == n:
            if led[-1] == eB:
                out.append(tuple(prefix))
            return
        s = sum(prefix)
        lo = prefix[-1] if prefix else a1
        # e_n = e_B forces sum(a) <= e_B + 1
        for x in range(lo, eB + 2 - s):
            rec(prefix + [x])

    rec([a1])
    out.sort(reverse=True)
    return out


def _verify_witness(B: HalfIntegralMatrix, p: int, a: Sequence[int], U) -> None:
    if bareiss_det(U) % p == 0:
        raise InvariantViolation("witness is not invertible over Z_p")
    if not s_membership(B.transform(U), p, a):
        raise InvariantViolation(f"witness does not realise {tuple(a)}")


_gk_cache: Dict[Tuple[Tuple[Tuple[int, ...], ...], int], GKInvariant] = {}
_gk_lock = threading.Lock()


def clear_cache() -> None:
    with _gk_lock:
        _gk_cache.clear()


def gk_invariant(B: HalfIntegralMatrix, p: int, budget: Optional[int] = None) -> GKInvariant:
    require_prime(p)
    if B.det_two_b() == 0:
        raise ValidationError("degenerate matrix")
    key = (B.two_b, p)
    with _gk_lock:
        hit = _gk_cache.get(key)
    if hit is not None:
        return hit
    res = _gk_compute(B, p, budget)
    led = ei_ledger(res.a)
    if res.certificate != UNVERIFIED and led[-1] != local_invariants(B, p).eB:
        raise InvariantViolation(f"e_n = {led[-1]} differs from e_B for GK {res.a}")
    with _gk_lock:
        _gk_cache[key] = res
    return res


def _gk_compute(B: HalfIntegralMatrix, p: int, budget: Optional[int]) -> GKInvariant:
    n = B.n
    if p != 2:
        jf = jordan_odd(B, p)
        return GKInvariant(p, jf.exponents, EXACT, jordan=jf)
    if n == 1:
        return GKInvariant(p, (int(_ord(B.two_b[0][0] // 2, 2)),), EXACT)
    inv = local_invariants(B, 2)
    if n == 2:
        a1 = gr_at_p(B, 2, 1)
        a2 = inv.eB - a1 if inv.xi != 0 else inv.eB + 1 - a1
        if a2 < a1:
            raise InvariantViolation(f"dyadic closed form produced decreasing ({a1},{a2})")
        return GKInvariant(p, (a1, a2), EXACT)
    tracker = _Budget(budget or get_budget())
    refuted: List[Tuple[int, ...]] = []
    unverified = False
    for cand in candidate_sequences(B, 2):
        try:
            U = find_optimal_basis(B, 2, cand, tracker)
        except BudgetExceeded:
            unverified = True
            break
        if U is None:
            refuted.append(cand)
            continue
        _verify_witness(B, 2, cand, U)
        cert = UNVERIFIED if unverified else CERTIFIED
        return GKInvariant(p, cand, cert, witness=tuple(map(tuple, U)), refuted=tuple(refuted))
    if unverified:
        raise BudgetExceeded("dyadic GK search exhausted its budget before finding a realisable sequence")
    raise InvariantViolation("no candidate sequence is realisable")


# -- minor valuations ----------------------------------------------------------

def gr_at_p(B: HalfIntegralMatrix, p: int, r: int) -> int:
    vals = [_ord(v, p) for v in all_minor_norms(B, r) if v]
    if not vals:
        raise InvariantViolation("all minors vanish")
    return int(min(vals))


def dr_enumerate(
    B: HalfIntegralMatrix,
    p: int,
    r: int,
    cutoff: Optional[int] = None,
    primitive: bool = True,
    floor: int = 0,
) -> int:
    """Minimum of ``ord_p(2^(2[r/2]) det B[X])`` over ``X`` in ``M_{n,r}``, clamped at ``cutoff``.

    With ``primitive`` set, only ``X`` with an identity ``r x r`` row block are
    visited (every ``X`` is such a matrix times an ``r x r`` matrix, which can
    only raise the valuation).  The scan stops early once the minimum reaches
    ``floor``, a known lower bound such as ``g_r``.
    """
    require_prime(p)
    n = B.n
    if not 1 <= r <= n:
        raise ValidationError(f"r={r} out of range")
    if cutoff is None:
        cutoff = gr_at_p(B, p, r) + 1
    # 2^(2[r/2]) det B[X] = 2^(2[r/2] - r) det(X^t (2B) X)
    shift = 2 * (r // 2) - r
    extra = -shift if p == 2 else 0
    prec = cutoff + extra
    mod = p**prec
    A = B.two_b
    limit = get_budget()
    best = cutoff

    def value(X: List[List[int]]) -> int:
        M = mat_mul(transpose(X), mat_mul(A, X))
        d = bareiss_det(M) % mod
        if d == 0:
            return cutoff
        v = int(_ord(d, p)) - (extra if p == 2 else 0)
        return min(v, cutoff)

    visits = 0
    if primitive:
        for rows in combinations(range(n), r):
            others = [x for x in range(n) if x not in rows]
            count = (p**prec) ** (len(others) * r)
            visits += count
            if visits > limit:
                raise BudgetExceeded(f"dr enumeration needs {visits} visits")
            for digits in product(range(mod), repeat=len(others) * r):
                X = [[0] * r for _ in range(n)]
                for k, row in enumerate(rows):
                    X[row][k] = 1
                it = iter(digits)
                for row in others:
                    for k in range(r):
                        X[row][k] = next(it)
                best = min(best, value(X))
                if best <= floor:
                    return best
    else:
        count = mod ** (n * r)
        if count > limit:
            raise BudgetExceeded(f"dr enumeration needs {count} visits")
        for digits in product(range(mod), repeat=n * r):
            X = [list(digits[row * r:(row + 1) * r]) for row in range(n)]
            best = min(best, value(X))
            if best <= floor:
                return best
    return best
