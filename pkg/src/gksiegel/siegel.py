"""Brute-force local Siegel series oracle.

Symmetric ``T`` modulo ``p^m`` stands for ``R = p^-m T``.  For each ``T`` we
need the index exponent ``j`` with ``mu(R) = p^j`` and the trace residue
``t = tr(BT) mod p^m``.  Multiplying ``T`` by a unit preserves ``j`` and
multiplies ``t`` by that unit, so the character sum over each ``j``-class
collapses to two tallies: residues ``t = 0`` contribute 1 each and residues of
exact order ``p`` contribute ``-1/(p-1)`` each; higher orders cancel.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import require_prime
from .config import get_budget, ordered_map
from .errors import BudgetExceeded, InvariantViolation, ValidationError
from .matrices import HalfIntegralMatrix, local_invariants

# j-arrays larger than this are recomputed per call instead of cached
_CACHE_LIMIT = 4 * 10**7
_j_cache: Dict[Tuple[int, int, int], np.ndarray] = {}
_j_lock = threading.Lock()


@dataclass(frozen=True)
class CharacterSums:
    p: int
    m: int
    S: Tuple[int, ...]
    N0: Tuple[int, ...]
    N1: Tuple[int, ...]


@dataclass(frozen=True)
class GammaFactor:
    numerator: Tuple[int, ...]
    denominator: Tuple[int, ...]


@dataclass(frozen=True)
class SiegelPoly:
    F: Tuple[int, ...]
    p: int
    n: int
    eB: int
    S: Tuple[int, ...] = ()
    level: int = 0

    def to_text(self) -> str:
        parts = []
        for i, c in enumerate(self.F):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*X" if i == 1 else f"{c}*X^{i}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def _upper_positions(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def _entries_from_index(idx: np.ndarray, n: int, base: int) -> np.ndarray:
    """Decode flat indices into the upper-triangle entries (most significant first)."""
    N = n * (n + 1) // 2
    out = np.empty((idx.shape[0], N), dtype=np.int64)
    rest = idx.copy()
    for k in range(N - 1, -1, -1):
        out[:, k] = rest % base
        rest //= base
    return out


def _minor_dets(E: np.ndarray, n: int, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    pos = {pc: k for k, pc in enumerate(_upper_positions(n))}

    def entry(i: int, j: int) -> np.ndarray:
        return E[:, pos[(min(i, j), max(i, j))]]

    r = len(rows)
    if r == 1:
        return entry(rows[0], cols[0]).copy()
    # Laplace expansion along the first row
    total = np.zeros(E.shape[0], dtype=np.int64)
    for k, c in enumerate(cols):
        sub = _minor_dets(E, n, rows[1:], [x for x in cols if x != c])
        term = entry(rows[0], c) * sub
        total = total + term if k % 2 == 0 else total - term
    return total


def _capped_ord(x: np.ndarray, p: int, cap: int) -> np.ndarray:
    v = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    for _ in range(cap):
        mask = (y % p) == 0
        if not mask.any():
            break
        v += mask
        y = np.where(mask, y // p, y)
    return v


def _j_values(E: np.ndarray, n: int, p: int, m: int) -> np.ndarray:
    """Index exponent ``sum max(m - v_i, 0)`` for each row of upper-triangle entries."""
    cap = n * m
    prev = np.zeros(E.shape[0], dtype=np.int64)
    running = np.zeros(E.shape[0], dtype=np.int64)
    j = np.zeros(E.shape[0], dtype=np.int64)
    for k in range(1, n + 1):
        d = np.full(E.shape[0], cap, dtype=np.int64)
        subsets = list(combinations(range(n), k))
        for rows in subsets:
            for cols in subsets:
                if cols < rows:
                    continue  # symmetric: det T(rows; cols) = det T(cols; rows)
                d = np.minimum(d, _capped_ord(_minor_dets(E, n, rows, cols), p, cap))
        v = np.minimum(d - prev, m)
        running = np.maximum(running, v)
        j += m - running
        prev = d
    return j


def _level_size(n: int, p: int, m: int) -> int:
    return p ** (m * n * (n + 1) // 2)


def j_array(n: int, p: int, m: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    total = _level_size(n, p, m)
    stop = total if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    return _j_values(_entries_from_index(idx, n, p**m), n, p, m).astype(np.int8)


def _cached_j(n: int, p: int, m: int) -> Optional[np.ndarray]:
    if _level_size(n, p, m) > _CACHE_LIMIT:
        return None
    key = (n, p, m)
    with _j_lock:
        arr = _j_cache.get(key)
    if arr is None:
        arr = j_array(n, p, m)
        with _j_lock:
            _j_cache.setdefault(key, arr)
            arr = _j_cache[key]
    return arr


def _trace_weights(B: HalfIntegralMatrix) -> List[int]:
    # tr(BT) = sum b_ii T_ii + sum_{i<j} 2 b_ij T_ij
    out = []
    for i, j in _upper_positions(B.n):
        out.append(B.two_b[i][i] // 2 if i == j else B.two_b[i][j])
    return out


def character_sums(B: HalfIntegralMatrix, p: int, m: int, threads: Optional[int] = None) -> CharacterSums:
    """Tally the Siegel-series sum over symmetric ``T`` modulo ``p^m``."""
    require_prime(p)
    if m < 0:
        raise ValidationError("level must be nonnegative")
    n = B.n
    total = _level_size(n, p, m)
    budget = get_budget()
    if total > budget:
        raise BudgetExceeded(f"enumeration of {total} matrices exceeds budget {budget}")
    if m == 0:
        return CharacterSums(p, 0, (1,), (1,), (0,))
    mod = p**m
    weights = np.array([w % mod for w in _trace_weights(B)], dtype=np.int64)
    N = len(weights)
    chunk = total // mod if N > 1 else total
    cached = _cached_j(n, p, m)

    def run(c: int) -> Tuple[np.ndarray, np.ndarray]:
        lo, hi = c * chunk, min(total, (c + 1) * chunk)
        idx = np.arange(lo, hi, dtype=np.int64)
        E = _entries_from_index(idx, n, mod)
        jv = cached[lo:hi].astype(np.int64) if cached is not None else _j_values(E, n, p, m)
        t = (E % mod) @ weights % mod
        zero = t == 0
        order_p = (t % (mod // p) == 0) & ~zero
        n0 = np.bincount(jv[zero], minlength=m * n + 1)
        n1 = np.bincount(jv[order_p], minlength=m * n + 1)
        return n0, n1

    parts = ordered_map(run, range((total + chunk - 1) // chunk), threads)
    n0 = sum(p_[0] for p_ in parts)
    n1 = sum(p_[1] for p_ in parts)
    S, N0, N1 = [], [], []
    for jj in range(m + 1):
        a, b = int(n0[jj]), int(n1[jj])
        if b % (p - 1):
            raise InvariantViolation(f"(p-1) does not divide the order-p tally at j={jj}")
        S.append(a - b // (p - 1))
        N0.append(a)
        N1.append(b)
    if S[0] != 1:
        raise InvariantViolation(f"S_0 = {S[0]}, expected 1")
    return CharacterSums(p, m, tuple(S), tuple(N0), tuple(N1))


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def gamma_factor(n: int, xi: int, q: int) -> GammaFactor:
    num = [1, -1]
    for i in range(1, n // 2 + 1):
        num = _poly_mul(num, [1, 0, -(q ** (2 * i))])
    den = [1, -(q ** (n // 2)) * xi] if n % 2 == 0 and xi else [1]
    return GammaFactor(tuple(num), tuple(den))


def recover_F(sums: CharacterSums, gamma: GammaFactor, eB: int, n: int = 0) -> SiegelPoly:
    """Solve ``den * S = num * F`` for the polynomial ``F`` of degree ``eB``."""
    m = sums.m
    if m < eB + 1:
        raise ValidationError(f"level {m} too small for e_B = {eB}; need at least {eB + 1}")
    c = _poly_mul(list(sums.S), list(gamma.denominator))[: m + 1]
    num = list(gamma.numerator)
    f: List[int] = []
    for k in range(m + 1):
        acc = c[k]
        for i in range(1, min(k, len(num) - 1) + 1):
            if k - i < len(f):
                acc -= num[i] * f[k - i]
        if k <= eB:
            f.append(acc)  # num[0] = 1, so no division is needed
        elif acc != 0:
            raise InvariantViolation(f"consistency row {k} has residual {acc}")
    if f[0] != 1:
        raise InvariantViolation(f"F(0) = {f[0]}, expected 1")
    return SiegelPoly(tuple(f), sums.p, n, eB, sums.S, m)


def siegel_oracle(B: HalfIntegralMatrix, p: int, level: Optional[int] = None, threads: Optional[int] = None) -> SiegelPoly:
    """``F_p(B, X)`` straight from the definition of the local Siegel series."""
    inv = local_invariants(B, p)
    m = inv.eB + 1 if level is None else level
    sums = character_sums(B, p, m, threads)
    return recover_F(sums, gamma_factor(B.n, inv.xi, p), inv.eB, B.n)


def egk_to_F(G, q: int, n: int) -> Tuple[int, ...]:
    """Undo the normalisation ``X^(-e/2) F(q^(-(n+1)/2) X)``: ``f_i = a_i(sqrt q) q^(i(n+1)/2)``.

    Raises if a coefficient is not an integer.
    """
    from .algebra import QuadExt

    out = []
    for i, v in enumerate(G.at_sqrt_q(q)):
        w = v * QuadExt.sqrt_power(q, i * (n + 1))
        if not w.is_rational() or w.u.denominator != 1:
            raise InvariantViolation(f"coefficient {i} of the EGK polynomial is not an integer: {w}")
        out.append(int(w.u))
    return tuple(out)


def f_tilde_compare(G, oracle: SiegelPoly) -> bool:
    """Whether ``F(H; sqrt q, X)`` equals the normalised oracle polynomial."""
    if G.eN != oracle.eB or len(G.coeffs) != len(oracle.F):
        return False
    try:
        return egk_to_F(G, oracle.p, oracle.n) == tuple(oracle.F)
    except InvariantViolation:
        return False


def smith_valuations(T: Sequence[Sequence[int]], p: int, m: int) -> List[int]:
    """Elementary-divisor valuations of an integer matrix over ``Z/p^m`` (capped at ``m``).

    Plain Python pivoting; used to cross-check the vectorised minor computation.
    """
    mod = p**m
    A = [[x % mod for x in row] for row in T]
    n = len(A)
    vals: List[int] = []
    rows = list(range(n))
    cols = list(range(n))
    while rows:
        best = None
        for i in rows:
            for j in cols:
                x = A[i][j] % mod
                if x:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            vals.extend([m] * len(rows))
            break
        v, i, j = best
        piv = A[i][j] // p**v
        inv = pow(piv, -1, mod)
        for r in rows:
            if r != i and A[r][j] % mod:
                f = (A[r][j] // p**v) * inv % mod
                A[r] = [(A[r][c] - f * A[i][c]) % mod for c in range(n)]
        for c in cols:
            if c != j and A[i][c] % mod:
                f = (A[i][c] // p**v) * inv % mod
                for r in range(n):
                    A[r][c] = (A[r][c] - f * A[r][j]) % mod
        vals.append(v)
        rows.remove(i)
        cols.remove(j)
    return sorted(min(v, m) for v in vals)


def j_from_smith(T: Sequence[Sequence[int]], p: int, m: int) -> int:
    return sum(max(m - v, 0) for v in smith_valuations(T, p, m))
