"""Attach a naive EGK datum to a matrix over Z_p.

The GK sequence fixes ``a``.  The sign vector is pinned by the naive EGK
conditions, by the leading Jordan blocks for odd p, or else by matching each
remaining candidate against the Siegel series oracle.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import require_prime
from .egk import NaiveEGKDatum, NEGKError, f_poly, validate_negk
from .errors import InvariantViolation, ValidationError
from .gk import UNVERIFIED, block_xi, gk_invariant, jordan_odd
from .matrices import HalfIntegralMatrix, local_invariants
from .siegel import SiegelPoly, f_tilde_compare, siegel_oracle

FORCED = "forced"
FAST_PATH = "fast-path"
ORACLE = "oracle-matched"


@dataclass(frozen=True)
class AttachmentResult:
    datum: NaiveEGKDatum
    method: str
    oracle: Optional[SiegelPoly] = None

    def to_dict(self) -> dict:
        out = {
            "a": list(self.datum.a),
            "eps": list(self.datum.eps),
            "datum": str(self.datum),
            "method": self.method,
        }
        if self.oracle is not None:
            out["oracle"] = list(self.oracle.F)
        return out


def enumerate_candidates(a: Sequence[int]) -> List[NaiveEGKDatum]:
    """Every naive EGK datum with first component ``a``, sorted by sign vector."""
    a = tuple(a)
    if any(x > y for x, y in zip(a, a[1:])):
        raise ValidationError(f"{a} is not nondecreasing")
    n = len(a)
    choices = []
    for i in range(1, n + 1):
        if i == 1:
            choices.append((1,))
        elif i % 2 == 0:
            choices.append((-1, 1) if sum(a[:i]) % 2 == 0 else (0,))
        else:
            choices.append((-1, 1))
    out = []
    for eps in product(*choices):
        try:
            out.append(validate_negk(a, eps))
        except NEGKError:
            continue
    return out


def fast_eps_even_odd_p(B: HalfIntegralMatrix, p: int) -> Dict[int, int]:
    """``{i: xi of the leading i x i Jordan block}`` for every even ``i`` (1-based)."""
    require_prime(p)
    if p == 2:
        raise ValidationError("the Jordan fast path needs an odd prime")
    jf = jordan_odd(B, p)
    return {i: block_xi(jf, i) for i in range(2, B.n + 1, 2)}


def _cache_key(B: HalfIntegralMatrix, p: int) -> Tuple:
    eB = local_invariants(B, p).eB
    mod = p ** (eB + 3)
    return (tuple(tuple(x % mod for x in r) for r in B.two_b), p, eB)


_cache: Dict[Tuple, AttachmentResult] = {}
_lock = threading.Lock()


def clear_cache() -> None:
    with _lock:
        _cache.clear()


def attach(
    B: HalfIntegralMatrix,
    p: int,
    verify: bool = False,
    use_fast_path: bool = True,
    threads: Optional[int] = None,
) -> AttachmentResult:
    """Naive EGK datum ``H`` with ``F(H; sqrt p, X)`` equal to the normalised Siegel polynomial.

    With ``verify`` set, the oracle is run even when the signs are determined
    without it, and the choice is checked against it.
    """
    require_prime(p)
    key = (_cache_key(B, p), use_fast_path)
    with _lock:
        hit = _cache.get(key)
    if hit is not None and (hit.oracle is not None or not verify):
        return hit
    res = _attach(B, p, verify, use_fast_path, threads)
    with _lock:
        _cache[key] = res
    return res


def _attach(B, p, verify, use_fast_path, threads) -> AttachmentResult:
    gk = gk_invariant(B, p)
    if gk.certificate == UNVERIFIED:
        raise ValidationError(f"GK invariant at p={p} is not certified; cannot attach")
    cands = enumerate_candidates(gk.a)
    if not cands:
        raise InvariantViolation(f"no naive EGK datum has first component {gk.a}")
    method = FORCED
    if len(cands) > 1 and use_fast_path and p != 2:
        fixed = fast_eps_even_odd_p(B, p)
        narrowed = [H for H in cands if all(H.eps[i - 1] == x for i, x in fixed.items())]
        if narrowed:
            cands, method = narrowed, FAST_PATH
    oracle = None
    if len(cands) > 1 or verify:
        oracle = siegel_oracle(B, p, threads=threads)
        matched = [H for H in cands if f_tilde_compare(f_poly(H), oracle)]
        if not matched:
            raise InvariantViolation(
                f"no candidate for GK {gk.a} at p={p} matches oracle {list(oracle.F)} ({method})"
            )
        if len(cands) > 1:
            method = ORACLE
        cands = matched
    H = cands[0]
    G = f_poly(H)
    if G.eN != local_invariants(B, p).eB:
        raise InvariantViolation(f"degree {G.eN} of the attached polynomial differs from e_B")
    return AttachmentResult(H, method, oracle)
