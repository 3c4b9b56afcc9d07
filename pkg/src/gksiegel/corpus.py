"""Deterministic corpora of positive-definite half-integral matrices."""

from __future__ import annotations

import json
import os
import random
from typing import List, Optional, Sequence

from .errors import ValidationError
from .matrices import HalfIntegralMatrix, mat_mul

_SCALES = (2, 3, 5)


def _seed_block(rng: random.Random, size: int, bound: int) -> List[List[int]]:
    """A positive-definite ``2B`` block of size 1 or 2."""
    if size == 1:
        return [[2 * rng.randint(1, bound)]]
    while True:
        a = rng.randint(1, bound)
        c = rng.randint(a, bound)
        b = rng.randint(-a, a)
        if 4 * a * c - b * b > 0:
            return [[2 * a, b], [b, 2 * c]]


def _block_diag(blocks: Sequence[List[List[int]]]) -> List[List[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for blk in blocks:
        for i, row in enumerate(blk):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(blk)
    return out


def random_unimodular(rng: random.Random, n: int, steps: int = 3, spread: int = 2) -> List[List[int]]:
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return [[rng.choice((1, -1))]]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        E = [[int(r == c) for c in range(n)] for r in range(n)]
        E[i][j] = rng.randint(-spread, spread)
        U = mat_mul(U, E)
    if rng.random() < 0.5:
        perm = list(range(n))
        rng.shuffle(perm)
        U = [U[k] for k in perm]
    return U


def random_matrix(rng: random.Random, n: int, bound: int) -> HalfIntegralMatrix:
    blocks = []
    left = n
    while left:
        size = 2 if left >= 2 and rng.random() < 0.5 else 1
        blk = _seed_block(rng, size, bound)
        if rng.random() < 0.3:
            s = rng.choice(_SCALES)
            blk = [[s * s * x for x in row] for row in blk]
        blocks.append(blk)
        left -= size
    rng.shuffle(blocks)
    base = HalfIntegralMatrix(tuple(map(tuple, _block_diag(blocks))))
    return base.transform(random_unimodular(rng, n))


def gen_corpus(seed: int, count: int, n: int, bound: int = 6) -> List[HalfIntegralMatrix]:
    """``count`` matrices from ``seed``; at least one has a nontrivial conductor when n is even."""
    if n not in (1, 2, 3, 4):
        raise ValidationError("corpus dimension must be in 1..4")
    if count < 0 or bound < 1:
        raise ValidationError("count must be nonnegative and bound positive")
    rng = random.Random(f"gksiegel-corpus/{seed}/{n}/{bound}")
    out = [random_matrix(rng, n, bound) for _ in range(count)]
    if n % 2 == 0 and count >= 10:
        from .matrices import global_discriminant

        if all(global_discriminant(B).fB == 1 for B in out):
            s = rng.choice(_SCALES)
            out[-1] = out[-1].scale(s)
    return out


def write_corpus(matrices: Sequence[HalfIntegralMatrix], directory: str, prefix: str = "m") -> List[str]:
    os.makedirs(directory, exist_ok=True)
    width = max(3, len(str(len(matrices))))
    paths = []
    for k, B in enumerate(matrices):
        path = os.path.join(directory, f"{prefix}{k:0{width}d}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"n": B.n, "two_b": [list(r) for r in B.two_b]}) + "\n")
        paths.append(path)
    return paths


def filtered_corpus(
    seed: int, count: int, n: int, p: int, max_eB: int, bound: int = 12, limit: Optional[int] = None
) -> List[HalfIntegralMatrix]:
    """``count`` seeded matrices with ``e_B`` at ``p`` cycling through ``0..max_eB``.

    Values of ``e_B`` that never occur in the draw window are skipped.
    """
    from .matrices import local_invariants

    rng = random.Random(f"gksiegel-filtered/{seed}/{n}/{p}/{max_eB}")
    pools: dict = {e: [] for e in range(max_eB + 1)}
    for _ in range(limit or 100 * count):
        B = random_matrix(rng, n, bound)
        e = local_invariants(B, p).eB
        if e <= max_eB and len(pools[e]) < count:
            pools[e].append(B)
    out: List[HalfIntegralMatrix] = []
    k = 0
    while len(out) < count:
        live = [pools[e][k] for e in sorted(pools) if len(pools[e]) > k]
        if not live:
            raise ValidationError("could not fill the filtered corpus")
        out.extend(live[: count - len(out)])
        k += 1
    return out
