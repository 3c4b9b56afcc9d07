"""Half-integral symmetric matrices and their discriminant invariants."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Any, List, Sequence, Tuple

from .arith import (
    fundamental_discriminant,
    ord_p,
    quadratic_class,
    require_prime,
)
from .errors import InvariantViolation, ValidationError


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free integer determinant."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> List[List[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def transpose(a: Sequence[Sequence[int]]) -> List[List[int]]:
    return [list(c) for c in zip(*a)]


@dataclass(frozen=True)
class HalfIntegralMatrix:
    """Symmetric ``B`` with integral diagonal and half-integral off-diagonal, stored as ``2B``."""

    two_b: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.two_b)
        object.__setattr__(self, "two_b", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValidationError("matrix must be square and non-empty")
        for i in range(n):
            if rows[i][i] % 2:
                raise ValidationError("not half-integral: odd diagonal entry in 2B")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValidationError("not symmetric")

    @property
    def n(self) -> int:
        return len(self.two_b)

    @classmethod
    def from_b(cls, b: Sequence[Sequence[Any]]) -> "HalfIntegralMatrix":
        two = []
        for row in b:
            out = []
            for x in row:
                v = Fraction(x) * 2
                if v.denominator != 1:
                    raise ValidationError("entry is not half-integral")
                out.append(int(v))
            two.append(out)
        return cls(tuple(map(tuple, two)))

    @classmethod
    def diag(cls, *entries: int) -> "HalfIntegralMatrix":
        n = len(entries)
        return cls(tuple(tuple(2 * entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    def b(self, i: int, j: int) -> Fraction:
        return Fraction(self.two_b[i][j], 2)

    def entries(self) -> List[List[Fraction]]:
        return [[self.b(i, j) for j in range(self.n)] for i in range(self.n)]

    def det_two_b(self) -> int:
        return bareiss_det(self.two_b)

    def det(self) -> Fraction:
        return Fraction(self.det_two_b(), 2**self.n)

    def is_positive_definite(self) -> bool:
        return all(
            bareiss_det([r[:k] for r in self.two_b[:k]]) > 0 for k in range(1, self.n + 1)
        )

    def transform(self, u: Sequence[Sequence[int]]) -> "HalfIntegralMatrix":
        """Return ``B[U] = U^t B U``."""
        return HalfIntegralMatrix(tuple(map(tuple, mat_mul(transpose(u), mat_mul(self.two_b, u)))))

    def scale(self, c: int) -> "HalfIntegralMatrix":
        return HalfIntegralMatrix(tuple(tuple(c * x for x in r) for r in self.two_b))

    def principal(self, idx: Sequence[int]) -> "HalfIntegralMatrix":
        return HalfIntegralMatrix(tuple(tuple(self.two_b[i][j] for j in idx) for i in idx))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "two_b": [list(r) for r in self.two_b]})

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(self.b(i, j)) for j in range(self.n)) for i in range(self.n)) + "]"


def validate(content: Any, allow_degenerate: bool = False) -> HalfIntegralMatrix:
    """Parse matrix JSON (string, bytes or already-decoded dict) into a validated matrix."""
    if isinstance(content, (str, bytes)):
        try:
            content = json.loads(content)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed matrix JSON: {exc}") from None
    if not isinstance(content, dict) or "two_b" not in content:
        raise ValidationError('matrix JSON needs a "two_b" field')
    rows = content["two_b"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValidationError("two_b must be a list of rows")
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValidationError("two_b entries must be integers")
    if "n" in content and content["n"] != len(rows):
        raise ValidationError(f"declared n={content['n']} but two_b has {len(rows)} rows")
    m = HalfIntegralMatrix(tuple(map(tuple, rows)))
    if not allow_degenerate and m.det_two_b() == 0:
        raise ValidationError("degenerate matrix (zero determinant)")
    return m


def load_matrix(path: str) -> HalfIntegralMatrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {path}: {exc}") from None
    return validate(text)


@dataclass(frozen=True)
class LocalInvariants:
    p: int
    xi: int
    eB: int
    ordDB: int
    ord_disc: int
    D: int


@dataclass(frozen=True)
class GlobalDiscriminantData:
    dB: int
    fB: int


def discriminant_D(B: HalfIntegralMatrix) -> int:
    """``D_B = (-4)^[n/2] det B`` as an integer."""
    n = B.n
    d2 = B.det_two_b()
    h = n // 2
    if n % 2 == 0:
        return (-1) ** h * d2
    if d2 % 2:
        raise InvariantViolation("det(2B) odd for odd n")
    return (-1) ** h * (d2 // 2)


def local_invariants(B: HalfIntegralMatrix, p: int) -> LocalInvariants:
    require_prime(p)
    D = discriminant_D(B)
    if D == 0:
        raise ValidationError("degenerate matrix (zero determinant)")
    xi, od = quadratic_class(D, p)
    k = ord_p(D, p)
    eB = k - od if B.n % 2 == 0 else k
    return LocalInvariants(p=p, xi=xi, eB=eB, ordDB=k, ord_disc=od, D=D)


def global_discriminant(B: HalfIntegralMatrix) -> GlobalDiscriminantData:
    n = B.n
    if n % 2:
        raise ValidationError("global discriminant needs even n")
    if not B.is_positive_definite():
        raise ValidationError("matrix is not positive definite")
    m = (-1) ** (n // 2) * B.det_two_b()
    d, f = fundamental_discriminant(m)
    if d * f * f != m:
        raise InvariantViolation("fundamental discriminant factorisation mismatch")
    return GlobalDiscriminantData(dB=d, fB=f)


def _check_index_seq(seq: Sequence[int], n: int) -> Tuple[int, ...]:
    seq = tuple(seq)
    if any(not isinstance(x, int) for x in seq):
        raise ValidationError("index sequence must contain integers")
    if any(x < 0 or x >= n for x in seq):
        raise ValidationError(f"index out of range in {seq}")
    if any(a >= b for a, b in zip(seq, seq[1:])):
        raise ValidationError(f"index sequence {seq} is not strictly increasing")
    return seq


def minor_norm(B: HalfIntegralMatrix, i: Sequence[int], j: Sequence[int]) -> int:
    """Normalised minor ``2^(2[r/2]+1-delta) det B(i; j)`` (0-based indices)."""
    i = _check_index_seq(i, B.n)
    j = _check_index_seq(j, B.n)
    r = len(i)
    if r != len(j) or r == 0:
        raise ValidationError("index sequences must have equal positive length")
    delta = 1 if i == j else 0
    # det B(i;j) = det 2B(i;j) / 2^r
    num = bareiss_det([[B.two_b[a][b] for b in j] for a in i])
    shift = 2 * (r // 2) + 1 - delta - r
    if shift >= 0:
        return num * 2**shift
    q, rem = divmod(num, 2 ** (-shift))
    if rem:
        raise InvariantViolation(f"minor norm for {i},{j} is not integral")
    return q


def all_minor_norms(B: HalfIntegralMatrix, r: int) -> List[int]:
    if not 1 <= r <= B.n:
        raise ValidationError(f"r={r} out of range 1..{B.n}")
    idx = list(combinations(range(B.n), r))
    return [minor_norm(B, i, j) for i in idx for j in idx]


def G_r(B: HalfIntegralMatrix, r: int) -> int:
    g = 0
    for v in all_minor_norms(B, r):
        g = gcd(g, v)
    if g == 0:
        raise InvariantViolation("all minors vanish")
    return g
