"""Dense square matrices over Z[zeta_n].

Storage is dense, but multiplication skips zero entries, so products of
monomial (permutation-with-roots-of-unity) matrices stay cheap.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .cyclotomic import CycInt, OrderMismatch, embed_int, one, zero

__all__ = [
    "CycMatrix",
    "ShapeMismatch",
    "MultisetExponent",
    "identity",
    "zeros",
    "from_ints",
    "scalar_mul",
    "kron",
    "det",
    "det_cofactor",
    "det_bareiss",
    "gen_anticommutator",
    "anticommutator_terms",
    "multinomial",
]

# (n_1, ..., n_k): exponents of the factors in a generalized anticommutator
MultisetExponent = tuple[int, ...]

COFACTOR_MAX_DIM = 6


class ShapeMismatch(ValueError):
    pass


class CycMatrix:
    """A ``dim x dim`` matrix with entries in Z[zeta_order]."""

    __slots__ = ("order", "dim", "rows")

    def __init__(self, order: int, rows: Sequence[Sequence[CycInt]]) -> None:
        dim = len(rows)
        if dim == 0:
            raise ShapeMismatch("matrix must have at least one row")
        rows = tuple(tuple(r) for r in rows)
        for r in rows:
            if len(r) != dim:
                raise ShapeMismatch(f"matrix is not square: row of length {len(r)} in dim {dim}")
            for e in r:
                if not isinstance(e, CycInt) or e.order != order:
                    raise OrderMismatch(f"entry {e!r} is not in Z[zeta_{order}]")
        self.order = order
        self.dim = dim
        self.rows = rows

    def __getitem__(self, ij: tuple[int, int]) -> CycInt:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self.order == other.order and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.order, self.rows))

    def __repr__(self) -> str:
        return f"CycMatrix(order={self.order}, dim={self.dim})"

    def shape(self) -> str:
        return f"{self.dim}x{self.dim} over Z[zeta_{self.order}]"

    def _check(self, other: CycMatrix) -> None:
        if not isinstance(other, CycMatrix):
            raise TypeError(f"expected CycMatrix, got {type(other).__name__}")
        if self.dim != other.dim or self.order != other.order:
            raise ShapeMismatch(f"shape mismatch: {self.shape()} vs {other.shape()}")

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def is_identity(self) -> bool:
        return self == identity(self.dim, self.order)

    def nonzero_count(self) -> int:
        return sum(1 for r in self.rows for e in r if not e.is_zero())

    def __add__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        return CycMatrix(
            self.order,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        return CycMatrix(
            self.order,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __neg__(self) -> CycMatrix:
        return CycMatrix(self.order, [[-a for a in r] for r in self.rows])

    def __matmul__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        dim, z = self.dim, zero(self.order)
        right = [[(j, b) for j, b in enumerate(r) if not b.is_zero()] for r in other.rows]
        out = []
        for row in self.rows:
            acc: dict[int, CycInt] = {}
            for k, a in enumerate(row):
                if a.is_zero():
                    continue
                for j, b in right[k]:
                    p = a * b
                    acc[j] = acc[j] + p if j in acc else p
            out.append([acc.get(j, z) for j in range(dim)])
        return CycMatrix(self.order, out)

    def __pow__(self, e: int) -> CycMatrix:
        return mat_pow(self, e)

    def apply(self, vec: Sequence[CycInt]) -> list[CycInt]:
        """Matrix-vector product."""
        if len(vec) != self.dim:
            raise ShapeMismatch(f"vector of length {len(vec)} for {self.shape()}")
        z = zero(self.order)
        return [sum((a * v for a, v in zip(r, vec) if not a.is_zero()), z) for r in self.rows]

    def pretty(self) -> str:
        cells = [[e.render() for e in r] for r in self.rows]
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in r) + " ]" for r in cells)


def identity(dim: int, order: int) -> CycMatrix:
    o, z = one(order), zero(order)
    return CycMatrix(order, [[o if i == j else z for j in range(dim)] for i in range(dim)])


def zeros(dim: int, order: int) -> CycMatrix:
    z = zero(order)
    return CycMatrix(order, [[z] * dim for _ in range(dim)])


def from_ints(order: int, rows: Iterable[Iterable[int]]) -> CycMatrix:
    return CycMatrix(order, [[embed_int(order, v) for v in r] for r in rows])


def from_columns(order: int, cols: Sequence[Sequence[CycInt]]) -> CycMatrix:
    dim = len(cols)
    return CycMatrix(order, [[cols[j][i] for j in range(dim)] for i in range(dim)])


def scalar_mul(s: CycInt | int, a: CycMatrix) -> CycMatrix:
    if isinstance(s, int):
        s = embed_int(a.order, s)
    if s.order != a.order:
        raise OrderMismatch(f"scalar of order {s.order} times {a.shape()}")
    return CycMatrix(a.order, [[s * e for e in r] for r in a.rows])


def mat_mul(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    return a @ b


def mat_add(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    return a + b


def mat_pow(a: CycMatrix, e: int) -> CycMatrix:
    if e < 0:
        raise ValueError("negative matrix powers are not supported")
    result = identity(a.dim, a.order)
    base = a
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def linear_combination(coeffs: Sequence[CycInt | int], mats: Sequence[CycMatrix]) -> CycMatrix:
    """``sum(c_i * M_i)``."""
    if len(coeffs) != len(mats) or not mats:
        raise ShapeMismatch(f"{len(coeffs)} coefficients for {len(mats)} matrices")
    acc = zeros(mats[0].dim, mats[0].order)
    for c, m in zip(coeffs, mats):
        acc = acc + scalar_mul(c, m)
    return acc


def kron(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    """Kronecker product; block (i, j) is ``a[i, j] * b``."""
    if a.order != b.order:
        raise OrderMismatch(f"kron of {a.shape()} and {b.shape()}")
    db = b.dim
    z = zero(a.order)
    rows = []
    for i in range(a.dim):
        for p in range(db):
            row = []
            for j in range(a.dim):
                x = a.rows[i][j]
                if x.is_zero():
                    row.extend([z] * db)
                else:
                    row.extend(x * y for y in b.rows[p])
            rows.append(row)
    return CycMatrix(a.order, rows)


# -- determinants ---------------------------------------------------------


def det_cofactor(a: CycMatrix) -> CycInt:
    """Laplace expansion along the first row (zero entries skipped)."""

    def rec(rows: list[tuple[CycInt, ...]], cols: tuple[int, ...]) -> CycInt:
        if len(cols) == 1:
            return rows[0][cols[0]]
        total = zero(a.order)
        head, rest = rows[0], rows[1:]
        for pos, c in enumerate(cols):
            x = head[c]
            if x.is_zero():
                continue
            minor = rec(rest, cols[:pos] + cols[pos + 1 :])
            term = x * minor
            total = total - term if pos % 2 else total + term
        return total

    return rec(list(a.rows), tuple(range(a.dim)))


def det_bareiss(a: CycMatrix) -> CycInt:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = a.dim
    m = [list(r) for r in a.rows]
    sign = 1
    prev: CycInt | None = None
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return zero(a.order)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = v if prev is None else v.divide_exact(prev)
        prev = pivot
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def det(a: CycMatrix) -> CycInt:
    if a.dim <= COFACTOR_MAX_DIM:
        return det_cofactor(a)
    return det_bareiss(a)


# -- generalized anticommutator -------------------------------------------


def multinomial(parts: Sequence[int]) -> int:
    total = math.factorial(sum(parts))
    for p in parts:
        total //= math.factorial(p)
    return total


def anticommutator_terms(factors: Sequence[tuple[CycMatrix, int]]) -> tuple[CycMatrix, int]:
    """Sum over all distinct orderings of the factor multiset.

    Factors are distinguished by their position in ``factors`` (not by
    matrix value).  Returns the sum and the number of products added.
    """
    factors = [(m, c) for m, c in factors if c]
    if not factors:
        raise ValueError("generalized anticommutator of an empty factor list")
    mats = [m for m, _ in factors]
    first = mats[0]
    for m in mats[1:]:
        first._check(m)
    counts = [c for _, c in factors]
    if any(c < 0 for c in counts):
        raise ValueError(f"negative multiplicity in {counts}")
    dim, order = first.dim, first.order
    acc: dict[tuple[int, int], CycInt] = {}
    n_terms = 0
    remaining = sum(counts)

    def dfs(prefix: CycMatrix | None, left: int) -> None:
        nonlocal n_terms
        if left == 0:
            n_terms += 1
            for i, row in enumerate(prefix.rows):
                for j, x in enumerate(row):
                    if not x.is_zero():
                        key = (i, j)
                        acc[key] = acc[key] + x if key in acc else x
            return
        for idx, m in enumerate(mats):
            if counts[idx]:
                counts[idx] -= 1
                dfs(m if prefix is None else prefix @ m, left - 1)
                counts[idx] += 1

    dfs(None, remaining)
    z = zero(order)
    total = CycMatrix(order, [[acc.get((i, j), z) for j in range(dim)] for i in range(dim)])
    return total, n_terms


def gen_anticommutator(factors: Sequence[tuple[CycMatrix, int]]) -> CycMatrix:
    """``(A^a B^b ...)_+``: the sum over distinct permutations of the factors."""
    total, n_terms = anticommutator_terms(factors)
    expected = multinomial([c for _, c in factors])
    assert n_terms == expected, (n_terms, expected)
    return total
