"""Concerted matrix families and the linearization conditions they satisfy.

A family ``A_1..A_k`` is concerted for the power ``n`` when every
generalized anticommutator ``(A_1^{n_1} ... A_k^{n_k})_+`` with
``sum(n_i) = n`` and all ``n_i < n`` vanishes.  Together with
``A_i^n = E`` this makes ``(sum x_i A_i)^n = E * sum x_i^n`` for all x.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .cyclotomic import CycInt, check_prime, embed_int, one, parse_cycint, zero, zeta
from .cycmatrix import (
    CycMatrix,
    MultisetExponent,
    det,
    gen_anticommutator,
    identity,
    kron,
    linear_combination,
    mat_pow,
    scalar_mul,
)

__all__ = [
    "Certification",
    "Certificate",
    "StructureSpec",
    "ConcertedSet",
    "mixed_compositions",
    "build_pair",
    "build_triple",
    "build_n2",
    "explicit_triple_n3",
    "extend",
    "mixed_tensor",
    "certify",
    "check_condition4",
    "two_sided_matrices",
    "two_sided_operator",
    "linearization_det",
    "dumps_set",
    "loads_set",
]


class Certification(enum.Enum):
    UNCHECKED = "unchecked"
    VERIFIED = "concerted-verified"
    REFUTED = "refuted"


@dataclass(frozen=True)
class Certificate:
    status: Certification
    witness: MultisetExponent | None = None  # first failing pattern, lexicographic
    failing_power: int | None = None  # 0-based index i with A_i^n != E
    patterns_checked: int = 0

    @property
    def verified(self) -> bool:
        return self.status is Certification.VERIFIED

    def describe(self) -> str:
        if self.status is Certification.VERIFIED:
            return f"verified ({self.patterns_checked} exponent patterns, all A_i^n = E)"
        if self.status is Certification.UNCHECKED:
            return "unchecked"
        if self.witness is not None:
            return f"refuted: anticommutator for exponents {self.witness} is nonzero"
        return f"refuted: A_{self.failing_power + 1}^n != E"


UNCHECKED = Certificate(Certification.UNCHECKED)


@dataclass(frozen=True)
class StructureSpec:
    """Monomial matrix layout: ``row i`` has ``zeta^exponents[i]`` at ``positions[i]``."""

    positions: tuple[int, ...]
    exponents: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.positions) != list(range(len(self.positions))):
            raise ValueError(f"positions {self.positions} is not a permutation")
        if len(self.exponents) != len(self.positions):
            raise ValueError("positions and exponents differ in length")

    def matrix(self, n: int) -> CycMatrix:
        dim = len(self.positions)
        z = zero(n)
        w = zeta(n)
        rows = [[z] * dim for _ in range(dim)]
        for i, (j, e) in enumerate(zip(self.positions, self.exponents)):
            rows[i][j] = w ** (e % n)
        return CycMatrix(n, rows)


@dataclass
class ConcertedSet:
    n: int
    matrices: tuple[CycMatrix, ...]
    provenance: str = "user-supplied"
    structures: tuple[StructureSpec, ...] = ()
    certificate: Certificate = field(default=UNCHECKED)

    def __post_init__(self):
        self.matrices = tuple(self.matrices)
        if not self.matrices:
            raise ValueError("a concerted set needs at least one matrix")
        dim = self.matrices[0].dim
        for m in self.matrices:
            if m.order != self.n or m.dim != dim:
                raise ValueError(
                    f"matrix {m.shape()} does not match n={self.n}, dim={dim}"
                )

    @property
    def k(self) -> int:
        return len(self.matrices)

    @property
    def dim(self) -> int:
        return self.matrices[0].dim

    @property
    def certified(self) -> Certification:
        return self.certificate.status


def mixed_compositions(n: int, k: int) -> Iterator[MultisetExponent]:
    """Compositions of n into k parts, each < n, in lexicographic order.

    Parts < n forces at least two nonzero parts.
    """

    def rec(prefix: list[int], left: int, slots: int) -> Iterator[MultisetExponent]:
        if slots == 0:
            if left == 0:
                yield tuple(prefix)
            return
        for v in range(min(left, n - 1) + 1):
            if left - v <= (slots - 1) * (n - 1):
                prefix.append(v)
                yield from rec(prefix, left - v, slots - 1)
                prefix.pop()

    yield from rec([], n, k)


def _require_odd_prime(n: int) -> None:
    check_prime(n, "n")
    if n == 2:
        raise ValueError("n = 2 has its own construction; use build_n2()")


def _shift_structure(n: int, step: int, scale: int, offset: int = 0) -> StructureSpec:
    # row i -> column i + step, entry zeta^(scale * i + offset)
    return StructureSpec(
        tuple((i + step) % n for i in range(n)),
        tuple((scale * i + offset) % n for i in range(n)),
    )


def build_pair(n: int) -> ConcertedSet:
    """Two n x n matrices on the cyclic-shift structure, entries zeta^i and zeta^(2i)."""
    _require_odd_prime(n)
    sa = _shift_structure(n, 1, 1)
    sb = _shift_structure(n, 1, 2)
    s = ConcertedSet(n, (sa.matrix(n), sb.matrix(n)), "pair", (sa, sb))
    certify(s)
    return s


def build_triple(n: int) -> ConcertedSet:
    """The family (A, B, AB) on the cyclic-shift structure."""
    _require_odd_prime(n)
    sa = _shift_structure(n, 1, 1)
    sb = _shift_structure(n, 1, 2)
    a, b = sa.matrix(n), sb.matrix(n)
    ab = a @ b
    if ab != scalar_mul(zeta(n), b @ a):
        raise AssertionError(f"braiding AB = zeta*BA failed for n={n}")
    # AB moves row i to column i+2 with entry zeta^(i + 2(i+1))
    sab = _shift_structure(n, 2, 3, 2)
    s = ConcertedSet(n, (a, b, ab), "triple", (sa, sb, sab))
    certify(s)
    return s


def build_n2() -> ConcertedSet:
    """The 2x2 pair diag(1, -1) and the swap matrix."""
    o, z = one(2), zero(2)
    a1 = CycMatrix(2, [[o, z], [z, -o]])
    a2 = CycMatrix(2, [[z, o], [o, z]])
    s = ConcertedSet(2, (a1, a2), "n2")
    certify(s)
    return s


def explicit_triple_n3(verbatim: bool = False) -> ConcertedSet:
    """The explicit 3x3 triple used for the n = 3 parametrization.

    In its commonly quoted form the third matrix has an empty first row,
    which makes it nilpotent, so ``A_3^3 = E`` fails.  By default the
    missing unit entry at (0, 2) is restored, giving the monomial matrix
    with ``zeta^i`` in row i (which equals ``zeta^2 * A_1 A_2``).
    ``verbatim=True`` returns the uncorrected form for comparison.
    """
    w = zeta(3)
    o, z = one(3), zero(3)
    a1 = CycMatrix(3, [[z, w, z], [z, z, w * w], [o, z, z]])
    a2 = CycMatrix(3, [[z, o, z], [z, z, o], [o, z, z]])
    corner = z if verbatim else o
    a3 = CycMatrix(3, [[z, z, corner], [w, z, z], [z, w * w, z]])
    s = ConcertedSet(3, (a1, a2, a3), "explicit-n3-verbatim" if verbatim else "explicit-n3")
    certify(s)
    return s


def _tensor_family(
    left: ConcertedSet, right: ConcertedSet, l: int, reading: str
) -> list[CycMatrix]:
    a1 = left.matrices[0]
    al = left.matrices[l - 1]
    e_right = identity(right.dim, right.n)
    if reading == "proof":
        # left parts run over orderings of A_1^(n-s) A_l^s, which is the
        # grouping that makes every mixed anticommutator vanish
        family = [kron(a1, m) for m in right.matrices]
    elif reading == "literal":
        family = [kron(al, m) for m in right.matrices]
    else:
        raise ValueError(f"unknown reading {reading!r} (expected 'proof' or 'literal')")
    family.append(kron(al, e_right))
    return family


def _check_tensor_args(left: ConcertedSet, l: int) -> None:
    if not left.certificate.verified:
        raise ValueError("the base set must be certified concerted before tensoring")
    if left.k < 2:
        raise ValueError(f"the base set needs at least two matrices, has {left.k}")
    if not 2 <= l <= left.k:
        raise ValueError(f"l must satisfy 2 <= l <= {left.k} (1-based, l != 1), got {l}")


def extend(base: ConcertedSet, l: int, reading: str = "proof", workers: int = 1) -> ConcertedSet:
    """k + 1 matrices of dimension dim^2 built from a concerted set of k.

    ``l`` is 1-based.  The result is always re-certified; with
    ``reading="literal"`` the certificate comes back refuted.
    """
    _check_tensor_args(base, l)
    family = _tensor_family(base, base, l, reading)
    s = ConcertedSet(base.n, family, "tensor-extension")
    certify(s, workers=workers)
    return s


def mixed_tensor(
    left: ConcertedSet, right: ConcertedSet, l: int, reading: str = "proof", workers: int = 1
) -> ConcertedSet:
    """k' + 1 matrices of dimension dim(left) * dim(right)."""
    if left.n != right.n:
        raise ValueError(f"mismatched powers: left n={left.n}, right n={right.n}")
    _check_tensor_args(left, l)
    if not right.certificate.verified:
        raise ValueError("the right set must be certified concerted before tensoring")
    family = _tensor_family(left, right, l, reading)
    s = ConcertedSet(left.n, family, "mixed-tensor")
    certify(s, workers=workers)
    return s


def _pattern_vanishes(args: tuple[tuple[CycMatrix, ...], MultisetExponent]) -> bool:
    mats, pattern = args
    return gen_anticommutator(list(zip(mats, pattern))).is_zero()


def certify(s: ConcertedSet, workers: int = 1) -> Certificate:
    """Exhaustively check the concertedness and power conditions.

    Updates ``s.certificate`` and returns it.  A refutation carries the
    lexicographically first failing exponent pattern.
    """
    patterns = list(mixed_compositions(s.n, s.k))
    jobs = [(s.matrices, p) for p in patterns]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pattern_vanishes, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = []
        for job in jobs:
            ok = _pattern_vanishes(job)
            results.append(ok)
            if not ok:
                break
    for p, ok in zip(patterns, results):
        if not ok:
            s.certificate = Certificate(Certification.REFUTED, witness=p, patterns_checked=len(results))
            return s.certificate
    for i, m in enumerate(s.matrices):
        if not mat_pow(m, s.n).is_identity():
            s.certificate = Certificate(
                Certification.REFUTED, failing_power=i, patterns_checked=len(patterns)
            )
            return s.certificate
    s.certificate = Certificate(Certification.VERIFIED, patterns_checked=len(patterns))
    return s.certificate


def _as_scalars(n: int, xs: Sequence[int | CycInt]) -> list[CycInt]:
    return [embed_int(n, x) if isinstance(x, int) else x for x in xs]


def check_condition4(s: ConcertedSet, xs: Sequence[int | CycInt]) -> bool:
    """Exact test of ``(sum x_i A_i)^n == E * sum x_i^n``."""
    if len(xs) != s.k:
        raise ValueError(f"expected {s.k} values, got {len(xs)}")
    vals = _as_scalars(s.n, xs)
    lhs = mat_pow(linear_combination(vals, s.matrices), s.n)
    total = zero(s.n)
    for v in vals:
        total = total + v**s.n
    return lhs == scalar_mul(total, identity(s.dim, s.n))


def two_sided_matrices(
    s: ConcertedSet, r1: int, r2: int
) -> tuple[tuple[CycMatrix, ...], tuple[CycMatrix, ...]]:
    """Split a family into left matrices A_i and right matrices B_j = -A_{r1+j}.

    With these, ``(sum x_i A_i + sum y_j B_j)^n = E (sum x_i^n - sum y_j^n)``.
    Only odd n is supported (-1 is then an n-th root of -1).
    """
    if r1 < 0 or r2 < 0 or r1 + r2 != s.k:
        raise ValueError(f"r1 + r2 must equal k = {s.k}, got {r1} + {r2}")
    if s.n % 2 == 0:
        raise ValueError(
            "even n needs an epsilon with epsilon^n = -1 outside Z[zeta_n]; not supported"
        )
    left = s.matrices[:r1]
    right = tuple(-m for m in s.matrices[r1:])
    return left, right


def two_sided_operator(
    s: ConcertedSet, xs: Sequence[int | CycInt], ys: Sequence[int | CycInt]
) -> CycMatrix:
    left, right = two_sided_matrices(s, len(xs), len(ys))
    coeffs = _as_scalars(s.n, list(xs) + list(ys))
    return linear_combination(coeffs, list(left) + list(right))


def linearization_det(s: ConcertedSet, xs: Sequence[int | CycInt], y: int | CycInt) -> CycInt:
    """``det(sum x_i A_i - y E)``; vanishes whenever ``sum x_i^n = y^n``."""
    if len(xs) != s.k:
        raise ValueError(f"expected {s.k} values, got {len(xs)}")
    (yv,) = _as_scalars(s.n, [y])
    m = linear_combination(_as_scalars(s.n, xs), s.matrices)
    return det(m - scalar_mul(yv, identity(s.dim, s.n)))


# -- text serialization ---------------------------------------------------


def dumps_set(s: ConcertedSet) -> str:
    lines = [
        "# concerted matrix set",
        f"n {s.n}",
        f"dim {s.dim}",
        f"k {s.k}",
        f"recipe {s.provenance}",
        f"certified {s.certificate.status.value}",
    ]
    for idx, m in enumerate(s.matrices, 1):
        lines.append(f"matrix {idx}")
        for row in m.rows:
            lines.append(" | ".join(e.render() for e in row))
    return "\n".join(lines) + "\n"


def loads_set(text: str) -> ConcertedSet:
    """Parse the format written by :func:`dumps_set`.  Certification is reset."""
    header: dict[str, str] = {}
    mats: list[list[list[CycInt]]] = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "matrix":
            mats.append([])
        elif not mats and key in ("n", "dim", "k", "recipe", "certified"):
            header[key] = rest.strip()
            if key == "n":
                n = check_prime(int(rest))
        elif mats:
            if n is None:
                raise ValueError(f"line {lineno}: matrix rows before the 'n' header")
            mats[-1].append([parse_cycint(c, n) for c in line.split("|")])
        else:
            raise ValueError(f"line {lineno}: unexpected {line!r}")
    if n is None or not mats:
        raise ValueError("missing 'n' header or matrices")
    matrices = tuple(CycMatrix(n, rows) for rows in mats)
    if "dim" in header and int(header["dim"]) != matrices[0].dim:
        raise ValueError(f"header dim {header['dim']} != matrix dim {matrices[0].dim}")
    if "k" in header and int(header["k"]) != len(matrices):
        raise ValueError(f"header k {header['k']} != {len(matrices)} matrices")
    return ConcertedSet(n, matrices, header.get("recipe", "user-supplied"))
