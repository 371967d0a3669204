"""Exact arithmetic in the cyclotomic integers Z[zeta_n] for prime n.

Elements are stored in the power basis ``1, z, ..., z^(n-2)`` modulo the
cyclotomic polynomial ``1 + z + ... + z^(n-1)``, which gives every value a
unique coefficient tuple.  For ``n = 2`` the ring is the rational integers
with ``z = -1``.
"""

from __future__ import annotations

import cmath
import math
import re
from functools import reduce
from typing import Iterable, Sequence

__all__ = [
    "CycInt",
    "OrderMismatch",
    "smallest_factor",
    "check_prime",
    "make",
    "zero",
    "one",
    "zeta",
    "embed_int",
    "parse_cycint",
]


class OrderMismatch(ValueError):
    """Raised when two values from different cyclotomic rings meet."""


def smallest_factor(n: int) -> int:
    """Smallest prime factor of ``n >= 2`` by trial division."""
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def check_prime(n: int, what: str = "order") -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"{what} must be an int, got {type(n).__name__}")
    if n < 2:
        raise ValueError(f"{what} must be a prime >= 2, got {n}")
    p = smallest_factor(n)
    if p != n:
        raise ValueError(f"{what} {n} is not prime (divisible by {p})")
    return n


def _canonical(order: int, powers: Iterable[int]) -> tuple[int, ...]:
    """Reduce coefficients of ``z^0, z^1, ...`` to the canonical basis."""
    cyc = [0] * order
    for i, c in enumerate(powers):
        if c:
            cyc[i % order] += c
    top = cyc[order - 1]
    if top:
        return tuple(c - top for c in cyc[: order - 1])
    return tuple(cyc[: order - 1])


class CycInt:
    """An element of Z[zeta_n].  Immutable and hashable."""

    __slots__ = ("order", "coeffs")

    order: int
    coeffs: tuple[int, ...]

    def __init__(self, order: int, coeffs: Sequence[int]) -> None:
        # Trusted constructor: ``coeffs`` must already be canonical.
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CycInt is immutable")

    def __reduce__(self):
        return (CycInt, (self.order, self.coeffs))

    @classmethod
    def from_powers(cls, order: int, powers: Iterable[int]) -> CycInt:
        """Build from coefficients of any number of powers of zeta."""
        return cls(order, _canonical(order, powers))

    # -- basic predicates -------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        """True if the value lies in Z (no zeta component)."""
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycInt):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        # rational values compare equal to ints, so they must hash alike
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"CycInt({self.order}, {list(self.coeffs)})"

    def __str__(self) -> str:
        return f"{self.render()} (n={self.order})"

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.order != self.order:
                raise OrderMismatch(
                    f"cannot combine values of order {self.order} and {other.order}"
                )
            return other
        if isinstance(other, int):
            return embed_int(self.order, other)
        return NotImplemented

    def __add__(self, other) -> CycInt:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.order, [-a for a in self.coeffs])

    def __sub__(self, other) -> CycInt:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other) -> CycInt:
        return (-self) + other

    def __mul__(self, other) -> CycInt:
        if isinstance(other, int):
            return CycInt(self.order, [a * other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = self.order
        cyc = [0] * n
        bc = other.coeffs
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(bc):
                if b:
                    cyc[(i + j) % n] += a * b
        top = cyc[n - 1]
        if top:
            return CycInt(n, [c - top for c in cyc[: n - 1]])
        return CycInt(n, cyc[: n - 1])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> CycInt:
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"exponent must be a non-negative int, got {e!r}")
        result = one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- Galois action and exact division ---------------------------------

    def galois(self, j: int) -> CycInt:
        """Image under the automorphism z -> z^j (j coprime to the order)."""
        n = self.order
        if j % n == 0:
            raise ValueError(f"z -> z^{j} is not an automorphism for n={n}")
        powers = [0] * n
        for i, c in enumerate(self.coeffs):
            powers[(i * j) % n] += c
        return CycInt.from_powers(n, powers)

    def norm(self) -> int:
        """Field norm: product of all Galois conjugates, a rational integer."""
        prod = reduce(lambda acc, j: acc * self.galois(j), range(1, self.order), one(self.order))
        return prod.coeffs[0]

    def divide_exact(self, other: CycInt | int) -> CycInt:
        """Quotient ``self / other``; raises ArithmeticError unless exact."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Z[zeta]")
        if self.order == 2:
            q, r = divmod(self.coeffs[0], other.coeffs[0])
            if r:
                raise ArithmeticError(f"{self} is not divisible by {other}")
            return CycInt(2, [q])
        cofactor = reduce(
            lambda acc, j: acc * other.galois(j), range(2, self.order), one(self.order)
        )
        nrm = (other * cofactor).coeffs[0]
        num = self * cofactor
        out = []
        for c in num.coeffs:
            q, r = divmod(c, nrm)
            if r:
                raise ArithmeticError(f"{self} is not divisible by {other}")
            out.append(q)
        return CycInt(self.order, out)

    # -- diagnostics ------------------------------------------------------

    def to_complex(self) -> complex:
        """Evaluate at z = exp(2*pi*i/n) in floating point."""
        w = cmath.exp(2j * math.pi / self.order)
        return sum((c * w**i for i, c in enumerate(self.coeffs)), 0j)

    def render(self, var: str = "z") -> str:
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts) if parts else "0"


def make(order: int, raw: Sequence[int]) -> CycInt:
    """Canonical element from coefficients of ``z^0 .. z^(n-1)``."""
    check_prime(order)
    if len(raw) > order:
        raise ValueError(f"expected at most {order} coefficients, got {len(raw)}")
    return CycInt.from_powers(order, [int(c) for c in raw])


def zero(order: int) -> CycInt:
    return CycInt(order, (0,) * (order - 1))


def one(order: int) -> CycInt:
    return CycInt(order, (1,) + (0,) * (order - 2))


def zeta(order: int) -> CycInt:
    check_prime(order)
    powers = [0] * order
    powers[1 % order] = 1
    return CycInt.from_powers(order, powers)


def embed_int(order: int, z: int) -> CycInt:
    return CycInt(order, (z,) + (0,) * (order - 2))


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+)\s*(?:\*\s*)?)?(?:(z)(?:\s*\^\s*(\d+))?)?\s*"
)
_SUFFIX = re.compile(r"\(\s*n\s*=\s*(\d+)\s*\)\s*$")


def parse_cycint(text: str, order: int | None = None) -> CycInt:
    """Parse ``c0 + c1*z + ... (n=N)``.

    The ``(n=N)`` suffix may be omitted when ``order`` is given; if both are
    present they must agree.  Powers of ``z`` at or above N are reduced.
    """
    body = text.strip()
    m = _SUFFIX.search(body)
    if m:
        n_text = int(m.group(1))
        if order is not None and order != n_text:
            raise OrderMismatch(f"literal {text!r} has order {n_text}, expected {order}")
        order = n_text
        body = body[: m.start()]
    if order is None:
        raise ValueError(f"no order given for literal {text!r}")
    check_prime(order)
    body = body.strip()
    if not body:
        raise ValueError(f"empty cyclotomic literal {text!r}")
    powers = [0] * order
    pos = 0
    first = True
    while pos < len(body):
        t = _TERM.match(body, pos)
        sign, coef, var, exp = t.groups()
        if t.end() == pos or (coef is None and var is None) or (sign is None and not first):
            raise ValueError(f"cannot parse {text!r} at position {pos}: {body[pos:]!r}")
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        e = 0 if var is None else (int(exp) if exp is not None else 1)
        powers[e % order] += c
        pos = t.end()
        first = False
    return CycInt.from_powers(order, powers)
