"""Parametrizing solutions of ``x_1^n + ... + x_k^n = y^n``.

Read ``sum x_i A_i psi = y psi`` as a linear system for the x_i with the
columns ``A_i psi``.  Cramer's rule gives ``x_i = delta_i / delta``; scaling
by ``delta`` produces the polynomial solution ``(delta_1, ..., delta_k;
delta)``, which satisfies the power identity whenever the family is
concerted.  Nothing is ever divided.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .concerted import ConcertedSet
from .cyclotomic import CycInt, embed_int, one, zero, zeta
from .cycmatrix import det, from_columns, identity, linear_combination, scalar_mul
from .search import Solution, VerificationError, verify

__all__ = [
    "ParamVector",
    "ParametrizedSolution",
    "RationalSlice",
    "as_param_vector",
    "cramer_parametrize",
    "closed_form_n3",
    "relating_unit",
    "rational_slice",
    "system_residual",
]


@dataclass(frozen=True)
class ParamVector:
    order: int
    psi: tuple[CycInt, ...]

    def __post_init__(self):
        for p in self.psi:
            if p.order != self.order:
                raise ValueError(f"component {p!r} is not in Z[zeta_{self.order}]")
        if all(p.is_zero() for p in self.psi):
            raise ValueError("psi = 0 parametrizes nothing")

    def scaled(self, s: CycInt | int) -> ParamVector:
        return ParamVector(self.order, tuple(p * s for p in self.psi))


def as_param_vector(order: int, psi: Sequence[CycInt | int] | ParamVector) -> ParamVector:
    if isinstance(psi, ParamVector):
        return psi
    return ParamVector(order, tuple(embed_int(order, p) if isinstance(p, int) else p for p in psi))


@dataclass(frozen=True)
class ParametrizedSolution:
    order: int
    xs: tuple[CycInt, ...]
    y: CycInt
    deltas: tuple[CycInt, ...] = ()
    delta: CycInt | None = None
    method: str = "cramer"

    def power_gap(self) -> CycInt:
        """``sum x_i^n - y^n``; zero exactly when the identity holds."""
        n = self.order
        total = zero(n)
        for x in self.xs:
            total = total + x**n
        return total - self.y**n

    @property
    def identity_holds(self) -> bool:
        return self.power_gap().is_zero()

    def as_dict(self) -> dict:
        return {
            "n": self.order,
            "method": self.method,
            "xs": [list(x.coeffs) for x in self.xs],
            "y": list(self.y.coeffs),
            "identity_holds": self.identity_holds,
        }


def cramer_parametrize(s: ConcertedSet, psi: Sequence[CycInt | int] | ParamVector) -> ParametrizedSolution:
    if not s.certificate.verified:
        raise ValueError("the matrix family must be certified concerted first")
    if s.dim != s.k:
        raise ValueError(
            f"need a square system (dim = k), got dim {s.dim} and k {s.k}; "
            "use a family with one matrix per row, e.g. build_n2() or explicit_triple_n3()"
        )
    pv = as_param_vector(s.n, psi)
    if len(pv.psi) != s.dim:
        raise ValueError(f"psi has {len(pv.psi)} components, need {s.dim}")
    cols = [m.apply(pv.psi) for m in s.matrices]
    delta = det(from_columns(s.n, cols))
    deltas = []
    for i in range(s.k):
        replaced = cols[:i] + [list(pv.psi)] + cols[i + 1 :]
        deltas.append(det(from_columns(s.n, replaced)))
    sol = ParametrizedSolution(s.n, tuple(deltas), delta, tuple(deltas), delta, "cramer")
    if not sol.identity_holds:
        raise AssertionError(f"Cramer parametrization broke the power identity: {sol}")
    return sol


def system_residual(s: ConcertedSet, psi: ParamVector, sol: ParametrizedSolution) -> list[CycInt]:
    """``(sum x_i A_i - y E) psi``; all zero for a Cramer solution."""
    m = linear_combination(list(sol.xs), s.matrices) - scalar_mul(sol.y, identity(s.dim, s.n))
    return m.apply(psi.psi)


def closed_form_n3(psi: Sequence[CycInt | int] | ParamVector) -> ParametrizedSolution:
    """Closed-form cubic expressions for x1, x2, x3 and y over Z[zeta_3].

    They agree with :func:`cramer_parametrize` on :func:`explicit_triple_n3`
    up to the unit -1 (see :func:`relating_unit`).
    """
    pv = as_param_vector(3, psi)
    if pv.order != 3:
        raise ValueError(f"the n = 3 formulas need order 3, got {pv.order}")
    if len(pv.psi) != 3:
        raise ValueError(f"need three parameters, got {len(pv.psi)}")
    p1, p2, p3 = pv.psi
    w = zeta(3)
    w2 = w * w
    u = one(3)
    y = p1 * p3 * p3 * (u - w2) - p3 * p2 * p2 * (u - w) - p2 * p1 * p1 * (w - w2)
    x1 = w * p1**3 + w2 * p2**3 + p3**3
    x2 = -(w * p1**3 + p2**3 + w2 * p3**3)
    x3 = p3 * p1 * p1 * (u - w2) - p1 * p2 * p2 * (u - w) - p2 * p3 * p3 * (w - w2)
    return ParametrizedSolution(3, (x1, x2, x3), y, method="closed-form")


def relating_unit(a: ParametrizedSolution, b: ParametrizedSolution) -> CycInt | None:
    """The unit u = +-zeta^j with ``a = u * b`` componentwise, if one exists."""
    n = a.order
    w = zeta(n)
    units = [sgn * w**j for sgn in (1, -1) for j in range(n)]
    comps_a = list(a.xs) + [a.y]
    comps_b = list(b.xs) + [b.y]
    for u in units:
        if all(x == u * y for x, y in zip(comps_a, comps_b)):
            return u
    return None


@dataclass(frozen=True)
class RationalSlice:
    values: tuple[int, ...] | None  # (x_1, ..., x_k, y) when all rational
    solution: Solution | None
    non_rational: tuple[str, ...]
    note: str = ""

    @property
    def accepted(self) -> bool:
        return self.solution is not None


def rational_slice(sol: ParametrizedSolution) -> RationalSlice:
    """Keep the solution only if every component is a rational integer.

    Signs are normalized into non-negative terms: even powers drop the sign,
    odd powers move negative terms across the equation.  Zeros are dropped.
    """
    labels = [f"x{i + 1}" for i in range(len(sol.xs))] + ["y"]
    comps = list(sol.xs) + [sol.y]
    bad = tuple(lab for lab, c in zip(labels, comps) if not c.is_rational())
    if bad:
        return RationalSlice(None, None, bad, "components outside Z")
    values = tuple(c.coeffs[0] for c in comps)
    n = sol.order
    left: list[int] = []
    right: list[int] = []
    for v in values[:-1]:
        if v > 0 or (v < 0 and n % 2 == 0):
            left.append(abs(v))
        elif v < 0:
            right.append(-v)
    yv = values[-1]
    if yv > 0 or (yv < 0 and n % 2 == 0):
        right.append(abs(yv))
    elif yv < 0:
        left.append(-yv)
    if not left or not right:
        return RationalSlice(values, None, (), "degenerate: a side vanishes")
    try:
        found = verify(n, left, right)
    except VerificationError as exc:  # pragma: no cover - guarded by identity_holds
        return RationalSlice(values, None, (), str(exc))
    return RationalSlice(values, found, ())
