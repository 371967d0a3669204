"""Counting results: residue distribution of subset sums, the r(n) <= 2n+1
counting bound, the signed power-sum identity, and the r(n) ledger."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from .cyclotomic import smallest_factor
from .literals import parse_solution_literal
from .search import Solution, verify

__all__ = [
    "ResidueHistogram",
    "residue_distribution",
    "BoundWitness",
    "bound_witness",
    "find_collision",
    "SignIdentityInstance",
    "sign_identity_check",
    "KNOWN_SOLUTIONS",
    "RnEntry",
    "RnLedger",
    "rn_ledger_update",
]


# -- subset sums modulo n ----------------------------------------------------


@dataclass(frozen=True)
class ResidueHistogram:
    n: int
    m: int
    counts: tuple[int, ...]
    hypothesis_ok: bool  # n prime

    @property
    def uniform(self) -> bool:
        return len(set(self.counts)) == 1


def residue_distribution(n: int, m: int) -> ResidueHistogram:
    """How the sums of all m-subsets of {0..n-1} fall into residue classes."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    counts = [0] * n
    for subset in itertools.combinations(range(n), m):
        counts[sum(subset) % n] += 1
    return ResidueHistogram(n, m, tuple(counts), smallest_factor(n) == n)


# -- the counting bound -------------------------------------------------------

A_CAP = 10**12


def _multisets(a: int, k: int) -> int:
    # non-decreasing k-tuples from {0..a}
    return math.comb(a + k, k)


@dataclass(frozen=True)
class BoundWitness:
    n: int
    k0: int
    A: int  # least A >= 2 with N(A, k0) > k0 * A^n
    implied_bound: int
    A_pigeonhole: int  # least A with N(A, k0) - 1 > k0 * A^n
    collision: Solution | None = None

    @property
    def count_at_A(self) -> int:
        return _multisets(self.A, self.k0)

    def as_dict(self) -> dict:
        d = {
            "n": self.n,
            "k0": self.k0,
            "A": self.A,
            "N(A,k0)": self.count_at_A,
            "k0*A^n": self.k0 * self.A**self.n,
            "implied_bound": self.implied_bound,
            "A_pigeonhole": self.A_pigeonhole,
        }
        if self.collision is not None:
            d["collision"] = self.collision.render()
        return d


def _first_true(pred, start: int) -> int:
    """Least A >= start with pred(A), for a predicate false-then-true on [start, inf)."""
    if pred(start):
        return start
    lo, hi = start, start + 1
    while not pred(hi):
        lo, hi = hi, hi * 2
        if hi > A_CAP:
            raise RuntimeError(f"no witness below the safety cap A = {A_CAP}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def bound_witness(n: int, collision_budget: int = 200_000) -> BoundWitness:
    """Least coefficient bound A making the multiset count beat the value count.

    With k0 = n + 1 terms, ``N(A, k0) / A^n`` first falls and then grows
    without bound, while A = 1 satisfies the inequality only through the
    off-by-one in counting possible sums; the scan therefore starts at
    A = 2, where the ratio is already below k0.  A bisection over the
    increasing branch finds the crossing.

    When at most ``collision_budget`` multisets need checking, an explicit
    pair of k0-term sums with equal power sums is also returned.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    k0 = n + 1

    def beats(a: int) -> bool:
        return _multisets(a, k0) > k0 * a**n

    def pigeon(a: int) -> bool:
        return _multisets(a, k0) - 1 > k0 * a**n

    if beats(2):
        raise AssertionError(f"N(2, {k0}) already exceeds {k0} * 2^{n}")
    a = _first_true(beats, 2)
    a_strict = _first_true(pigeon, 2)
    collision = None
    if _multisets(a_strict, k0) <= collision_budget:
        collision = find_collision(n, k0, a_strict)
    return BoundWitness(n, k0, a, 2 * k0 - 1, a_strict, collision)


def find_collision(n: int, k: int, a_max: int) -> Solution | None:
    """Two k-term multisets from {0..a_max} with equal n-th power sums.

    Scans coefficient bounds upward so the first hit is small.  The result
    is reduced (shared terms cancelled), hence nontrivial.
    """
    seen: dict[int, tuple[int, ...]] = {}
    for top in range(a_max + 1):
        # multisets whose largest entry is exactly `top`
        for rest in itertools.combinations_with_replacement(range(top + 1), k - 1):
            ms = rest + (top,)
            s = sum(x**n for x in ms)
            if s in seen:
                return verify(n, seen[s], ms).reduced().canonical()
            seen[s] = ms
    return None


# -- the signed power-sum identity ------------------------------------------------


@dataclass(frozen=True)
class SignIdentityInstance:
    n: int
    a: tuple[int, ...]
    lhs: int
    rhs: int
    by_minus_count: tuple[int, ...]  # the inner sums, grouped by number of minus signs
    half_sum: int  # sum over sign vectors with sigma_1 = +1

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def sign_identity_check(a: Sequence[int]) -> SignIdentityInstance:
    """Evaluate ``sum_sigma (-1)^{#minus} (sigma . a)^n`` against ``2^n n! prod(a)``."""
    a = tuple(int(v) for v in a)
    n = len(a)
    if n == 0:
        raise ValueError("need at least one value")
    groups = [0] * (n + 1)
    half = 0
    for sigma in itertools.product((1, -1), repeat=n):
        g = sum(s * v for s, v in zip(sigma, a))
        minus = sigma.count(-1)
        term = g**n if minus % 2 == 0 else -(g**n)
        groups[minus] += term
        if sigma[0] == 1:
            half += term
    lhs = sum(groups)
    rhs = 2**n * math.factorial(n) * math.prod(a)
    return SignIdentityInstance(n, a, lhs, rhs, tuple(groups), half)


# -- the r(n) ledger ------------------------------------------------------------

# (literal, source)
KNOWN_SOLUTIONS: tuple[tuple[str, str], ...] = (
    ("(3,4;5)^2", "Pythagorean triple"),
    ("(3,4,5;6)^3", "classical cube identity"),
    ("(3,5,8;7,7)^4", "known"),
    ("(133,134;158,59)^4", "Euler"),
    ("(4,10,20,28;3,29)^5", "known"),
    ("(27,84,110,133;144)^5", "Lander-Parkin"),
    ("(3,19,22;10,15,23)^6", "known"),
    ("(149,123,14,10;146,129,90,15)^7", "known, L3R3"),
    ("(43,20,11,10,1;41,35,32,28,5)^8", "known, L1R3"),
    ("(73,38,29,9,1;68,67,45,21,18,11,6,4)^9", "known, L2R1"),
    ("(149,42,37,30,25,20,8,5;145,128,100,73,48,13,6,1)^10", "known, L2R1"),
    ("(18,6,6,6,4,4,4;17,16,15,13,13,10,9,9,8,1,1,1,1)^11", "known, randomized V0"),
)

# r(n) is known exactly here, not just bounded above
EXACT = {
    2: "x^2 = y^2 has only trivial solutions, so r(2) >= 2",
    3: "known: r(3) = 3",
}


@dataclass
class RnEntry:
    n: int
    bound: int
    solution: str | None = None
    source: str = ""
    exact: bool = False
    manifest: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _caps(n: int) -> dict[str, int]:
    return {"counting": 2 * n + 1, "refined": 2 * n - 1}


@dataclass
class RnLedger:
    """Best known upper bounds on r(n) = min(r1 + r2 - 1) per exponent."""

    entries: dict[int, RnEntry] = field(default_factory=dict)

    @classmethod
    def seeded(cls) -> RnLedger:
        led = cls()
        for literal, source in KNOWN_SOLUTIONS:
            n, lhs, rhs = parse_solution_literal(literal)
            rn_ledger_update(led, verify(n, lhs, rhs), source=source)
        for n in EXACT:
            led.entries[n].exact = True
        return led

    def bound(self, n: int) -> int:
        """Best bound: the empirical one if known, otherwise the 2n - 1 cap."""
        e = self.entries.get(n)
        cap = _caps(n)["refined"]
        return cap if e is None else min(e.bound, cap)

    def rn_le_n(self, n: int) -> str:
        """Status of r(n) <= n given the current upper bound."""
        return "supported" if self.bound(n) <= n else "open"

    def log_ratio(self, n: int) -> float:
        return self.bound(n) / math.log(n)

    def rn_le_n_holds_through(self) -> int:
        """Largest N such that every 2 <= n <= N has a recorded bound <= n."""
        top = 1
        while (top + 1) in self.entries and self.entries[top + 1].bound <= top + 1:
            top += 1
        return top

    def rows(self) -> list[dict]:
        out = []
        for n in sorted(self.entries):
            e = self.entries[n]
            caps = _caps(n)
            out.append(
                {
                    "n": n,
                    "bound": e.bound,
                    "exact": e.exact,
                    "solution": e.solution,
                    "source": e.source,
                    "cap_counting": caps["counting"],
                    "cap_refined": caps["refined"],
                    "rn_le_n": self.rn_le_n(n),
                    "r_over_ln_n": round(self.log_ratio(n), 6),
                }
            )
        return out

    def summary(self) -> str:
        top = self.rn_le_n_holds_through()
        return f"r(n) <= n holds for n <= {top}"

    # -- persistence: one JSON object per line, append-only

    def load(self, path: str | Path) -> RnLedger:
        p = Path(path)
        if not p.exists():
            return self
        for lineno, line in enumerate(p.read_text().splitlines(), 1):
            if not line.strip():
                continue
            row = json.loads(line)
            if row.get("type", "rn") != "rn":
                continue
            n, lhs, rhs = parse_solution_literal(row["solution"])
            sol = verify(n, lhs, rhs)
            if sol.n != row["n"]:
                raise ValueError(f"{path}:{lineno}: exponent mismatch")
            rn_ledger_update(self, sol, source=row.get("source", ""), manifest=row.get("manifest"))
        return self

    def append(self, path: str | Path, entry: RnEntry) -> None:
        with open(path, "a") as fh:
            fh.write(json.dumps({"type": "rn", **entry.as_dict()}, sort_keys=True) + "\n")


def rn_ledger_update(
    ledger: RnLedger, solution: Solution, source: str = "", manifest: str | None = None
) -> RnLedger:
    """Record ``r1 + r2 - 1`` for a nontrivial solution if it improves the bound."""
    if not solution.nontrivial:
        raise ValueError(f"trivial solution {solution.render()} says nothing about r(n)")
    r = solution.r_value
    cur = ledger.entries.get(solution.n)
    if cur is None or r < cur.bound:
        exact = cur.exact if cur is not None else False
        ledger.entries[solution.n] = RnEntry(
            solution.n, r, solution.render(), source, exact, manifest
        )
    return ledger
