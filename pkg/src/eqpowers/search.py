"""Greedy big-integer search for equal sums of like powers.

The LmRk scheme: enumerate (or sample) ``m`` left terms, take the priming
volume ``V0 = sum x_i^n``, and repeatedly peel off the nearest n-th power
until the volume reaches zero or the budget runs out.  When a step
overshoots, the signed remainder flips and the next term goes to the left
side, so every solved trace assembles into a valid identity.
"""

from __future__ import annotations

import enum
import itertools
import random
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import gmpy2

__all__ = [
    "Solution",
    "VerificationError",
    "verify",
    "canonical_key",
    "integer_nth_root",
    "SearchConfig",
    "parse_algo",
    "GreedyStep",
    "GreedyTrace",
    "Outcome",
    "greedy_decompose",
    "SearchStats",
    "run_search",
]


class VerificationError(ValueError):
    def __init__(self, n: int, lhs_sum: int, rhs_sum: int):
        self.n, self.lhs_sum, self.rhs_sum = n, lhs_sum, rhs_sum
        super().__init__(
            f"power sums differ for n={n}: left {lhs_sum}, right {rhs_sum}, "
            f"difference {lhs_sum - rhs_sum}"
        )


@dataclass(frozen=True)
class Solution:
    n: int
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    nontrivial: bool

    @property
    def r_value(self) -> int:
        """r1 + r2 - 1, counting nonzero terms."""
        return sum(1 for x in self.lhs if x) + sum(1 for y in self.rhs if y) - 1

    def canonical(self) -> Solution:
        """Sides sorted descending, lexicographically larger side first."""
        a = tuple(sorted(self.lhs, reverse=True))
        b = tuple(sorted(self.rhs, reverse=True))
        if b > a:
            a, b = b, a
        return Solution(self.n, a, b, self.nontrivial)

    def reduced(self) -> Solution:
        """Cancel shared terms and zeros; may leave a side empty."""
        left, right = Counter(x for x in self.lhs if x), Counter(y for y in self.rhs if y)
        common = left & right
        left, right = left - common, right - common
        lhs = tuple(sorted(left.elements(), reverse=True))
        rhs = tuple(sorted(right.elements(), reverse=True))
        return Solution(self.n, lhs, rhs, bool(lhs and rhs))

    def render(self) -> str:
        from .literals import render_solution

        return render_solution(self.n, self.lhs, self.rhs)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "lhs": list(self.lhs),
            "rhs": list(self.rhs),
            "r": self.r_value,
            "nontrivial": self.nontrivial,
        }


def _is_nontrivial(lhs: Sequence[int], rhs: Sequence[int]) -> bool:
    left = Counter(x for x in lhs if x)
    right = Counter(y for y in rhs if y)
    return bool(left) and bool(right) and not (left & right)


def verify(n: int, lhs: Sequence[int], rhs: Sequence[int]) -> Solution:
    """Check ``sum x^n == sum y^n`` exactly; raise VerificationError if not."""
    if n < 2:
        raise ValueError(f"exponent must be >= 2, got {n}")
    if not lhs or not rhs:
        raise ValueError("both sides must be nonempty")
    lhs, rhs = tuple(int(x) for x in lhs), tuple(int(y) for y in rhs)
    if any(v < 0 for v in lhs + rhs):
        raise ValueError("terms must be non-negative")
    ls = sum(x**n for x in lhs)
    rs = sum(y**n for y in rhs)
    if ls != rs:
        raise VerificationError(n, ls, rs)
    return Solution(n, lhs, rhs, _is_nontrivial(lhs, rhs))


def canonical_key(sol: Solution) -> tuple:
    c = sol.canonical()
    return (c.n, c.lhs, c.rhs)


def integer_nth_root(v: int, n: int) -> int:
    """floor(v ** (1/n)) for v >= 0, exactly."""
    if v < 0:
        raise ValueError(f"integer_nth_root of negative value {v}")
    if n < 1:
        raise ValueError(f"root degree must be >= 1, got {n}")
    return int(gmpy2.iroot(v, n)[0])


# -- configuration --------------------------------------------------------


class Mode(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    RANDOMIZED = "randomized"


_ALGO = re.compile(r"^\s*L(\d+)R(\d+)\s*$", re.IGNORECASE)


def parse_algo(text: str) -> tuple[int, int]:
    """``"L3R3"`` -> ``(3, 3)``."""
    m = _ALGO.match(text)
    if not m:
        raise ValueError(f"algorithm tag must look like L<m>R<k>, got {text!r}")
    return int(m.group(1)), int(m.group(2))


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of an LmRk run.

    ``k`` caps the number of greedy terms per trace and ``iter_cap`` caps
    candidate evaluations (they coincide for pure greedy descent).  The
    first ``window_terms`` right terms are enumerated over
    ``[root(V/c), root(V)]`` before greedy descent takes over.
    """

    n: int
    m: int
    k: int
    a_max: int
    c: int = 2
    iter_cap: int = 64
    mode: Mode = Mode.EXHAUSTIVE
    seed: int | None = None
    samples: int = 10_000
    a_min: int = 1
    window_terms: int = 0
    backtrack: bool = False
    nontrivial_only: bool = True

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.m < 1:
            raise ValueError("m must be >= 1: the left side needs enumerated terms")
        if self.k < 1 or self.a_max < 1 or self.iter_cap < 1 or self.samples < 1:
            raise ValueError("k, a_max, iter_cap and samples must be positive")
        if self.c < 1:
            raise ValueError(f"shrink constant c must be >= 1, got {self.c}")
        if not 0 <= self.a_min <= self.a_max:
            raise ValueError(f"need 0 <= a_min <= a_max, got {self.a_min}, {self.a_max}")
        if self.window_terms < 0 or self.window_terms > self.k:
            raise ValueError("window_terms must lie in [0, k]")
        if self.mode is Mode.RANDOMIZED and self.seed is None:
            raise ValueError("randomized mode needs an explicit seed")

    @property
    def algo(self) -> str:
        return f"L{self.m}R{self.k}"


# -- greedy descent ----------------------------------------------------------


class Outcome(str, enum.Enum):
    SOLVED = "solved"
    BUDGET = "budget-exhausted"
    STALLED = "stalled"


@dataclass(frozen=True)
class GreedyStep:
    remaining: int  # signed volume before the step
    y: int
    y_next: int
    chosen: int
    side: str  # "right" when remaining > 0, else "left"


@dataclass
class GreedyTrace:
    v0: int
    n: int
    steps: list[GreedyStep] = field(default_factory=list)
    outcome: Outcome = Outcome.BUDGET

    @property
    def left_terms(self) -> list[int]:
        return [s.chosen for s in self.steps if s.side == "left"]

    @property
    def right_terms(self) -> list[int]:
        return [s.chosen for s in self.steps if s.side == "right"]

    @property
    def remaining(self) -> int:
        if not self.steps:
            return self.v0
        last = self.steps[-1]
        p = last.chosen**self.n
        return last.remaining - p if last.side == "right" else last.remaining + p

    def as_dict(self) -> dict:
        return {
            "v0": self.v0,
            "n": self.n,
            "outcome": self.outcome.value,
            "steps": [
                {
                    "remaining": s.remaining,
                    "y": s.y,
                    "y_next": s.y_next,
                    "chosen": s.chosen,
                    "side": s.side,
                }
                for s in self.steps
            ],
        }


def _nearest_power(v: int, n: int) -> tuple[int, int, int]:
    """(y, y+1, choice) for v > 0; ties go to the smaller base."""
    y = integer_nth_root(v, n)
    lo, hi = v - y**n, (y + 1) ** n - v
    return y, y + 1, (y if lo <= hi else y + 1)


def greedy_decompose(v0: int, cfg: SearchConfig, budget: int | None = None) -> GreedyTrace:
    """Drive the signed volume ``v0`` to zero by nearest-power descent."""
    n = cfg.n
    limit = min(cfg.k, cfg.iter_cap) if budget is None else min(budget, cfg.iter_cap)
    trace = GreedyTrace(v0, n)
    rem = v0
    while True:
        if rem == 0:
            trace.outcome = Outcome.SOLVED
            return trace
        if len(trace.steps) >= limit:
            trace.outcome = Outcome.BUDGET
            return trace
        v = abs(rem)
        y, y1, t = _nearest_power(v, n)
        new = v - t**n
        if abs(new) >= v:
            trace.outcome = Outcome.STALLED
            return trace
        side = "right" if rem > 0 else "left"
        trace.steps.append(GreedyStep(rem, y, y1, t, side))
        rem = new if rem > 0 else -new


def _backtrack(v0: int, cfg: SearchConfig, depth: int) -> GreedyTrace:
    """Bounded depth-first search over each step's candidate window.

    Candidates for remaining volume ``v`` are ``root(v/c) .. root(v) + 1``,
    tried nearest-first.  At most ``iter_cap`` candidates are evaluated.
    """
    n = cfg.n
    evals = 0
    best: list[GreedyStep] = []

    def rec(rem: int, path: list[GreedyStep]) -> bool:
        nonlocal evals, best
        if rem == 0:
            best = list(path)
            return True
        if len(path) >= depth:
            return False
        v = abs(rem)
        y, y1, _ = _nearest_power(v, n)
        lo = max(1, integer_nth_root(v // cfg.c, n))
        cands = sorted(range(lo, y1 + 1), key=lambda t: (abs(v - t**n), t))
        for t in cands:
            if evals >= cfg.iter_cap:
                return False
            evals += 1
            new = v - t**n
            if abs(new) >= v:
                continue
            side = "right" if rem > 0 else "left"
            path.append(GreedyStep(rem, y, y1, t, side))
            if rec(new if rem > 0 else -new, path):
                return True
            path.pop()
        return False

    solved = rec(v0, [])
    return GreedyTrace(v0, n, best if solved else [], Outcome.SOLVED if solved else Outcome.BUDGET)


# -- the search driver --------------------------------------------------------


@dataclass
class SearchStats:
    tuples_tried: int = 0
    traces_solved: int = 0
    nontrivial: int = 0
    emitted: int = 0
    best_r: int | None = None

    def as_dict(self) -> dict:
        return {
            "tuples_tried": self.tuples_tried,
            "traces_solved": self.traces_solved,
            "nontrivial": self.nontrivial,
            "emitted": self.emitted,
            "best_r": self.best_r,
        }


def left_tuples(cfg: SearchConfig, first_range: range | None = None) -> Iterator[tuple[int, ...]]:
    """Non-decreasing m-tuples in [a_min, a_max], or seeded random samples."""
    if cfg.mode is Mode.RANDOMIZED:
        rng = random.Random(cfg.seed)
        for _ in range(cfg.samples):
            yield tuple(sorted(rng.randint(cfg.a_min, cfg.a_max) for _ in range(cfg.m)))
        return
    values = range(cfg.a_min, cfg.a_max + 1)
    firsts = values if first_range is None else first_range
    for x0 in firsts:
        for rest in itertools.combinations_with_replacement(range(x0, cfg.a_max + 1), cfg.m - 1):
            yield (x0,) + rest


def _window_prefixes(v: int, cfg: SearchConfig, count: int) -> Iterator[list[int]]:
    if count == 0 or v <= 0:
        yield []
        return
    lo = max(1, integer_nth_root(v // cfg.c, cfg.n))
    hi = integer_nth_root(v, cfg.n)
    for y in range(hi, lo - 1, -1):
        for tail in _window_prefixes(v - y**cfg.n, cfg, count - 1):
            yield [y] + tail


def _solve_tuple(xs: tuple[int, ...], cfg: SearchConfig) -> Iterator[tuple[list[int], list[int]]]:
    n = cfg.n
    v0 = sum(x**n for x in xs)
    if v0 == 0:
        return
    for prefix in _window_prefixes(v0, cfg, cfg.window_terms):
        rem = v0 - sum(y**n for y in prefix)
        budget = cfg.k - len(prefix)
        if cfg.backtrack:
            trace = _backtrack(rem, cfg, budget)
        else:
            trace = greedy_decompose(rem, cfg, budget=budget)
        if trace.outcome is Outcome.SOLVED:
            yield list(xs) + trace.left_terms, prefix + trace.right_terms


def _search_chunk(args: tuple[SearchConfig, range | None]) -> tuple[SearchStats, list[Solution]]:
    cfg, first_range = args
    stats = SearchStats()
    found: list[Solution] = []
    for xs in left_tuples(cfg, first_range):
        stats.tuples_tried += 1
        for lhs, rhs in _solve_tuple(xs, cfg):
            stats.traces_solved += 1
            full = verify(cfg.n, lhs, rhs)
            sol = full.reduced()
            if sol.nontrivial:
                # independent re-check in a different summation order
                assert sum(x**cfg.n for x in reversed(sol.lhs)) == sum(
                    y**cfg.n for y in reversed(sol.rhs)
                )
                found.append(sol)
            elif not cfg.nontrivial_only:
                found.append(full)
    return stats, found


def run_search(
    cfg: SearchConfig,
    sink: Callable[[Solution], None] | None = None,
    workers: int = 1,
) -> SearchStats:
    """Run an LmRk search, passing each new canonical solution to ``sink``.

    Exhaustive runs split the range of the smallest left term across
    ``workers`` processes; results are merged in partition order, so the
    emitted stream does not depend on scheduling.
    """
    if cfg.mode is Mode.EXHAUSTIVE and workers > 1:
        firsts = list(range(cfg.a_min, cfg.a_max + 1))
        chunks = [range(firsts[i], firsts[i] + 1) for i in range(len(firsts))]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_search_chunk, [(cfg, ch) for ch in chunks]))
    else:
        parts = [_search_chunk((cfg, None))]

    total = SearchStats()
    seen: set[tuple] = set()
    for stats, found in parts:
        total.tuples_tried += stats.tuples_tried
        total.traces_solved += stats.traces_solved
        for sol in found:
            sol = sol.canonical()
            key = canonical_key(sol)
            if key in seen:
                continue
            seen.add(key)
            if sol.nontrivial:
                total.nontrivial += 1
                r = sol.r_value
                total.best_r = r if total.best_r is None else min(total.best_r, r)
            total.emitted += 1
            if sink is not None:
                sink(sol)
    return total
