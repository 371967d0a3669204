import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqpowers.literals import parse_solution_literal
from eqpowers.search import (
    Mode,
    Outcome,
    SearchConfig,
    VerificationError,
    canonical_key,
    greedy_decompose,
    integer_nth_root,
    left_tuples,
    parse_algo,
    run_search,
    verify,
)


def bisect_root(v, n):
    """Independent oracle: largest y with y^n <= v."""
    lo, hi = 0, 1
    while hi**n <= v:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**n <= v:
            lo = mid
        else:
            hi = mid
    return lo


def cfg(n, k=8, **kw):
    return SearchConfig(n=n, m=1, k=k, a_max=kw.pop("a_max", 10), **kw)


# -- verification ------------------------------------------------------------


def test_verify_examples():
    s = verify(3, [3, 4, 5], [6])
    assert s.nontrivial and s.r_value == 3
    assert verify(4, [133, 134], [158, 59]).r_value == 3
    with pytest.raises(VerificationError) as exc:
        verify(3, [3, 4, 5], [7])
    assert exc.value.lhs_sum == 216 and exc.value.rhs_sum == 343


def test_verify_orientation_and_trivial():
    a, b = verify(2, [3, 4], [5]), verify(2, [5], [4, 3])
    assert canonical_key(a) == canonical_key(b)
    assert a.canonical() == b.canonical()
    t = verify(3, [1, 2], [2, 1])
    assert not t.nontrivial
    assert not verify(3, [0], [0]).nontrivial


def test_reduced_cancels_common_terms():
    s = verify(3, [3, 4, 5, 7], [6, 7]).reduced()
    assert s.lhs == (5, 4, 3) and s.rhs == (6,)


def test_verify_input_checks():
    with pytest.raises(ValueError):
        verify(1, [1], [1])
    with pytest.raises(ValueError):
        verify(2, [], [1])
    with pytest.raises(ValueError):
        verify(2, [-3, 4], [5])


def test_render_and_dict():
    s = verify(3, [3, 4, 5], [6])
    assert s.render() == "(3,4,5;6)^3"
    assert s.as_dict() == {"n": 3, "lhs": [3, 4, 5], "rhs": [6], "r": 3, "nontrivial": True}


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**60), st.integers(1, 12))
def test_integer_nth_root_matches_bisection(v, n):
    assert integer_nth_root(v, n) == bisect_root(v, n)


def test_integer_nth_root_exact_powers():
    for n in range(2, 12):
        for y in (1, 2, 10**6, 10**12 + 7):
            assert integer_nth_root(y**n, n) == y
            assert integer_nth_root(y**n - 1, n) == y - 1
    with pytest.raises(ValueError):
        integer_nth_root(-1, 3)


def test_parse_algo():
    assert parse_algo("L3R3") == (3, 3)
    assert parse_algo("l2r10") == (2, 10)
    with pytest.raises(ValueError):
        parse_algo("L3")


def test_config_validation():
    with pytest.raises(ValueError, match="seed"):
        SearchConfig(n=3, m=1, k=2, a_max=5, mode=Mode.RANDOMIZED)
    with pytest.raises(ValueError):
        SearchConfig(n=1, m=1, k=1, a_max=1)
    with pytest.raises(ValueError):
        SearchConfig(n=3, m=1, k=2, a_max=5, window_terms=3)
    assert SearchConfig(n=3, m=2, k=4, a_max=5).algo == "L2R4"


# -- greedy descent ----------------------------------------------------------


def test_greedy_classic_trace():
    t = greedy_decompose(4802, cfg(4))
    assert t.outcome is Outcome.SOLVED
    assert [(s.remaining, s.y, s.y_next, s.chosen) for s in t.steps] == [
        (4802, 8, 9, 8),
        (706, 5, 6, 5),
        (81, 3, 4, 3),
    ]
    assert t.right_terms == [8, 5, 3] and t.left_terms == []
    assert t.remaining == 0


def test_greedy_zero_and_small():
    assert greedy_decompose(0, cfg(3)).outcome is Outcome.SOLVED
    t = greedy_decompose(2, cfg(3))
    assert t.outcome is Outcome.SOLVED and t.right_terms == [1, 1]


def test_greedy_overshoot_moves_terms_left():
    # 5 -> 8 overshoots by 3, then 1 + 1 + 1 on the other side: four steps
    t = greedy_decompose(5, cfg(3, k=3))
    assert t.outcome is Outcome.BUDGET
    assert [(s.chosen, s.side) for s in t.steps] == [(2, "right"), (1, "left"), (1, "left")]
    assert t.remaining == -1
    t = greedy_decompose(5, cfg(3, k=4))
    assert t.outcome is Outcome.SOLVED
    assert t.right_terms == [2] and t.left_terms == [1, 1, 1]
    assert t.as_dict()["outcome"] == "solved"


def test_greedy_nearest_power_choice():
    from eqpowers.search import _nearest_power

    assert greedy_decompose(20, cfg(2, k=1)).steps[0].chosen == 4
    assert greedy_decompose(21, cfg(2, k=1)).steps[0].chosen == 5
    for n in (2, 3, 4):
        for v in range(1, 5000):
            y, y1, chosen = _nearest_power(v, n)
            gaps = (v - y**n, y1**n - v)
            # y^n and (y+1)^n differ in parity, so the two gaps never tie
            assert gaps[0] != gaps[1]
            assert chosen == (y if gaps[0] < gaps[1] else y1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**30), st.integers(2, 9))
def test_greedy_descent_is_strictly_decreasing(v0, n):
    t = greedy_decompose(v0, SearchConfig(n=n, m=1, k=40, a_max=1, iter_cap=40))
    mags = [abs(s.remaining) for s in t.steps] + [abs(t.remaining)]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    # the signed ledger always balances
    assert v0 == sum(y**n for y in t.right_terms) - sum(x**n for x in t.left_terms) + t.remaining


@pytest.mark.parametrize(
    "n,seed,literal",
    [
        (5, (20, 28), "(4,10,20,28;3,29)^5"),
        (6, (19, 22), "(3,19,22;10,15,23)^6"),
        (8, (41, 35, 32), "(43,20,11,10,1;41,35,32,28,5)^8"),
        (9, (68, 67, 45), "(73,38,29,9,1;68,67,45,21,18,11,6,4)^9"),
    ],
)
def test_greedy_reproduces_known_solutions(n, seed, literal):
    c = SearchConfig(n=n, m=len(seed), k=12, a_max=100)
    t = greedy_decompose(sum(x**n for x in seed), c)
    assert t.outcome is Outcome.SOLVED
    got = verify(n, list(seed) + t.left_terms, t.right_terms).reduced()
    assert canonical_key(got) == canonical_key(verify(*parse_solution_literal(literal)))


def test_backtrack_solves_what_greedy_misses():
    from eqpowers.search import _backtrack

    c = SearchConfig(n=3, m=1, k=3, a_max=5, backtrack=True, iter_cap=200)
    assert greedy_decompose(24, c).outcome is not Outcome.SOLVED
    t = _backtrack(24, c, 3)
    assert t.outcome is Outcome.SOLVED and t.right_terms == [2, 2, 2]


# -- the search driver --------------------------------------------------------


def collect(c, workers=1):
    out = []
    stats = run_search(c, out.append, workers=workers)
    return out, stats


def test_search_finds_quartic():
    sols, stats = collect(SearchConfig(n=4, m=2, k=3, a_max=10))
    renders = {s.render() for s in sols}
    assert "(8,5,3;7,7)^4" in renders
    assert all(s.nontrivial for s in sols)
    assert stats.nontrivial == len(sols) and stats.best_r == 4


def test_search_finds_cubes():
    sols, _ = collect(SearchConfig(n=3, m=3, k=1, a_max=12))
    renders = {s.render() for s in sols}
    assert {"(6;5,4,3)^3", "(9;8,6,1)^3", "(12;10,8,6)^3"} <= renders


def test_search_results_are_verified_and_unique():
    sols, _ = collect(SearchConfig(n=3, m=2, k=3, a_max=15))
    keys = [canonical_key(s) for s in sols]
    assert len(keys) == len(set(keys))
    for s in sols:
        assert sum(x**3 for x in s.lhs) == sum(y**3 for y in s.rhs)
        assert s == s.canonical()


def test_search_trivial_rows_on_request():
    sols, _ = collect(SearchConfig(n=3, m=1, k=1, a_max=4, nontrivial_only=False))
    assert sols and not any(s.nontrivial for s in sols)


def test_parallel_search_matches_serial():
    c = SearchConfig(n=3, m=2, k=3, a_max=12)
    serial, s1 = collect(c)
    parallel, s2 = collect(c, workers=2)
    assert serial == parallel
    assert s1.tuples_tried == s2.tuples_tried


def test_randomized_search_is_reproducible():
    c = SearchConfig(n=4, m=2, k=3, a_max=30, mode=Mode.RANDOMIZED, seed=7, samples=300)
    assert list(left_tuples(c)) == list(left_tuples(c))
    a, _ = collect(c)
    b, _ = collect(c)
    assert a == b
    other = SearchConfig(n=4, m=2, k=3, a_max=30, mode=Mode.RANDOMIZED, seed=8, samples=300)
    assert list(left_tuples(other)) != list(left_tuples(c))


def test_window_terms_extend_coverage():
    base = {s.render() for s in collect(SearchConfig(n=4, m=2, k=3, a_max=20))[0]}
    wide = {s.render() for s in collect(SearchConfig(n=4, m=2, k=3, a_max=20, window_terms=1))[0]}
    # the first right term 21 comes from the window, not from nearest-power descent
    assert "(21,16,5;19,19)^4" in wide - base


def test_left_tuples_exhaustive_count():
    import math

    c = SearchConfig(n=3, m=3, k=1, a_max=6, a_min=2)
    tuples = list(left_tuples(c))
    assert len(tuples) == math.comb(5 + 3 - 1, 3)
    assert all(list(t) == sorted(t) for t in tuples)
