import numpy as np
import pytest

from cubemorph.cube_core import (
    BooleanFunction,
    parse_point,
    popcount_array,
    random_balanced,
    random_subset_function,
)
from cubemorph.random_matching import (
    Status,
    build_dict_to_random,
    build_dict_to_random_details,
    build_injection,
    build_random_to_random,
    classify,
    injection_is_valid,
    recursion_curve,
    run_matching,
    unmatched_poor_fraction,
)
from cubemorph.stretch_metrics import is_mapping_between, stretch_report


def test_classify_definitions():
    a = BooleanFunction.from_ones(3, [0, 4, 1, 7])
    assert classify(a, parse_point("00")) is Status.RICH
    assert classify(a, parse_point("01")) is Status.POOR
    assert classify(a, parse_point("10")) is Status.MIXED
    assert classify(a, parse_point("11")) is Status.MIXED
    with pytest.raises(ValueError):
        classify(a, parse_point("000"))


def test_matching_hand_trace():
    # poor 01 stays unmatched (its only round-1 partner 11 is mixed) and
    # rich 00 stays unmatched
    a = BooleanFunction.from_ones(3, [0, 4, 1, 7])
    st = run_matching(a)
    assert st.round_stats == [(1, 1), (1, 1)]
    assert st.status_of(parse_point("01").bits).kind is Status.POOR
    assert st.status_of(parse_point("01").bits).matched_with is None
    assert st.status_of(parse_point("00").bits).kind is Status.RICH


def test_matching_trivial_sets():
    full = BooleanFunction.from_values(3, np.ones(8, dtype=np.uint8))
    empty = BooleanFunction.from_values(3, np.zeros(8, dtype=np.uint8))
    assert unmatched_poor_fraction(run_matching(full)) == 0
    assert unmatched_poor_fraction(run_matching(empty)) == 1


def test_matched_pairs_are_poor_rich_adjacent():
    for seed in range(8):
        a = random_subset_function(12, seed=seed)
        st = run_matching(a)
        half = st.size
        for x in range(half):
            d = int(st.matched_dir[x])
            if not d:
                continue
            y = x ^ (1 << (d - 1))
            assert int(st.matched_dir[y]) == d
            kx, ky = Status(int(st.kinds[x])), Status(int(st.kinds[y]))
            assert {kx, ky} == {Status.POOR, Status.RICH}


def test_poor_unmatched_nonincreasing():
    for seed in range(5):
        st = run_matching(random_subset_function(14, seed=seed))
        poor = [p for p, _ in st.round_stats]
        assert all(a >= b for a, b in zip(poor, poor[1:]))


def test_injection_valid_and_mostly_in_set():
    stable_c = []
    for n in (16, 20, 24):
        a = random_subset_function(n, seed=n)
        st = run_matching(a)
        img = build_injection(st)
        assert injection_is_valid(st, img)
        in_a = float(a.values()[img].mean())
        stable_c.append(n * (1 - in_a))
    # Pr[image in set] = 1 - c/n with c stable and small
    assert all(c < 2.0 for c in stable_c)
    assert max(stable_c) / min(stable_c) < 1.5


def test_injection_cases():
    a = BooleanFunction.from_ones(3, [0, 4, 1, 7])
    st = run_matching(a)
    img = build_injection(st)
    # mixed 10 extends into the set, mixed 11 extends into the set
    x10 = parse_point("10").bits
    assert int(img[x10]) in (x10, x10 + 4)
    assert a.value(int(img[x10])) == 1
    # unmatched rich 00 -> 00|1, unmatched poor 01 -> 01|0
    assert int(img[parse_point("00").bits]) == parse_point("001").bits
    assert int(img[parse_point("01").bits]) == parse_point("010").bits


def test_curve_statistics_n16():
    cv = recursion_curve(16, trials=20, seed=11)
    p, q = cv.p_mean(), cv.q_mean()
    assert abs(p[0] - 0.25) <= 0.01
    assert abs(q[0] - 0.25) <= 0.01
    assert abs(p[1] - 0.1875) <= 0.01
    for i in range(cv.rounds):
        assert abs(p[i + 1] - p[i] * (1 - p[i])) <= 0.01
    for i in range(cv.rounds + 1):
        assert abs(p[i] - q[i]) <= 0.01
    assert cv.p_hat.shape == (20, cv.rounds + 1)


def test_curve_deterministic():
    a = recursion_curve(10, trials=3, seed=4)
    b = recursion_curve(10, trials=3, seed=4)
    assert np.array_equal(a.p_hat, b.p_hat)
    assert np.array_equal(a.q_hat, b.q_hat)


def test_unmatched_poor_mean_below_2_over_n():
    cv = recursion_curve(20, trials=30, seed=2)
    final = cv.p_hat[:, -1]
    se = final.std(ddof=1) / 30 ** 0.5
    assert final.mean() < 2 / 20 + 3 * se


def test_dict_to_random_on_dictator_itself():
    f = BooleanFunction.from_values(
        10, BooleanFunction.dictator(10).values(), balanced=True)
    phi = build_dict_to_random(f)
    assert is_mapping_between(phi, BooleanFunction.dictator(10), f)
    t = phi.table()
    d = popcount_array((t ^ np.arange(1 << 10)).astype(np.uint64))
    assert int(d.max()) <= 2


def test_dict_to_random_law_and_distance():
    n = 14
    f = random_balanced(n, seed=3)
    res = build_dict_to_random_details(f)
    assert is_mapping_between(res.mapping, BooleanFunction.dictator(n), f)
    t = res.mapping.table()
    d = popcount_array((t ^ np.arange(1 << n)).astype(np.uint64))
    assert float((d <= 2).mean()) >= 1 - 5 / n
    assert res.unmatched_poor_fraction < 0.2


def test_dict_to_random_requires_balanced():
    with pytest.raises(ValueError):
        build_dict_to_random(BooleanFunction.from_ones(4, [0, 1, 2]))


def test_dict_to_random_seeded_repair_still_valid():
    n = 12
    f = random_balanced(n, seed=5)
    base = build_dict_to_random(f)
    seeded = build_dict_to_random(f, seed=99)
    for phi in (base, seeded):
        assert is_mapping_between(phi, BooleanFunction.dictator(n), f)
    again = build_dict_to_random(f, seed=99)
    assert np.array_equal(seeded.table(), again.table())


def test_random_to_random_composition():
    n = 14
    f = random_balanced(n, seed=21)
    g = random_balanced(n, seed=22)
    comp = build_random_to_random(f, g)
    assert is_mapping_between(comp, f, g)
    t = comp.table()
    d = popcount_array((t ^ np.arange(1 << n)).astype(np.uint64))
    assert float((d >= 4).mean()) <= 10 / n
    assert float(stretch_report(comp).avg) <= 20


def test_random_to_random_same_function():
    f = random_balanced(10, seed=8)
    comp = build_random_to_random(f, f)
    assert is_mapping_between(comp, f, f)
