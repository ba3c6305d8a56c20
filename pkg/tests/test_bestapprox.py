import io
from fractions import Fraction as F

import pytest

from threedist.alphas import golden, random_alphas
from threedist.arith import DistanceValue, HorizonError, Norm, RationalVector
from threedist.bestapprox import (
    EXISTS_INFINITELY,
    FOR_ALL,
    BestApproxSequence,
    SequenceTooShort,
    best_approximations_bruteforce,
    compute_best_approximations,
    contact_number,
    doubling_index,
    doubling_shortfalls,
    halving_check,
    orbit_distance,
    ratio_floor_check,
    verify_sum_inequality,
)

import oracles

FIB = [1, 2, 3, 5, 8, 13, 21]


@pytest.mark.parametrize(
    "alpha, q, expected",
    [("2/7", 3, F(1, 7)), ("2/7", 1, F(2, 7)), ("1/3,1/3", 3, F(0))],
)
def test_orbit_distance(alpha, q, expected):
    assert orbit_distance(alpha, q, Norm.LINF).value == expected


def test_golden_convergent_terms_match_exhaustive_scan():
    # 89 ties with 55 (both at distance 1/144), so strict records stop at 55
    expected_q, expected_r = oracles.best_approx([F(89, 144)], "linf", 100)
    assert expected_q == [1, 2, 3, 5, 8, 13, 21, 34, 55]
    for norm in Norm:
        seq = compute_best_approximations("89/144", norm, 100)
        assert seq.qs == expected_q
    seq = compute_best_approximations("89/144", Norm.LINF, 100)
    assert [r.value for r in seq.rs] == expected_r


def test_two_sevenths():
    seq = compute_best_approximations("2/7", Norm.L1, 6)
    assert seq.qs == [1, 3]
    assert [r.value for r in seq.rs] == [F(2, 7), F(1, 7)]
    assert not seq.hit_zero


def test_diagonal_thirds_short_horizon():
    seq = compute_best_approximations("1/3,1/3", Norm.LINF, 2)
    assert seq.qs == [1]
    assert seq.rs[0].value == F(1, 3)


def test_horizon_guard_and_integral_alpha():
    with pytest.raises(HorizonError):
        compute_best_approximations("2/7", Norm.LINF, 7)
    with pytest.raises(ValueError):
        compute_best_approximations("3,1", Norm.LINF, 1)


def test_unguarded_scan_stops_at_zero():
    seq = compute_best_approximations("2/7", Norm.LINF, 20, guard=False)
    assert seq.qs == [1, 3, 7]
    assert seq.hit_zero
    seq.check_invariants()


@pytest.mark.parametrize("norm", list(Norm))
@pytest.mark.parametrize("alpha", ["3/17,5/13", "11/97,31/89,2/7", "123/1009"])
def test_scan_matches_fraction_bruteforce(alpha, norm):
    a = RationalVector.parse(alpha)
    q_max = min(400, a.denominator_lcm() - 1)
    fast = compute_best_approximations(a, norm, q_max)
    assert fast.terms == best_approximations_bruteforce(a, norm, q_max).terms
    assert fast.qs == oracles.best_approx(a.coords, norm.value, q_max)[0]


def test_scan_across_chunk_boundaries(monkeypatch):
    import threedist.bestapprox as ba

    alpha = random_alphas(11, 1, 2)[0]
    whole = compute_best_approximations(alpha, Norm.L2, 5000)
    monkeypatch.setattr(ba, "CHUNK", 37)
    assert compute_best_approximations(alpha, Norm.L2, 5000).terms == whole.terms


def test_record_property_by_rescan():
    alpha = random_alphas(3, 1, 2)[0]
    seq = compute_best_approximations(alpha, Norm.LINF, 3000)
    seq.check_invariants()
    qs = seq.qs
    j = 0
    for q in range(1, 3001):
        while j + 1 < len(qs) and qs[j + 1] <= q:
            j += 1
        if q not in qs:
            assert orbit_distance(alpha, q, Norm.LINF) >= seq.rs[j]


def test_sum_inequality_fibonacci():
    rep = verify_sum_inequality(BestApproxSequence.from_terms(FIB), 2, FOR_ALL)
    assert rep.passed and rep.violations == []
    assert rep.checked_range == (1, 5)

    rep = verify_sum_inequality(BestApproxSequence.from_terms(FIB[:4]), 1, FOR_ALL)
    assert not rep.passed
    assert rep.violations == [1, 2, 3]


def test_sum_inequality_exists_mode_records_witnesses():
    seq = BestApproxSequence.from_terms([1, 2, 3, 4, 7, 8, 9, 17])
    rep = verify_sum_inequality(seq, 2, EXISTS_INFINITELY)
    assert rep.witnesses == [1, 3, 6]
    assert rep.passed
    assert rep.to_dict()["witness_density"] == pytest.approx(3 / 6)


def test_sum_inequality_too_short():
    with pytest.raises(SequenceTooShort):
        verify_sum_inequality(BestApproxSequence.from_terms([1, 2, 3]), 2)


def test_sum_shift_4_on_sampled_planar_l2_alpha():
    checked = 0
    for alpha in random_alphas(2024, 6, 2):
        seq = compute_best_approximations(alpha, Norm.L2, 200_000)
        assert alpha.coords[0].denominator > 10**6
        if len(seq) < 6:
            continue
        rep = verify_sum_inequality(seq, 4, FOR_ALL)
        assert rep.passed
        checked += rep.checked
        assert doubling_index(seq) <= 4
    assert checked > 0


@pytest.mark.parametrize(
    "norm, d, K",
    [(Norm.LINF, 1, 2), (Norm.LINF, 2, 8), (Norm.LINF, 3, 26), (Norm.L2, 1, 2), (Norm.L2, 2, 6),
     (Norm.L2, 3, 12), (Norm.L2, 4, 24), (Norm.L2, 5, None), (Norm.L1, 2, None)],
)
def test_contact_number_table(norm, d, K):
    assert contact_number(norm, d) == K


def test_contact_number_linf_square_configuration():
    # the 8 unit translates by {-1,0,1}^2 \ {0} touch the unit square and
    # are pairwise at sup-distance >= 1 (interiors disjoint)
    pts = [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0)]
    for a in pts:
        assert max(abs(c) for c in a) == 1
        for b in pts:
            if a != b:
                assert max(abs(x - y) for x, y in zip(a, b)) >= 1
    assert len(pts) == contact_number(Norm.LINF, 2)


def test_doubling_index():
    assert doubling_index(BestApproxSequence.from_terms(FIB[:6])) == 2
    assert doubling_index(BestApproxSequence.from_terms([1, 2, 4, 8, 16])) == 1
    with pytest.raises(SequenceTooShort):
        doubling_index(BestApproxSequence.from_terms([1]))
    assert doubling_shortfalls(BestApproxSequence.from_terms(FIB), 1) == [2, 3, 4, 5, 6]


def test_halving_check():
    seq = compute_best_approximations("89/144", Norm.LINF, 143)
    assert halving_check(seq, 5).passed

    seq = BestApproxSequence.from_terms([1, 2, 3], [F(1, 2), F(1, 3), F(1, 5)])
    rep = halving_check(seq, 1)
    assert 1 in rep.violations
    assert not rep.passed


def test_halving_check_l2_uses_squares():
    # squared distances 1, 1/4: r_2 = r_1 / 2 exactly, so no violation
    seq = BestApproxSequence.from_terms([1, 2], [F(1), F(1, 4)], norm=Norm.L2)
    assert halving_check(seq, 1).passed
    seq = BestApproxSequence.from_terms([1, 2], [F(1), F(1, 3)], norm=Norm.L2)
    assert halving_check(seq, 1).violations == [1]


def test_halving_sampled_planar_linf():
    seq = compute_best_approximations(golden(30, dim=2), Norm.LINF, 10**6)
    assert len(seq) >= 26
    assert halving_check(seq, 25).passed


def test_ratio_floor_check():
    seq = compute_best_approximations("89/144", Norm.LINF, 143)
    rep = ratio_floor_check(seq)
    assert rep.passed
    rs = [r.value for r in seq.rs]
    assert all(rs[i - 1] // rs[i] == 1 for i in range(1, len(rs) - 1))

    with pytest.raises(SequenceTooShort):
        ratio_floor_check(compute_best_approximations("2/7", Norm.LINF, 6))
    with pytest.raises(ValueError):
        ratio_floor_check(compute_best_approximations("89/144", Norm.L2, 143))


def test_ratio_floor_detects_violation():
    seq = BestApproxSequence.from_terms([1, 2, 3], [F(1, 2), F(1, 10), F(1, 11)])
    assert ratio_floor_check(seq).violations == [2]


def test_line_format_round_trip():
    seq = compute_best_approximations("3/17,5/13", Norm.L2, 200)
    text = seq.to_lines()
    first = text.splitlines()[1]
    assert '"r_denominator"' in first and '"q": 1' in first
    back = BestApproxSequence.load(io.StringIO(text))
    assert back == seq


def test_invariant_checker_catches_bad_sequences():
    bad = BestApproxSequence.from_terms([1, 3, 2])
    with pytest.raises(AssertionError):
        bad.check_invariants()
    bad = BestApproxSequence.from_terms([1, 2], [F(1, 3), F(1, 3)])
    with pytest.raises(AssertionError):
        bad.check_invariants()
