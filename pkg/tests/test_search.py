import json

import pytest

from threedist.alphas import golden, random_alphas, sample_streams, sqrt2
from threedist.arith import Norm
from threedist.gaps import oracle_count
from threedist.search import sample_doubling_violations, search_high_g


def test_planar_sup_norm_witness():
    found = search_high_g(2, Norm.LINF, 3, 20, seed=1, N_max=500)
    assert found
    for w in found:
        assert w.verified_by_oracle and w.g >= 3
        assert oracle_count(w.alpha, w.norm, w.N) == w.g
        assert w.g <= 2**2 + 1


def test_one_dimensional_golden_witness():
    found = search_high_g(1, Norm.L2, 3, 1, seed=0, N_max=500, extra_alphas=[golden(30)])
    assert any(w.alpha == golden(30) and w.g == 3 for w in found)


def test_unreachable_target_gives_empty_list():
    assert search_high_g(2, Norm.LINF, 100, 3, seed=0, N_max=200) == []


def test_search_is_deterministic():
    a = search_high_g(2, Norm.L1, 3, 8, seed=42, N_max=300)
    b = search_high_g(2, Norm.L1, 3, 8, seed=42, N_max=300)
    assert [w.to_dict() for w in a] == [w.to_dict() for w in b]


def test_witness_lines():
    w = search_high_g(2, Norm.LINF, 3, 5, seed=1, N_max=300)[0]
    lines = [json.loads(x) for x in w.to_lines().splitlines()]
    assert lines[0]["record"] == "header"
    assert lines[-1] == {"record": "witness", "N": w.N, "g": w.g, "verified_by_oracle": True}


def test_substreams_do_not_depend_on_sample_count():
    short = random_alphas(7, 3, 2)
    long = random_alphas(7, 10, 2)
    assert long[:3] == short
    assert sample_streams(7, 2)[1].integers(10**9) == sample_streams(7, 5)[1].integers(10**9)


def test_sampling_sqrt2_has_no_unit_shift_shortfalls():
    rep = sample_doubling_violations(1, Norm.LINF, 1, 2, seed=3, q_max=10**5, extra_alphas=[sqrt2(30)])
    row = rep.rows[0]
    assert row["alpha"] == str(sqrt2(30))
    assert row["checked"] > 0 and row["shortfalls"] == 0


def test_sampling_golden_shortfalls_everywhere():
    rep = sample_doubling_violations(1, Norm.LINF, 1, 1, seed=3, q_max=10**5, extra_alphas=[golden(30)])
    row = rep.rows[0]
    # q_1 = 1, q_2 = 2 gives equality; every later Fibonacci step is short
    assert row["shortfalls"] == row["checked"] - 1


def test_sampling_report_shape():
    rep = sample_doubling_violations(2, Norm.LINF, 1, 6, seed=9, q_max=20_000)
    doc = rep.to_dict()
    assert doc["parameters"]["prime"] == 1_000_003
    assert len(doc["rows"]) == 6
    assert all(r["shortfalls"] <= r["checked"] for r in doc["rows"])
    assert 0.0 <= doc["summary"]["fraction_with_shortfall"] <= 1.0
    assert rep.to_csv().splitlines()[0] == "sample,alpha,terms,checked,shortfalls"
    again = sample_doubling_violations(2, Norm.LINF, 1, 6, seed=9, q_max=20_000)
    assert again.to_dict() == doc


def test_sampling_requires_samples():
    with pytest.raises(ValueError):
        sample_doubling_violations(1, Norm.LINF, 1, 0, seed=0, q_max=100)
