import math

import numpy as np
import pytest

from betakw.errors import DomainError
from betakw.mc import (McConfig, default_workers, replicate_outcomes, replicate_rng,
                       reproduce_table, simulate_pcs)


def test_config_validation():
    with pytest.raises(DomainError):
        McConfig("beta", (0.5, 2), 1)
    with pytest.raises(DomainError):
        McConfig("beta", (0.5, 2), 20, reps=0)
    with pytest.raises(DomainError):
        McConfig("beta", (0.5, 2), 20, master_seed=-1)
    with pytest.raises(DomainError):
        McConfig("beta", (0, 2), 20)


def test_workers_do_not_enter_equality():
    assert McConfig("beta", (0.5, 2), 20, workers=1) == McConfig("beta", (0.5, 2), 20, workers=8)


def test_replicate_streams_are_stateless():
    a = replicate_rng(5, 17).random(4)
    b = replicate_rng(5, 17).random(4)
    c = replicate_rng(5, 18).random(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_worker_env(monkeypatch):
    monkeypatch.setenv("BETAKW_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("BETAKW_WORKERS", "many")
    assert default_workers() >= 1


def test_determinism_across_workers():
    cfg = McConfig("kumaraswamy", (0.7, 2.5), 30, reps=600, master_seed=11)
    runs = [replicate_outcomes(cfg, w) for w in (1, 4, 8)]
    runs.append(replicate_outcomes(cfg, 1))
    for r in runs[1:]:
        assert np.array_equal(runs[0], r)
    results = {simulate_pcs(cfg, w) for w in (1, 4, 8)}
    assert len(results) == 1


def test_result_invariants():
    cfg = McConfig("beta", (0.5, 2.5), 40, reps=500, master_seed=3)
    res = simulate_pcs(cfg, 1)
    used = res.reps - res.fit_failures
    assert res.empirical_pcs == res.successes / used
    assert res.std_err == pytest.approx(
        math.sqrt(res.empirical_pcs * (1 - res.empirical_pcs) / used), rel=1e-15)
    assert 0.0 <= res.empirical_pcs <= 1.0
    assert not res.failure_warning


def test_coin_flip_on_intersection():
    res = simulate_pcs(McConfig("beta", (1, 4), 50, reps=5000, master_seed=42))
    assert res.asymptotic_pcs == 0.5
    assert abs(res.empirical_pcs - 0.5) <= 3 * res.std_err


def test_self_consistency_beta_null():
    res = simulate_pcs(McConfig("beta", (0.2, 2.5), 200, reps=5000, master_seed=42))
    assert abs(res.empirical_pcs - res.asymptotic_pcs) <= 3 * res.std_err


@pytest.mark.slow
def test_binomial_coverage():
    hits = 0
    for seed in range(50):
        res = simulate_pcs(McConfig("beta", (0.2, 2.5), 200, reps=400, master_seed=1000 + seed))
        p = res.asymptotic_pcs
        sigma = math.sqrt(p * (1 - p) / (res.reps - res.fit_failures))
        hits += abs(res.empirical_pcs - p) <= 3 * sigma
    assert hits >= 45


@pytest.mark.slow
def test_monotone_in_n():
    prev = None
    for n in (20, 60, 150, 400):
        res = simulate_pcs(McConfig("kumaraswamy", (0.2, 2.5), n, reps=10_000, master_seed=9))
        if prev is not None:
            slack = 2 * math.hypot(prev.std_err, res.std_err)
            assert res.empirical_pcs >= prev.empirical_pcs - slack
        prev = res


def test_reproduce_table_moment_shape():
    tab = reproduce_table(1)
    assert [r["shape"] for r in tab.rows] == [0.2, 0.5, 0.7, 1.2, 1.5, 2.0]
    assert {"am", "am_ref", "am_dev", "target_first"} <= set(tab.rows[0])
    assert tab.settings["second_shape"] == 2.5
    assert tab.warnings


def test_reproduce_table_printed_moments():
    for row in reproduce_table(1).rows:
        assert abs(row["target_first_dev"]) <= 5e-4
        assert abs(row["target_second_dev"]) <= 5e-4
        assert abs(row["am_dev"]) <= 5e-4
        assert abs(row["av_dev"]) <= 5e-4


def test_reproduce_table_sizes_printed_example():
    row = reproduce_table(3).rows[0]
    assert row["shape"] == 0.2
    assert row["n_p6"] == 14


def test_reproduce_table_sizes_convention():
    row = reproduce_table(3, {"shapes": [0.2]}).rows[0]
    assert row["n_p6"] == 15 and row["n_p6_ref"] == 14


def test_reproduce_table_pcs_override():
    tab = reproduce_table(5, {"b": 2.5, "shapes": [0.9], "sizes": [20], "reps": 0})
    assert not any("NON-NORMATIVE" in w for w in tab.warnings)
    row = tab.rows[0]
    assert row["asymptotic"] == pytest.approx(0.5071, abs=0.02)
    assert "empirical" not in row


def test_reproduce_table_pcs_default_warns():
    tab = reproduce_table(6, {"shapes": [2.0], "sizes": [20], "reps": 200, "seed": 4})
    assert any("NON-NORMATIVE" in w for w in tab.warnings)
    assert tab.settings == {"null_model": "kumaraswamy", "second_shape": 2.5,
                            "reps": 200, "seed": 4}
    assert 0.0 <= tab.rows[0]["empirical"] <= 1.0


def test_reproduce_table_rejects_unknown():
    with pytest.raises(DomainError):
        reproduce_table(7)
