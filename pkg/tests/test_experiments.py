import math
from itertools import combinations

import numpy as np
import pytest

from oracles import rank_int
from seqinv.gf2 import BitMatrix
from seqinv.hankel import BitSequence, build_system
from seqinv.experiments import (
    ExperimentConfig,
    TrialRecord,
    count_maximal_rank_subsets,
    estimate,
    moc_study,
    parse_generator,
    run,
    run_config,
    run_trial,
    trial_seed,
    wilson,
)


def brute_subsets(rows):
    r = rank_int(rows)
    n = len(rows[0])
    return sum(rank_int([[row[c] for c in cols] for row in rows]) == r for cols in combinations(range(n), r))


def test_config_parse():
    cfg = ExperimentConfig.parse(
        """
        # partial-sequence run
        generator = fsr:m=5
        N = 64
        M = 40
        d = 2
        trials = 3   # few
        seed = 9
        allow_constant = yes
        exact_cap = 1e4
        moc_N = 32, 64
        """
    )
    assert (cfg.generator, cfg.N, cfg.M, cfg.d, cfg.trials, cfg.seed) == ("fsr:m=5", 64, 40, 2, 3, 9)
    assert cfg.allow_constant and cfg.exact_cap == 10_000 and cfg.moc_lengths == (32, 64)


@pytest.mark.parametrize(
    "text",
    ["N=10\nM=20", "colour=red", "N", "generator=lfsr", "generator=fsr:m=8\nN=100", "allow_constant=maybe", "d=0"],
)
def test_config_rejects(text):
    with pytest.raises(ValueError):
        ExperimentConfig.parse(text)


def test_parse_generator():
    assert parse_generator("random") == ("random", {})
    assert parse_generator("perm:n=5") == ("perm", {"n": 5})
    with pytest.raises(ValueError):
        parse_generator("perm:m=5")


def test_subset_count_example():
    sys = build_system(BitSequence.from_str("0111000"), 3, 2)
    count, exact = count_maximal_rank_subsets(sys)
    assert exact and count == 7 == brute_subsets(sys.matrix().to_array().tolist())


def test_subset_count_matches_brute_force():
    rng = np.random.default_rng(6)
    for _ in range(40):
        rows = int(rng.integers(1, 7))
        cols = int(rng.integers(1, 11))
        arr = rng.integers(0, 2, (rows, cols))
        count, exact = count_maximal_rank_subsets(BitMatrix.from_array(arr))
        assert exact and count == brute_subsets(arr.tolist())


def test_subset_count_sampled():
    rng = np.random.default_rng(7)
    arr = rng.integers(0, 2, (8, 24))
    exact_count, _ = count_maximal_rank_subsets(BitMatrix.from_array(arr))
    est, exact = count_maximal_rank_subsets(BitMatrix.from_array(arr), exact_cap=10, samples=20000, seed=1)
    assert not exact
    assert est == pytest.approx(exact_count, rel=0.05)
    assert count_maximal_rank_subsets(BitMatrix.zeros(3, 4)) == (1, True)


def test_trial_seed_is_deterministic_and_distinct():
    assert trial_seed(1, 2) == trial_seed(1, 2)
    assert len({trial_seed(0, i) for i in range(100)}) == 100


def test_fsr_trial_capture_implies_correct():
    for i in range(10):
        rec = run_trial("fsr:m=5", 64, 48, 2, trial_seed(3, i))
        assert rec.mset == "P(5,2)"
        assert rec.r_M <= rec.r_N
        if rec.rank_captured:
            assert rec.inverse_correct


def test_perm_and_random_trials():
    rec = run_trial("perm:n=4", 64, 40, 1, 5)
    assert rec.rank_captured and rec.inverse_correct
    rec = run_trial("random", 128, 64, 2, 1, m=6)
    assert rec.r_M is not None and rec.subset_count is not None
    assert rec.inverse_correct in (True, False, None)
    with pytest.raises(ValueError):
        run_trial("fsr:m=6", 40, 30, 2, 0)
    bad = run_trial("random", 32, 8, 2, 0, m=8)
    assert bad.reason and bad.r_M is None


def test_run_is_deterministic():
    cfg = ExperimentConfig(generator="fsr:m=4", N=40, M=24, d=2, trials=4, seed=12)
    a, ra = run_config(cfg)
    b, rb = run_config(cfg)
    assert a == b and ra.to_dict() == rb.to_dict()
    assert [r.seed for r in run(cfg)] == [trial_seed(12, i) for i in range(4)]


def test_wilson():
    r = wilson(7, 10)
    assert r.value == 0.7 and r.low < 0.7 < r.high
    assert wilson(10, 10).high == pytest.approx(1.0)


def test_estimate_and_moc_study():
    recs = [
        TrialRecord(1, "random", 64, 32, "P(4,2)", 5, 5, True, True, 3, 7, 4, True),
        TrialRecord(2, "random", 64, 32, "P(4,2)", 4, 5, False, False, 3, 7, 2, True),
        TrialRecord(3, "random", 64, 32, "P(4,2)", 5, 5, True, None, 3, 9, 8, True),
    ]
    rep = estimate(recs)
    assert rep.trials == 3 and rep.indeterminate == 1
    assert rep.p0_estimate.count == 2 and rep.p_inv_estimate.total == 2
    assert rep.p_exp_estimate["value"] == pytest.approx((1 / 4 + 1 / 8) / 2)
    assert rep.conjectured_p_inv == pytest.approx(rep.p_exp_estimate["value"] * 2 / 3)
    assert rep.moc_stats[0].mean == pytest.approx(23 / 3)
    with pytest.raises(ValueError):
        estimate([])
    stats = moc_study([64], 20, seed=0)
    assert stats == moc_study([64], 20, seed=0)
    assert stats[0].benchmark == 2 * math.log2(64)
