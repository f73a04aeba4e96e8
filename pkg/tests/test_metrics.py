"""Unit tests for variance ratio, trials, EER, utilization and the report."""
import json
import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from corpus import CorpusConfig, generate_corpus
from encoder import EncoderConfig, init_model
from loss import LossConfig, SubCenterBank
from metrics import (
    build_report,
    build_trials,
    compute_eer,
    compute_eer_threshold,
    inter_class_variance,
    intra_class_variance,
    read_scores_csv,
    score_trials,
    subcenter_purity,
    subcenter_utilization,
    variance_ratio,
    write_report_json,
    write_scores_csv,
)


def _unit(angle):
    return [math.cos(angle), math.sin(angle)]


def _cos(a, b):
    return sum(x * y for x, y in zip(a, b)) / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))


def _means(emb, spk):
    out = {}
    for s in sorted(set(spk)):
        rows = [e for e, k in zip(emb, spk) if k == s]
        out[s] = [sum(col) / len(rows) for col in zip(*rows)]
    return out


def _pop_var(values):
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values) / len(values)


def _oracle_intra(emb, spk):
    means = _means(emb, spk)
    return _pop_var([_cos(e, means[s]) for e, s in zip(emb, spk)])


def _oracle_inter(emb, spk):
    means = _means(emb, spk)
    return _pop_var([_cos(e, means[o]) for e, s in zip(emb, spk) for o in means if o != s])


# --- variance ---

def test_intra_zero_for_identical_embeddings():
    emb = np.array([_unit(0.3)] * 3 + [_unit(2.0)] * 3)
    assert intra_class_variance(emb, [0, 0, 0, 1, 1, 1]) < 1e-20


def test_intra_zero_for_symmetric_pair():
    emb = np.array([_unit(0.4), _unit(-0.4)])
    assert intra_class_variance(emb, [7, 7]) < 1e-20


def test_intra_three_point_oracle():
    emb = [[1.0, 0.0], [0.6, 0.8], [0.0, 1.0]]
    assert abs(intra_class_variance(np.array(emb), [0, 0, 0]) - _oracle_intra(emb, [0, 0, 0])) < 1e-12


def test_degenerate_speaker_mean():
    emb = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
    with pytest.raises(ValueError, match="degenerate speaker mean"):
        intra_class_variance(emb, [0, 0, 1, 1])


def test_inter_zero_for_antipodal_speakers():
    emb = np.array([[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [-1.0, 0.0]])
    assert inter_class_variance(emb, [0, 0, 1, 1]) == 0.0
    with pytest.raises(ValueError, match="degenerate configuration"):
        variance_ratio(emb, [0, 0, 1, 1])


def test_inter_zero_for_symmetric_three_speakers():
    emb = np.array([_unit(0.0), _unit(2 * math.pi / 3), _unit(4 * math.pi / 3)] * 2)
    assert inter_class_variance(emb, [0, 1, 2, 0, 1, 2]) < 1e-20


def test_inter_needs_two_speakers():
    with pytest.raises(ValueError, match="at least 2 speakers"):
        inter_class_variance(np.array([[1.0, 0.0], [0.0, 1.0]]), [0, 0])


def test_variances_match_brute_force():
    rng = np.random.default_rng(8)
    for _ in range(10):
        emb = rng.standard_normal((30, 4))
        spk = rng.integers(0, 5, size=30)
        spk[:5] = np.arange(5)
        assert abs(intra_class_variance(emb, spk) - _oracle_intra(emb.tolist(), spk.tolist())) < 1e-12
        assert abs(inter_class_variance(emb, spk) - _oracle_inter(emb.tolist(), spk.tolist())) < 1e-12
        expected = _oracle_intra(emb.tolist(), spk.tolist()) / _oracle_inter(emb.tolist(), spk.tolist())
        assert abs(variance_ratio(emb, spk) - expected) < 1e-9 * max(1.0, expected)


def test_ratio_zero_for_collapsed_speakers():
    emb = np.array([_unit(0.0)] * 3 + [_unit(1.0)] * 3 + [_unit(2.5)] * 3)
    assert variance_ratio(emb, [0] * 3 + [1] * 3 + [2] * 3) < 1e-12


def test_ratio_invariant_to_rotation_and_relabelling():
    rng = np.random.default_rng(4)
    emb = rng.standard_normal((40, 6))
    spk = np.repeat(np.arange(8), 5)
    q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    base = variance_ratio(emb, spk)
    assert abs(variance_ratio(emb @ q, spk) - base) < 1e-9
    assert abs(intra_class_variance(emb @ q, spk) - intra_class_variance(emb, spk)) < 1e-9
    assert abs(inter_class_variance(emb @ q, spk) - inter_class_variance(emb, spk)) < 1e-9
    assert abs(variance_ratio(emb, 100 - spk) - base) < 1e-12


# --- EER ---

def test_eer_examples():
    assert compute_eer([0.9, 0.8], [0.1, 0.2]) == 0.0
    assert abs(compute_eer([0.8, 0.4], [0.6, 0.2]) - 0.5) < 1e-12
    same = [0.1, 0.5, 0.9]
    assert abs(compute_eer(same, same) - 0.5) < 1e-12


def test_eer_empty_lists():
    with pytest.raises(ValueError):
        compute_eer([], [0.1])
    with pytest.raises(ValueError):
        compute_eer([0.1], [])


def test_eer_invariant_to_monotone_transform():
    rng = np.random.default_rng(1)
    pos = rng.normal(1.0, 1.0, 300)
    neg = rng.normal(0.0, 1.0, 400)
    base = compute_eer(pos, neg)
    assert 0.0 < base < 0.5
    assert abs(compute_eer(3 * pos + 1, 3 * neg + 1) - base) < 1e-12
    assert abs(compute_eer(np.exp(pos), np.exp(neg)) - base) < 1e-12


def test_eer_bracketed_by_threshold_sweep():
    rng = np.random.default_rng(2)
    for _ in range(50):
        pos = np.round(rng.normal(0.5, 0.3, int(rng.integers(1, 40))), 2)
        neg = np.round(rng.normal(0.0, 0.3, int(rng.integers(1, 40))), 2)
        grid = np.unique(np.concatenate([pos, neg]))
        thresholds = np.r_[grid[0] - 1, (grid[1:] + grid[:-1]) / 2, grid[-1] + 1]
        lower, upper = 0.0, 1.0
        for t in thresholds:
            frr = np.mean(pos < t)
            far = np.mean(neg >= t)
            lower = max(lower, min(frr, far))
            upper = min(upper, max(frr, far))
        eer = compute_eer(pos, neg)
        assert lower - 1e-12 <= eer <= upper + 1e-12


def test_eer_threshold_separates_at_crossing():
    eer, threshold = compute_eer_threshold([0.9, 0.8, 0.7], [0.1, 0.2, 0.75])
    assert abs(eer - 1 / 3) < 1e-12
    assert 0.2 <= threshold <= 0.8


# --- trials ---

def test_trials_tiny_exhaustive_case():
    emb = np.array([_unit(0.0), _unit(0.1), _unit(2.0), _unit(2.1)])
    trials = build_trials(emb, [0, 0, 1, 1], 2, seed=0)
    assert trials.num_target == 1
    assert trials.num_nontarget == 1


def test_trials_deterministic():
    rng = np.random.default_rng(0)
    emb = rng.standard_normal((60, 4))
    spk = np.repeat(np.arange(6), 10)
    a = build_trials(emb, spk, 100, seed=9)
    b = build_trials(emb, spk, 100, seed=9)
    assert np.array_equal(a.left_index, b.left_index)
    assert np.array_equal(a.right_index, b.right_index)
    assert np.array_equal(a.is_target, b.is_target)


def test_trials_counts_and_pair_validity():
    rng = np.random.default_rng(3)
    emb = rng.standard_normal((1000, 4))
    spk = np.repeat(np.arange(20), 50)
    trials = build_trials(emb, spk, 10000, seed=1)
    assert len(trials) == 10000
    assert trials.num_target == 5000
    assert trials.num_nontarget == 5000
    li, ri = trials.left_index, trials.right_index
    assert np.all(li != ri)
    assert np.array_equal(spk[li] == spk[ri], trials.is_target)
    pairs = {(min(a, b), max(a, b)) for a, b in zip(li.tolist(), ri.tolist())}
    assert len(pairs) == 10000


def test_trials_infeasible_request():
    emb = np.array([_unit(0.0), _unit(0.1), _unit(2.0), _unit(2.1)])
    with pytest.raises(ValueError, match="requested"):
        build_trials(emb, [0, 0, 1, 1], 6, seed=0)


def test_scoring_matches_cosine_and_is_chunk_independent():
    rng = np.random.default_rng(5)
    emb = rng.standard_normal((40, 3))
    spk = np.repeat(np.arange(4), 10)
    one = score_trials(build_trials(emb, spk, 50, seed=2))
    many = score_trials(build_trials(emb, spk, 50, seed=2), workers=3)
    assert np.allclose(one.scores, many.scores, rtol=0, atol=1e-15)
    shuffled = one.scores[rng.permutation(len(one))]
    assert abs(np.sum(shuffled) - np.sum(one.scores)) < 1e-12
    k = 7
    a, b = emb[one.left_index[k]], emb[one.right_index[k]]
    assert abs(one.scores[k] - _cos(a, b)) < 1e-12


def test_unscored_trials_refuse_scores():
    emb = np.array([_unit(0.0), _unit(0.1), _unit(2.0), _unit(2.1)])
    trials = build_trials(emb, [0, 0, 1, 1], 2, seed=0)
    with pytest.raises(ValueError, match="score_trials"):
        trials.target_scores()


# --- utilization and report ---

def _small_corpus():
    return generate_corpus(CorpusConfig(
        num_speakers=3, subclusters_per_speaker=3, utterances_per_speaker=12, feature_dim=4,
        speaker_spread=3.0, subcluster_spread=1.0, noise_sigma=0.2, seed=0,
    ))


def test_single_center_uses_one_subcenter():
    model = init_model(EncoderConfig(input_dim=4, hidden_dims=(8,), embedding_dim=4), 3, LossConfig())
    summary = subcenter_utilization(model, _small_corpus())
    assert np.array_equal(summary.per_class, [1, 1, 1])
    assert summary.mean == 1.0
    # balanced styles under one sub-center: majority share is 1 / K
    assert abs(subcenter_purity(model, _small_corpus()) - 1 / 3) < 1e-12


def test_dominant_subcenter_counts_once():
    model = init_model(EncoderConfig(input_dim=4, hidden_dims=(8,), embedding_dim=4), 3, LossConfig(subcenters=4))
    first = model.bank.weights[:, :1, :]
    model.bank = SubCenterBank(np.repeat(first, 4, axis=1))
    summary = subcenter_utilization(model, _small_corpus())
    assert np.array_equal(summary.per_class, [1, 1, 1])
    assert np.all(summary.assignments == 0)


def test_utilization_skips_unknown_speakers():
    model = init_model(EncoderConfig(input_dim=4, hidden_dims=(8,), embedding_dim=4), 2, LossConfig(subcenters=2))
    summary = subcenter_utilization(model, _small_corpus())
    assert len(summary.labels) == 24
    assert summary.per_class.shape == (2,)


def test_report_keys_and_files(tmp_path):
    rng = np.random.default_rng(6)
    emb = rng.standard_normal((30, 4))
    spk = np.repeat(np.arange(3), 10)
    trials = score_trials(build_trials(emb, spk, 40, seed=0))
    report = build_report(emb, spk, trials)
    data = json.loads(write_report_json(report, tmp_path / "metrics.json").read_text(encoding="utf-8"))
    for key in ("eer", "intra_var", "inter_var", "var_ratio", "utilization_mean", "utilization_per_class", "purity"):
        assert key in data
    assert data["utilization_mean"] is None
    assert 0.0 <= data["eer"] <= 1.0
    pos, neg = read_scores_csv(write_scores_csv(trials, tmp_path / "scores.csv"))
    assert np.array_equal(pos, trials.target_scores())
    assert np.array_equal(neg, trials.nontarget_scores())


def test_report_leaves_ratio_empty_when_inter_is_zero():
    emb = np.array([[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [-1.0, 0.0]])
    trials = score_trials(build_trials(emb, [0, 0, 1, 1], 2, seed=0))
    assert build_report(emb, [0, 0, 1, 1], trials).var_ratio is None
