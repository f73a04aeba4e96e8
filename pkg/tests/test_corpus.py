"""Unit tests for the synthetic corpus, speaker split and CSV I/O."""
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from corpus import CorpusConfig, generate_corpus, read_corpus_csv, split_corpus, write_corpus_csv


def _cfg(**overrides):
    base = dict(
        num_speakers=6,
        subclusters_per_speaker=3,
        utterances_per_speaker=12,
        feature_dim=5,
        speaker_spread=4.0,
        subcluster_spread=2.0,
        noise_sigma=0.5,
        seed=1234,
    )
    base.update(overrides)
    return CorpusConfig(**base)


def test_generation_is_deterministic():
    a = generate_corpus(_cfg())
    b = generate_corpus(_cfg())
    assert a.equals(b)
    assert a.features.tobytes() == b.features.tobytes()
    assert not a.equals(generate_corpus(_cfg(seed=1235)))


def test_adding_speakers_keeps_earlier_ones():
    small = generate_corpus(_cfg(num_speakers=4))
    large = generate_corpus(_cfg(num_speakers=7))
    assert small.equals(large.subset(range(4)))


def test_default_shape_counts():
    cfg = _cfg(num_speakers=50, subclusters_per_speaker=4, utterances_per_speaker=200, feature_dim=32)
    corpus = generate_corpus(cfg)
    assert len(corpus) == 10000
    assert corpus.features.shape == (10000, 32)
    for speaker in range(50):
        styles = corpus.subcluster_ids[corpus.speaker_ids == speaker]
        assert len(styles) == 200
        assert np.array_equal(np.bincount(styles, minlength=4), [50, 50, 50, 50])


def test_zero_spread_collapses_speaker():
    corpus = generate_corpus(_cfg(subcluster_spread=0.0, noise_sigma=0.0))
    for speaker in corpus.speakers:
        rows = corpus.features[corpus.speaker_ids == speaker]
        assert np.all(rows == rows[0])


def test_noiseless_points_are_subcluster_means():
    corpus = generate_corpus(_cfg(noise_sigma=0.0))
    for speaker in corpus.speakers:
        rows = corpus.features[corpus.speaker_ids == speaker]
        assert len(np.unique(rows, axis=0)) == 3


def test_random_configs_give_finite_labelled_corpora():
    rng = np.random.default_rng(0)
    for _ in range(20):
        speaker_spread = float(rng.uniform(0.5, 5.0))
        cfg = _cfg(
            num_speakers=int(rng.integers(1, 6)),
            subclusters_per_speaker=int(rng.integers(1, 5)),
            utterances_per_speaker=int(rng.integers(1, 20)),
            feature_dim=int(rng.integers(1, 8)),
            speaker_spread=speaker_spread,
            subcluster_spread=float(rng.uniform(0, speaker_spread)),
            noise_sigma=float(rng.uniform(0, 2)),
            seed=int(rng.integers(0, 10_000)),
        )
        corpus = generate_corpus(cfg)
        assert len(corpus) == cfg.num_speakers * cfg.utterances_per_speaker
        assert np.all(np.isfinite(corpus.features))
        assert corpus.subcluster_ids.min() >= 0
        assert corpus.subcluster_ids.max() < cfg.subclusters_per_speaker


def test_config_validation():
    with pytest.raises(ValueError):
        _cfg(num_speakers=0)
    with pytest.raises(ValueError):
        _cfg(noise_sigma=-1.0)
    with pytest.raises(ValueError, match="subcluster_spread"):
        _cfg(subcluster_spread=4.0)


def test_iteration_yields_utterances():
    corpus = generate_corpus(_cfg(num_speakers=2, utterances_per_speaker=3))
    utts = list(corpus)
    assert len(utts) == 6
    assert utts[4].speaker_id == 1
    assert np.array_equal(utts[4].features, corpus.features[4])


def test_split_sizes_and_disjointness():
    corpus = generate_corpus(_cfg(num_speakers=110, utterances_per_speaker=2, feature_dim=2))
    train, held_out = split_corpus(corpus, 0.818, seed=3)
    assert len(train.speakers) == 90
    assert len(held_out.speakers) == 20
    assert not set(train.speakers) & set(held_out.speakers)
    assert set(train.speakers) | set(held_out.speakers) == set(range(110))
    again, _ = split_corpus(corpus, 0.818, seed=3)
    assert np.array_equal(train.speakers, again.speakers)


def test_split_rejects_empty_side():
    corpus = generate_corpus(_cfg(num_speakers=10))
    with pytest.raises(ValueError):
        split_corpus(corpus, 0.01, seed=0)
    with pytest.raises(ValueError):
        split_corpus(corpus, 1.0, seed=0)


def test_split_rejects_single_speaker():
    corpus = generate_corpus(_cfg(num_speakers=1))
    with pytest.raises(ValueError, match="at least 2 speakers"):
        split_corpus(corpus, 0.5, seed=0)


def test_csv_reload_is_exact(tmp_path):
    corpus = generate_corpus(_cfg())
    path = write_corpus_csv(corpus, tmp_path / "corpus.csv")
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header == "speaker_id,subcluster_id,f0,f1,f2,f3,f4"
    assert read_corpus_csv(path).equals(corpus)
    first = path.read_bytes()
    write_corpus_csv(generate_corpus(_cfg()), path)
    assert path.read_bytes() == first


def test_csv_rejects_missing_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("speaker_id,f0\n0,1.0\n", encoding="utf-8")
    with pytest.raises(ValueError, match="subcluster_id"):
        read_corpus_csv(path)
