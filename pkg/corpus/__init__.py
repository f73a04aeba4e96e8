"""Synthetic speaker corpus with latent sub-styles."""
from .generator import CorpusConfig, SyntheticCorpus, Utterance, generate_corpus
from .split import split_corpus
from .csv_io import read_corpus_csv, write_corpus_csv

__all__ = [
    "CorpusConfig",
    "SyntheticCorpus",
    "Utterance",
    "generate_corpus",
    "split_corpus",
    "read_corpus_csv",
    "write_corpus_csv",
]
