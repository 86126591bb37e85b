from pathlib import Path

import numpy as np
import pytest

from eventsem.composition import Composer, ComposerConfig
from eventsem.corpus import CorpusStats, CountTables, emit_pairs, extract_events, read_conllu
from eventsem.embeddings import EmbeddingStore, load_word2vec_text
from eventsem.graph import EventGraph, GraphConfig

DATA_DIR = Path(__file__).parent / "data"

MINI_CORPUS = DATA_DIR / "mini_corpus.conllu"
MINI_VECTORS = DATA_DIR / "mini_vectors.txt"
TOY_RELPRON = DATA_DIR / "toy_relpron.tsv"
TOY_DTFIT = DATA_DIR / "toy_dtfit.tsv"


def make_random_store(rng, n_words: int, dim: int, prefix: str = "w") -> EmbeddingStore:
    """Store of unit-free random vectors with zero-padded sortable keys."""
    vectors = {f"{prefix}{i:03d}_N": rng.normal(size=dim) for i in range(n_words)}
    return EmbeddingStore(vectors, dim=dim)


@pytest.fixture(scope="session")
def mini_store() -> EmbeddingStore:
    return load_word2vec_text(MINI_VECTORS)


@pytest.fixture(scope="session")
def mini_tables() -> CountTables:
    tables = CountTables()
    for sentence in read_conllu(MINI_CORPUS, CorpusStats()):
        for group in extract_events(sentence):
            for triple in emit_pairs(group):
                tables.add(triple)
    return tables


@pytest.fixture(scope="session")
def mini_graph(mini_tables) -> EventGraph:
    return EventGraph.from_counts(mini_tables, GraphConfig(alpha=0.75, min_freq=2))


@pytest.fixture()
def mini_composer(mini_graph, mini_store) -> Composer:
    return Composer(mini_graph, mini_store, ComposerConfig())


@pytest.fixture(scope="session")
def empty_graph() -> EventGraph:
    return EventGraph.from_counts(CountTables(), GraphConfig(alpha=0.75, min_freq=1))
