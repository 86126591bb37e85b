"""Additive reference models for sentence composition.

Both baselines ignore role labels entirely: a sentence is the sum of its
word vectors, optionally enriched with each word's nearest neighbors.
"""

from __future__ import annotations

import logging

import numpy as np

from .embeddings import EmbeddingStore, OutOfVocabularyError

logger = logging.getLogger(__name__)

DEFAULT_K_NEIGHBORS = 5


def additive(words, store: EmbeddingStore) -> np.ndarray:
    """Sum of the embeddings of the in-vocabulary words.

    Words without an embedding are skipped with a warning; if every word
    is out of vocabulary there is nothing to compose and an error is
    raised.  Duplicates contribute once per occurrence.
    """
    total = np.zeros(store.dim, dtype=np.float64)
    hit = False
    for word in words:
        vec = store.get(word)
        if vec is None:
            logger.warning("no embedding for %r; skipped in additive composition", word)
            continue
        total += vec
        hit = True
    if not hit:
        raise OutOfVocabularyError(f"no in-vocabulary words among {list(words)!r}")
    return total


def smoothed_additive(words, store: EmbeddingStore, k: int = DEFAULT_K_NEIGHBORS) -> np.ndarray:
    """Additive composition enriched with each word's k nearest neighbors.

    Every in-vocabulary word contributes its own vector plus the vectors
    of its ``k`` most similar store entries; with ``k = 0`` this is
    exactly the plain additive model.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    total = np.zeros(store.dim, dtype=np.float64)
    hit = False
    for word in words:
        vec = store.get(word)
        if vec is None:
            logger.warning("no embedding for %r; skipped in smoothed composition", word)
            continue
        total += vec
        hit = True
        if k > 0:
            for neighbor, _ in store.nearest_neighbors(word, k):
                total += store[neighbor]
    if not hit:
        raise OutOfVocabularyError(f"no in-vocabulary words among {list(words)!r}")
    return total
