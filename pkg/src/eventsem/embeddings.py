"""Dense word vectors keyed by lexeme, with cosine-space queries.

Lexemes are keyed as ``lemma_TAG`` with coarse tags N (nouns), V (verbs),
J (adjectives) and R (adverbs), e.g. ``book_N``.  A store is immutable
after loading and safe for concurrent reads.
"""

from __future__ import annotations

import io
import logging
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

COARSE_TAGS = ("N", "V", "J", "R")


class OutOfVocabularyError(KeyError):
    """A lexeme required by an operation is missing from the store."""


def lexeme_key(lemma: str, tag: str) -> str:
    """Build a store key from a lemma and a coarse POS tag."""
    return f"{lemma.lower()}_{tag}"


def cosine(a, b) -> float:
    """Cosine similarity of two equal-length vectors, clipped to [-1, 1].

    Raises ValueError if the shapes differ or either vector has zero norm;
    a zero-norm input has no direction and no meaningful similarity.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine is undefined for zero-norm vectors")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def weighted_centroid(items: Iterable[tuple[Sequence[float], float]]) -> np.ndarray:
    """L2-normalized weighted mean of ``(vector, weight)`` pairs.

    Weights must be non-negative and sum to a positive value.  The result
    is normalized so that a single-item centroid is exactly the unit
    vector of that item.
    """
    vectors = []
    weights = []
    for vec, w in items:
        w = float(w)
        if w < 0.0:
            raise ValueError(f"negative centroid weight: {w}")
        vectors.append(np.asarray(vec, dtype=np.float64))
        weights.append(w)
    if not vectors:
        raise ValueError("cannot build a centroid from an empty list")
    total = math.fsum(weights)
    if total <= 0.0:
        raise ValueError("centroid weights must sum to a positive value")
    mean = np.zeros_like(vectors[0])
    for vec, w in zip(vectors, weights):
        mean += vec * w
    mean /= total
    norm = np.linalg.norm(mean)
    if norm == 0.0:
        raise ValueError("centroid has zero norm (weighted vectors cancel)")
    return mean / norm


class EmbeddingStore:
    """Immutable map from lexeme key to a fixed-dimension vector."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int, skipped_lines: int = 0):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        self.dim = int(dim)
        self.skipped_lines = int(skipped_lines)
        self._vectors: dict[str, np.ndarray] = {}
        for key, vec in vectors.items():
            arr = np.asarray(vec, dtype=np.float64)
            if arr.shape != (self.dim,):
                raise ValueError(f"vector for {key!r} has shape {arr.shape}, expected ({self.dim},)")
            arr = arr.copy()
            arr.flags.writeable = False
            self._vectors[key] = arr

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, key: str) -> bool:
        return key in self._vectors

    def __getitem__(self, key: str) -> np.ndarray:
        try:
            return self._vectors[key]
        except KeyError:
            raise OutOfVocabularyError(key) from None

    def get(self, key: str, default=None):
        return self._vectors.get(key, default)

    def keys(self):
        return self._vectors.keys()

    def nearest_neighbors(self, word: str, k: int) -> list[tuple[str, float]]:
        """The ``k`` stored entries most cosine-similar to ``word``.

        The query word itself is excluded.  Entries are sorted by
        similarity descending, ties broken lexicographically by key so
        the ranking is reproducible across runs.  Zero-norm entries are
        not comparable and never appear in the result.
        """
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        query = self[word]
        if np.linalg.norm(query) == 0.0:
            raise ValueError(f"query vector for {word!r} has zero norm")
        scored = []
        for key, vec in self._vectors.items():
            if key == word:
                continue
            if np.linalg.norm(vec) == 0.0:
                continue
            scored.append((key, cosine(query, vec)))
        scored.sort(key=lambda entry: (-entry[1], entry[0]))
        return scored[:k]


def load_word2vec_text(source) -> EmbeddingStore:
    """Parse a word2vec text stream into an :class:`EmbeddingStore`.

    The expected format is a header line ``<count> <dim>`` followed by
    one ``<token> <dim floats>`` line per entry (UTF-8, whitespace
    separated).  A malformed header is fatal; malformed entry lines and
    duplicate tokens are skipped and counted in ``store.skipped_lines``.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_word2vec_text(fh)
    if isinstance(source, (bytes, bytearray)):
        return load_word2vec_text(io.StringIO(source.decode("utf-8")))
    if hasattr(source, "read") and isinstance(source.read(0), bytes):
        source = io.TextIOWrapper(source, encoding="utf-8")

    header = source.readline()
    parts = header.split()
    if len(parts) != 2:
        raise ValueError(f"malformed word2vec header: {header!r}")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"malformed word2vec header: {header!r}") from None
    if count < 0 or dim < 1:
        raise ValueError(f"malformed word2vec header: {header!r}")

    vectors: dict[str, np.ndarray] = {}
    skipped = 0
    for line in source:
        fields = line.split()
        if not fields:
            continue
        token, values = fields[0], fields[1:]
        if len(values) != dim:
            logger.debug("skipping %r: expected %d components, got %d", token, dim, len(values))
            skipped += 1
            continue
        try:
            vec = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError:
            logger.debug("skipping %r: unparseable component", token)
            skipped += 1
            continue
        if token in vectors:
            logger.debug("skipping duplicate token %r", token)
            skipped += 1
            continue
        vectors[token] = vec
    if skipped:
        logger.warning("skipped %d malformed or duplicate embedding lines", skipped)
    if count and len(vectors) != count:
        logger.warning("header declared %d entries, parsed %d", count, len(vectors))
    return EmbeddingStore(vectors, dim=dim, skipped_lines=skipped)
