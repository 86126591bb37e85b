"""Incremental construction of structured sentence representations.

A representation carries three tiers: a list of discourse referents, a
running sum of input-word embeddings (the context-independent tier), and
a set of role-indexed expectations activated from the event graph.  Each
expectation keeps one ranked filler list per processed cue plus a
centroid over the top entries of those lists; the centroids are averaged
into a single expectation vector used for scoring.

Processing a ``(lexeme, role)`` pair updates all tiers in order: the
embedding is added to the running sum, the overtly filled role is
removed from the expectations (and stays masked), fresh neighbor lists
are retrieved from the graph for every still-open role, and newly
retrieved lists are re-ranked by cosine against the role centroid built
from earlier cues, so that knowledge activated later coheres with what
is already in context.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from . import corpus
from .embeddings import EmbeddingStore, cosine, weighted_centroid
from .graph import EventGraph

logger = logging.getLogger(__name__)

ROOT_ROLE = "root"

# Roles that introduce a discourse referent: everything nominal, i.e. all
# canonical roles except the verbal root and adjectival modification.
_NON_REFERENT_ROLES = (ROOT_ROLE, "amod")

SALIENCE = "salience"
COSINE = "cosine"


@dataclass
class RankedList:
    """A scored filler list; ``kind`` records what the scores mean."""

    entries: list[tuple[str, float]]
    kind: str = SALIENCE


@dataclass
class RoleExpectation:
    role: str
    lists: list[RankedList] = field(default_factory=list)
    centroid: np.ndarray | None = None


@dataclass
class SemanticRepresentation:
    referents: list[tuple[str, str]] = field(default_factory=list)
    terms: list[tuple[str, str]] = field(default_factory=list)
    lex_sum: np.ndarray | None = None
    expectations: dict[str, RoleExpectation] = field(default_factory=dict)
    expectation_vector: np.ndarray | None = None
    filled_roles: set = field(default_factory=set)


def forward_rerank(
    entries: list[tuple[str, float]],
    centroid: np.ndarray,
    store: EmbeddingStore,
) -> list[tuple[str, float]]:
    """Re-score candidates by cosine to a role centroid and re-sort.

    Candidates without an embedding are dropped.  Ties are broken
    lexicographically so the ranking is deterministic.
    """
    rescored = []
    for lex, _ in entries:
        vec = store.get(lex)
        if vec is None:
            continue
        rescored.append((lex, cosine(vec, centroid)))
    rescored.sort(key=lambda e: (-e[1], e[0]))
    return rescored


def _list_weights(ranked: RankedList, k: int) -> list[tuple[str, float]]:
    """Top-k entries of a list with non-negative centroid weights.

    Salience scores are positive by construction and are used as-is;
    cosine scores are shifted by +1 so weights stay non-negative while
    preserving their order.
    """
    top = ranked.entries[:k]
    if ranked.kind == COSINE:
        return [(lex, score + 1.0) for lex, score in top]
    return [(lex, score) for lex, score in top]


class Composer:
    """Builds semantic representations against a graph and a vector store."""

    def __init__(
        self,
        graph: EventGraph,
        store: EmbeddingStore,
        config: "ComposerConfig | None" = None,
        roles: tuple[str, ...] | None = None,
    ):
        self.graph = graph
        self.store = store
        self.config = config or ComposerConfig()
        if roles is None:
            roles = corpus.DEFAULT_WHITELIST
        # Expectations are tracked for every whitelisted role plus the
        # verbal root slot; iteration order is fixed for reproducibility.
        self.role_order: tuple[str, ...] = (ROOT_ROLE,) + tuple(r for r in roles if r != ROOT_ROLE)

    def new_sr(self) -> SemanticRepresentation:
        return SemanticRepresentation(lex_sum=np.zeros(self.store.dim, dtype=np.float64))

    def process(self, sr: SemanticRepresentation, tokens) -> SemanticRepresentation:
        for lex, role in tokens:
            self.process_token(sr, lex, role)
        return sr

    def process_token(self, sr: SemanticRepresentation, lex: str, role: str) -> SemanticRepresentation:
        """Integrate one ``(lexeme, role)`` pair into the representation."""
        if role not in self.role_order:
            raise ValueError(f"unknown role label: {role!r}")

        # 1. context-independent tier and referents
        vec = self.store.get(lex)
        if vec is None:
            logger.warning("no embedding for %r; lexical tier unchanged", lex)
        else:
            sr.lex_sum = sr.lex_sum + vec
        sr.terms.append((lex, role))
        if role not in _NON_REFERENT_ROLES:
            sr.referents.append((f"u{len(sr.referents) + 1}", lex))

        # 2. the slot is now overtly filled: drop and mask its expectation
        sr.expectations.pop(role, None)
        sr.filled_roles.add(role)

        # 3./4. activate event knowledge for every still-open role
        depth = self.config.retrieval_depth
        for target_role in self.role_order:
            if target_role in sr.filled_roles:
                continue
            if target_role == ROOT_ROLE:
                # A nominal cue expects heads that take it under its own
                # role; the graph is queried in the inverse direction.
                retrieved = self.graph.syntagmatic_neighbors(lex, role, "as-dependent", depth)
            else:
                retrieved = self.graph.syntagmatic_neighbors(lex, target_role, "as-head", depth)
            if not retrieved:
                continue
            expectation = sr.expectations.get(target_role)
            new_list = RankedList(entries=retrieved, kind=SALIENCE)
            if expectation is not None and expectation.centroid is not None:
                reranked = forward_rerank(retrieved, expectation.centroid, self.store)
                if not reranked:
                    continue
                new_list = RankedList(entries=reranked, kind=COSINE)
            if expectation is None:
                expectation = RoleExpectation(role=target_role)
                sr.expectations[target_role] = expectation
            if self.config.backward_rerank and expectation.lists:
                self._backward_rerank(expectation, new_list)
            expectation.lists.append(new_list)
            expectation.centroid = self._role_centroid(expectation)

        # 5. refresh the aggregate expectation vector
        self._refresh_expectation_vector(sr)
        return sr

    def _backward_rerank(self, expectation: RoleExpectation, new_list: RankedList) -> None:
        """Re-rank the existing lists by cosine to the new list's centroid."""
        anchor = RoleExpectation(role=expectation.role, lists=[new_list])
        new_centroid = self._role_centroid(anchor)
        if new_centroid is None:
            return
        updated = []
        for ranked in expectation.lists:
            entries = forward_rerank(ranked.entries, new_centroid, self.store)
            if entries:
                updated.append(RankedList(entries=entries, kind=COSINE))
        expectation.lists = updated

    def _role_centroid(self, expectation: RoleExpectation) -> np.ndarray | None:
        items = []
        for ranked in expectation.lists:
            for lex, weight in _list_weights(ranked, self.config.k_centroid):
                vec = self.store.get(lex)
                if vec is None:
                    continue
                items.append((vec, weight))
        if not items:
            return None
        try:
            return weighted_centroid(items)
        except ValueError:
            # degenerate case: weights all zero or vectors cancel exactly
            return None

    def _refresh_expectation_vector(self, sr: SemanticRepresentation) -> None:
        centroids = [
            sr.expectations[role].centroid
            for role in sorted(sr.expectations)
            if sr.expectations[role].centroid is not None
        ]
        if not centroids:
            sr.expectation_vector = None
            return
        mean = np.zeros(self.store.dim, dtype=np.float64)
        for c in centroids:
            mean += c
        mean /= len(centroids)
        norm = np.linalg.norm(mean)
        sr.expectation_vector = mean / norm if norm > 0.0 else None

    def score_target(self, sr: SemanticRepresentation, target: str, restrict_role: str | None = None) -> float:
        """Similarity of a candidate word to the representation.

        The score adds the cosine against the lexical sum and the cosine
        against the expectation vector; a missing expectation vector
        contributes zero, so the score is defined whenever the lexical
        tier is.  With ``restrict_role``, only that role's centroid is
        used as the expectation vector.
        """
        vec = self.store[target]
        if np.linalg.norm(sr.lex_sum) == 0.0:
            raise ValueError("representation has no lexical content to score against")
        score = cosine(vec, sr.lex_sum)
        if restrict_role is not None:
            expectation = sr.expectations.get(restrict_role)
            context = expectation.centroid if expectation is not None else None
        else:
            context = sr.expectation_vector
        if context is not None:
            score += cosine(vec, context)
        return score


@dataclass(frozen=True)
class ComposerConfig:
    retrieval_depth: int = 50
    k_centroid: int = 20
    backward_rerank: bool = False

    def __post_init__(self):
        if self.retrieval_depth < 1:
            raise ValueError(f"retrieval_depth must be positive, got {self.retrieval_depth}")
        if self.k_centroid < 1:
            raise ValueError(f"k_centroid must be positive, got {self.k_centroid}")
        if self.k_centroid > self.retrieval_depth:
            raise ValueError("k_centroid must not exceed retrieval_depth")


def trace(sr: SemanticRepresentation, top_m: int = 10) -> dict:
    """Serializable snapshot of a representation's current state.

    Field order is fixed and role sections are key-sorted, so repeated
    identical runs serialize to identical bytes.
    """
    roles = []
    for role in sorted(sr.expectations):
        expectation = sr.expectations[role]
        roles.append(
            {
                "role": role,
                "centroid": expectation.centroid is not None,
                "lists": [
                    {
                        "kind": ranked.kind,
                        "top": [[lex, score] for lex, score in ranked.entries[:top_m]],
                    }
                    for ranked in expectation.lists
                ],
            }
        )
    return {
        "terms": [[lex, role] for lex, role in sr.terms],
        "referents": [[rid, lex] for rid, lex in sr.referents],
        "filled_roles": sorted(sr.filled_roles),
        "expectations": roles,
        "expectation_vector": sr.expectation_vector is not None,
    }


def trace_json(sr: SemanticRepresentation, top_m: int = 10) -> str:
    return json.dumps(trace(sr, top_m=top_m))
