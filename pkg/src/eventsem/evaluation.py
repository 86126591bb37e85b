"""Benchmark protocols: definition ranking (MAP) and typicality correlation.

The ranking protocol composes relative-clause definitions and ranks them
against target terms, scored with mean average precision.  The
typicality protocol composes role-labeled event tuples up to the final
argument, scores that argument, and correlates the scores with human
ratings via Spearman's rho.  Items containing out-of-vocabulary words
are dropped and reported through a coverage figure rather than failing
the run.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from .baselines import DEFAULT_K_NEIGHBORS, additive, smoothed_additive
from .composition import ROOT_ROLE, Composer, ComposerConfig
from .embeddings import EmbeddingStore, cosine
from .graph import EventGraph

logger = logging.getLogger(__name__)

SBJ_ROLE = "sbj"
OBJ_ROLE = "dobj"

COMBINATIONS = (
    "verb",
    "arg",
    "head-verb",
    "head-arg",
    "verb-arg",
    "head-verb-arg",
)


class DatasetFormatError(ValueError):
    """A dataset file violates the expected tab-separated layout."""


# -- metrics ---------------------------------------------------------------


def average_precision(ranking, relevant) -> float:
    """Average precision of a ranking against a set of relevant ids.

    Equals ``(1/|relevant|) * sum_k Prec(k) * rel(k)``; 1.0 exactly when
    every relevant id occupies the top ranks.
    """
    relevant = set(relevant)
    if not relevant:
        raise ValueError("relevant set must not be empty")
    pool = set(ranking)
    if not relevant <= pool:
        missing = sorted(relevant - pool)
        raise ValueError(f"relevant ids missing from ranking: {missing}")
    hits = 0
    acc = 0.0
    for k, item in enumerate(ranking, start=1):
        if item in relevant:
            hits += 1
            acc += hits / k
    return acc / len(relevant)


def map_score(average_precisions) -> float:
    """Arithmetic mean of per-term average precision values."""
    values = [float(v) for v in average_precisions]
    if not values:
        raise ValueError("need at least one average precision value")
    return sum(values) / len(values)


def spearman(xs, ys) -> float:
    """Spearman rank correlation (average ranks for ties).

    Raises on length mismatch, fewer than three points, or a constant
    input vector, for which the correlation is undefined.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape:
        raise ValueError(f"length mismatch: {xs.shape} vs {ys.shape}")
    if xs.size < 3:
        raise ValueError(f"need at least 3 points, got {xs.size}")
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        raise ValueError("correlation undefined for constant input")
    rho, _ = scipy.stats.spearmanr(xs, ys)
    return float(rho)


# -- dataset records ---------------------------------------------------------


@dataclass(frozen=True)
class RelpronItem:
    item_id: int
    term: str
    function: str  # "SBJ" | "OBJ"
    head_noun: str
    verb: str
    argument: str


@dataclass(frozen=True)
class DTFitItem:
    item_id: int
    roles: tuple[tuple[str, str], ...]  # (role, lexeme); final entry is judged
    rating: float
    condition: str  # "typical" | "atypical"
    subset: str     # "Patients" | "Locations"


def load_relpron(path) -> list[RelpronItem]:
    """Read tab-separated rows: term, function, head noun, verb, argument."""
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise DatasetFormatError(f"{path}:{lineno}: expected 5 columns, got {len(cols)}")
            term, function, head_noun, verb, argument = cols
            function = function.upper()
            if function not in ("SBJ", "OBJ"):
                raise DatasetFormatError(f"{path}:{lineno}: function must be SBJ or OBJ, got {cols[1]!r}")
            if not all(cols):
                raise DatasetFormatError(f"{path}:{lineno}: empty field")
            items.append(RelpronItem(len(items), term, function, head_noun, verb, argument))
    return items


def load_dtfit(path) -> list[DTFitItem]:
    """Read tab-separated rows: role:lexeme tokens, rating, condition, subset."""
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 6:
                raise DatasetFormatError(f"{path}:{lineno}: expected at least 6 columns, got {len(cols)}")
            *role_cols, rating_col, condition, subset = cols
            roles = []
            for col in role_cols:
                role, sep, lex = col.rpartition(":")
                if not sep or not role or not lex:
                    raise DatasetFormatError(f"{path}:{lineno}: malformed role token {col!r}")
                roles.append((role, lex))
            if len(roles) < 3:
                raise DatasetFormatError(f"{path}:{lineno}: need at least 3 role entries")
            try:
                rating = float(rating_col)
            except ValueError:
                raise DatasetFormatError(f"{path}:{lineno}: unparseable rating {rating_col!r}") from None
            if not 1.0 <= rating <= 7.0:
                raise DatasetFormatError(f"{path}:{lineno}: rating {rating} outside [1, 7]")
            if condition not in ("typical", "atypical"):
                raise DatasetFormatError(f"{path}:{lineno}: bad condition {condition!r}")
            if subset not in ("Patients", "Locations"):
                raise DatasetFormatError(f"{path}:{lineno}: bad subset {subset!r}")
            items.append(DTFitItem(len(items), tuple(roles), rating, condition, subset))
    return items


def relpron_tokens(item: RelpronItem, combination: str) -> list[tuple[str, str]]:
    """Words of a definition in clause order, with their clause roles.

    Subject relative clauses read head noun, verb, argument; object
    relative clauses read head noun, argument, verb.  The head noun
    fills the clause slot the term itself would fill.
    """
    if combination not in COMBINATIONS:
        raise ValueError(f"unknown combination {combination!r}")
    if item.function == "SBJ":
        ordered = [
            ("head", item.head_noun, SBJ_ROLE),
            ("verb", item.verb, ROOT_ROLE),
            ("arg", item.argument, OBJ_ROLE),
        ]
    else:
        ordered = [
            ("head", item.head_noun, OBJ_ROLE),
            ("arg", item.argument, SBJ_ROLE),
            ("verb", item.verb, ROOT_ROLE),
        ]
    wanted = set(combination.split("-"))
    return [(lex, role) for slot, lex, role in ordered if slot in wanted]


def relpron_target_role(item: RelpronItem) -> str:
    return SBJ_ROLE if item.function == "SBJ" else OBJ_ROLE


# -- models ------------------------------------------------------------------


class AdditiveModel:
    """Role-blind vector addition."""

    name = "additive"

    def __init__(self, store: EmbeddingStore):
        self.store = store

    def compose(self, tokens):
        return additive([lex for lex, _ in tokens], self.store)

    def score(self, state, target: str, target_role: str) -> float:
        return cosine(self.store[target], state)


class SmoothedAdditiveModel:
    """Vector addition enriched with paradigmatic neighbors."""

    name = "smoothed"

    def __init__(self, store: EmbeddingStore, k: int = DEFAULT_K_NEIGHBORS):
        self.store = store
        self.k = k

    def compose(self, tokens):
        return smoothed_additive([lex for lex, _ in tokens], self.store, self.k)

    def score(self, state, target: str, target_role: str) -> float:
        return cosine(self.store[target], state)


class StructuredModel:
    """Graph-augmented composition scored on both representation tiers.

    By default the expectation side of the score is restricted to the
    target argument's role, mirroring evaluation settings in which
    predictions about unexpressed arguments are not consulted.
    """

    name = "sdm"

    def __init__(
        self,
        graph: EventGraph,
        store: EmbeddingStore,
        config: ComposerConfig | None = None,
        restrict_to_target_role: bool = True,
    ):
        self.store = store
        self.composer = Composer(graph, store, config)
        self.restrict_to_target_role = restrict_to_target_role

    def compose(self, tokens):
        return self.composer.process(self.composer.new_sr(), tokens)

    def score(self, state, target: str, target_role: str) -> float:
        restrict = target_role if self.restrict_to_target_role else None
        return self.composer.score_target(state, target, restrict_role=restrict)


# -- reports -----------------------------------------------------------------


@dataclass
class EvalReport:
    metric: float | None
    coverage: float
    n_items: int
    n_used: int
    dropped: list[int] = field(default_factory=list)
    per_item: list = field(default_factory=list)
    breakdown: dict = field(default_factory=dict)
    rankings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "coverage": self.coverage,
            "n_items": self.n_items,
            "n_used": self.n_used,
            "dropped": list(self.dropped),
            "breakdown": dict(sorted(self.breakdown.items())),
            "per_item": [list(entry) for entry in self.per_item],
            "rankings": {term: list(ranking) for term, ranking in sorted(self.rankings.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# -- protocols ---------------------------------------------------------------


def eval_relpron(model, items, combination: str) -> EvalReport:
    """Rank every definition against every term; report MAP over terms.

    For each item the words of the selected combination (plus the term)
    must be in vocabulary, otherwise the item is dropped and counted
    against coverage.  Ranking ties are broken by item id, so the metric
    is reproducible.
    """
    if not items:
        raise ValueError("no items to evaluate")
    if combination not in COMBINATIONS:
        raise ValueError(f"unknown combination {combination!r}")

    retained = []
    dropped = []
    for item in items:
        needed = [item.term] + [lex for lex, _ in relpron_tokens(item, combination)]
        if all(word in model.store for word in needed):
            retained.append(item)
        else:
            dropped.append(item.item_id)
    coverage = len(retained) / len(items)
    if not retained:
        logger.warning("all %d items dropped for vocabulary coverage", len(items))
        return EvalReport(None, 0.0, len(items), 0, dropped)

    states = {item.item_id: model.compose(relpron_tokens(item, combination)) for item in retained}
    relevant: dict[str, set[int]] = {}
    for item in retained:
        relevant.setdefault(item.term, set()).add(item.item_id)

    per_term = []
    rankings = {}
    for term in sorted(relevant):
        scored = [
            (model.score(states[item.item_id], term, relpron_target_role(item)), item.item_id)
            for item in retained
        ]
        scored.sort(key=lambda entry: (-entry[0], entry[1]))
        ranking = [item_id for _, item_id in scored]
        rankings[term] = ranking
        per_term.append((term, average_precision(ranking, relevant[term])))

    metric = map_score([ap for _, ap in per_term])
    return EvalReport(
        metric=metric,
        coverage=coverage,
        n_items=len(items),
        n_used=len(retained),
        dropped=dropped,
        per_item=[[term, ap] for term, ap in per_term],
        rankings=rankings,
    )


def _safe_spearman(xs, ys, label: str) -> float | None:
    try:
        return spearman(xs, ys)
    except ValueError as exc:
        logger.warning("correlation for %s undefined: %s", label, exc)
        return None


def eval_dtfit(model, items) -> EvalReport:
    """Score each tuple's final argument and correlate with the ratings.

    Composition never sees the judged filler: the model receives the
    tuple truncated before its final role entry.  The report carries the
    overall correlation plus per-condition figures.
    """
    if not items:
        raise ValueError("no items to evaluate")
    retained = []
    dropped = []
    for item in items:
        needed = [lex for _, lex in item.roles]
        if all(word in model.store for word in needed):
            retained.append(item)
        else:
            dropped.append(item.item_id)
    coverage = len(retained) / len(items)
    if not retained:
        logger.warning("all %d items dropped for vocabulary coverage", len(items))
        return EvalReport(None, 0.0, len(items), 0, dropped)

    per_item = []
    scores = []
    ratings = []
    for item in retained:
        tokens = [(lex, role) for role, lex in item.roles[:-1]]
        target_role, target = item.roles[-1]
        state = model.compose(tokens)
        score = model.score(state, target, target_role)
        per_item.append([item.item_id, score])
        scores.append(score)
        ratings.append(item.rating)

    metric = _safe_spearman(scores, ratings, "all items")
    breakdown = {}
    for condition in ("typical", "atypical"):
        xs = [s for s, item in zip(scores, retained) if item.condition == condition]
        ys = [item.rating for item in retained if item.condition == condition]
        breakdown[condition] = _safe_spearman(xs, ys, condition) if xs else None

    return EvalReport(
        metric=metric,
        coverage=coverage,
        n_items=len(items),
        n_used=len(retained),
        dropped=dropped,
        per_item=per_item,
        breakdown=breakdown,
    )
