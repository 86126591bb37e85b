"""Stream dependency-parsed corpora and count labeled head-dependent pairs.

The reader yields CoNLL-U sentences; event extraction groups a verb or
noun head with its whitelisted dependents; each group is flattened into
``(head, relation, dependent)`` triples, which are aggregated into the
frequency tables the graph builder consumes.

All stages are stateless per sentence, so corpora may be sharded across
workers and the resulting tables merged; merged tables are identical to
a single-pass aggregation regardless of shard order.
"""

from __future__ import annotations

import gzip
import io
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from .embeddings import lexeme_key

logger = logging.getLogger(__name__)

# Coarse content-POS tags; tokens with any other UPOS never participate.
UPOS_TO_TAG = {"NOUN": "N", "PROPN": "N", "VERB": "V", "ADJ": "J", "ADV": "R"}

DEFAULT_WHITELIST = (
    "sbj",
    "dobj",
    "iobj",
    "obl:loc",
    "obl:tmp",
    "obl:instr",
    "nmod",
    "amod",
)

# Raw treebank labels mapped to canonical roles.  Passive subjects map to
# dobj so that passivization does not corrupt agent/patient statistics.
DEFAULT_LABEL_MAP = {
    "nsubj": "sbj",
    "obj": "dobj",
    "dobj": "dobj",
    "iobj": "iobj",
    "nsubj:pass": "dobj",
    "nsubjpass": "dobj",
    "obl:tmod": "obl:tmp",
    "nmod:tmod": "obl:tmp",
    "nmod": "nmod",
    "amod": "amod",
    # Canonical labels pass through so pre-normalized input is accepted.
    "sbj": "sbj",
    "obl:loc": "obl:loc",
    "obl:tmp": "obl:tmp",
    "obl:instr": "obl:instr",
}

# Preposition-lexicalized obliques bucketed into roles.
DEFAULT_PREP_ROLES = {
    "in": "obl:loc",
    "at": "obl:loc",
    "on": "obl:loc",
    "with": "obl:instr",
}

_PREP_BASES = ("obl", "nmod", "prep")


@dataclass(frozen=True)
class RelationConfig:
    """Declarative mapping from raw dependency labels to canonical roles."""

    whitelist: tuple[str, ...] = DEFAULT_WHITELIST
    label_map: dict = field(default_factory=lambda: dict(DEFAULT_LABEL_MAP))
    prep_roles: dict = field(default_factory=lambda: dict(DEFAULT_PREP_ROLES))

    def canonical(self, deprel: str) -> str | None:
        """Canonical role for a raw label, or None if not whitelisted."""
        rel = deprel.lower()
        mapped = self.label_map.get(rel)
        if mapped is None:
            base, _, sub = rel.partition(":")
            if base in _PREP_BASES and sub in self.prep_roles:
                mapped = self.prep_roles[sub]
            else:
                mapped = self.label_map.get(base)
        if mapped is None or mapped not in self.whitelist:
            return None
        return mapped

    @classmethod
    def from_json(cls, path) -> "RelationConfig":
        """Load whitelist/label-map/preposition-map overrides from JSON."""
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(
            whitelist=tuple(data.get("whitelist", DEFAULT_WHITELIST)),
            label_map=dict(data.get("label_map", DEFAULT_LABEL_MAP)),
            prep_roles=dict(data.get("prep_roles", DEFAULT_PREP_ROLES)),
        )


@dataclass(frozen=True)
class ParsedToken:
    index: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class EventGroup:
    head: str
    head_role: str  # "verb-head" | "noun-head"
    participants: tuple[tuple[str, str], ...]  # (role, dependent lexeme)


@dataclass
class CorpusStats:
    sentences: int = 0
    skipped: int = 0


def _token_lexeme(token: ParsedToken) -> str:
    lemma = token.lemma if token.lemma and token.lemma != "_" else token.form
    return lexeme_key(lemma, UPOS_TO_TAG[token.upos])


def _parse_token_line(line: str) -> ParsedToken | None:
    """Parse one CoNLL-U token row; None for multiword/empty-node rows."""
    cols = line.split("\t")
    if len(cols) != 10:
        raise ValueError(f"expected 10 columns, got {len(cols)}")
    tid = cols[0]
    if "-" in tid or "." in tid:
        return None
    return ParsedToken(
        index=int(tid),
        form=cols[1],
        lemma=cols[2],
        upos=cols[3],
        head=int(cols[6]),
        deprel=cols[7],
    )


def _has_cycle(heads: dict[int, int]) -> bool:
    state = {i: 0 for i in heads}  # 0 unvisited, 1 on path, 2 cleared
    for start in heads:
        if state[start] == 2:
            continue
        path = []
        node = start
        while node != 0 and state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node]
        if node != 0 and state[node] == 1:
            return True
        for n in path:
            state[n] = 2
    return False


def _validate_sentence(tokens: list[ParsedToken]) -> list[ParsedToken]:
    if not tokens:
        raise ValueError("zero-length sentence")
    n = len(tokens)
    indexes = [t.index for t in tokens]
    if indexes != list(range(1, n + 1)):
        raise ValueError("token indexes are not contiguous from 1")
    heads = {}
    for t in tokens:
        if not 0 <= t.head <= n:
            raise ValueError(f"head {t.head} out of range for sentence of length {n}")
        heads[t.index] = t.head
    if _has_cycle(heads):
        raise ValueError("cyclic head links")
    return tokens


def read_conllu(source, stats: CorpusStats | None = None) -> Iterator[list[ParsedToken]]:
    """Yield sentences (token lists) from a CoNLL-U stream.

    ``source`` may be a path (``.gz`` transparently decompressed) or a
    text/binary file object.  Comment lines are ignored; multiword-token
    ranges and empty nodes are skipped.  A sentence containing any
    malformed row is skipped as a whole and counted in ``stats.skipped``
    rather than aborting the run.
    """
    if isinstance(source, (str, Path)):
        opener = gzip.open if str(source).endswith(".gz") else open
        with opener(source, "rt", encoding="utf-8") as fh:
            yield from read_conllu(fh, stats)
            return
    if hasattr(source, "read") and isinstance(source.read(0), bytes):
        source = io.TextIOWrapper(source, encoding="utf-8")
    if stats is None:
        stats = CorpusStats()

    pending: list[str] = []

    def finish(lines: list[str]) -> list[ParsedToken] | None:
        try:
            tokens = []
            for raw in lines:
                token = _parse_token_line(raw)
                if token is not None:
                    tokens.append(token)
            return _validate_sentence(tokens)
        except ValueError as exc:
            stats.skipped += 1
            logger.debug("skipping malformed sentence: %s", exc)
            return None

    for line in source:
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip():
            if pending:
                sentence = finish(pending)
                pending = []
                if sentence is not None:
                    stats.sentences += 1
                    yield sentence
            continue
        if line.startswith("#"):
            continue
        pending.append(line)
    if pending:
        sentence = finish(pending)
        if sentence is not None:
            stats.sentences += 1
            yield sentence


def extract_events(sentence: list[ParsedToken], relations: RelationConfig | None = None) -> list[EventGroup]:
    """Group each verb or noun head with its whitelisted dependents.

    Dependents are mapped to canonical roles and lexeme keys; tokens with
    non-content POS never participate.  Subjects of copular heads are
    dropped, since they are linked through the copula rather than taking
    part in an event headed by the noun.
    """
    if relations is None:
        relations = RelationConfig()
    children: dict[int, list[ParsedToken]] = {}
    for token in sentence:
        children.setdefault(token.head, []).append(token)

    groups = []
    for token in sentence:
        tag = UPOS_TO_TAG.get(token.upos)
        if tag not in ("N", "V"):
            continue
        deps = children.get(token.index, [])
        is_copular = any(d.deprel.lower().partition(":")[0] == "cop" for d in deps)
        participants = []
        for dep in deps:
            role = relations.canonical(dep.deprel)
            if role is None:
                continue
            if dep.upos not in UPOS_TO_TAG:
                continue
            if is_copular and role == "sbj":
                continue
            participants.append((role, _token_lexeme(dep)))
        if participants:
            groups.append(
                EventGroup(
                    head=_token_lexeme(token),
                    head_role="verb-head" if tag == "V" else "noun-head",
                    participants=tuple(participants),
                )
            )
    return groups


def emit_pairs(group: EventGroup) -> list[tuple[str, str, str]]:
    """Flatten a group into one (head, relation, dependent) triple per participant."""
    return [(group.head, role, dep) for role, dep in group.participants]


class MarginalTotals(NamedTuple):
    """Normalization constants for the association weighting."""

    pairs: float        # total number of pair observations
    words: float        # sum of per-word occurrence counts (both slots)
    words_alpha: float  # sum of per-word counts raised to alpha


class CountTables:
    """Frequency tables over (head, relation, dependent) observations.

    ``word_counts`` counts occurrences of a lexeme in either slot of a
    pair, ``rel_counts`` counts observations per relation, and ``total``
    is the grand total of pair observations.  Marginals always cover all
    observed pairs; ``apply_min_freq`` filters ``pair_counts`` only, so
    probabilities stay consistent with the underlying corpus.
    """

    def __init__(self, pair_counts=None, word_counts=None, rel_counts=None, total: int = 0):
        self.pair_counts: Counter = Counter(pair_counts or {})
        self.word_counts: Counter = Counter(word_counts or {})
        self.rel_counts: Counter = Counter(rel_counts or {})
        self.total = int(total)

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[str, str, str]]) -> "CountTables":
        tables = cls()
        add = tables.add
        for triple in triples:
            add(triple)
        return tables

    def add(self, triple: tuple[str, str, str], count: int = 1) -> None:
        w1, rel, w2 = triple
        self.pair_counts[triple] += count
        self.word_counts[w1] += count
        self.word_counts[w2] += count
        self.rel_counts[rel] += count
        self.total += count

    def merge(self, other: "CountTables") -> "CountTables":
        """Combine two shards; associative and commutative."""
        return CountTables(
            pair_counts=self.pair_counts + other.pair_counts,
            word_counts=self.word_counts + other.word_counts,
            rel_counts=self.rel_counts + other.rel_counts,
            total=self.total + other.total,
        )

    def apply_min_freq(self, min_freq: int) -> "CountTables":
        """Drop pairs observed fewer than ``min_freq`` times, keeping marginals."""
        if min_freq < 1:
            raise ValueError(f"min_freq must be positive, got {min_freq}")
        kept = {k: c for k, c in self.pair_counts.items() if c >= min_freq}
        return CountTables(
            pair_counts=kept,
            word_counts=self.word_counts,
            rel_counts=self.rel_counts,
            total=self.total,
        )

    def totals(self, alpha: float) -> MarginalTotals:
        # fsum gives a correctly rounded sum, independent of iteration order.
        return MarginalTotals(
            pairs=float(self.total),
            words=float(sum(self.word_counts.values())),
            words_alpha=math.fsum(c ** alpha for c in self.word_counts.values()),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountTables):
            return NotImplemented
        return (
            self.pair_counts == other.pair_counts
            and self.word_counts == other.word_counts
            and self.rel_counts == other.rel_counts
            and self.total == other.total
        )


def aggregate(triples: Iterable[tuple[str, str, str]], min_freq: int = 1) -> CountTables:
    """Count a triple stream and threshold pairs at ``min_freq``."""
    return CountTables.from_triples(triples).apply_min_freq(min_freq)


def save_counts(tables: CountTables, directory) -> None:
    """Write the tables as sorted TSV files (byte-identical across runs)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "pairs.tsv", "w", encoding="utf-8") as fh:
        for (w1, rel, w2), count in sorted(tables.pair_counts.items()):
            fh.write(f"{w1}\t{rel}\t{w2}\t{count}\n")
    with open(directory / "words.tsv", "w", encoding="utf-8") as fh:
        for word, count in sorted(tables.word_counts.items()):
            fh.write(f"{word}\t{count}\n")
    with open(directory / "rels.tsv", "w", encoding="utf-8") as fh:
        for rel, count in sorted(tables.rel_counts.items()):
            fh.write(f"{rel}\t{count}\n")
    with open(directory / "meta.tsv", "w", encoding="utf-8") as fh:
        fh.write(f"total\t{tables.total}\n")


def load_counts(directory) -> CountTables:
    directory = Path(directory)
    pair_counts = {}
    with open(directory / "pairs.tsv", "r", encoding="utf-8") as fh:
        for line in fh:
            w1, rel, w2, count = line.rstrip("\n").split("\t")
            pair_counts[(w1, rel, w2)] = int(count)
    word_counts = {}
    with open(directory / "words.tsv", "r", encoding="utf-8") as fh:
        for line in fh:
            word, count = line.rstrip("\n").split("\t")
            word_counts[word] = int(count)
    rel_counts = {}
    with open(directory / "rels.tsv", "r", encoding="utf-8") as fh:
        for line in fh:
            rel, count = line.rstrip("\n").split("\t")
            rel_counts[rel] = int(count)
    with open(directory / "meta.tsv", "r", encoding="utf-8") as fh:
        total = int(fh.readline().rstrip("\n").split("\t")[1])
    return CountTables(pair_counts, word_counts, rel_counts, total)
