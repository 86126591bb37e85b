"""Relation-labeled, weighted event graph over lexemes.

Edges carry a salience weight: a smoothed local mutual information score
computed from pair frequencies.  Both query directions are stored, so the
typical dependents of a head (``as-head``) and the typical heads of a
dependent (``as-dependent``) can be ranked with the same weights.
"""

from __future__ import annotations

import logging
import math
import struct
from dataclasses import dataclass
from pathlib import Path

from .corpus import CountTables, MarginalTotals

logger = logging.getLogger(__name__)

DIRECTIONS = ("as-head", "as-dependent")

_MAGIC = b"EVGR"
_FOOTER = b"EVGX"
_VERSION = 1


class GraphFormatError(ValueError):
    """A graph file is truncated, corrupted or of an unsupported version."""


def lmi_alpha(
    f_pair: float,
    f_w1: float,
    f_w2: float,
    f_rel: float,
    totals: MarginalTotals,
    alpha: float,
) -> float:
    """Smoothed local mutual information of a (w1, rel, w2) pair.

    Computes ``f(w1,w2,s) * ln( P(w1,w2,s) / (P(w1) * P_a(w2) * P(s)) )``
    where the dependent-slot probability is smoothed,
    ``P_a(x) = f(x)^a / sum_x f(x)^a``.  With ``alpha = 1`` this reduces
    to plain local mutual information.  The smoothing tempers the bias of
    mutual information toward rare events.
    """
    if f_pair <= 0 or f_w1 <= 0 or f_w2 <= 0 or f_rel <= 0:
        raise ValueError("all counts must be positive")
    if totals.pairs <= 0 or totals.words <= 0 or totals.words_alpha <= 0:
        raise ValueError("all totals must be positive")
    p_joint = f_pair / totals.pairs
    p_head = f_w1 / totals.words
    p_dep = (f_w2 ** alpha) / totals.words_alpha
    p_rel = f_rel / totals.pairs
    return f_pair * math.log(p_joint / (p_head * p_dep * p_rel))


@dataclass(frozen=True)
class GraphConfig:
    alpha: float = 0.75
    min_freq: int = 5

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.min_freq < 1:
            raise ValueError(f"min_freq must be positive, got {self.min_freq}")


def _rank_sort(entries: list[tuple[str, float]]) -> None:
    entries.sort(key=lambda e: (-e[1], e[0]))


class EventGraph:
    """Directed multigraph with per-(cue, relation) ranked neighbor lists.

    ``edges`` maps ``(head, relation)`` to dependents and ``inverse`` maps
    ``(dependent, relation)`` to heads; the two tables are exact
    transposes.  Every stored weight is positive: below-chance pairs are
    dropped at build time because only top-ranked associates are ever
    consumed.
    """

    def __init__(self, edges=None, inverse=None, config: GraphConfig | None = None):
        self.edges: dict[tuple[str, str], list[tuple[str, float]]] = edges or {}
        self.inverse: dict[tuple[str, str], list[tuple[str, float]]] = inverse or {}
        self.config = config or GraphConfig()
        self.build_stats: dict | None = None

    @classmethod
    def from_counts(cls, counts: CountTables, config: GraphConfig | None = None) -> "EventGraph":
        """Weigh and filter the count tables into a queryable graph.

        Pairs below ``config.min_freq`` and pairs with non-positive
        salience are dropped; each surviving pair yields one forward and
        one inverse edge.  Iteration is key-sorted so identical tables
        give identical graphs regardless of insertion order.
        """
        config = config or GraphConfig()
        totals = counts.totals(config.alpha)
        edges: dict[tuple[str, str], list[tuple[str, float]]] = {}
        inverse: dict[tuple[str, str], list[tuple[str, float]]] = {}
        seen = below = nonpositive = kept = 0
        for (w1, rel, w2), count in sorted(counts.pair_counts.items()):
            seen += 1
            if count < config.min_freq:
                below += 1
                continue
            sigma = lmi_alpha(
                count,
                counts.word_counts[w1],
                counts.word_counts[w2],
                counts.rel_counts[rel],
                totals,
                config.alpha,
            )
            if sigma <= 0.0:
                nonpositive += 1
                continue
            kept += 1
            edges.setdefault((w1, rel), []).append((w2, sigma))
            inverse.setdefault((w2, rel), []).append((w1, sigma))
        for entries in edges.values():
            _rank_sort(entries)
        for entries in inverse.values():
            _rank_sort(entries)
        graph = cls(edges, inverse, config)
        graph.build_stats = {
            "pairs_seen": seen,
            "below_min_freq": below,
            "weighed": seen - below,
            "dropped_nonpositive": nonpositive,
            "edges_kept": kept,
        }
        return graph

    @property
    def n_edges(self) -> int:
        return sum(len(v) for v in self.edges.values())

    def syntagmatic_neighbors(self, cue: str, rel: str, direction: str, n: int) -> list[tuple[str, float]]:
        """Top-``n`` associates of ``cue`` under ``rel``, salience-ranked.

        ``direction`` selects whether the cue is queried as the head of
        the relation (returning dependents) or as the dependent
        (returning heads).  Unknown cues or relations yield an empty
        list; absence is the signal, not an error.
        """
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        table = self.edges if direction == "as-head" else self.inverse
        return list(table.get((cue, rel), ())[:n])

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventGraph):
            return NotImplemented
        return (
            self.edges == other.edges
            and self.inverse == other.inverse
            and self.config == other.config
        )

    # -- serialization ----------------------------------------------------

    def save(self, path) -> None:
        """Write a versioned binary image of the graph.

        Only forward edges are stored (the inverse table is an exact
        transpose and is rebuilt on load).  Sections are key-sorted, so
        the same graph always produces identical bytes.
        """
        records = []
        for (w1, rel) in sorted(self.edges):
            for w2, sigma in self.edges[(w1, rel)]:
                records.append((w1, rel, w2, sigma))
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<I", _VERSION))
            fh.write(struct.pack("<d", self.config.alpha))
            fh.write(struct.pack("<I", self.config.min_freq))
            fh.write(struct.pack("<Q", len(records)))
            for w1, rel, w2, sigma in records:
                for text in (w1, rel, w2):
                    data = text.encode("utf-8")
                    fh.write(struct.pack("<H", len(data)))
                    fh.write(data)
                fh.write(struct.pack("<d", sigma))
            fh.write(_FOOTER)

    @classmethod
    def load(cls, path) -> "EventGraph":
        """Read a graph image; any truncation or trailing garbage is fatal."""
        path = Path(path)
        with open(path, "rb") as fh:
            def take(n: int) -> bytes:
                data = fh.read(n)
                if len(data) != n:
                    raise GraphFormatError(f"truncated graph file: {path}")
                return data

            def take_str() -> str:
                (length,) = struct.unpack("<H", take(2))
                return take(length).decode("utf-8")

            if take(4) != _MAGIC:
                raise GraphFormatError(f"not a graph file: {path}")
            (version,) = struct.unpack("<I", take(4))
            if version != _VERSION:
                raise GraphFormatError(f"unsupported graph version {version} in {path}")
            (alpha,) = struct.unpack("<d", take(8))
            (min_freq,) = struct.unpack("<I", take(4))
            (n_records,) = struct.unpack("<Q", take(8))
            edges: dict[tuple[str, str], list[tuple[str, float]]] = {}
            inverse: dict[tuple[str, str], list[tuple[str, float]]] = {}
            for _ in range(n_records):
                w1 = take_str()
                rel = take_str()
                w2 = take_str()
                (sigma,) = struct.unpack("<d", take(8))
                edges.setdefault((w1, rel), []).append((w2, sigma))
                inverse.setdefault((w2, rel), []).append((w1, sigma))
            if take(4) != _FOOTER:
                raise GraphFormatError(f"corrupted graph footer: {path}")
            if fh.read(1):
                raise GraphFormatError(f"trailing bytes after graph footer: {path}")
        for entries in edges.values():
            _rank_sort(entries)
        for entries in inverse.values():
            _rank_sort(entries)
        return cls(edges, inverse, GraphConfig(alpha=alpha, min_freq=min_freq))

    def export_text(self, fh) -> None:
        """Write a sorted TSV view: cue, relation, direction, neighbor, weight."""
        for (w1, rel) in sorted(self.edges):
            for w2, sigma in self.edges[(w1, rel)]:
                fh.write(f"{w1}\t{rel}\tas-head\t{w2}\t{sigma:.9g}\n")
        for (w2, rel) in sorted(self.inverse):
            for w1, sigma in self.inverse[(w2, rel)]:
                fh.write(f"{w2}\t{rel}\tas-dependent\t{w1}\t{sigma:.9g}\n")
