"""Running the two benchmark protocols over all three models.

The definition-ranking protocol composes each relative-clause property
and ranks all properties against each target term (mean average
precision); the typicality protocol composes event tuples without
their final argument and correlates the score of that argument with
human ratings (Spearman's rho).  Everything here runs on an inline toy
corpus, so the absolute numbers only illustrate the mechanics.
"""

import numpy as np

from eventsem import (
    AdditiveModel,
    Composer,
    ComposerConfig,
    CountTables,
    EmbeddingStore,
    EventGraph,
    GraphConfig,
    SmoothedAdditiveModel,
    StructuredModel,
    eval_dtfit,
    eval_relpron,
)
from eventsem.evaluation import DTFitItem, RelpronItem

VECTORS = {
    "coffee_N":  [0.90, 0.05, 0.02, 0.08, 0.30, 0.02, 0.15],
    "beer_N":    [0.85, 0.03, 0.02, 0.10, 0.35, 0.01, 0.18],
    "tea_N":     [0.88, 0.06, 0.02, 0.07, 0.28, 0.02, 0.14],
    "drink_N":   [0.80, 0.04, 0.03, 0.06, 0.40, 0.02, 0.12],
    "book_N":    [0.04, 0.90, 0.03, 0.10, 0.02, 0.35, 0.02],
    "text_N":    [0.04, 0.85, 0.02, 0.05, 0.01, 0.32, 0.01],
    "student_N": [0.10, 0.30, 0.88, 0.12, 0.15, 0.25, 0.03],
    "teacher_N": [0.05, 0.25, 0.86, 0.10, 0.05, 0.18, 0.02],
    "pub_N":     [0.50, 0.02, 0.07, 0.80, 0.30, 0.01, 0.25],
    "library_N": [0.03, 0.45, 0.06, 0.85, 0.02, 0.25, 0.05],
    "place_N":   [0.10, 0.10, 0.05, 0.90, 0.05, 0.04, 0.10],
    "drink_V":   [0.70, 0.03, 0.08, 0.10, 0.88, 0.02, 0.10],
    "read_V":    [0.02, 0.70, 0.10, 0.08, 0.02, 0.88, 0.01],
    "serve_V":   [0.35, 0.03, 0.10, 0.30, 0.20, 0.01, 0.85],
}

PAIRS = {
    ("drink_V", "sbj", "student_N"): 6,
    ("drink_V", "dobj", "coffee_N"): 4,
    ("drink_V", "dobj", "beer_N"): 5,
    ("drink_V", "dobj", "tea_N"): 2,
    ("read_V", "sbj", "student_N"): 7,
    ("read_V", "dobj", "book_N"): 6,
    ("read_V", "obl:loc", "library_N"): 4,
    ("serve_V", "sbj", "pub_N"): 4,
    ("serve_V", "dobj", "beer_N"): 4,
    ("student_N", "dobj", "book_N"): 3,
    ("student_N", "obl:loc", "library_N"): 3,
}

RELPRON_ITEMS = [
    RelpronItem(0, "coffee_N", "OBJ", "drink_N", "drink_V", "student_N"),
    RelpronItem(1, "beer_N", "OBJ", "drink_N", "serve_V", "pub_N"),
    RelpronItem(2, "book_N", "OBJ", "text_N", "read_V", "student_N"),
    RelpronItem(3, "library_N", "SBJ", "place_N", "read_V", "book_N"),
    RelpronItem(4, "pub_N", "SBJ", "place_N", "serve_V", "beer_N"),
    RelpronItem(5, "student_N", "SBJ", "place_N", "read_V", "book_N"),
]

DTFIT_ITEMS = [
    DTFitItem(0, (("sbj", "student_N"), ("root", "drink_V"), ("dobj", "coffee_N")), 6.8, "typical", "Patients"),
    DTFitItem(1, (("sbj", "student_N"), ("root", "drink_V"), ("dobj", "book_N")), 1.5, "atypical", "Patients"),
    DTFitItem(2, (("sbj", "student_N"), ("root", "read_V"), ("dobj", "book_N")), 6.9, "typical", "Patients"),
    DTFitItem(3, (("sbj", "student_N"), ("root", "read_V"), ("dobj", "beer_N")), 1.3, "atypical", "Patients"),
    DTFitItem(4, (("sbj", "student_N"), ("root", "read_V"), ("dobj", "book_N"), ("obl:loc", "library_N")), 6.7, "typical", "Locations"),
    DTFitItem(5, (("sbj", "student_N"), ("root", "read_V"), ("dobj", "book_N"), ("obl:loc", "pub_N")), 2.0, "atypical", "Locations"),
]

store = EmbeddingStore({k: np.array(v) for k, v in VECTORS.items()}, dim=7)
tables = CountTables()
for key, count in PAIRS.items():
    tables.add(key, count)
graph = EventGraph.from_counts(tables, GraphConfig(alpha=0.75, min_freq=2))

models = [
    ("additive", AdditiveModel(store)),
    ("smoothed (k=2)", SmoothedAdditiveModel(store, k=2)),
    ("structured", StructuredModel(graph, store, ComposerConfig())),
]

print("definition ranking (mean average precision, higher is better)")
print("=" * 62)
for combination in ("verb", "head-arg", "head-verb-arg"):
    row = "  ".join(
        f"{name}={eval_relpron(model, RELPRON_ITEMS, combination).metric:.3f}"
        for name, model in models
    )
    print(f"  {combination:14s} {row}")

print()
print("typicality correlation (Spearman rho vs ratings)")
print("=" * 62)
for name, model in models:
    report = eval_dtfit(model, DTFIT_ITEMS)
    print(f"  {name:15s} rho={report.metric:.3f}  coverage={report.coverage:.0%}")
