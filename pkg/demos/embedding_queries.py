"""Working with the embedding store: cosine queries and centroids.

A tiny hand-crafted vector space over two semantic clusters (drinkable
things and readable things) shows the three query primitives the rest
of the package builds on: pairwise cosine similarity, nearest-neighbor
ranking, and weighted centroids.
"""

import numpy as np

from eventsem import EmbeddingStore, cosine, weighted_centroid

# 4-d toy vectors; the axes roughly mean drinkable / readable / human / place
VECTORS = {
    "coffee_N":  [0.90, 0.05, 0.02, 0.08],
    "beer_N":    [0.85, 0.03, 0.02, 0.10],
    "tea_N":     [0.88, 0.06, 0.02, 0.07],
    "book_N":    [0.04, 0.90, 0.03, 0.10],
    "novel_N":   [0.02, 0.88, 0.05, 0.06],
    "paper_N":   [0.05, 0.80, 0.04, 0.05],
    "student_N": [0.10, 0.30, 0.88, 0.12],
    "library_N": [0.03, 0.45, 0.06, 0.85],
}

store = EmbeddingStore({k: np.array(v) for k, v in VECTORS.items()}, dim=4)

print("pairwise cosine similarity")
print("=" * 40)
for a, b in [("coffee_N", "beer_N"), ("coffee_N", "book_N"), ("book_N", "novel_N")]:
    print(f"  cos({a:10s}, {b:10s}) = {cosine(store[a], store[b]):.3f}")

print()
print("nearest neighbors of book_N (similarity-ranked, ties by key)")
print("=" * 40)
for lexeme, sim in store.nearest_neighbors("book_N", 3):
    print(f"  {lexeme:12s} {sim:.3f}")

print()
print("weighted centroid of the drinkables")
print("=" * 40)
centroid = weighted_centroid([
    (store["coffee_N"], 3.0),   # weights could be salience scores
    (store["beer_N"], 2.0),
    (store["tea_N"], 1.0),
])
print(f"  centroid (unit norm): {np.round(centroid, 3)}")
print(f"  cos(centroid, coffee_N) = {cosine(centroid, store['coffee_N']):.3f}")
print(f"  cos(centroid, book_N)   = {cosine(centroid, store['book_N']):.3f}")
