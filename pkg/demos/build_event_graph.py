"""From dependency parses to a queryable event graph.

A miniature parsed corpus is streamed sentence by sentence; each verb
or noun head is grouped with its whitelisted dependents, the resulting
(head, relation, dependent) pairs are counted, and the counts are
weighed into ranked association lists.  The same cue can then be
queried as a head (what does it govern?) or as a dependent (what
governs it?).
"""

import io

from eventsem import CountTables, EventGraph, GraphConfig, emit_pairs, extract_events, read_conllu

# three sentence shapes, repeated to give the pairs different frequencies
SENTENCE_SHAPES = [
    (4, [  # The student drinks coffee in the cafeteria
        (1, "The", "the", "DET", 2, "det"),
        (2, "student", "student", "NOUN", 3, "nsubj"),
        (3, "drinks", "drink", "VERB", 0, "root"),
        (4, "coffee", "coffee", "NOUN", 3, "obj"),
        (5, "in", "in", "ADP", 7, "case"),
        (6, "the", "the", "DET", 7, "det"),
        (7, "cafeteria", "cafeteria", "NOUN", 3, "obl:in"),
    ]),
    (2, [  # The student drinks beer
        (1, "The", "the", "DET", 2, "det"),
        (2, "student", "student", "NOUN", 3, "nsubj"),
        (3, "drinks", "drink", "VERB", 0, "root"),
        (4, "beer", "beer", "NOUN", 3, "obj"),
    ]),
    (3, [  # The student reads the book
        (1, "The", "the", "DET", 2, "det"),
        (2, "student", "student", "NOUN", 3, "nsubj"),
        (3, "reads", "read", "VERB", 0, "root"),
        (4, "the", "the", "DET", 5, "det"),
        (5, "book", "book", "NOUN", 3, "obj"),
    ]),
]


def corpus_text():
    blocks = []
    for reps, rows in SENTENCE_SHAPES:
        block = "\n".join(f"{r[0]}\t{r[1]}\t{r[2]}\t{r[3]}\t_\t_\t{r[4]}\t{r[5]}\t_\t_" for r in rows)
        blocks.extend([block] * reps)
    return "\n\n".join(blocks) + "\n"


print("extracting events")
print("=" * 40)
tables = CountTables()
shapes_shown = set()
for sentence in read_conllu(io.StringIO(corpus_text())):
    for group in extract_events(sentence):
        if group not in shapes_shown:
            shapes_shown.add(group)
            print(f"  {group.head:10s} <- {list(group.participants)}")
        for triple in emit_pairs(group):
            tables.add(triple)

print()
print(f"counted {tables.total} pair observations over {len(tables.pair_counts)} distinct pairs")

graph = EventGraph.from_counts(tables, GraphConfig(alpha=0.75, min_freq=2))
print(f"graph has {graph.n_edges} edges after weighting")

print()
print("drink_V as head of dobj (its typical objects)")
print("=" * 40)
for lexeme, sigma in graph.syntagmatic_neighbors("drink_V", "dobj", "as-head", 5):
    print(f"  {lexeme:12s} {sigma:8.3f}")

print()
print("student_N as dependent of sbj (what students typically do)")
print("=" * 40)
for lexeme, sigma in graph.syntagmatic_neighbors("student_N", "sbj", "as-dependent", 5):
    print(f"  {lexeme:12s} {sigma:8.3f}")
