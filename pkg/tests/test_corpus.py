import gzip
import io
import random
from collections import Counter

import pytest

from eventsem.corpus import (
    CorpusStats,
    CountTables,
    EventGroup,
    ParsedToken,
    RelationConfig,
    aggregate,
    emit_pairs,
    extract_events,
    load_counts,
    read_conllu,
    save_counts,
)


def conllu(rows):
    """Build a CoNLL-U block from (id, form, lemma, upos, head, deprel) rows."""
    lines = [f"{r[0]}\t{r[1]}\t{r[2]}\t{r[3]}\t_\t_\t{r[4]}\t{r[5]}\t_\t_" for r in rows]
    return "\n".join(lines) + "\n\n"


READS = conllu([
    (1, "The", "the", "DET", 2, "det"),
    (2, "student", "student", "NOUN", 3, "nsubj"),
    (3, "reads", "read", "VERB", 0, "root"),
    (4, "the", "the", "DET", 5, "det"),
    (5, "book", "book", "NOUN", 3, "obj"),
])


class TestReader:
    def test_two_sentences(self):
        text = READS + conllu([(1, "tea", "tea", "NOUN", 0, "root")])
        sentences = list(read_conllu(io.StringIO(text)))
        assert [len(s) for s in sentences] == [5, 1]
        assert sentences[0][1] == ParsedToken(2, "student", "student", "NOUN", 3, "nsubj")

    def test_comments_and_blank_lines_only(self):
        stats = CorpusStats()
        text = "# doc = x\n\n# another comment\n\n\n"
        assert list(read_conllu(io.StringIO(text), stats)) == []
        assert stats.sentences == 0 and stats.skipped == 0

    def test_corrupted_sentence_among_five(self):
        good = conllu([(1, "tea", "tea", "NOUN", 0, "root")])
        bad = "1\tonly\tfour\tcolumns\n\n"
        stats = CorpusStats()
        sentences = list(read_conllu(io.StringIO(good * 2 + bad + good * 2), stats))
        assert len(sentences) == 4
        assert stats.skipped == 1
        assert stats.sentences == 4

    def test_loss_bound(self):
        blocks = [
            conllu([(1, "a", "a", "NOUN", 0, "root")]),
            "1\tbroken\n\n",
            conllu([(1, "b", "b", "NOUN", 2, "root")]),  # head out of range
            conllu([(1, "c", "c", "NOUN", 1, "root")]),  # self-loop cycle
            conllu([(2, "d", "d", "NOUN", 0, "root")]),  # indexes not from 1
            READS,
        ]
        stats = CorpusStats()
        out = list(read_conllu(io.StringIO("".join(blocks)), stats))
        assert stats.sentences == len(out) == 2
        assert stats.sentences + stats.skipped == 6

    def test_multiword_and_empty_nodes_skipped(self):
        text = (
            "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n"
            "2\tstudent\tstudent\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
            "3-4\tcannot\t_\t_\t_\t_\t_\t_\t_\t_\n"
            "3\tcan\tcan\tAUX\t_\t_\t5\taux\t_\t_\n"
            "4\tnot\tnot\tPART\t_\t_\t5\tadvmod\t_\t_\n"
            "5\tread\tread\tVERB\t_\t_\t0\troot\t_\t_\n"
            "5.1\tghost\tghost\tNOUN\t_\t_\t_\t_\t_\t_\n\n"
        )
        (sentence,) = read_conllu(io.StringIO(text))
        assert [t.form for t in sentence] == ["The", "student", "can", "not", "read"]

    def test_cycle_detected(self):
        stats = CorpusStats()
        text = conllu([
            (1, "a", "a", "NOUN", 2, "dep"),
            (2, "b", "b", "NOUN", 1, "dep"),
            (3, "c", "c", "VERB", 0, "root"),
        ])
        assert list(read_conllu(io.StringIO(text), stats)) == []
        assert stats.skipped == 1

    def test_gzip_path(self, tmp_path):
        path = tmp_path / "corpus.conllu.gz"
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write(READS)
        (sentence,) = read_conllu(path)
        assert len(sentence) == 5

    def test_missing_trailing_blank_line(self):
        (sentence,) = read_conllu(io.StringIO(READS.rstrip("\n")))
        assert len(sentence) == 5


class TestRelationConfig:
    def test_default_mappings(self):
        rc = RelationConfig()
        assert rc.canonical("nsubj") == "sbj"
        assert rc.canonical("obj") == "dobj"
        assert rc.canonical("dobj") == "dobj"
        assert rc.canonical("nsubj:pass") == "dobj"
        assert rc.canonical("obl:in") == "obl:loc"
        assert rc.canonical("obl:at") == "obl:loc"
        assert rc.canonical("obl:with") == "obl:instr"
        assert rc.canonical("obl:tmod") == "obl:tmp"
        assert rc.canonical("nmod:about") == "nmod"
        assert rc.canonical("nmod:poss") == "nmod"
        assert rc.canonical("amod") == "amod"

    def test_unmapped_labels(self):
        rc = RelationConfig()
        for label in ("det", "punct", "case", "aux", "cop", "obl:agent", "obl", "advmod", "cc"):
            assert rc.canonical(label) is None

    def test_whitelist_restriction(self):
        rc = RelationConfig(whitelist=("sbj", "dobj"))
        assert rc.canonical("nsubj") == "sbj"
        assert rc.canonical("amod") is None
        assert rc.canonical("nmod:about") is None

    def test_from_json(self, tmp_path):
        path = tmp_path / "relations.json"
        path.write_text('{"whitelist": ["sbj"], "label_map": {"nsubj": "sbj"}, "prep_roles": {}}')
        rc = RelationConfig.from_json(path)
        assert rc.canonical("nsubj") == "sbj"
        assert rc.canonical("obj") is None


class TestExtractEvents:
    def test_transitive_clause(self):
        (sentence,) = read_conllu(io.StringIO(READS))
        (group,) = extract_events(sentence)
        assert group.head == "read_V"
        assert group.head_role == "verb-head"
        assert group.participants == (("sbj", "student_N"), ("dobj", "book_N"))

    def test_no_whitelisted_relations(self):
        (sentence,) = read_conllu(io.StringIO(conllu([
            (1, "very", "very", "ADV", 2, "advmod"),
            (2, "quickly", "quickly", "ADV", 0, "root"),
        ])))
        assert extract_events(sentence) == []

    def test_adjectival_modification(self):
        (sentence,) = read_conllu(io.StringIO(conllu([
            (1, "heavy", "heavy", "ADJ", 2, "amod"),
            (2, "book", "book", "NOUN", 0, "root"),
        ])))
        (group,) = extract_events(sentence)
        assert group.head == "book_N"
        assert group.head_role == "noun-head"
        assert group.participants == (("amod", "heavy_J"),)

    def test_copular_subject_excluded(self):
        (sentence,) = read_conllu(io.StringIO(conllu([
            (1, "student", "student", "NOUN", 3, "nsubj"),
            (2, "is", "be", "AUX", 3, "cop"),
            (3, "teacher", "teacher", "NOUN", 0, "root"),
        ])))
        assert extract_events(sentence) == []

    def test_non_content_dependents_excluded(self):
        (sentence,) = read_conllu(io.StringIO(conllu([
            (1, "She", "she", "PRON", 2, "nsubj"),
            (2, "drinks", "drink", "VERB", 0, "root"),
            (3, "beer", "beer", "NOUN", 2, "obj"),
        ])))
        (group,) = extract_events(sentence)
        assert group.participants == (("dobj", "beer_N"),)

    def test_passive_subject_becomes_object(self):
        (sentence,) = read_conllu(io.StringIO(conllu([
            (1, "book", "book", "NOUN", 3, "nsubj:pass"),
            (2, "was", "be", "AUX", 3, "aux:pass"),
            (3, "read", "read", "VERB", 0, "root"),
        ])))
        (group,) = extract_events(sentence)
        assert group.participants == (("dobj", "book_N"),)

    def test_whitelist_always_respected(self):
        rng = random.Random(42)
        labels = ["nsubj", "obj", "det", "punct", "weird:rel", "amod", "obl:in", "obl:of", "xcomp"]
        rc = RelationConfig()
        for _ in range(100):
            rows = [(1, "head", "head", "VERB", 0, "root")]
            for i in range(2, rng.randint(3, 7)):
                rows.append((i, f"w{i}", f"w{i}", rng.choice(["NOUN", "ADJ", "DET", "ADV"]), 1, rng.choice(labels)))
            (sentence,) = read_conllu(io.StringIO(conllu(rows)))
            for group in extract_events(sentence, rc):
                for role, _ in group.participants:
                    assert role in rc.whitelist


class TestEmitPairs:
    def test_arity_matches_participants(self):
        for n in (1, 2, 5):
            group = EventGroup("v_V", "verb-head", tuple(("dobj", f"w{i}_N") for i in range(n)))
            assert len(emit_pairs(group)) == n

    def test_full_event_group(self):
        group = EventGroup(
            "read_V",
            "verb-head",
            (("sbj", "student_N"), ("dobj", "book_N"), ("obl:loc", "library_N")),
        )
        assert set(emit_pairs(group)) == {
            ("read_V", "sbj", "student_N"),
            ("read_V", "dobj", "book_N"),
            ("read_V", "obl:loc", "library_N"),
        }


def random_triples(rng, n):
    words = [f"w{i}_N" for i in range(8)]
    rels = ["sbj", "dobj", "nmod"]
    return [(rng.choice(words), rng.choice(rels), rng.choice(words)) for _ in range(n)]


class TestAggregate:
    def test_min_freq_threshold(self):
        triples = [("a_V", "dobj", "b_N")] * 4
        tables = aggregate(triples, min_freq=5)
        assert ("a_V", "dobj", "b_N") not in tables.pair_counts
        # marginals are computed before thresholding
        assert tables.word_counts["a_V"] == 4
        assert tables.rel_counts["dobj"] == 4
        assert tables.total == 4

    def test_min_freq_one_keeps_everything(self):
        rng = random.Random(5)
        triples = random_triples(rng, 200)
        tables = aggregate(triples, min_freq=1)
        assert sum(tables.pair_counts.values()) == 200
        assert tables.total == 200

    def test_raw_invariant_total_equals_pair_sum(self):
        rng = random.Random(6)
        tables = CountTables.from_triples(random_triples(rng, 300))
        assert tables.total == sum(tables.pair_counts.values())
        # each observation contributes one head and one dependent occurrence
        assert sum(tables.word_counts.values()) == 2 * tables.total
        assert sum(tables.rel_counts.values()) == tables.total

    def test_shards_equal_single_pass(self):
        rng = random.Random(7)
        triples = random_triples(rng, 500)
        single = CountTables.from_triples(triples)
        merged = (
            CountTables.from_triples(triples[:100])
            .merge(CountTables.from_triples(triples[100:350]))
            .merge(CountTables.from_triples(triples[350:]))
        )
        assert merged == single

    def test_merge_commutes_and_associates(self):
        rng = random.Random(8)
        a = CountTables.from_triples(random_triples(rng, 50))
        b = CountTables.from_triples(random_triples(rng, 70))
        c = CountTables.from_triples(random_triples(rng, 30))
        assert a.merge(b) == b.merge(a)
        assert a.merge(b).merge(c) == a.merge(b.merge(c))

    def test_bad_min_freq(self):
        with pytest.raises(ValueError):
            aggregate([], min_freq=0)


class TestCountsIO:
    def test_round_trip(self, tmp_path):
        rng = random.Random(9)
        tables = CountTables.from_triples(random_triples(rng, 120))
        save_counts(tables, tmp_path / "counts")
        assert load_counts(tmp_path / "counts") == tables

    def test_byte_identical_rewrites(self, tmp_path):
        rng = random.Random(10)
        tables = CountTables.from_triples(random_triples(rng, 80))
        save_counts(tables, tmp_path / "one")
        save_counts(tables, tmp_path / "two")
        for name in ("pairs.tsv", "words.tsv", "rels.tsv", "meta.tsv"):
            assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()


def test_mini_corpus_is_clean(mini_tables):
    stats = CorpusStats()
    from eventsem.corpus import read_conllu as rc
    from conftest import MINI_CORPUS

    n = sum(1 for _ in rc(MINI_CORPUS, stats))
    assert stats.skipped == 0
    assert n == stats.sentences == 49
    assert mini_tables.total == 102
