import random

import pytest
from hypothesis import given, settings, strategies as st

from bioforge.errors import LengthMismatch, UnknownTaskMetric
from bioforge.evaluation import (
    PARSED,
    UNPARSEABLE,
    PredictionRecord,
    evaluate_dataset,
    parse_ner_output,
    parse_qa_choice,
    parse_re_output,
    parse_tc_output,
    sample_subset,
    score_accuracy,
    score_micro_f1,
)
from bioforge.forge import build_corpus
from bioforge.schema import Language, RelationTriple
from bioforge.synth import (
    make_ner_docs,
    make_qa_mc_docs,
    make_re_docs,
    make_tc_docs,
    re_descriptor,
)
from bioforge.templates import default_template_bank


class TestParseNer:
    def test_canonical_two_type_output(self):
        out = parse_ner_output(
            "Chemical: valproic acid; Ammonia\nDisease: epileptic",
            Language.EN, ["Chemical", "Disease"],
        )
        assert out.ner == {
            ("valproic acid", "Chemical"), ("Ammonia", "Chemical"), ("epileptic", "Disease"),
        }

    def test_no_header_is_unparseable(self):
        out = parse_ner_output("The answer is unclear.", Language.EN, ["Chemical"])
        assert out.status == UNPARSEABLE
        assert out.ner == frozenset()

    def test_tolerant_casing_whitespace_dedup(self):
        out = parse_ner_output("chemical:  Aspirin ;Aspirin", Language.EN, ["Chemical"])
        assert out.ner == {("Aspirin", "Chemical")}

    def test_inline_zh_headers(self):
        out = parse_ner_output(
            "疾病：成人 SARS 临床表现：细胞下降", Language.ZH, ["疾病", "临床表现"]
        )
        assert ("细胞下降", "临床表现") in out.ner
        assert any(e == "疾病" for _, e in out.ner)

    def test_chatter_after_newline_not_swallowed(self):
        out = parse_ner_output(
            "Chemical: aspirin\nI hope that helps!", Language.EN, ["Chemical"]
        )
        assert out.ner == {("aspirin", "Chemical")}

    def test_totality_on_adversarial_vocab(self):
        # vocabulary entries with regex metacharacters must not break the scanner
        out = parse_ner_output("a(b: x", Language.EN, ["a(b", "c[d"])
        assert out.status in (PARSED, UNPARSEABLE)


class TestParseRe:
    def test_untyped_pairs_with_prompted_relation(self):
        out = parse_re_output(
            "[Phenobarbital, dyskinesia]; [phenobarbital, dyskinesia]",
            Language.EN, ["CID"], prompted_relation="CID",
        )
        assert out.re_triples == {
            RelationTriple("Phenobarbital", "dyskinesia", "CID"),
            RelationTriple("phenobarbital", "dyskinesia", "CID"),
        }

    def test_zh_typed_triple(self):
        out = parse_re_output("(13-三体综合征, 泌尿系畸形, 并发症)", Language.ZH, ["并发症"])
        assert out.re_triples == {RelationTriple("13-三体综合征", "泌尿系畸形", "并发症")}

    def test_no_bracket_structure_unparseable(self):
        out = parse_re_output("no relations.", Language.EN, ["CID"])
        assert out.status == UNPARSEABLE

    def test_single_vocab_entry_implies_relation_for_pairs(self):
        out = parse_re_output("[a, b]", Language.EN, ["treats"])
        assert out.re_triples == {RelationTriple("a", "b", "treats")}

    def test_relation_casing_canonicalized(self):
        out = parse_re_output("(a, b, cid)", Language.EN, ["CID"])
        assert out.re_triples == {RelationTriple("a", "b", "CID")}


class TestParseTc:
    def test_en_result_marker(self):
        out = parse_tc_output("Result: Prevention", Language.EN, ["Prevention", "Treatment"])
        assert out.tc == {"Prevention"}
        assert out.status == PARSED

    def test_zh_marker(self):
        out = parse_tc_output("上述文本被分类为: 治疗或手术", Language.ZH, ["治疗或手术", "疾病"])
        assert out.tc == {"治疗或手术"}

    def test_fallback_substring_scan(self):
        out = parse_tc_output(
            "It is about prevention and treatment", Language.EN, ["Prevention", "Treatment"]
        )
        assert out.tc == {"Prevention", "Treatment"}

    def test_nothing_matches(self):
        out = parse_tc_output("no idea", Language.EN, ["Prevention"])
        assert out.status == UNPARSEABLE

    def test_multi_label_split(self):
        out = parse_tc_output("Result: Prevention; Treatment", Language.EN,
                              ["Prevention", "Treatment", "Diagnosis"])
        assert out.tc == {"Prevention", "Treatment"}


OPTIONS = (("A", "aspirin"), ("B", "colchicine"), ("C", "heparin"), ("D", "insulin"))


class TestParseQa:
    def test_standalone_key(self):
        assert parse_qa_choice("The answer is B.", OPTIONS).qa_choice == "B"

    def test_parenthesized_key(self):
        assert parse_qa_choice("(C)", OPTIONS).qa_choice == "C"

    def test_unique_option_text(self):
        assert parse_qa_choice("I would pick colchicine here", OPTIONS).qa_choice == "B"

    def test_two_option_texts_ambiguous(self):
        out = parse_qa_choice("either aspirin or heparin", OPTIONS)
        assert out.status == UNPARSEABLE
        assert out.qa_choice is None

    def test_empty_string(self):
        assert parse_qa_choice("", OPTIONS).status == UNPARSEABLE


def brute_force_micro_f1(gold, pred):
    """Independent oracle: naive set loops, no pooling shortcuts."""
    tp = fp = fn = 0
    for g, p in zip(gold, pred):
        for item in p:
            if item in g:
                tp += 1
            else:
                fp += 1
        for item in g:
            if item not in p:
                fn += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


class TestScoreMicroF1:
    def test_identical_sets_score_one(self):
        sets = [frozenset({("a", "X")}), frozenset({("b", "Y"), ("c", "X")})]
        report = score_micro_f1(sets, sets)
        assert report.f1 == 1.0

    def test_hand_computed_counts(self):
        gold = [frozenset({("a", "X"), ("b", "X"), ("c", "X"), ("d", "X")})]
        pred = [frozenset({("a", "X"), ("b", "X"), ("e", "X")})]
        report = score_micro_f1(gold, pred)
        assert (report.tp, report.fp, report.fn) == (2, 1, 2)
        assert report.precision == pytest.approx(2 / 3, abs=1e-15)
        assert report.recall == pytest.approx(1 / 2, abs=1e-15)
        assert report.f1 == pytest.approx(4 / 7, abs=1e-15)

    def test_empty_predictions_zero_by_rule(self):
        gold = [frozenset({("a", "X")})]
        pred = [frozenset()]
        report = score_micro_f1(gold, pred)
        assert (report.precision, report.recall, report.f1) == (0.0, 0.0, 0.0)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            score_micro_f1([frozenset()], [])

    def test_matches_brute_force_on_random_instances(self):
        rng = random.Random(123)
        items = [(chr(97 + i), t) for i in range(10) for t in ("X", "Y")]
        for _ in range(100):
            n = rng.randint(1, 10)
            gold = [frozenset(rng.sample(items, rng.randint(0, 10))) for _ in range(n)]
            pred = [frozenset(rng.sample(items, rng.randint(0, 10))) for _ in range(n)]
            report = score_micro_f1(gold, pred)
            p, r, f1 = brute_force_micro_f1(gold, pred)
            assert abs(report.precision - p) <= 1e-12
            assert abs(report.recall - r) <= 1e-12
            assert abs(report.f1 - f1) <= 1e-12

    def test_per_type_breakdown(self):
        gold = [frozenset({("a", "X"), ("b", "Y")})]
        pred = [frozenset({("a", "X"), ("c", "Y")})]
        report = score_micro_f1(gold, pred)
        assert report.per_type["X"]["f1"] == 1.0
        assert report.per_type["Y"]["f1"] == 0.0

    def test_monotonicity(self):
        gold = [frozenset({("a", "X"), ("b", "X")})]
        base = score_micro_f1(gold, [frozenset({("a", "X")})])
        better = score_micro_f1(gold, [frozenset({("a", "X"), ("b", "X")})])
        spurious = score_micro_f1(gold, [frozenset({("a", "X"), ("z", "X")})])
        assert better.f1 >= base.f1
        assert spurious.precision <= base.precision


class TestScoreAccuracy:
    def out(self, key):
        from bioforge.evaluation import ParseOutcome
        if key is None:
            return ParseOutcome(status=UNPARSEABLE)
        return ParseOutcome(status=PARSED, qa_choice=key)

    def test_all_correct(self):
        report = score_accuracy(["A", "B"], [self.out("A"), self.out("B")])
        assert report.accuracy == 1.0

    def test_mixed_with_unparseable(self):
        report = score_accuracy(
            ["A", "B", "C", "D"],
            [self.out("A"), self.out("C"), self.out(None), self.out("A")],
        )
        assert report.accuracy == 0.25
        assert report.unparseable_count == 1

    def test_empty_set_reports_zero_total(self):
        report = score_accuracy([], [])
        assert report.accuracy == 0.0
        assert report.total == 0


class TestSampleSubset:
    def test_deterministic(self):
        items = list(range(500))
        assert sample_subset(items, 200, seed=1) == sample_subset(items, 200, seed=1)
        assert len(sample_subset(items, 200, seed=1)) == 200

    def test_zero(self):
        assert sample_subset([1, 2, 3], 0, seed=1) == []

    def test_n_equals_len_preserves_order(self):
        items = [3, 1, 2]
        assert sample_subset(items, 3, seed=9) == items

    def test_different_seeds_differ(self):
        items = list(range(500))
        assert sample_subset(items, 200, seed=1) != sample_subset(items, 200, seed=2)


def oracle_predictions(instances):
    return [PredictionRecord(i.instance_id, i.output) for i in instances]


class TestEvaluateDataset:
    def forged(self, maker, n=50, seed=5, desc=None):
        desc, docs = maker(n, seed) if desc is None else maker(n, seed, desc)
        instances = build_corpus([(desc, docs)], default_template_bank(), seed=7)
        return desc, instances

    def test_oracle_predictions_score_one(self):
        desc, instances = self.forged(make_ner_docs)
        report = evaluate_dataset(instances, oracle_predictions(instances), desc)
        assert report.f1 == 1.0

    def test_null_predictions_score_zero(self):
        desc, instances = self.forged(make_ner_docs)
        preds = [PredictionRecord(i.instance_id, "") for i in instances]
        report = evaluate_dataset(instances, preds, desc)
        assert report.f1 == 0.0
        assert report.unparseable_count == report.total

    def test_missing_predictions_score_as_empty(self):
        desc, instances = self.forged(make_qa_mc_docs)
        report = evaluate_dataset(instances, [], desc)
        assert report.accuracy == 0.0
        assert report.unparseable_count == report.total

    def test_unknown_task_metric(self):
        from bioforge.synth import tc_descriptor
        from bioforge.schema import DatasetDescriptor, TaskType
        desc = DatasetDescriptor(id="mt", name="mt", task=TaskType.MT, language=Language.ZH)
        with pytest.raises(UnknownTaskMetric):
            evaluate_dataset([], [], desc)

    def test_untyped_re_round_trip(self):
        desc = re_descriptor("re-un", untyped=True)
        desc, instances = self.forged(make_re_docs, desc=desc)
        report = evaluate_dataset(instances, oracle_predictions(instances), desc)
        assert report.f1 == 1.0


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_parsers_are_total(raw):
    parse_ner_output(raw, Language.EN, ["Chemical", "Disease"])
    parse_re_output(raw, Language.EN, ["CID"], prompted_relation="CID")
    parse_tc_output(raw, Language.EN, ["Prevention", "Treatment"])
    parse_qa_choice(raw, OPTIONS)
