"""Free-text evaluation harness: tolerant parsers that invert the gold
output grammars, plus exact-match micro-F1 and accuracy scoring.

Parsers are total: any input string yields a :class:`ParseOutcome`, never an
exception.  Scoring uses set semantics over (surface, type) pairs and
relation triples, span excluded.  Surface matching is case-sensitive (gold
keeps differently-cased mentions as distinct items) while header and label
matching during parsing is case-insensitive (model outputs drift in casing).
Unparseable outputs score zero; excluding them would flatter evasive models.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .errors import LengthMismatch, UnknownTaskMetric
from .forge import EMPTY_MARKERS, InstructionInstance
from .schema import Language, RelationTriple, TaskType, read_jsonl, write_jsonl

PARSED = "parsed"
PARTIAL = "partial"
UNPARSEABLE = "unparseable"


@dataclass(frozen=True)
class PredictionRecord:
    instance_id: str
    raw_text: str


def read_predictions(path: Path | str) -> list[PredictionRecord]:
    return [PredictionRecord(d["instance_id"], d["raw_text"]) for d in read_jsonl(path)]


def write_predictions(path: Path | str, records: Iterable[PredictionRecord]) -> int:
    return write_jsonl(path, ({"instance_id": r.instance_id, "raw_text": r.raw_text} for r in records))


@dataclass(frozen=True)
class ParseOutcome:
    status: str
    ner: frozenset = frozenset()        # of (surface, etype)
    re_triples: frozenset = frozenset()  # of RelationTriple
    tc: frozenset = frozenset()          # of labels
    qa_choice: Optional[str] = None


_EMPTY_MARKER_STRINGS = frozenset(EMPTY_MARKERS.values())


def _is_empty_marker(raw: str) -> bool:
    return raw.strip() in _EMPTY_MARKER_STRINGS


def parse_ner_output(raw: str, language: Language, type_vocab: Sequence[str]) -> ParseOutcome:
    """Scan for ``<Type>:`` headers matching the vocabulary and split the
    remainders on ";" / "；".  Header matching is case-insensitive; surfaces
    are whitespace-trimmed and deduplicated with canonical type casing.
    A segment ends at the next header or end of line, so chatter on later
    lines is not swallowed into the last entity."""
    if _is_empty_marker(raw):
        return ParseOutcome(status=PARSED)
    if not type_vocab:
        return ParseOutcome(status=UNPARSEABLE)
    canonical = {t.lower(): t for t in type_vocab}
    alts = "|".join(re.escape(t) for t in sorted(type_vocab, key=len, reverse=True))
    header = re.compile(rf"({alts})\s*[:：]", re.IGNORECASE)
    matches = list(header.finditer(raw))
    if not matches:
        return ParseOutcome(status=UNPARSEABLE)
    found: set[tuple] = set()
    for i, m in enumerate(matches):
        seg_end = matches[i + 1].start() if i + 1 < len(matches) else len(raw)
        newline = raw.find("\n", m.end())
        if newline != -1:
            seg_end = min(seg_end, newline)
        etype = canonical[m.group(1).lower()]
        for piece in re.split(r"[;；]", raw[m.end():seg_end]):
            surface = piece.strip()
            if surface:
                found.add((surface, etype))
    return ParseOutcome(status=PARSED, ner=frozenset(found))


_BRACKET_GROUP = re.compile(r"[(（]([^()（）]*)[)）]|\[([^\[\]]*)\]")


def parse_re_output(
    raw: str,
    language: Language,
    relation_vocab: Sequence[str] = (),
    prompted_relation: Optional[str] = None,
) -> ParseOutcome:
    """Extract ``(head, tail, rtype)`` triples and ``[head, tail]`` pairs.

    Pairs take their relation type from ``prompted_relation`` (the single
    relation implied by a binary-relation prompt); when absent, a
    single-entry relation vocabulary serves the same purpose.  Matched
    relation types are canonicalized against the vocabulary case-insensitively.
    """
    if _is_empty_marker(raw):
        return ParseOutcome(status=PARSED)
    canonical = {r.lower(): r for r in relation_vocab}
    implied = prompted_relation
    if implied is None and len(relation_vocab) == 1:
        implied = relation_vocab[0]
    triples: set[RelationTriple] = set()
    for m in _BRACKET_GROUP.finditer(raw):
        body = m.group(1) if m.group(1) is not None else m.group(2)
        parts = [p.strip() for p in re.split(r"[,，]", body)]
        parts = [p for p in parts if p]
        if len(parts) == 3:
            rtype = canonical.get(parts[2].lower(), parts[2])
            triples.add(RelationTriple(parts[0], parts[1], rtype))
        elif len(parts) == 2 and implied is not None:
            triples.add(RelationTriple(parts[0], parts[1], implied))
    if not triples:
        return ParseOutcome(status=UNPARSEABLE)
    return ParseOutcome(status=PARSED, re_triples=frozenset(triples))


_TC_MARKER = re.compile(r"(?:Result|上述文本被分类为)\s*[:：]", re.IGNORECASE)


def parse_tc_output(raw: str, language: Language, label_vocab: Sequence[str]) -> ParseOutcome:
    """Find the result marker and match its tail against the label vocabulary;
    fall back to a verbatim vocabulary scan over the whole text (reported as
    ``partial``)."""
    if _is_empty_marker(raw):
        return ParseOutcome(status=PARSED)
    canonical = {l.lower(): l for l in label_vocab}
    m = _TC_MARKER.search(raw)
    if m is not None:
        newline = raw.find("\n", m.end())
        tail = raw[m.end():] if newline == -1 else raw[m.end():newline]
        labels = set()
        for piece in re.split(r"[;；,，]", tail):
            label = canonical.get(piece.strip().lower())
            if label is not None:
                labels.add(label)
        if labels:
            return ParseOutcome(status=PARSED, tc=frozenset(labels))
    lowered = raw.lower()
    fallback = {label for label in label_vocab if label.lower() in lowered}
    if fallback:
        return ParseOutcome(status=PARTIAL, tc=frozenset(fallback))
    return ParseOutcome(status=UNPARSEABLE)


def parse_qa_choice(raw: str, options: Sequence[tuple]) -> ParseOutcome:
    """Resolve a multiple-choice answer: (1) a standalone option key token
    ("B", "B.", "(B)"); (2) a unique option text contained in the output;
    otherwise unparseable (scored incorrect).  Ambiguity in either rule falls
    through rather than guessing."""
    matched_keys = []
    for key, _text in options:
        if re.search(rf"(?<![A-Za-z0-9]){re.escape(key)}(?![A-Za-z0-9])", raw):
            matched_keys.append(key)
    if len(matched_keys) == 1:
        return ParseOutcome(status=PARSED, qa_choice=matched_keys[0])
    lowered = raw.casefold()
    contained = [key for key, text in options if text and text.casefold() in lowered]
    if len(contained) == 1:
        return ParseOutcome(status=PARSED, qa_choice=contained[0])
    return ParseOutcome(status=UNPARSEABLE)


@dataclass
class EvalReport:
    dataset_id: str
    metric_name: str  # micro_f1 | accuracy
    tp: int = 0
    fp: int = 0
    fn: int = 0
    correct: int = 0
    total: int = 0
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    accuracy: float = 0.0
    unparseable_count: int = 0
    per_type: dict = field(default_factory=dict)  # etype -> {precision, recall, f1}

    def to_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "metric_name": self.metric_name,
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "correct": self.correct, "total": self.total,
            "precision": self.precision, "recall": self.recall, "f1": self.f1,
            "accuracy": self.accuracy,
            "unparseable_count": self.unparseable_count,
            "per_type": self.per_type,
        }

    def to_text(self) -> str:
        lines = [f"Dataset: {self.dataset_id}  metric={self.metric_name}"]
        if self.metric_name == "accuracy":
            lines.append(
                f"  accuracy={self.accuracy:.4f}  correct={self.correct}/{self.total}"
                f"  unparseable={self.unparseable_count}"
            )
            return "\n".join(lines)
        lines.append(
            f"  {'':<16}{'P':>8}{'R':>8}{'F1':>8}{'TP':>7}{'FP':>7}{'FN':>7}"
        )
        lines.append(
            f"  {'overall':<16}{self.precision:>8.4f}{self.recall:>8.4f}{self.f1:>8.4f}"
            f"{self.tp:>7}{self.fp:>7}{self.fn:>7}"
        )
        for etype, stats in self.per_type.items():
            lines.append(
                f"  {etype:<16}{stats['precision']:>8.4f}{stats['recall']:>8.4f}{stats['f1']:>8.4f}"
                f"{stats['tp']:>7}{stats['fp']:>7}{stats['fn']:>7}"
            )
        lines.append(f"  unparseable={self.unparseable_count}/{self.total}")
        return "\n".join(lines)


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def _default_type_key(item) -> Optional[str]:
    if isinstance(item, RelationTriple):
        return item.rtype
    if isinstance(item, tuple) and len(item) >= 2:
        return item[1]
    return None


def score_micro_f1(
    gold: Sequence[frozenset],
    pred: Sequence[frozenset],
    dataset_id: str = "",
    type_key: Callable = _default_type_key,
) -> EvalReport:
    """Pooled exact-match micro P/R/F1 over aligned instance-level sets, with
    a per-type breakdown computed the same way restricted to each type."""
    if len(gold) != len(pred):
        raise LengthMismatch(len(gold), len(pred))
    report = EvalReport(dataset_id=dataset_id, metric_name="micro_f1", total=len(gold))
    by_type: dict[str, list[int]] = {}
    for g, p in zip(gold, pred):
        report.tp += len(g & p)
        report.fp += len(p - g)
        report.fn += len(g - p)
        for item in g | p:
            etype = type_key(item)
            if etype is None:
                continue
            counts = by_type.setdefault(etype, [0, 0, 0])
            if item in g and item in p:
                counts[0] += 1
            elif item in p:
                counts[1] += 1
            else:
                counts[2] += 1
    report.precision, report.recall, report.f1 = _prf(report.tp, report.fp, report.fn)
    for etype, (tp, fp, fn) in sorted(by_type.items()):
        p, r, f1 = _prf(tp, fp, fn)
        report.per_type[etype] = {
            "precision": p, "recall": r, "f1": f1, "tp": tp, "fp": fp, "fn": fn
        }
    return report


def score_accuracy(
    gold_keys: Sequence[str],
    outcomes: Sequence[ParseOutcome],
    dataset_id: str = "",
) -> EvalReport:
    """Exact key-match accuracy; unparseable predictions count as incorrect.
    An empty test set yields accuracy 0 with total 0 rather than an error."""
    if len(gold_keys) != len(outcomes):
        raise LengthMismatch(len(gold_keys), len(outcomes))
    report = EvalReport(dataset_id=dataset_id, metric_name="accuracy", total=len(gold_keys))
    for key, outcome in zip(gold_keys, outcomes):
        if outcome.status == UNPARSEABLE or outcome.qa_choice is None:
            report.unparseable_count += 1
            continue
        if outcome.qa_choice == key:
            report.correct += 1
    report.accuracy = report.correct / report.total if report.total else 0.0
    return report


def sample_subset(instances: Sequence, n: int, seed: int) -> list:
    """Deterministic uniform sample without replacement, original order
    preserved; ``n >= len(instances)`` returns everything."""
    import random

    if n < 0:
        raise ValueError("sample size must be >= 0")
    if n >= len(instances):
        return list(instances)
    indices = sorted(random.Random(f"sample:{seed}").sample(range(len(instances)), n))
    return [instances[i] for i in indices]


_OPTION_LINE = re.compile(r"^\s*([A-Za-z0-9]+)\.\s+(.*)$")


def _options_from_instruction(instruction: str) -> list[tuple]:
    """Recover the rendered option list from a forged QA-mc instruction."""
    options = []
    for line in instruction.split("\n"):
        m = _OPTION_LINE.match(line)
        if m:
            options.append((m.group(1), m.group(2).strip()))
    return options


_SCORED_TASKS = {TaskType.NER_NEN, TaskType.RE, TaskType.TC, TaskType.QA_MC}


def evaluate_dataset(
    gold: Sequence[InstructionInstance],
    predictions: Sequence[PredictionRecord],
    desc,
) -> EvalReport:
    """Parse and score free-text predictions against a forged gold corpus.

    Gold structure is recovered by running the same parser over the canonical
    gold output (an exact inverse by construction).  Missing predictions score
    as empty/unparseable.
    """
    task = desc.task
    if task not in _SCORED_TASKS:
        raise UnknownTaskMetric(task.value)
    by_id = {p.instance_id: p.raw_text for p in predictions}

    if task is TaskType.QA_MC:
        gold_keys = []
        outcomes = []
        for inst in gold:
            options = _options_from_instruction(inst.instruction)
            gold_outcome = parse_qa_choice(inst.output, options)
            gold_keys.append(gold_outcome.qa_choice or "")
            outcomes.append(parse_qa_choice(by_id.get(inst.instance_id, ""), options))
        return score_accuracy(gold_keys, outcomes, dataset_id=desc.id)

    gold_sets = []
    pred_sets = []
    unparseable = 0
    for inst in gold:
        raw_pred = by_id.get(inst.instance_id, "")
        if task is TaskType.NER_NEN:
            g = parse_ner_output(inst.output, desc.language, desc.label_vocab)
            p = parse_ner_output(raw_pred, desc.language, desc.label_vocab)
            gold_sets.append(g.ner)
            pred_sets.append(p.ner)
        elif task is TaskType.RE:
            g = parse_re_output(inst.output, desc.language, desc.label_vocab, desc.prompted_relation)
            p = parse_re_output(raw_pred, desc.language, desc.label_vocab, desc.prompted_relation)
            gold_sets.append(g.re_triples)
            pred_sets.append(p.re_triples)
        else:
            g = parse_tc_output(inst.output, desc.language, desc.label_vocab)
            p = parse_tc_output(raw_pred, desc.language, desc.label_vocab)
            gold_sets.append(g.tc)
            pred_sets.append(p.tc)
        if p.status == UNPARSEABLE:
            unparseable += 1
    type_key = (lambda item: None) if task is TaskType.TC else _default_type_key
    report = score_micro_f1(gold_sets, pred_sets, dataset_id=desc.id, type_key=type_key)
    report.unparseable_count = unparseable
    return report
