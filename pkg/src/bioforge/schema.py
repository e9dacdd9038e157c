"""Harmonized task schema shared by every pipeline stage.

All corpora, whatever their source format, are normalized into
:class:`UnifiedDocument` values; a :class:`DatasetDescriptor` registry row
carries per-dataset metadata (task type, language, split sizes, declared
label vocabulary).  Values are immutable after construction and safe to
share across workers.

On-disk encoding is UTF-8 JSONL, one document per line, field names exactly
matching the dataclass fields.  The registry is a single JSONL file of
descriptor rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Optional


class TaskType(str, Enum):
    """The closed 15-way task taxonomy. Unknown tags are rejected at parse time."""

    NER_NEN = "NER/NEN"
    RE = "RE"
    CRE = "CRE"
    EE = "EE"
    COREF = "COREF"
    TC = "TC"
    QA_MC = "QA-mc"
    QA_SQA = "QA-sqa"
    QA_CQA = "QA-cqa"
    MRD = "MRD"
    MT = "MT"
    TP_SS = "TP-ss"
    TP_TE = "TP-te"
    TT_DS = "TT-ds"
    TT_TS = "TT-ts"


class Language(str, Enum):
    EN = "en"
    ZH = "zh"


@dataclass(frozen=True)
class EntityMention:
    """One annotated mention.  Offsets are Unicode code-point indices into the
    document text (never bytes; byte offsets are ambiguous for Chinese text).
    ``norm_id`` carries an entity-normalization identifier when present; it is
    stored but never scored."""

    surface: str
    etype: str
    start: int
    end: int
    norm_id: Optional[str] = None


@dataclass(frozen=True)
class RelationTriple:
    head: str
    tail: str
    rtype: str


@dataclass(frozen=True)
class EventFrame:
    event_type: str
    trigger: str
    arguments: tuple = ()  # of (role, filler) pairs


@dataclass(frozen=True)
class QAInstance:
    question: str
    options: Optional[tuple] = None  # ordered (key, text) pairs
    answer_keys: tuple = ()
    context: Optional[str] = None


@dataclass(frozen=True)
class DialogueTurn:
    speaker: str  # "user" | "assistant"
    text: str


@dataclass(frozen=True)
class TextPairInstance:
    text_a: str
    text_b: str
    label: Optional[str] = None


@dataclass(frozen=True)
class TranslationPair:
    text_a: str
    text_b: str
    source_lang: Language = Language.EN
    target_lang: Language = Language.ZH


@dataclass(frozen=True)
class DatasetDescriptor:
    """One registry row.

    Beyond the core metadata, optional fields drive downstream behavior:
    ``label_vocab`` is the dataset's declared vocabulary in registry order
    (entity types for NER, relation types for RE, class labels for TC);
    ``role_vocab`` the event role vocabulary; ``stage_override`` forces a
    dataset into training stage Type1/Type2 regardless of its task;
    ``general_dialogue`` marks open-domain dialogue rows; ``re_untyped``
    selects the binary ``[head, tail]`` relation output grammar with
    ``prompted_relation`` supplying the implied relation type.
    """

    id: str
    name: str
    task: TaskType
    language: Language
    split_counts: dict = field(default_factory=dict)
    description: str = ""
    source_url: Optional[str] = None
    label_vocab: tuple = ()
    role_vocab: tuple = ()
    stage_override: Optional[str] = None  # "Type1" | "Type2"
    general_dialogue: bool = False
    re_untyped: bool = False
    prompted_relation: Optional[str] = None


@dataclass(frozen=True)
class UnifiedDocument:
    """One harmonized annotated text unit.

    Exactly the payload fields relevant to the dataset's task type are
    populated; :func:`validate_document` enforces this.
    """

    doc_id: str
    dataset_id: str
    language: Language
    text: str
    entities: tuple = ()
    relations: tuple = ()
    events: tuple = ()
    labels: tuple = ()
    qa: Optional[QAInstance] = None
    dialogue: Optional[tuple] = None
    pair: Optional[TextPairInstance] = None
    translation: Optional[TranslationPair] = None


# Payload fields each task type is allowed to populate.
PAYLOAD_FIELDS = ("entities", "relations", "events", "labels", "qa", "dialogue", "pair", "translation")

_ALLOWED_PAYLOADS = {
    TaskType.NER_NEN: {"entities"},
    TaskType.RE: {"entities", "relations"},
    TaskType.CRE: {"entities", "relations"},
    TaskType.COREF: {"entities", "relations"},
    TaskType.EE: {"entities", "events"},
    TaskType.TC: {"labels"},
    TaskType.QA_MC: {"qa"},
    TaskType.QA_SQA: {"qa"},
    TaskType.QA_CQA: {"qa"},
    TaskType.MRD: {"dialogue"},
    TaskType.MT: {"translation"},
    TaskType.TP_SS: {"pair"},
    TaskType.TP_TE: {"pair"},
    TaskType.TT_DS: {"pair"},
    TaskType.TT_TS: {"pair"},
}

# Payloads that must be non-None for the task to make sense at all.
_REQUIRED_PAYLOADS = {
    TaskType.QA_MC: "qa",
    TaskType.QA_SQA: "qa",
    TaskType.QA_CQA: "qa",
    TaskType.MRD: "dialogue",
    TaskType.MT: "translation",
    TaskType.TP_SS: "pair",
    TaskType.TP_TE: "pair",
    TaskType.TT_DS: "pair",
    TaskType.TT_TS: "pair",
}


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple = ()


def _payload_populated(doc: UnifiedDocument, name: str) -> bool:
    value = getattr(doc, name)
    if value is None:
        return False
    if name in ("entities", "relations", "events", "labels"):
        return len(value) > 0
    return True


def validate_document(doc: UnifiedDocument, desc: DatasetDescriptor) -> ValidationResult:
    """Check every schema invariant of ``doc`` against its dataset descriptor.

    Pure and deterministic.  Violations are data, not failures: each names the
    offending field and the rule broken.
    """
    v: list[str] = []
    if doc.dataset_id != desc.id:
        v.append(f"dataset_id: {doc.dataset_id!r} does not match registry row {desc.id!r}")
    if doc.language != desc.language:
        v.append(f"language: document {doc.language.value} vs dataset {desc.language.value}")

    allowed = _ALLOWED_PAYLOADS[desc.task]
    for name in PAYLOAD_FIELDS:
        if name not in allowed and _payload_populated(doc, name):
            v.append(f"{name}: payload/task mismatch for task {desc.task.value}")
    required = _REQUIRED_PAYLOADS.get(desc.task)
    if required is not None and getattr(doc, required) is None:
        v.append(f"{required}: required payload missing for task {desc.task.value}")

    n = len(doc.text)
    surfaces = {e.surface for e in doc.entities}
    for e in doc.entities:
        if not (0 <= e.start < e.end):
            v.append(f"entities: span [{e.start},{e.end}) is not a valid range")
        elif e.end > n:
            v.append(f"entities: span [{e.start},{e.end}) out of bounds for text of length {n}")
        elif doc.text[e.start:e.end] != e.surface:
            v.append(
                f"entities: text[{e.start}:{e.end}]={doc.text[e.start:e.end]!r} != surface {e.surface!r}"
            )

    for r in doc.relations:
        if not r.head or not r.tail:
            v.append("relations: head and tail must be non-empty")
            continue
        for arg in (r.head, r.tail):
            if arg not in surfaces and arg not in doc.text:
                v.append(f"relations: argument {arg!r} not among entity surfaces or in text")

    for ev in doc.events:
        if not ev.event_type:
            v.append("events: event_type must be non-empty")
        if ev.trigger and ev.trigger not in surfaces and ev.trigger not in doc.text:
            v.append(f"events: trigger {ev.trigger!r} not among entity surfaces or in text")
        for role, filler in ev.arguments:
            if desc.role_vocab and role not in desc.role_vocab:
                v.append(f"events: role {role!r} not in declared role vocabulary")
            if filler not in surfaces and filler not in doc.text:
                v.append(f"events: argument filler {filler!r} not among entity surfaces or in text")

    if doc.qa is not None:
        if desc.task is TaskType.QA_MC:
            if not doc.qa.options:
                v.append("qa: options must be non-empty for multiple-choice QA")
            else:
                keys = {k for k, _ in doc.qa.options}
                for a in doc.qa.answer_keys:
                    if a not in keys:
                        v.append(f"qa: answer key {a!r} not among option keys")

    if doc.dialogue is not None:
        for i, turn in enumerate(doc.dialogue):
            if turn.speaker not in ("user", "assistant"):
                v.append(f"dialogue: turn {i} has unknown speaker {turn.speaker!r}")
            if not turn.text:
                v.append(f"dialogue: turn {i} has empty text")

    if doc.pair is not None and (not doc.pair.text_a or not doc.pair.text_b):
        v.append("pair: both texts must be non-empty")
    if doc.translation is not None and (not doc.translation.text_a or not doc.translation.text_b):
        v.append("translation: both texts must be non-empty")

    return ValidationResult(ok=not v, violations=tuple(v))


# ---------------------------------------------------------------------------
# JSON (de)serialization
# ---------------------------------------------------------------------------


def document_to_dict(doc: UnifiedDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "dataset_id": doc.dataset_id,
        "language": doc.language.value,
        "text": doc.text,
        "entities": [
            {"surface": e.surface, "etype": e.etype, "start": e.start, "end": e.end, "norm_id": e.norm_id}
            for e in doc.entities
        ],
        "relations": [{"head": r.head, "tail": r.tail, "rtype": r.rtype} for r in doc.relations],
        "events": [
            {"event_type": ev.event_type, "trigger": ev.trigger,
             "arguments": [[role, filler] for role, filler in ev.arguments]}
            for ev in doc.events
        ],
        "labels": list(doc.labels),
        "qa": None if doc.qa is None else {
            "question": doc.qa.question,
            "options": None if doc.qa.options is None else [[k, t] for k, t in doc.qa.options],
            "answer_keys": list(doc.qa.answer_keys),
            "context": doc.qa.context,
        },
        "dialogue": None if doc.dialogue is None else [
            {"speaker": t.speaker, "text": t.text} for t in doc.dialogue
        ],
        "pair": None if doc.pair is None else {
            "text_a": doc.pair.text_a, "text_b": doc.pair.text_b, "label": doc.pair.label
        },
        "translation": None if doc.translation is None else {
            "text_a": doc.translation.text_a, "text_b": doc.translation.text_b,
            "source_lang": doc.translation.source_lang.value,
            "target_lang": doc.translation.target_lang.value,
        },
    }


def document_from_dict(d: dict) -> UnifiedDocument:
    qa = d.get("qa")
    dialogue = d.get("dialogue")
    pair = d.get("pair")
    translation = d.get("translation")
    return UnifiedDocument(
        doc_id=d["doc_id"],
        dataset_id=d["dataset_id"],
        language=Language(d["language"]),
        text=d["text"],
        entities=tuple(
            EntityMention(e["surface"], e["etype"], e["start"], e["end"], e.get("norm_id"))
            for e in d.get("entities", [])
        ),
        relations=tuple(
            RelationTriple(r["head"], r["tail"], r["rtype"]) for r in d.get("relations", [])
        ),
        events=tuple(
            EventFrame(ev["event_type"], ev["trigger"],
                       tuple((role, filler) for role, filler in ev.get("arguments", [])))
            for ev in d.get("events", [])
        ),
        labels=tuple(d.get("labels", [])),
        qa=None if qa is None else QAInstance(
            question=qa["question"],
            options=None if qa.get("options") is None else tuple((k, t) for k, t in qa["options"]),
            answer_keys=tuple(qa.get("answer_keys", [])),
            context=qa.get("context"),
        ),
        dialogue=None if dialogue is None else tuple(
            DialogueTurn(t["speaker"], t["text"]) for t in dialogue
        ),
        pair=None if pair is None else TextPairInstance(pair["text_a"], pair["text_b"], pair.get("label")),
        translation=None if translation is None else TranslationPair(
            translation["text_a"], translation["text_b"],
            Language(translation.get("source_lang", "en")),
            Language(translation.get("target_lang", "zh")),
        ),
    )


def descriptor_to_dict(desc: DatasetDescriptor) -> dict:
    return {
        "id": desc.id,
        "name": desc.name,
        "task": desc.task.value,
        "language": desc.language.value,
        "split_counts": dict(desc.split_counts),
        "description": desc.description,
        "source_url": desc.source_url,
        "label_vocab": list(desc.label_vocab),
        "role_vocab": list(desc.role_vocab),
        "stage_override": desc.stage_override,
        "general_dialogue": desc.general_dialogue,
        "re_untyped": desc.re_untyped,
        "prompted_relation": desc.prompted_relation,
    }


def descriptor_from_dict(d: dict) -> DatasetDescriptor:
    counts = d.get("split_counts", {})
    for split, n in counts.items():
        if n < 0:
            raise ValueError(f"split_counts[{split!r}] must be >= 0, got {n}")
    return DatasetDescriptor(
        id=d["id"],
        name=d["name"],
        task=TaskType(d["task"]),
        language=Language(d["language"]),
        split_counts=dict(counts),
        description=d.get("description", ""),
        source_url=d.get("source_url"),
        label_vocab=tuple(d.get("label_vocab", [])),
        role_vocab=tuple(d.get("role_vocab", [])),
        stage_override=d.get("stage_override"),
        general_dialogue=bool(d.get("general_dialogue", False)),
        re_untyped=bool(d.get("re_untyped", False)),
        prompted_relation=d.get("prompted_relation"),
    )


def write_jsonl(path: Path | str, records: Iterable[dict]) -> int:
    """Write dicts as UTF-8 JSONL; returns the number of lines written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
            n += 1
    return n


def read_jsonl(path: Path | str) -> Iterator[dict]:
    with Path(path).open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_documents(path: Path | str, docs: Iterable[UnifiedDocument]) -> int:
    return write_jsonl(path, (document_to_dict(d) for d in docs))


def read_documents(path: Path | str) -> list[UnifiedDocument]:
    return [document_from_dict(d) for d in read_jsonl(path)]


class Registry:
    """Ordered collection of dataset descriptors with unique ids."""

    def __init__(self, descriptors: Iterable[DatasetDescriptor] = ()):
        self._rows: dict[str, DatasetDescriptor] = {}
        for desc in descriptors:
            self.add(desc)

    def add(self, desc: DatasetDescriptor) -> None:
        if desc.id in self._rows:
            raise ValueError(f"duplicate dataset id {desc.id!r} in registry")
        self._rows[desc.id] = desc

    def get(self, dataset_id: str) -> Optional[DatasetDescriptor]:
        return self._rows.get(dataset_id)

    def __contains__(self, dataset_id: str) -> bool:
        return dataset_id in self._rows

    def __iter__(self) -> Iterator[DatasetDescriptor]:
        return iter(self._rows.values())

    def __len__(self) -> int:
        return len(self._rows)

    @classmethod
    def load(cls, path: Path | str) -> "Registry":
        return cls(descriptor_from_dict(d) for d in read_jsonl(path))

    def save(self, path: Path | str) -> int:
        return write_jsonl(path, (descriptor_to_dict(d) for d in self))
