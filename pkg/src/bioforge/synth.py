"""Deterministic synthetic corpora for tests and demos.

Generators produce schema-valid documents with known annotations; surfaces
avoid the separator characters of the output grammars so round trips are
exact by construction.
"""

from __future__ import annotations

import random
from typing import Optional

from .schema import (
    DatasetDescriptor,
    EntityMention,
    Language,
    QAInstance,
    RelationTriple,
    TaskType,
    UnifiedDocument,
)

_CHEMICALS = ["aspirin", "ibuprofen", "valproic acid", "metformin", "phenobarbital",
              "colchicine", "ammonia", "warfarin", "heparin", "insulin"]
_DISEASES = ["epilepsy", "drowsiness", "dyskinesia", "gout", "diabetes",
             "influenza", "hepatitis", "anemia", "migraine", "sepsis"]
_FILLER = ["patients", "treated", "with", "showed", "improved", "outcomes",
           "after", "therapy", "study", "reported", "levels", "during",
           "chronic", "acute", "baseline", "followup"]

_ZH_CHEMICALS = ["青霉素", "阿司匹林", "二甲双胍", "肝素", "胰岛素"]
_ZH_DISEASES = ["癫痫", "糖尿病", "流感", "贫血", "偏头痛"]
_ZH_FILLER = ["患者", "接受", "治疗后", "症状", "明显", "好转", "研究", "表明", "水平", "下降"]

_TC_LABELS = ["Case Report", "Prevention", "Transmission", "Diagnosis",
              "Mechanism", "Treatment", "Epidemic Forecasting"]

_RELATION_TYPES = ["CID", "interacts_with", "treats"]


def ner_descriptor(dataset_id: str = "synth-ner-en", language: Language = Language.EN) -> DatasetDescriptor:
    vocab = ("Chemical", "Disease") if language is Language.EN else ("药物", "疾病")
    return DatasetDescriptor(
        id=dataset_id, name="Synthetic NER", task=TaskType.NER_NEN,
        language=language, label_vocab=vocab,
    )


def make_ner_docs(
    n: int, seed: int = 0, desc: Optional[DatasetDescriptor] = None
) -> tuple[DatasetDescriptor, list[UnifiedDocument]]:
    desc = desc or ner_descriptor()
    zh = desc.language is Language.ZH
    chems = _ZH_CHEMICALS if zh else _CHEMICALS
    dises = _ZH_DISEASES if zh else _DISEASES
    filler = _ZH_FILLER if zh else _FILLER
    sep = "" if zh else " "
    chem_type, dis_type = desc.label_vocab
    rng = random.Random(f"ner:{seed}")
    docs = []
    for i in range(n):
        tokens: list[tuple[str, Optional[str]]] = []
        for _ in range(rng.randint(4, 10)):
            roll = rng.random()
            if roll < 0.25:
                tokens.append((rng.choice(chems), chem_type))
            elif roll < 0.5:
                tokens.append((rng.choice(dises), dis_type))
            else:
                tokens.append((rng.choice(filler), None))
        text_parts = []
        entities = []
        pos = 0
        for token, etype in tokens:
            if etype is not None:
                entities.append(EntityMention(token, etype, pos, pos + len(token)))
            text_parts.append(token)
            pos += len(token) + len(sep)
        docs.append(
            UnifiedDocument(
                doc_id=f"d{i}", dataset_id=desc.id, language=desc.language,
                text=sep.join(text_parts), entities=tuple(entities),
            )
        )
    return desc, docs


def re_descriptor(
    dataset_id: str = "synth-re-en",
    language: Language = Language.EN,
    untyped: bool = False,
) -> DatasetDescriptor:
    return DatasetDescriptor(
        id=dataset_id, name="Synthetic RE", task=TaskType.RE, language=language,
        label_vocab=("CID",) if untyped else tuple(_RELATION_TYPES),
        re_untyped=untyped, prompted_relation="CID" if untyped else None,
    )


def make_re_docs(
    n: int, seed: int = 0, desc: Optional[DatasetDescriptor] = None
) -> tuple[DatasetDescriptor, list[UnifiedDocument]]:
    desc = desc or re_descriptor()
    rng = random.Random(f"re:{seed}")
    rtypes = desc.label_vocab
    docs = []
    for i in range(n):
        heads = rng.sample(_CHEMICALS, rng.randint(1, 3))
        tails = rng.sample(_DISEASES, rng.randint(1, 3))
        relations = []
        entities = []
        text_parts = []
        pos = 0
        for surface in heads + tails:
            etype = "Chemical" if surface in _CHEMICALS else "Disease"
            entities.append(EntityMention(surface, etype, pos, pos + len(surface)))
            text_parts.append(surface)
            pos += len(surface) + 1
        for h in heads:
            for t in tails:
                if rng.random() < 0.6:
                    relations.append(RelationTriple(h, t, rng.choice(rtypes)))
        if not relations:
            relations.append(RelationTriple(heads[0], tails[0], rtypes[0]))
        docs.append(
            UnifiedDocument(
                doc_id=f"d{i}", dataset_id=desc.id, language=desc.language,
                text=" ".join(text_parts), entities=tuple(entities),
                relations=tuple(relations),
            )
        )
    return desc, docs


def tc_descriptor(dataset_id: str = "synth-tc-en", language: Language = Language.EN) -> DatasetDescriptor:
    return DatasetDescriptor(
        id=dataset_id, name="Synthetic TC", task=TaskType.TC,
        language=language, label_vocab=tuple(_TC_LABELS),
    )


def make_tc_docs(
    n: int, seed: int = 0, desc: Optional[DatasetDescriptor] = None
) -> tuple[DatasetDescriptor, list[UnifiedDocument]]:
    desc = desc or tc_descriptor()
    rng = random.Random(f"tc:{seed}")
    docs = []
    for i in range(n):
        labels = tuple(rng.sample(list(desc.label_vocab), rng.randint(1, 2)))
        words = [rng.choice(_FILLER) for _ in range(rng.randint(8, 20))]
        docs.append(
            UnifiedDocument(
                doc_id=f"d{i}", dataset_id=desc.id, language=desc.language,
                text=" ".join(words), labels=labels,
            )
        )
    return desc, docs


def qa_mc_descriptor(dataset_id: str = "synth-qamc-en", language: Language = Language.EN) -> DatasetDescriptor:
    return DatasetDescriptor(
        id=dataset_id, name="Synthetic multiple-choice QA", task=TaskType.QA_MC,
        language=language,
    )


def make_qa_mc_docs(
    n: int, seed: int = 0, desc: Optional[DatasetDescriptor] = None
) -> tuple[DatasetDescriptor, list[UnifiedDocument]]:
    desc = desc or qa_mc_descriptor()
    rng = random.Random(f"qamc:{seed}")
    docs = []
    for i in range(n):
        option_texts = rng.sample(_CHEMICALS + _DISEASES, 4)
        options = tuple(zip("ABCD", option_texts))
        answer = rng.choice("ABCD")
        docs.append(
            UnifiedDocument(
                doc_id=f"d{i}", dataset_id=desc.id, language=desc.language,
                text="",
                qa=QAInstance(
                    question=f"Which item is most relevant to case {i}?",
                    options=options, answer_keys=(answer,),
                ),
            )
        )
    return desc, docs
