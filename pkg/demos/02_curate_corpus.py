"""Walkthrough: dedup, train/test overlap filtering, subtask decomposition,
and the corpus statistics table.

Run: python3 demos/02_curate_corpus.py
"""

from bioforge import (
    SubtaskPlan,
    corpus_stats,
    decompose_subtasks,
    dedup_and_filter_overlap,
    reference_registry,
)
from bioforge.synth import make_ner_docs


def main():
    desc, docs = make_ner_docs(50, seed=0)

    # inject 3 duplicates and pretend 2 docs leaked into the test set
    train = list(docs) + docs[:3]
    test = docs[10:12]
    kept, report = dedup_and_filter_overlap(train, test)
    print("curation report:")
    print(f"  input={report.input_count} dups={report.duplicates_removed} "
          f"overlap={report.overlap_removed} output={report.output_count}")

    # split the 2-type corpus into per-type virtual datasets
    outputs = decompose_subtasks(kept, desc, SubtaskPlan.per_label(desc.label_vocab))
    print("\nsubtask decomposition:")
    for virtual_desc, subset in outputs:
        n_entities = sum(len(d.entities) for d in subset)
        print(f"  {virtual_desc.id}: {len(subset)} docs, {n_entities} entities")

    print("\nreference corpus statistics (registry metadata):")
    print(corpus_stats(reference_registry()).to_text())


if __name__ == "__main__":
    main()
