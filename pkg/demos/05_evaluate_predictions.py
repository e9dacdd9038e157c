"""Walkthrough: parsing free-text model generations and scoring them.

Run: python3 demos/05_evaluate_predictions.py
"""

from bioforge import (
    PredictionRecord,
    build_corpus,
    default_template_bank,
    evaluate_dataset,
    parse_ner_output,
    parse_qa_choice,
)
from bioforge.schema import Language
from bioforge.synth import make_ner_docs


def main():
    print("tolerant parsing of messy model output:")
    out = parse_ner_output("chemical:  Aspirin ;Aspirin\nI hope that helps!",
                           Language.EN, ["Chemical", "Disease"])
    print(" ", out.ner)
    out = parse_qa_choice("The correct answer is (B).",
                          (("A", "aspirin"), ("B", "colchicine")))
    print("  choice:", out.qa_choice)

    desc, docs = make_ner_docs(100, seed=5)
    instances = build_corpus([(desc, docs)], default_template_bank(), seed=7)

    # oracle replay: gold output fed back in scores exactly 1.0
    oracle = [PredictionRecord(i.instance_id, i.output) for i in instances]
    print("\noracle replay:", evaluate_dataset(instances, oracle, desc).f1)

    # a model that drops the Disease line: recall suffers, precision stays 1.0
    degraded = [
        PredictionRecord(
            i.instance_id,
            "\n".join(line for line in i.output.split("\n") if not line.startswith("Disease")),
        )
        for i in instances
    ]
    report = evaluate_dataset(instances, degraded, desc)
    print("\ndegraded model:")
    print(report.to_text())


if __name__ == "__main__":
    main()
