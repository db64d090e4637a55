"""Chunk-level precision/recall/F1 per address component and the weighted
parsing score."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

from .address import COMPONENTS, ComponentLabel, LabeledSequence, extract_chunks
from .exceptions import AlignmentError

log = logging.getLogger(__name__)

# Geocoder component weights; they sum to 149.
DEFAULT_WEIGHTS: dict[ComponentLabel, float] = {
    ComponentLabel.HOUSE_NUMBER: 20,
    ComponentLabel.PREDIRECTIONAL: 7,
    ComponentLabel.STREET_NAME: 45,
    ComponentLabel.ROAD_TYPE: 10,
    ComponentLabel.POSTDIRECTIONAL: 4,
    ComponentLabel.CITY: 17,
    ComponentLabel.STATE: 1,
    ComponentLabel.POSTAL_CODE: 45,
}


def component_weights(weights: Optional[Mapping] = None) -> dict[ComponentLabel, float]:
    """Validate a label -> weight mapping (keys may be label names)."""
    if weights is None:
        return dict(DEFAULT_WEIGHTS)
    out = {}
    for key, value in weights.items():
        label = key if isinstance(key, ComponentLabel) else ComponentLabel(key)
        value = float(value)
        if value < 0:
            raise ValueError(f"weight for {label} must be non-negative")
        out[label] = value
    missing = [c.value for c in COMPONENTS if c not in out]
    if missing:
        raise ValueError(f"weights missing for {', '.join(missing)}")
    return {c: out[c] for c in COMPONENTS}


def load_weights(path) -> dict[ComponentLabel, float]:
    return component_weights(json.loads(Path(path).read_text(encoding="utf-8")))


def f1_score(precision: float, recall: float) -> float:
    return 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


@dataclass
class ComponentScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)


@dataclass
class EvalReport:
    components: dict = field(default_factory=lambda: {c: ComponentScore() for c in COMPONENTS})
    records: int = 0
    mismatches: int = 0
    parsing_score: Optional[float] = None
    level: str = "chunk"

    @property
    def tp(self) -> int:
        return sum(s.tp for s in self.components.values())

    @property
    def fp(self) -> int:
        return sum(s.fp for s in self.components.values())

    @property
    def fn(self) -> int:
        return sum(s.fn for s in self.components.values())

    @property
    def precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def f1(self) -> float:
        return f1_score(self.precision, self.recall)

    @property
    def macro_f1(self) -> float:
        return sum(s.f1 for s in self.components.values()) / len(self.components)

    def f1_by_component(self) -> dict[ComponentLabel, float]:
        return {c: s.f1 for c, s in self.components.items()}

    def to_dict(self, digits: int = 5) -> dict:
        def r(x):
            return round(x, digits)

        out = {
            "level": self.level,
            "records": self.records,
            "token_count_mismatches": self.mismatches,
            "components": {
                c.value: {
                    "tp": s.tp, "fp": s.fp, "fn": s.fn,
                    "precision": r(s.precision), "recall": r(s.recall), "f1": r(s.f1),
                }
                for c, s in self.components.items()
            },
            "overall": {
                "tp": self.tp, "fp": self.fp, "fn": self.fn,
                "precision": r(self.precision), "recall": r(self.recall),
                "f1": r(self.f1), "macro_f1": r(self.macro_f1),
            },
        }
        if self.parsing_score is not None:
            out["parsing_score"] = r(self.parsing_score)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def format_table(self) -> str:
        rows = [f"{'Address component':<20}{'P':>10}{'R':>10}{'F1':>10}"]
        for c, s in self.components.items():
            rows.append(f"{c.value:<20}{s.precision:>10.5f}{s.recall:>10.5f}{s.f1:>10.5f}")
        rows.append(f"{'Overall (micro)':<20}{self.precision:>10.5f}{self.recall:>10.5f}{self.f1:>10.5f}")
        rows.append(f"{'Overall (macro)':<20}{'':>10}{'':>10}{self.macro_f1:>10.5f}")
        if self.parsing_score is not None:
            rows.append(f"{'Parsing Score':<20}{'':>10}{'':>10}{self.parsing_score:>10.5f}")
        return "\n".join(rows)


def _token_spans(tags) -> list[tuple[ComponentLabel, int, int]]:
    return [(t.label, i, i + 1) for i, t in enumerate(tags) if t.prefix != "O"]


def _add(report: EvalReport, gold_spans, pred_spans) -> None:
    gold_set, pred_set = set(gold_spans), set(pred_spans)
    for span in pred_spans:
        score = report.components[span[0]]
        if span in gold_set:
            score.tp += 1
        else:
            score.fp += 1
    for span in gold_spans:
        if span not in pred_set:
            report.components[span[0]].fn += 1


def chunk_prf(gold: Sequence[LabeledSequence], pred: Sequence[LabeledSequence],
              level: str = "chunk") -> EvalReport:
    """Exact-span chunk scoring; ``level="token"`` scores single tokens by
    component label instead (diagnostics only)."""
    if len(gold) != len(pred):
        raise AlignmentError(f"{len(gold)} gold sequences but {len(pred)} predictions")
    spans = extract_chunks if level == "chunk" else _token_spans
    report = EvalReport(level=level)
    for i, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise AlignmentError(f"{len(g)} gold tokens but {len(p)} predicted", index=i)
        _add(report, spans(g.tags), spans(p.tags))
        report.records += 1
    return report


def parsing_score(report, weights: Optional[Mapping] = None) -> float:
    """Sum of weight x F1 over the eight components.

    ``report`` is an :class:`EvalReport` or a ``{label: F1}`` mapping;
    components missing from a mapping score 0.
    """
    weights = component_weights(weights)
    if isinstance(report, EvalReport):
        f1s = report.f1_by_component()
    else:
        f1s = {(k if isinstance(k, ComponentLabel) else ComponentLabel(k)): v for k, v in report.items()}
    total = 0.0
    for c in COMPONENTS:
        if c not in f1s:
            log.warning("no F1 for %s; scoring it as 0", c.value)
        total += weights[c] * f1s.get(c, 0.0)
    return total


def evaluate_parser(parser: Callable[[str], LabeledSequence], test_set: Sequence[LabeledSequence],
                    weights: Optional[Mapping] = None) -> EvalReport:
    """Parse each gold sequence's text and score against the gold tags.

    Predictions whose token count differs from gold cannot be aligned: all of
    their chunks count as false positives and all gold chunks as false
    negatives.
    """
    report = EvalReport()
    for gold in test_set:
        pred = parser(gold.text)
        gold_spans = extract_chunks(gold.tags)
        if len(pred) != len(gold):
            report.mismatches += 1
            for label, *_ in gold_spans:
                report.components[label].fn += 1
            for label, *_ in extract_chunks(pred.tags):
                report.components[label].fp += 1
        else:
            _add(report, gold_spans, extract_chunks(pred.tags))
        report.records += 1
    report.parsing_score = parsing_score(report, weights)
    return report
