"""Deterministic lexicon/pattern address parser.

The tail of a US address is the least ambiguous part, so the zip and state
are anchored from the right first; house number, predirectional, road type,
postdirectional and city are then assigned left to right around the road
type.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from sklearn.base import BaseEstimator

from .address import OUTSIDE, ComponentLabel, IOBTag, LabeledSequence, tokenize
from .lexicons import LexiconSet, default_lexicons
from .validation import check_texts

C = ComponentLabel
_ZIP = re.compile(r"^\d{5}$")


@dataclass(frozen=True)
class RuleConfig:
    lexicons: LexiconSet = field(default_factory=default_lexicons)
    # off: any two-letter alphabetic token before the zip is taken as a state
    strict_state: bool = True


def _is_state(token: str, config: RuleConfig) -> bool:
    if config.lexicons.is_state(token):
        return True
    return not config.strict_state and len(token) == 2 and token.isalpha()


def _label_positions(words: list[str], config: RuleConfig) -> list[Optional[ComponentLabel]]:
    lex = config.lexicons
    labels: list[Optional[ComponentLabel]] = [None] * len(words)
    lo, hi = 0, len(words)

    zip_found = False
    if hi > lo and _ZIP.match(words[hi - 1]):
        hi -= 1
        labels[hi] = C.POSTAL_CODE
        zip_found = True
    # without a zip, a trailing "CT"/"DE"/... is only a state if a street fits before it
    if hi > lo and _is_state(words[hi - 1], config) and (zip_found or hi - 1 - lo >= 2):
        hi -= 1
        labels[hi] = C.STATE

    if lo < hi and words[lo].isdigit():
        labels[lo] = C.HOUSE_NUMBER
        lo += 1
    if hi - lo >= 2 and lex.is_directional(words[lo]):
        labels[lo] = C.PREDIRECTIONAL
        lo += 1

    road = next((j for j in range(hi - 1, lo, -1) if lex.is_road_type(words[j])), None)
    if road is None:
        for j in range(lo, hi):
            labels[j] = C.STREET_NAME
        return labels

    for j in range(lo, road):
        labels[j] = C.STREET_NAME
    labels[road] = C.ROAD_TYPE
    rest = road + 1
    if rest < hi and lex.is_directional(words[rest]):
        # a spelled-out direction followed by more words is the start of a
        # city name (NORTH LITTLE ROCK), not a postdirectional
        if not lex.is_directional_word(words[rest]) or rest + 1 == hi:
            labels[rest] = C.POSTDIRECTIONAL
            rest += 1
    for j in range(rest, hi):
        labels[j] = C.CITY
    return labels


def parse_rule(text: str, config: Optional[RuleConfig] = None) -> LabeledSequence:
    config = config or RuleConfig()
    tokens = tokenize(text)
    content = [i for i, t in enumerate(tokens) if t != ","]
    labels = _label_positions([tokens[i] for i in content], config)

    by_position = dict(zip(content, labels))
    tags, prev = [], None
    for i in range(len(tokens)):
        label = by_position.get(i)
        if label is None:
            tags.append(OUTSIDE)
        else:
            tags.append(IOBTag("I" if label == prev else "B", label))
        prev = label
    return LabeledSequence(tokens, tags)


class RuleParser(BaseEstimator):
    """Rule-based parser with the estimator interface; ``fit`` learns nothing."""

    def __init__(self, strict_state=True, lexicons=None):
        self.strict_state = strict_state
        self.lexicons = lexicons

    def fit(self, X=None, y=None):
        self.config_ = RuleConfig(
            lexicons=self.lexicons if self.lexicons is not None else default_lexicons(),
            strict_state=self.strict_state,
        )
        return self

    def parse(self, text: str) -> LabeledSequence:
        if not hasattr(self, "config_"):
            self.fit()
        return parse_rule(text, self.config_)

    def predict(self, X) -> list[list[str]]:
        return [self.parse(text).tag_strings for text in check_texts(X)]
