"""USPS address components, address records and their IOB labelings."""
from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Mapping, Optional, Sequence

from .exceptions import EmptyInput, EmptyRecord, InvalidRecord


class ComponentLabel(str, Enum):
    HOUSE_NUMBER = "HOUSENUMBER"
    PREDIRECTIONAL = "PREDIRECTIONAL"
    STREET_NAME = "STREETBASENAME"
    ROAD_TYPE = "ROADTYPE"
    POSTDIRECTIONAL = "POSTDIRECTIONAL"
    CITY = "CITY"
    STATE = "STATE"
    POSTAL_CODE = "POSTALCODE"

    @property
    def rank(self) -> int:
        return _RANK[self]

    def __lt__(self, other):
        if not isinstance(other, ComponentLabel):
            return NotImplemented
        return self.rank < other.rank

    def __str__(self):
        return self.value


COMPONENTS: tuple[ComponentLabel, ...] = tuple(ComponentLabel)
_RANK = {c: i for i, c in enumerate(COMPONENTS)}

# record attribute for each component, also the CSV column names
FIELD_NAMES = {
    ComponentLabel.HOUSE_NUMBER: "house_number",
    ComponentLabel.PREDIRECTIONAL: "predirectional",
    ComponentLabel.STREET_NAME: "street_name",
    ComponentLabel.ROAD_TYPE: "road_type",
    ComponentLabel.POSTDIRECTIONAL: "postdirectional",
    ComponentLabel.CITY: "city",
    ComponentLabel.STATE: "state",
    ComponentLabel.POSTAL_CODE: "zip",
}


def _check_value(label, value):
    if value is None:
        return
    if not isinstance(value, str):
        raise InvalidRecord(f"{label}: expected str, got {type(value).__name__}")
    if not value or " ".join(value.split()) != value:
        raise InvalidRecord(f"{label}: malformed whitespace in {value!r}")
    if "," in value:
        raise InvalidRecord(f"{label}: commas are not allowed in component values")


@dataclass(frozen=True)
class AddressRecord:
    """One segmented US address. Absent components are ``None``."""

    house_number: Optional[str] = None
    predirectional: Optional[str] = None
    street_name: Optional[str] = None
    road_type: Optional[str] = None
    postdirectional: Optional[str] = None
    city: Optional[str] = None
    state: Optional[str] = None
    zip: Optional[str] = None
    id: str = ""
    outcomes: tuple = field(default=(), compare=True)

    def __post_init__(self):
        for label in COMPONENTS:
            _check_value(label, getattr(self, FIELD_NAMES[label]))
        if not isinstance(self.outcomes, tuple):
            object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if len(self.outcomes) > 2:
            raise InvalidRecord("a record carries at most two injected outcomes")

    @classmethod
    def from_components(cls, components: Mapping, id: str = "", outcomes=()) -> "AddressRecord":
        """Build a record from a ``{ComponentLabel or label name: value}`` mapping.

        Empty strings are treated as absent components.
        """
        kwargs = {}
        for key, value in components.items():
            label = key if isinstance(key, ComponentLabel) else ComponentLabel(key)
            kwargs[FIELD_NAMES[label]] = value or None
        return cls(**kwargs, id=id, outcomes=tuple(outcomes))

    def get(self, label: ComponentLabel) -> Optional[str]:
        return getattr(self, FIELD_NAMES[label])

    def with_component(self, label: ComponentLabel, value: Optional[str]) -> "AddressRecord":
        return dataclasses.replace(self, **{FIELD_NAMES[label]: value or None})

    def components(self) -> dict[ComponentLabel, str]:
        """Present components in canonical order."""
        return {c: v for c in COMPONENTS if (v := self.get(c)) is not None}

    @property
    def is_ground_truth(self) -> bool:
        return not self.outcomes and self.street_name is not None

    def __len__(self):
        return len(self.components())


@dataclass(frozen=True)
class IOBTag:
    prefix: str
    label: Optional[ComponentLabel] = None

    def __post_init__(self):
        if self.prefix not in ("B", "I", "O"):
            raise ValueError(f"bad IOB prefix {self.prefix!r}")
        if (self.prefix == "O") != (self.label is None):
            raise ValueError("O carries no label; B and I always carry one")

    def __str__(self):
        return "O" if self.prefix == "O" else f"{self.prefix}-{self.label.value}"

    @staticmethod
    @lru_cache(maxsize=None)
    def parse(text: str) -> "IOBTag":
        if text == "O":
            return OUTSIDE
        prefix, sep, label = text.partition("-")
        if not sep:
            raise ValueError(f"bad IOB tag {text!r}")
        return IOBTag(prefix, ComponentLabel(label))


OUTSIDE = IOBTag("O")

# fixed tag inventory order; decoding ties resolve to the earliest entry
TAGS: tuple[IOBTag, ...] = tuple(
    IOBTag(p, c) for c in COMPONENTS for p in ("B", "I")
) + (OUTSIDE,)


def _as_tag(tag) -> IOBTag:
    return tag if isinstance(tag, IOBTag) else IOBTag.parse(tag)


@dataclass(frozen=True)
class LabeledSequence:
    tokens: tuple
    tags: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "tags", tuple(_as_tag(t) for t in self.tags))
        if not self.tokens:
            raise ValueError("a labeled sequence needs at least one token")
        if len(self.tokens) != len(self.tags):
            raise ValueError(
                f"{len(self.tokens)} tokens but {len(self.tags)} tags"
            )
        if any(not t or not isinstance(t, str) for t in self.tokens):
            raise ValueError("tokens must be non-empty strings")

    def __len__(self):
        return len(self.tokens)

    @property
    def tag_strings(self) -> list[str]:
        return [str(t) for t in self.tags]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def render(record: AddressRecord) -> str:
    parts = list(record.components().values())
    if not parts:
        raise EmptyRecord("record has no present components")
    return " ".join(parts)


def gold_labels(record: AddressRecord) -> LabeledSequence:
    tokens, tags = [], []
    for label, value in record.components().items():
        for i, word in enumerate(value.split(" ")):
            tokens.append(word)
            tags.append(IOBTag("B" if i == 0 else "I", label))
    if not tokens:
        raise EmptyRecord("record has no present components")
    return LabeledSequence(tokens, tags)


def validate_iob(seq) -> bool:
    """True iff every I-X directly follows B-X or I-X.

    Accepts a :class:`LabeledSequence` or a plain sequence of tags.
    """
    tags = seq.tags if isinstance(seq, LabeledSequence) else [_as_tag(t) for t in seq]
    prev = OUTSIDE
    for tag in tags:
        if tag.prefix == "I" and (prev.prefix == "O" or prev.label != tag.label):
            return False
        prev = tag
    return True


_COMMA = re.compile(r"(,)")


def tokenize(text: str) -> list[str]:
    """Whitespace tokenization with commas split off as standalone tokens."""
    tokens = []
    for chunk in text.split():
        tokens.extend(p for p in _COMMA.split(chunk) if p)
    if not tokens:
        raise EmptyInput("address text is empty")
    return tokens


def extract_chunks(tags: Sequence) -> list[tuple[ComponentLabel, int, int]]:
    """Maximal B/I spans as ``(label, start, end)`` with ``end`` exclusive.

    A stray I-X that does not continue an X chunk opens a new chunk.
    """
    chunks = []
    label, start = None, 0
    for i, raw in enumerate(tags):
        tag = _as_tag(raw)
        continues = tag.prefix == "I" and tag.label == label
        if label is not None and not continues:
            chunks.append((label, start, i))
            label = None
        if tag.prefix != "O" and not continues:
            label, start = tag.label, i
    if label is not None:
        chunks.append((label, start, len(tags)))
    return chunks


def components_from_labels(seq: LabeledSequence) -> dict[ComponentLabel, str]:
    """Reassemble component strings from a labeled sequence.

    Repeated chunks of one component are joined with a space.
    """
    out: dict[ComponentLabel, list[str]] = {}
    for label, start, end in extract_chunks(seq.tags):
        out.setdefault(label, []).append(" ".join(seq.tokens[start:end]))
    return {c: " ".join(out[c]) for c in COMPONENTS if c in out}


def record_from_labels(seq: LabeledSequence, id: str = "") -> AddressRecord:
    return AddressRecord.from_components(components_from_labels(seq), id=id)

