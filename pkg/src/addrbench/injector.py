"""Address component error injector.

Every catalogued error/variation is a pure transform of an
:class:`~addrbench.address.AddressRecord`; :func:`corrupt` applies the
record-level policy (how many errors, which component, which kind).
"""
from __future__ import annotations

import dataclasses
import hashlib
import random
import re
import string
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .address import AddressRecord, ComponentLabel, LabeledSequence, gold_labels
from .exceptions import NotApplicable
from .lexicons import LexiconSet, default_lexicons, match_case

C = ComponentLabel


class ErrorKind(str, Enum):
    HOUSE_NUMBER_OMISSION = "HouseNumberOmission"
    PREDIRECTIONAL_OMISSION = "PredirectionalOmission"
    POSTDIRECTIONAL_OMISSION = "PostdirectionalOmission"
    DIRECTIONAL_SWAP = "DirectionalSwap"
    STREET_TYPO_ED1 = "StreetTypoEd1"
    STREET_TYPO_ED2 = "StreetTypoEd2"
    NUMBER_SUFFIX_OMISSION = "NumberSuffixOmission"
    SPANISH_PREFIX_OMISSION = "SpanishPrefixOmission"
    STREET_SPACE_OMISSION = "StreetSpaceOmission"
    STREET_SPACE_ADDITION = "StreetSpaceAddition"
    STREET_PARTIAL_ABBREVIATION = "StreetPartialAbbreviation"
    ROAD_TYPE_OMISSION = "RoadTypeOmission"
    ROAD_TYPE_VALID_SUBSTITUTION = "RoadTypeValidSubstitution"
    ROAD_TYPE_INVALID_SUBSTITUTION = "RoadTypeInvalidSubstitution"
    CITY_OMISSION = "CityOmission"
    CITY_TYPO_ED1 = "CityTypoEd1"
    CITY_TYPO_ED2 = "CityTypoEd2"
    CITY_DIRECTION_ADDITION = "CityDirectionAddition"
    CITY_DIRECTION_OMISSION = "CityDirectionOmission"
    CITY_FIRST_CHAR_ABBREVIATION = "CityFirstCharAbbreviation"
    CITY_SPACE_ADDITION = "CitySpaceAddition"
    STATE_OMISSION = "StateOmission"
    POSTAL_OMISSION = "PostalOmission"
    POSTAL_DIGITS_MISMATCH = "PostalDigitsMismatch"

    def __str__(self):
        return self.value

    @property
    def component(self) -> ComponentLabel:
        return TARGETS[self]


K = ErrorKind

# the swap touches both directional slots; it is filed under Predirectional
TARGETS = {
    K.HOUSE_NUMBER_OMISSION: C.HOUSE_NUMBER,
    K.PREDIRECTIONAL_OMISSION: C.PREDIRECTIONAL,
    K.POSTDIRECTIONAL_OMISSION: C.POSTDIRECTIONAL,
    K.DIRECTIONAL_SWAP: C.PREDIRECTIONAL,
    K.STREET_TYPO_ED1: C.STREET_NAME,
    K.STREET_TYPO_ED2: C.STREET_NAME,
    K.NUMBER_SUFFIX_OMISSION: C.STREET_NAME,
    K.SPANISH_PREFIX_OMISSION: C.STREET_NAME,
    K.STREET_SPACE_OMISSION: C.STREET_NAME,
    K.STREET_SPACE_ADDITION: C.STREET_NAME,
    K.STREET_PARTIAL_ABBREVIATION: C.STREET_NAME,
    K.ROAD_TYPE_OMISSION: C.ROAD_TYPE,
    K.ROAD_TYPE_VALID_SUBSTITUTION: C.ROAD_TYPE,
    K.ROAD_TYPE_INVALID_SUBSTITUTION: C.ROAD_TYPE,
    K.CITY_OMISSION: C.CITY,
    K.CITY_TYPO_ED1: C.CITY,
    K.CITY_TYPO_ED2: C.CITY,
    K.CITY_DIRECTION_ADDITION: C.CITY,
    K.CITY_DIRECTION_OMISSION: C.CITY,
    K.CITY_FIRST_CHAR_ABBREVIATION: C.CITY,
    K.CITY_SPACE_ADDITION: C.CITY,
    K.STATE_OMISSION: C.STATE,
    K.POSTAL_OMISSION: C.POSTAL_CODE,
    K.POSTAL_DIGITS_MISMATCH: C.POSTAL_CODE,
}

OMISSIONS = {
    K.HOUSE_NUMBER_OMISSION: C.HOUSE_NUMBER,
    K.PREDIRECTIONAL_OMISSION: C.PREDIRECTIONAL,
    K.POSTDIRECTIONAL_OMISSION: C.POSTDIRECTIONAL,
    K.ROAD_TYPE_OMISSION: C.ROAD_TYPE,
    K.CITY_OMISSION: C.CITY,
    K.STATE_OMISSION: C.STATE,
    K.POSTAL_OMISSION: C.POSTAL_CODE,
}

TYPOS = {
    K.STREET_TYPO_ED1: (C.STREET_NAME, 1),
    K.STREET_TYPO_ED2: (C.STREET_NAME, 2),
    K.CITY_TYPO_ED1: (C.CITY, 1),
    K.CITY_TYPO_ED2: (C.CITY, 2),
}


@dataclass(frozen=True)
class InjectionOutcome:
    kind: ErrorKind
    component: ComponentLabel
    before: str
    after: str

    def __post_init__(self):
        if self.before == self.after:
            raise ValueError("an injection must change the value")
        if TARGETS[self.kind] != self.component:
            raise ValueError(f"{self.kind} does not target {self.component}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "component": self.component.value,
            "before": self.before,
            "after": self.after,
        }

    @classmethod
    def from_dict(cls, d) -> "InjectionOutcome":
        return cls(ErrorKind(d["kind"]), ComponentLabel(d["component"]), d["before"], d["after"])


@dataclass(frozen=True)
class InjectionPolicy:
    p_corrupt: float = 0.5
    p_two_given_corrupt: float = 0.3
    postal_mismatch_weight: float = 0.2
    seed: int = 0

    def __post_init__(self):
        for name in ("p_corrupt", "p_two_given_corrupt"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if not 0.0 < self.postal_mismatch_weight <= 1.0:
            raise ValueError(
                f"postal_mismatch_weight must lie in (0, 1], got {self.postal_mismatch_weight}"
            )

    def to_dict(self) -> dict:
        return {
            "p_corrupt": self.p_corrupt,
            "p_two_given_corrupt": self.p_two_given_corrupt,
            "postal_mismatch_weight": self.postal_mismatch_weight,
            "seed": self.seed,
        }


class RandomSource(random.Random):
    """``random.Random`` whose seed is derived from ``(seed, record id)``.

    Corrupting a record therefore never depends on which other records were
    processed before it, or by which worker.
    """

    @classmethod
    def for_record(cls, seed: int, record_id: str) -> "RandomSource":
        digest = hashlib.sha256(f"{seed}\x1f{record_id}".encode("utf-8")).digest()
        return cls(int.from_bytes(digest[:8], "big"))


# --- edit distance ---------------------------------------------------------

def damerau_levenshtein(a: str, b: str) -> int:
    """Unrestricted Damerau-Levenshtein distance (Lowrance-Wagner).

    Unit costs for insert, delete, replace and adjacent swap; unlike the
    optimal-string-alignment variant, substrings may be edited more than once.
    """
    inf = len(a) + len(b)
    last_row: dict[str, int] = {}
    d = [[inf] * (len(b) + 2) for _ in range(len(a) + 2)]
    for i in range(len(a) + 1):
        d[i + 1][0] = inf
        d[i + 1][1] = i
    for j in range(len(b) + 1):
        d[0][j + 1] = inf
        d[1][j + 1] = j
    for i in range(1, len(a) + 1):
        last_col = 0
        for j in range(1, len(b) + 1):
            k = last_row.get(b[j - 1], 0)
            l = last_col
            cost = 1
            if a[i - 1] == b[j - 1]:
                cost = 0
                last_col = j
            d[i + 1][j + 1] = min(
                d[i][j] + cost,
                d[i + 1][j] + 1,
                d[i][j + 1] + 1,
                d[k][l] + (i - k - 1) + 1 + (j - l - 1),
            )
        last_row[a[i - 1]] = i
    return d[len(a) + 1][len(b) + 1]


_EDIT_OPS = ("swap", "delete", "insert", "replace")
_MAX_TYPO_ATTEMPTS = 1000


def _random_letter(rng: random.Random, like: str, exclude: str = "") -> str:
    letters = [c for c in string.ascii_lowercase if c != exclude.lower()]
    ch = rng.choice(letters)
    return ch.upper() if like.isupper() else ch


def _word_len_at(chars: list, i: int) -> int:
    lo = i
    while lo > 0 and not chars[lo - 1].isspace():
        lo -= 1
    hi = i
    while hi < len(chars) and not chars[hi].isspace():
        hi += 1
    return hi - lo


def _apply_random_edit(chars: list, rng: random.Random) -> bool:
    op = rng.choice(_EDIT_OPS)
    n = len(chars)
    if op == "swap":
        spots = [i for i in range(n - 1) if not chars[i].isspace() and not chars[i + 1].isspace()]
        if not spots:
            return False
        i = rng.choice(spots)
        chars[i], chars[i + 1] = chars[i + 1], chars[i]
    elif op == "delete":
        spots = [i for i in range(n) if not chars[i].isspace() and _word_len_at(chars, i) > 1]
        if not spots:
            return False
        del chars[rng.choice(spots)]
    elif op == "insert":
        spots = [
            p for p in range(n + 1)
            if (p > 0 and not chars[p - 1].isspace()) or (p < n and not chars[p].isspace())
        ]
        p = rng.choice(spots)
        neighbour = chars[p - 1] if p > 0 and not chars[p - 1].isspace() else chars[p]
        chars.insert(p, _random_letter(rng, neighbour))
    else:
        spots = [i for i in range(n) if not chars[i].isspace()]
        i = rng.choice(spots)
        chars[i] = _random_letter(rng, chars[i], exclude=chars[i])
    return True


def typo(text: str, edit_distance: int, rng: random.Random) -> str:
    """Typographic error at exactly ``edit_distance`` character edits.

    Each edit is a uniformly chosen swap, delete, insert or replace at a
    non-whitespace position. Edit sequences that cancel out (for instance a
    swap undone by a second swap) are redrawn.
    """
    if edit_distance not in (1, 2):
        raise ValueError("edit_distance must be 1 or 2")
    if len(text) < edit_distance + 1 or not text.strip():
        raise NotApplicable(f"{text!r} is too short for {edit_distance} edits")
    for _ in range(_MAX_TYPO_ATTEMPTS):
        chars = list(text)
        if not all(_apply_random_edit(chars, rng) for _ in range(edit_distance)):
            continue
        out = "".join(chars)
        if damerau_levenshtein(text, out) == edit_distance:
            return out
    raise NotApplicable(f"could not reach edit distance {edit_distance} from {text!r}")


# --- applicability ---------------------------------------------------------

_FIVE_DIGITS = re.compile(r"^\d{5}$")


def _words(value: Optional[str]) -> list[str]:
    return value.split(" ") if value else []


def _ordinal_index(words, lex) -> Optional[int]:
    for i, w in enumerate(words):
        if lex.has_ordinal_suffix(w):
            return i
    return None


def _splittable(words) -> list[int]:
    return [i for i, w in enumerate(words) if len(w) >= 4]


def _abbreviable(words, lex) -> list[int]:
    return [i for i, w in enumerate(words) if lex.partial_abbreviation(w) is not None]


def _swap_changes(record) -> bool:
    pre, post = record.predirectional, record.postdirectional
    return (pre or post) is not None and pre != post


def _is_applicable(kind: ErrorKind, record: AddressRecord, lex: LexiconSet) -> bool:
    if kind in OMISSIONS:
        return record.get(OMISSIONS[kind]) is not None
    if kind in TYPOS:
        label, ed = TYPOS[kind]
        value = record.get(label)
        return value is not None and len(value) >= ed + 1
    if kind is K.DIRECTIONAL_SWAP:
        return _swap_changes(record)

    street, city = _words(record.street_name), _words(record.city)
    if kind is K.NUMBER_SUFFIX_OMISSION:
        return _ordinal_index(street, lex) is not None
    if kind is K.SPANISH_PREFIX_OMISSION:
        return len(street) >= 2 and lex.is_spanish_prefix(street[0])
    if kind is K.STREET_SPACE_OMISSION:
        return len(street) >= 2
    if kind is K.STREET_SPACE_ADDITION:
        return bool(_splittable(street))
    if kind is K.STREET_PARTIAL_ABBREVIATION:
        return bool(_abbreviable(street, lex))
    if kind is K.ROAD_TYPE_VALID_SUBSTITUTION:
        rt = record.road_type
        return rt is not None and bool(_substitutes(rt, lex))
    if kind is K.ROAD_TYPE_INVALID_SUBSTITUTION:
        return record.road_type is not None
    if kind is K.CITY_DIRECTION_ADDITION:
        return bool(city) and not lex.is_directional(city[0])
    if kind is K.CITY_DIRECTION_OMISSION:
        return len(city) >= 2 and lex.is_directional_word(city[0])
    if kind is K.CITY_FIRST_CHAR_ABBREVIATION:
        return len(city) >= 2
    if kind is K.CITY_SPACE_ADDITION:
        return bool(_splittable(city))
    if kind is K.POSTAL_DIGITS_MISMATCH:
        return record.zip is not None and bool(_FIVE_DIGITS.match(record.zip))
    raise AssertionError(kind)


def applicable_errors(record: AddressRecord, lex: LexiconSet) -> set[ErrorKind]:
    return {k for k in ErrorKind if _is_applicable(k, record, lex)}


def _ordered(kinds) -> list[ErrorKind]:
    order = list(ErrorKind)
    return sorted(kinds, key=order.index)


# --- transforms ------------------------------------------------------------

def _substitutes(road_type: str, lex: LexiconSet) -> list[str]:
    current = {road_type.lower()}
    canonical = lex.canonical_road_type(road_type)
    if canonical:
        current.add(canonical.lower())
    return [r for r in lex.road_type_abbreviations() if r.lower() not in current]


def _split_word(words, rng) -> list[str]:
    i = rng.choice(_splittable(words))
    w = words[i]
    cut = rng.randint(2, len(w) - 2)
    return words[:i] + [w[:cut], w[cut:]] + words[i + 1:]


def _transform(kind: ErrorKind, record: AddressRecord, lex: LexiconSet, rng: random.Random):
    """Return ``(new_record, before, after)`` for one applicable kind."""
    if kind in OMISSIONS:
        label = OMISSIONS[kind]
        return record.with_component(label, None), record.get(label), ""

    if kind is K.DIRECTIONAL_SWAP:
        pre, post = record.predirectional, record.postdirectional
        new = record.with_component(C.PREDIRECTIONAL, post).with_component(C.POSTDIRECTIONAL, pre)
        return new, f"{pre or ''}|{post or ''}", f"{post or ''}|{pre or ''}"

    if kind in TYPOS:
        label, ed = TYPOS[kind]
        before = record.get(label)
        after = typo(before, ed, rng)
        return record.with_component(label, after), before, after

    label = kind.component
    before = record.get(label)
    words = _words(before)

    if kind is K.NUMBER_SUFFIX_OMISSION:
        i = _ordinal_index(words, lex)
        words[i] = re.match(r"\d+", words[i]).group(0)
    elif kind is K.SPANISH_PREFIX_OMISSION:
        words = words[1:]
    elif kind is K.STREET_SPACE_OMISSION:
        i = rng.randrange(len(words) - 1)
        joined = words[i] + words[i + 1].lower()
        if words[i].isupper():
            joined = joined.upper()
        words = words[:i] + [joined] + words[i + 2:]
    elif kind in (K.STREET_SPACE_ADDITION, K.CITY_SPACE_ADDITION):
        words = _split_word(words, rng)
    elif kind is K.STREET_PARTIAL_ABBREVIATION:
        i = rng.choice(_abbreviable(words, lex))
        words[i] = match_case(words[i], lex.partial_abbreviation(words[i]))
    elif kind is K.ROAD_TYPE_VALID_SUBSTITUTION:
        words = [match_case(before, rng.choice(_substitutes(before, lex)))]
    elif kind is K.ROAD_TYPE_INVALID_SUBSTITUTION:
        words = words + [words[-1]]
    elif kind is K.CITY_DIRECTION_ADDITION:
        direction = rng.choice(lex.directional_words())
        words = [match_case(words[0], direction)] + words
    elif kind is K.CITY_DIRECTION_OMISSION:
        words = words[1:]
    elif kind is K.CITY_FIRST_CHAR_ABBREVIATION:
        words = ["".join(w[0] for w in words).upper()]
    elif kind is K.POSTAL_DIGITS_MISMATCH:
        digits = list(before)
        k = rng.choice((1, 2))
        for pos in sorted(rng.sample(range(len(digits)), k)):
            digits[pos] = rng.choice([d for d in string.digits if d != digits[pos]])
        words = ["".join(digits)]
    else:  # pragma: no cover
        raise AssertionError(kind)

    after = " ".join(words)
    return record.with_component(label, after), before, after


def inject(record: AddressRecord, kind: ErrorKind, lex: LexiconSet, rng: random.Random):
    """Apply one error kind; returns ``(new_record, outcome)``."""
    kind = ErrorKind(kind)
    if not _is_applicable(kind, record, lex):
        raise NotApplicable(f"{kind} does not apply to record {record.id!r}")
    new, before, after = _transform(kind, record, lex, rng)
    outcome = InjectionOutcome(kind, kind.component, before, after)
    return dataclasses.replace(new, outcomes=record.outcomes + (outcome,)), outcome


def corrupt(record: AddressRecord, policy: InjectionPolicy, lex: LexiconSet,
            rng: random.Random) -> AddressRecord:
    """Record-level corruption.

    Draw order is fixed (corrupt?, how many, then component/kind per error)
    so a record's result depends only on its own random stream.
    """
    if record.outcomes:
        raise ValueError(f"record {record.id!r} already carries injected errors")
    if rng.random() >= policy.p_corrupt:
        return record
    n = 2 if rng.random() < policy.p_two_given_corrupt else 1

    current, used = record, set()
    for _ in range(n):
        by_component: dict[ComponentLabel, list[ErrorKind]] = {}
        for kind in _ordered(applicable_errors(current, lex)):
            if kind.component not in used:
                by_component.setdefault(kind.component, []).append(kind)
        if not by_component:
            break
        component = rng.choice(sorted(by_component))
        kinds = by_component[component]
        weights = [
            policy.postal_mismatch_weight if k is K.POSTAL_DIGITS_MISMATCH else 1.0
            for k in kinds
        ]
        kind = rng.choices(kinds, weights=weights)[0]
        current, _ = inject(current, kind, lex, rng)
        used.add(component)
    return current


def corrupted_labels(record: AddressRecord) -> LabeledSequence:
    # tokens added inside a component simply extend that component's chunk
    return gold_labels(record)


class AddressCorruptor(BaseEstimator, TransformerMixin):
    """Transformer that corrupts a list of ground-truth records.

    Each record gets its own random stream derived from ``seed`` and its id,
    so the output does not depend on list order.
    """

    def __init__(self, p_corrupt=0.5, p_two_given_corrupt=0.3,
                 postal_mismatch_weight=0.2, seed=0, lexicons=None):
        self.p_corrupt = p_corrupt
        self.p_two_given_corrupt = p_two_given_corrupt
        self.postal_mismatch_weight = postal_mismatch_weight
        self.seed = seed
        self.lexicons = lexicons

    def fit(self, X, y=None):
        self.policy_ = InjectionPolicy(
            self.p_corrupt, self.p_two_given_corrupt, self.postal_mismatch_weight, self.seed
        )
        self.lexicons_ = self.lexicons if self.lexicons is not None else default_lexicons()
        return self

    def transform(self, X):
        check_is_fitted(self, "policy_")
        return [
            corrupt(r, self.policy_, self.lexicons_, RandomSource.for_record(self.seed, r.id))
            for r in X
        ]
