"""Seed lexicons (directionals, road types, states, ...) and override-file loading.

Override files are UTF-8 text with one ``<category>\\t<key>\\t<value>`` entry
per line; ``#`` starts a comment line. Categories:

    directional           full word -> abbreviation   (North -> N)
    road_type             full word -> abbreviation   (Boulevard -> Blvd)
    state                 two-letter code -> name
    spanish_prefix        article word -> (ignored)
    partial_abbreviation  word -> abbreviation        (Mountain -> Mtn)
    ordinal_suffix        suffix -> (ignored)
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Union

from .exceptions import LexiconLoadError

DIRECTIONALS = {
    "North": "N",
    "South": "S",
    "East": "E",
    "West": "W",
    "Northeast": "NE",
    "Northwest": "NW",
    "Southeast": "SE",
    "Southwest": "SW",
}

# common USPS street suffixes; words that routinely appear inside city names
# (Park, Lake, Green, Bend, Heights, ...) are left out on purpose
ROAD_TYPES = {
    "Alley": "Aly",
    "Avenue": "Ave",
    "Boulevard": "Blvd",
    "Bypass": "Byp",
    "Causeway": "Cswy",
    "Circle": "Cir",
    "Court": "Ct",
    "Cove": "Cv",
    "Crescent": "Cres",
    "Crossing": "Xing",
    "Crossroad": "Xrd",
    "Drive": "Dr",
    "Expressway": "Expy",
    "Freeway": "Fwy",
    "Glen": "Gln",
    "Grove": "Grv",
    "Highway": "Hwy",
    "Hollow": "Holw",
    "Knoll": "Knl",
    "Landing": "Lndg",
    "Lane": "Ln",
    "Loop": "Loop",
    "Manor": "Mnr",
    "Oval": "Oval",
    "Parkway": "Pkwy",
    "Pass": "Pass",
    "Path": "Path",
    "Pike": "Pike",
    "Place": "Pl",
    "Plaza": "Plz",
    "Ridge": "Rdg",
    "Road": "Rd",
    "Row": "Row",
    "Run": "Run",
    "Spur": "Spur",
    "Square": "Sq",
    "Street": "St",
    "Terrace": "Ter",
    "Trace": "Trce",
    "Trail": "Trl",
    "Turnpike": "Tpke",
    "View": "Vw",
    "Vista": "Vis",
    "Walk": "Walk",
    "Way": "Way",
    "Wynd": "Wynd",
}

STATES = {
    "AL": "Alabama", "AK": "Alaska", "AZ": "Arizona", "AR": "Arkansas",
    "CA": "California", "CO": "Colorado", "CT": "Connecticut", "DE": "Delaware",
    "DC": "District of Columbia", "FL": "Florida", "GA": "Georgia", "HI": "Hawaii",
    "ID": "Idaho", "IL": "Illinois", "IN": "Indiana", "IA": "Iowa",
    "KS": "Kansas", "KY": "Kentucky", "LA": "Louisiana", "ME": "Maine",
    "MD": "Maryland", "MA": "Massachusetts", "MI": "Michigan", "MN": "Minnesota",
    "MS": "Mississippi", "MO": "Missouri", "MT": "Montana", "NE": "Nebraska",
    "NV": "Nevada", "NH": "New Hampshire", "NJ": "New Jersey", "NM": "New Mexico",
    "NY": "New York", "NC": "North Carolina", "ND": "North Dakota", "OH": "Ohio",
    "OK": "Oklahoma", "OR": "Oregon", "PA": "Pennsylvania", "RI": "Rhode Island",
    "SC": "South Carolina", "SD": "South Dakota", "TN": "Tennessee", "TX": "Texas",
    "UT": "Utah", "VT": "Vermont", "VA": "Virginia", "WA": "Washington",
    "WV": "West Virginia", "WI": "Wisconsin", "WY": "Wyoming",
}

SPANISH_PREFIXES = ("La", "El", "Los", "Las", "De", "Del")

PARTIAL_ABBREVIATIONS = {
    "Mountain": "Mtn",
    "Mount": "Mt",
    "Heights": "Hts",
    "Spring": "Spg",
    "Springs": "Spgs",
    "Village": "Vlg",
    "Creek": "Crk",
    "Lake": "Lk",
    "River": "Riv",
    "Valley": "Vly",
    "Point": "Pt",
    "Fort": "Ft",
    "Saint": "St",
    "Center": "Ctr",
    "Junction": "Jct",
    "Harbor": "Hbr",
    "Meadow": "Mdw",
    "Meadows": "Mdws",
    "Forest": "Frst",
    "Gardens": "Gdns",
    "Station": "Sta",
    "Estates": "Ests",
}

ORDINAL_SUFFIXES = ("st", "nd", "rd", "th")

_MAP_CATEGORIES = ("directional", "road_type", "partial_abbreviation", "state")
_LIST_CATEGORIES = ("spanish_prefix", "ordinal_suffix")


def _fold(mapping: Mapping[str, str]) -> dict[str, str]:
    return {k.lower(): v for k, v in mapping.items()}


@dataclass(frozen=True)
class LexiconSet:
    """Case-insensitive lexicons. Keys are stored lowercased; values keep the
    display casing they were given."""

    directionals: Mapping[str, str]           # full -> abbreviation
    road_types: Mapping[str, str]             # full -> abbreviation
    state_codes: Mapping[str, str]            # code -> name
    spanish_prefixes: tuple
    partial_abbreviations: Mapping[str, str]  # word -> abbreviation
    ordinal_suffixes: tuple

    def __post_init__(self):
        abbrs = [a.lower() for a in self.directionals.values()]
        if len(set(abbrs)) != len(abbrs):
            raise LexiconLoadError("directional abbreviations must be one-to-one")
        # reverse lookups, cached on the frozen instance
        object.__setattr__(self, "_dir_abbr", {a.lower(): f for f, a in self.directionals.items()})
        object.__setattr__(self, "_road_abbr", {a.lower(): a for a in self.road_types.values()})
        object.__setattr__(self, "_spanish", {p.lower() for p in self.spanish_prefixes})

    # directionals
    def is_directional(self, word: str) -> bool:
        w = word.lower()
        return w in self.directionals or w in self._dir_abbr

    def is_directional_word(self, word: str) -> bool:
        """Full-word directional only (North, Southwest, ...)."""
        return word.lower() in self.directionals

    def directional_abbreviation(self, full: str) -> str:
        return self.directionals[full.lower()]

    def directional_full(self, abbr: str) -> str:
        return self._dir_abbr[abbr.lower()].title()

    def directional_words(self) -> list[str]:
        return [k.title() for k in self.directionals]

    # road types
    def is_road_type(self, word: str) -> bool:
        w = word.lower()
        return w in self.road_types or w in self._road_abbr

    def road_type_abbreviations(self) -> list[str]:
        """Canonical (abbreviated) road types, sorted for reproducible draws."""
        return sorted(set(self.road_types.values()), key=str.lower)

    def canonical_road_type(self, word: str) -> Optional[str]:
        w = word.lower()
        if w in self._road_abbr:
            return self._road_abbr[w]
        return self.road_types.get(w)

    # the rest
    def is_state(self, word: str) -> bool:
        return word.lower() in self.state_codes

    def is_spanish_prefix(self, word: str) -> bool:
        return word.lower() in self._spanish

    def partial_abbreviation(self, word: str) -> Optional[str]:
        return self.partial_abbreviations.get(word.lower())

    def has_ordinal_suffix(self, word: str) -> bool:
        w = word.lower()
        return any(
            w.endswith(s) and len(w) > len(s) and w[: -len(s)].isdigit()
            for s in self.ordinal_suffixes
        )


def default_lexicons() -> LexiconSet:
    return LexiconSet(
        directionals=_fold(DIRECTIONALS),
        road_types=_fold(ROAD_TYPES),
        state_codes=_fold(STATES),
        spanish_prefixes=SPANISH_PREFIXES,
        partial_abbreviations=_fold(PARTIAL_ABBREVIATIONS),
        ordinal_suffixes=ORDINAL_SUFFIXES,
    )


def load_lexicons(path: Union[str, Path, None] = None) -> LexiconSet:
    """Seed lexicons, optionally merged with an override file (user entries win)."""
    if path is None:
        return default_lexicons()

    maps = {
        "directional": _fold(DIRECTIONALS),
        "road_type": _fold(ROAD_TYPES),
        "partial_abbreviation": _fold(PARTIAL_ABBREVIATIONS),
        "state": _fold(STATES),
    }
    lists = {
        "spanish_prefix": list(SPANISH_PREFIXES),
        "ordinal_suffix": list(ORDINAL_SUFFIXES),
    }
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise LexiconLoadError(f"cannot read lexicon file {path}: {exc}") from exc

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconLoadError(f"expected 3 tab-separated fields, got {len(parts)}", lineno)
        category, key, value = (p.strip() for p in parts)
        if not key or " " in key:
            raise LexiconLoadError(f"key must be a single word, got {key!r}", lineno)
        if category in _MAP_CATEGORIES:
            if not value:
                raise LexiconLoadError(f"{category} entry needs a value", lineno)
            if category == "directional":
                # a user entry replaces any seed entry sharing its key or abbreviation
                stale = [k for k, v in maps[category].items() if v.lower() == value.lower()]
                for k in stale:
                    del maps[category][k]
            maps[category][key.lower()] = value
        elif category in _LIST_CATEGORIES:
            if key.lower() not in (w.lower() for w in lists[category]):
                lists[category].append(key)
        else:
            raise LexiconLoadError(f"unknown category {category!r}", lineno)

    return LexiconSet(
        directionals=maps["directional"],
        road_types=maps["road_type"],
        state_codes=maps["state"],
        spanish_prefixes=tuple(lists["spanish_prefix"]),
        partial_abbreviations=maps["partial_abbreviation"],
        ordinal_suffixes=tuple(s.lower() for s in lists["ordinal_suffix"]),
    )


def match_case(template: str, word: str) -> str:
    """Return ``word`` cased like ``template`` (upper, lower or title)."""
    if template.isupper():
        return word.upper()
    if template.islower():
        return word.lower()
    return word[:1].upper() + word[1:].lower() if word.isalpha() else word
