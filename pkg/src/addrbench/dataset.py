"""Reference ingestion, street dedup, train/validation/test split, synthesis
and serialization of labeled datasets."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import random
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .address import (
    COMPONENTS,
    FIELD_NAMES,
    AddressRecord,
    ComponentLabel,
    IOBTag,
    LabeledSequence,
)
from .exceptions import IngestError, InvalidRecord
from .injector import (
    ErrorKind,
    InjectionOutcome,
    InjectionPolicy,
    RandomSource,
    corrupt,
    corrupted_labels,
)
from .lexicons import LexiconSet, default_lexicons
from .sample import CSV_HEADER

log = logging.getLogger(__name__)

SPLITS = ("train", "validation", "test")
_ZIP = re.compile(r"^\d{5}$")


@dataclass
class ReferenceCorpus:
    records: list[AddressRecord]
    source: str = ""
    rejects: list[tuple[int, str]] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def _row_to_record(row: dict) -> AddressRecord:
    values = {c: (row.get(FIELD_NAMES[c]) or "").strip() for c in COMPONENTS}
    if not values[ComponentLabel.STREET_NAME]:
        raise InvalidRecord("street name is required")
    zip_code = values[ComponentLabel.POSTAL_CODE]
    if zip_code and not _ZIP.match(zip_code):
        raise InvalidRecord(f"postal code {zip_code!r} is not 5 digits")
    return AddressRecord.from_components(values, id=(row.get("id") or "").strip())


def load_reference(path) -> ReferenceCorpus:
    """Read a segmented reference CSV.

    Rows that fail record validation are skipped and listed in ``rejects``
    as ``(row number, reason)``; the header is row 1.
    """
    path = Path(path)
    try:
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            if header is None or [h.strip() for h in header] != CSV_HEADER:
                raise IngestError(
                    f"{path}: expected header {','.join(CSV_HEADER)}, got {header}"
                )
            records, rejects, seen = [], [], set()
            for rowno, row in enumerate(reader, start=2):
                try:
                    rec = _row_to_record(row)
                    if not rec.id:
                        raise InvalidRecord("missing id")
                    if rec.id in seen:
                        raise InvalidRecord(f"duplicate id {rec.id!r}")
                except InvalidRecord as exc:
                    rejects.append((rowno, str(exc)))
                    continue
                seen.add(rec.id)
                records.append(rec)
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise IngestError(f"{path} is not valid UTF-8: {exc}") from exc
    except csv.Error as exc:
        raise IngestError(f"{path}: malformed CSV: {exc}") from exc
    if rejects:
        log.warning("%s: rejected %d rows", path, len(rejects))
    return ReferenceCorpus(records, str(path), rejects)


def write_reference(records: Iterable[AddressRecord], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([r.id] + [r.get(c) or "" for c in COMPONENTS])


def dedup_key(record: AddressRecord) -> tuple:
    """Every component except the house number, case-folded."""
    return tuple((record.get(c) or "").lower() for c in COMPONENTS[1:])


def dedupe_streets(corpus: ReferenceCorpus) -> ReferenceCorpus:
    seen, kept = set(), []
    for rec in corpus.records:
        key = dedup_key(rec)
        if key not in seen:
            seen.add(key)
            kept.append(rec)
    return ReferenceCorpus(kept, corpus.source, list(corpus.rejects))


@dataclass
class SplitBundle:
    train: list[AddressRecord]
    validation: list[AddressRecord]
    test: list[AddressRecord]
    seed: int = 0

    @property
    def counts(self) -> dict[str, int]:
        return {name: len(getattr(self, name)) for name in SPLITS}

    def items(self):
        return [(name, getattr(self, name)) for name in SPLITS]


def _group(records, key) -> dict:
    groups: dict = {}
    for rec in records:
        groups.setdefault(key(rec), []).append(rec)
    return groups


def split(unique: ReferenceCorpus, seed: int = 0) -> SplitBundle:
    """Test takes one random street per (state, zip); from the rest, up to 9
    streets are sampled per (city, state, zip), the first two go to train and
    the last (when at least 3 were sampled) to validation."""
    records = list(unique)
    rng = random.Random(seed)

    def fold(v):
        return (v or "").lower()

    test = []
    for group in _group(records, lambda r: (fold(r.state), fold(r.zip))).values():
        test.append(group[rng.randrange(len(group))])
    test_ids = {id(r) for r in test}
    rest = [r for r in records if id(r) not in test_ids]

    train, validation = [], []
    for group in _group(rest, lambda r: (fold(r.city), fold(r.state), fold(r.zip))).values():
        picked = rng.sample(group, min(9, len(group)))
        train.extend(picked[:2])
        if len(picked) >= 3:
            validation.append(picked[-1])
    return SplitBundle(train, validation, test, seed)


def write_split_bundle(bundle: SplitBundle, out_dir) -> dict:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, records in bundle.items():
        write_reference(records, out_dir / f"{name}.csv")
    info = {"seed": bundle.seed, "counts": bundle.counts}
    (out_dir / "split.json").write_text(json.dumps(info, indent=2) + "\n", encoding="utf-8")
    return info


def read_split_bundle(split_dir) -> SplitBundle:
    split_dir = Path(split_dir)
    info_path = split_dir / "split.json"
    seed = 0
    if info_path.exists():
        seed = json.loads(info_path.read_text(encoding="utf-8")).get("seed", 0)
    parts = {}
    for name in SPLITS:
        corpus = load_reference(split_dir / f"{name}.csv")
        if corpus.rejects:
            raise IngestError(f"{split_dir / name}.csv: {len(corpus.rejects)} invalid rows")
        parts[name] = corpus.records
    return SplitBundle(seed=seed, **parts)


def expand(records: list[AddressRecord], n: int, seed: int = 0) -> list[AddressRecord]:
    """Resample ``records`` to exactly ``n`` entries.

    Every record is used ``n // len(records)`` times, the remainder is drawn
    without replacement. Copies get ids ``<id>~<k>`` so each copy draws its
    own corruption stream.
    """
    if not records:
        return []
    rng = random.Random(seed)
    reps, extra = divmod(n, len(records))
    picks = list(records) * reps + rng.sample(records, extra)
    rng.shuffle(picks)
    counter: Counter = Counter()
    out = []
    for rec in picks:
        k = counter[rec.id]
        counter[rec.id] += 1
        out.append(dataclasses.replace(rec, id=f"{rec.id}~{k}", outcomes=()))
    return out


# --- synthesis -------------------------------------------------------------

@dataclass
class LabeledRecord:
    record: AddressRecord
    sequence: LabeledSequence

    def to_json(self) -> dict:
        return {
            "id": self.record.id,
            "components": {c.value: v for c, v in self.record.components().items()},
            "tokens": list(self.sequence.tokens),
            "tags": self.sequence.tag_strings,
            "outcomes": [o.to_dict() for o in self.record.outcomes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LabeledRecord":
        outcomes = [InjectionOutcome.from_dict(o) for o in obj.get("outcomes", [])]
        record = AddressRecord.from_components(obj["components"], id=obj["id"], outcomes=outcomes)
        return cls(record, LabeledSequence(obj["tokens"], obj["tags"]))


@dataclass
class DatasetManifest:
    policy: dict
    seeds: dict
    splits: dict = field(default_factory=dict)
    files: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"policy": self.policy, "seeds": self.seeds, "splits": self.splits, "files": self.files}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_dict(cls, d) -> "DatasetManifest":
        return cls(d["policy"], d["seeds"], d.get("splits", {}), d.get("files", {}))


def tally(records: list[LabeledRecord]) -> dict:
    by_count = {"0": 0, "1": 0, "2": 0}
    by_kind = {k.value: 0 for k in ErrorKind}
    for item in records:
        by_count[str(len(item.record.outcomes))] += 1
        for o in item.record.outcomes:
            by_kind[o.kind.value] += 1
    return {"total": len(records), "by_error_count": by_count, "by_kind": by_kind}


def _corrupt_one(args) -> LabeledRecord:
    record, policy, lex = args
    out = corrupt(record, policy, lex, RandomSource.for_record(policy.seed, record.id))
    return LabeledRecord(out, corrupted_labels(out))


def synthesize_records(records, policy: InjectionPolicy, lex: Optional[LexiconSet] = None,
                       workers: int = 1) -> list[LabeledRecord]:
    lex = lex or default_lexicons()
    jobs = [(r, policy, lex) for r in records]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_corrupt_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_corrupt_one(j) for j in jobs]


def synthesize(bundle: SplitBundle, policy: InjectionPolicy, lex: Optional[LexiconSet] = None,
               workers: int = 1):
    """Corrupt and label every split; returns ``(datasets, manifest)``."""
    datasets = {}
    manifest = DatasetManifest(policy.to_dict(), {"split_seed": bundle.seed, "policy_seed": policy.seed})
    for name, records in bundle.items():
        datasets[name] = synthesize_records(records, policy, lex, workers)
        manifest.splits[name] = tally(datasets[name])
    return datasets, manifest


# --- serialization ---------------------------------------------------------

def conll_text(sequences: Iterable[LabeledSequence]) -> str:
    blocks = [
        "\n".join(f"{tok}\t{tag}" for tok, tag in zip(seq.tokens, seq.tag_strings))
        for seq in sequences
    ]
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def write_conll(sequences: Iterable[LabeledSequence], path) -> None:
    Path(path).write_text(conll_text(sequences), encoding="utf-8", newline="\n")


def read_conll(path) -> list[LabeledSequence]:
    """Read ``token<TAB>tag`` lines; blank lines separate sequences."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    out, tokens, tags = [], [], []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            if tokens:
                out.append(LabeledSequence(tokens, tags))
                tokens, tags = [], []
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise IngestError(f"{path}:{lineno}: expected token<TAB>tag")
        if not parts[0]:
            raise IngestError(f"{path}:{lineno}: empty token")
        try:
            tags.append(IOBTag.parse(parts[1].strip()))
        except ValueError as exc:
            raise IngestError(f"{path}:{lineno}: {exc}") from exc
        tokens.append(parts[0])
    if tokens:
        out.append(LabeledSequence(tokens, tags))
    return out


def write_jsonl(items: Iterable[LabeledRecord], path) -> None:
    lines = [json.dumps(item.to_json(), ensure_ascii=False) for item in items]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8", newline="\n")


def read_jsonl(path) -> list[LabeledRecord]:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                try:
                    out.append(LabeledRecord.from_json(json.loads(line)))
                except (ValueError, KeyError) as exc:
                    raise IngestError(f"{path}:{lineno}: {exc}") from exc
    return out


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def export(datasets: dict, manifest: DatasetManifest, out_dir) -> list[Path]:
    """Write ``<split>.conll``, ``<split>.jsonl`` and ``manifest.json``.

    The manifest's ``files`` table records the SHA-256 of every data file.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for name, items in datasets.items():
            conll = out_dir / f"{name}.conll"
            jsonl = out_dir / f"{name}.jsonl"
            write_conll([i.sequence for i in items], conll)
            write_jsonl(items, jsonl)
            written += [conll, jsonl]
        manifest.files = {p.name: file_sha256(p) for p in written}
        manifest_path = out_dir / "manifest.json"
        manifest_path.write_text(manifest.to_json(), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IngestError(f"cannot write to {getattr(exc, 'filename', out_dir)}: {exc}") from exc
    return written + [manifest_path]


def read_manifest(path) -> DatasetManifest:
    return DatasetManifest.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
