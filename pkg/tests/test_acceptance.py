"""Acceptance criteria, one test each. Every test records a PASS/FAIL line
that is printed in the terminal summary; run directly with
``python tests/test_acceptance.py`` or through pytest."""
import random
import time

import numpy as np
import pytest

from addrbench.address import (
    COMPONENTS, TAGS, AddressRecord, ComponentLabel as C, LabeledSequence, render, validate_iob,
)
from addrbench.benchmark import BenchmarkConfig, run_benchmark
from addrbench.dataset import dedup_key, expand, export, split, synthesize_records, tally, DatasetManifest
from addrbench.evaluation import chunk_prf, parsing_score
from addrbench.injector import ErrorKind as K, InjectionPolicy, inject, typo
from addrbench.tagger import TaggerModel, path_score, sequence_features, transition_mask, viterbi
from oracles import best_path_score, brute_chunk_counts, distance_up_to_two, valid_paths

pytestmark = pytest.mark.acceptance

RESULTS: list = []


def report(n: int, title: str, ok: bool, detail: str = "") -> None:
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, RESULTS[-1]


# --- 1 ---------------------------------------------------------------------

TABLE4 = {
    "strong parser": ([0.99977, 0.99719, 0.99241, 0.99705, 0.96739, 0.99399, 0.99993, 1.00000], 148.37200),
    "weak parser": ([0.98810, 0.70077, 0.83853, 0.88328, 0.42917, 0.90404, 0.97505, 0.97851], 133.32740),
}


def test_criterion_1_parsing_score():
    got = {name: parsing_score(dict(zip(COMPONENTS, f1s))) for name, (f1s, _) in TABLE4.items()}
    ok = all(abs(got[name] - want) <= 1e-5 for name, (_, want) in TABLE4.items())
    report(1, "parsing score reproduction", ok, ", ".join(f"{k} {v:.5f}" for k, v in got.items()))


# --- 2 ---------------------------------------------------------------------

GOLDENS = [
    (AddressRecord("1600", street_name="Main", road_type="St"), K.HOUSE_NUMBER_OMISSION, "Main St"),
    (AddressRecord(predirectional="E", street_name="Main", road_type="St", postdirectional="NW"),
     K.DIRECTIONAL_SWAP, "NW Main St E"),
    (AddressRecord(street_name="5th", road_type="Ave"), K.NUMBER_SUFFIX_OMISSION, "5 Ave"),
    (AddressRecord(street_name="La Brea", road_type="Ave"), K.SPANISH_PREFIX_OMISSION, "Brea Ave"),
    (AddressRecord(street_name="Memory Hill"), K.STREET_SPACE_OMISSION, "Memoryhill"),
    (AddressRecord(street_name="Warm Mountain"), K.STREET_PARTIAL_ABBREVIATION, "Warm Mtn"),
    (AddressRecord(street_name="Main", road_type="St"), K.ROAD_TYPE_INVALID_SUBSTITUTION, "Main St St"),
    (AddressRecord(predirectional="East", street_name="Main", road_type="St"), K.PREDIRECTIONAL_OMISSION, "Main St"),
    (AddressRecord(street_name="X", city="North Little Rock"), K.CITY_DIRECTION_OMISSION, "X Little Rock"),
    (AddressRecord(street_name="X", city="Los Angeles"), K.CITY_FIRST_CHAR_ABBREVIATION, "X LA"),
    (AddressRecord(street_name="X", city="Houston", state="TX", zip="77845"), K.CITY_OMISSION, "X TX 77845"),
    (AddressRecord(street_name="X", city="Houston", state="TX", zip="77001"), K.STATE_OMISSION, "X Houston 77001"),
    (AddressRecord(street_name="X", city="Houston", state="TX", zip="77001"), K.POSTAL_OMISSION, "X Houston TX"),
]


def test_criterion_2_transforms(lex):
    rendered = [render(inject(rec, k, lex, random.Random(0))[0]) for rec, k, _ in GOLDENS]
    misses = [(g[1].value, got) for g, got in zip(GOLDENS, rendered) if got != g[2]]
    r = random.Random(2024)
    violations = 0
    words = ["Main", "Austin", "Luverne", "Reachcliff", "Redlands", "LUKE HICKS", "Los Angeles"]
    base = AddressRecord(street_name="Reachcliff", road_type="St", city="Redlands", zip="77845")
    for i in range(10_000):
        text, ed = words[i % len(words)], 1 + i % 2
        out = typo(text, ed, r)
        violations += distance_up_to_two(text, out) != ed
        rec, _ = inject(base, K.POSTAL_DIGITS_MISMATCH, lex, r)
        violations += sum(a != b for a, b in zip(rec.zip, "77845")) not in (1, 2)
        rec, _ = inject(base, K.STREET_SPACE_ADDITION, lex, r)
        violations += rec.street_name.replace(" ", "") != "Reachcliff" or rec.street_name.count(" ") != 1
        rec, _ = inject(base, K.ROAD_TYPE_VALID_SUBSTITUTION, lex, r)
        violations += not lex.is_road_type(rec.road_type) or lex.canonical_road_type(rec.road_type) == "St"
    report(2, "transform goldens and stochastic constraints", not misses and not violations,
           f"{len(GOLDENS) - len(misses)}/{len(GOLDENS)} goldens, {violations} violations in 10000 trials")


# --- 3 and 9 (synthesis part) ---------------------------------------------

def synth_100k(unique, lex):
    records = expand(list(unique), 100_000, seed=0)
    return synthesize_records(records, InjectionPolicy(seed=0), lex)


def test_criterion_3_policy_distribution(unique, lex, tmp_path):
    start = time.perf_counter()
    items = synth_100k(unique, lex)
    elapsed = time.perf_counter() - start
    counts = tally(items)["by_error_count"]
    n = len(items)
    corrupted = (counts["1"] + counts["2"]) / n
    one_given = counts["1"] / (counts["1"] + counts["2"])
    ok = abs(corrupted - 0.5) <= 0.01 and abs(one_given - 0.7) <= 0.015 and elapsed < 60
    report(3, "injection policy distribution", ok,
           f"corrupted {corrupted:.4f}, one-error|corrupted {one_given:.4f}, {elapsed:.1f}s")


# --- 4 ---------------------------------------------------------------------

def test_criterion_4_split_properties(unique):
    pairs = {(r.state, r.zip) for r in unique}
    bad = []
    for seed in random.Random(4).sample(range(10**6), 100):
        b = split(unique, seed)
        keys = [{dedup_key(r) for r in part} for _, part in b.items()]
        disjoint = not (keys[0] & keys[1] or keys[0] & keys[2] or keys[1] & keys[2])
        test_pairs = [(r.state, r.zip) for r in b.test]
        one_each = len(test_pairs) == len(set(test_pairs)) and set(test_pairs) == pairs
        if not (disjoint and one_each):
            bad.append(seed)
    report(4, "split disjointness and one test record per (state, zip)", not bad,
           f"100 seeds, {len(bad)} failing")


# --- 5 ---------------------------------------------------------------------

FUZZ_WORDS = ["12", "4500", "N", "NORTH", "W", "MAIN", "ST", "AVE", "RD", ",", "TX", "AL", "77001",
              "LITTLE", "ROCK", "5th", "La", "x", "Mtn", "HOUSTON", "#", "a1b2"]


def test_criterion_5_iob_soundness(unique, lex, small_model):
    items = synthesize_records(list(unique), InjectionPolicy(seed=5), lex)
    gold_bad = sum(not validate_iob(i.sequence) for i in items)
    r = random.Random(5)
    out_bad = 0
    for _ in range(10_000):
        tokens = [r.choice(FUZZ_WORDS) for _ in range(r.randint(1, 12))]
        out_bad += not validate_iob(viterbi(tokens, small_model, lex))
    report(5, "IOB soundness", gold_bad == 0 and out_bad == 0,
           f"{len(items)} synthesized gold, 10000 fuzzed decodes, {gold_bad + out_bad} invalid")


# --- 6 ---------------------------------------------------------------------

def test_criterion_6_evaluator_oracle():
    r = random.Random(6)
    names = [str(t) for t in TAGS]
    mismatched = 0
    for _ in range(1000):
        n = r.randint(1, 10)
        gold = [r.choice(names) for _ in range(n)]
        pred = [r.choice(names) for _ in range(n)]
        toks = [f"t{i}" for i in range(n)]
        rep = chunk_prf([LabeledSequence(toks, gold)], [LabeledSequence(toks, pred)])
        want = brute_chunk_counts(gold, pred)
        got = {c.value: (s.tp, s.fp, s.fn) for c, s in rep.components.items() if s.tp + s.fp + s.fn}
        mismatched += got != want
    report(6, "chunk_prf equals brute-force span matcher", mismatched == 0, f"1000 fixtures, {mismatched} differ")


# --- 7 ---------------------------------------------------------------------

def random_model(rng: np.random.Generator, vocab: list[str], lex) -> TaggerModel:
    feats = sorted({f for w in vocab for tok in sequence_features([w, w], lex) for f in tok})
    return TaggerModel(
        features=feats,
        emission=rng.normal(size=(len(feats), len(TAGS))),
        transition=rng.normal(size=(len(TAGS) + 1, len(TAGS))) * 2,
    )


def test_criterion_7_viterbi_optimality(lex):
    rng = np.random.default_rng(7)
    mask = transition_mask()
    paths = {n: valid_paths(n, mask) for n in range(1, 7)}
    wrong = 0
    for i in range(500):
        model = random_model(rng, FUZZ_WORDS, lex)
        n = 1 + i % 6
        tokens = [FUZZ_WORDS[k] for k in rng.integers(0, len(FUZZ_WORDS), size=n)]
        em = model.emissions(model.feature_ids(tokens, lex))
        decoded = viterbi(tokens, model, lex)
        path = [TAGS.index(t) for t in decoded.tags]
        wrong += path_score(em, model._scores, path) != best_path_score(em, model._scores, paths[n])
    report(7, "Viterbi equals exhaustive search", wrong == 0, f"500 instances, {wrong} suboptimal")


# --- 8 and 9 ---------------------------------------------------------------

@pytest.fixture(scope="module")
def bench_runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("bench")
    runs = [run_benchmark(BenchmarkConfig(), out_dir=root / f"run{i}") for i in range(2)]
    return root, runs


def test_criterion_8_benchmark(bench_runs):
    _, (result, _) = bench_runs
    tc, tx, rx = (result.report("tagger", "clean"), result.report("tagger", "corrupted"),
                  result.report("rule", "corrupted"))
    post = tx.components[C.POSTDIRECTIONAL].f1
    ok = tc.f1 >= 0.95 and tx.f1 >= 0.85 and tx.f1 >= rx.f1 and result.elapsed < 600
    report(8, "end-to-end benchmark", ok,
           f"tagger clean {tc.f1:.5f}, tagger corrupted {tx.f1:.5f}, rule corrupted {rx.f1:.5f}, "
           f"postdirectional corrupted {post:.5f}, {result.elapsed:.0f}s")


def test_criterion_9_determinism(bench_runs, unique, lex, tmp_path):
    root, _ = bench_runs
    names = sorted(p.name for p in (root / "run0").iterdir())
    differ = [n for n in names if (root / "run0" / n).read_bytes() != (root / "run1" / n).read_bytes()]
    for i in range(2):
        items = synth_100k(unique, lex)
        manifest = DatasetManifest(InjectionPolicy(seed=0).to_dict(), {"policy_seed": 0})
        manifest.splits["synth"] = tally(items)
        export({"synth": items}, manifest, tmp_path / f"s{i}")
    for n in ("synth.conll", "synth.jsonl", "manifest.json"):
        if (tmp_path / "s0" / n).read_bytes() != (tmp_path / "s1" / n).read_bytes():
            differ.append(n)
    report(9, "byte-identical reruns", not differ and "model.json" in names,
           f"{len(names) + 3} files compared" + (f", differing: {differ}" if differ else ""))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
