import json

import pytest

from addrbench.cli import main
from addrbench.dataset import read_conll, write_conll
from addrbench.sample import sample_corpus_path

STRONG_F1 = "0.99977,0.99719,0.99241,0.99705,0.96739,0.99399,0.99993,1.00000"


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["split", str(sample_corpus_path()), str(d / "split"), "--seed", "3"]) == 0
    assert main(["synth", str(d / "split"), str(d / "data"), "--seed", "3"]) == 0
    return d


def test_split_counts_and_determinism(workdir, tmp_path, capsys):
    assert main(["split", str(sample_corpus_path()), str(tmp_path / "again"), "--seed", "3"]) == 0
    printed = json.loads(capsys.readouterr().out)
    info = json.loads((workdir / "split" / "split.json").read_text())
    assert printed["counts"] == info["counts"] and info["seed"] == 3
    for name in ("train.csv", "validation.csv", "test.csv", "split.json"):
        assert (tmp_path / "again" / name).read_bytes() == (workdir / "split" / name).read_bytes()


def test_split_missing_input(tmp_path, capsys):
    assert main(["split", str(tmp_path / "nope.csv"), str(tmp_path / "out")]) == 2
    assert "IngestError" in capsys.readouterr().err


def test_config_echo(tmp_path, caplog):
    caplog.set_level("INFO")
    main(["split", str(sample_corpus_path()), str(tmp_path / "s")])
    assert '"seed": 20231113' in caplog.text


def test_synth_manifest(workdir):
    manifest = json.loads((workdir / "data" / "manifest.json").read_text())
    assert manifest["policy"]["p_corrupt"] == 0.5
    assert manifest["policy"]["p_two_given_corrupt"] == 0.3
    for name in ("train", "validation", "test"):
        assert f"{name}.conll" in manifest["files"]


def test_synth_clean_passthrough(workdir, tmp_path):
    assert main(["synth", str(workdir / "split"), str(tmp_path), "--p-corrupt", "0"]) == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert all(s["by_error_count"]["0"] == s["total"] for s in manifest["splits"].values())


def test_synth_bad_probability(workdir, tmp_path):
    assert main(["synth", str(workdir / "split"), str(tmp_path), "--p-corrupt", "1.5"]) == 1


def test_train_parse_eval(workdir, tmp_path, capsys, caplog):
    caplog.set_level("INFO")
    data = workdir / "data"
    model = tmp_path / "m.json"
    args = ["train", str(data / "train.conll"), str(data / "validation.conll"), str(model), "--epochs", "2"]
    assert main(args) == 0
    epochs = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [e["epoch"] for e in epochs] == [1, 2]
    assert all("validation_f1" in e for e in epochs)
    assert main(args[:3] + [str(tmp_path / "m2.json"), "--epochs", "2"]) == 0
    assert (tmp_path / "m2.json").read_bytes() == model.read_bytes()
    capsys.readouterr()

    assert main(["parse", "118 LUKE HICKS RD HAZEL GREEN AL 35750", "--parser", "tagger",
                 "--model", str(model), "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["tags"]) == 8

    assert main(["eval", str(data / "test.conll"), "--parser", "tagger", "--model", str(model),
                 "--json-out", str(tmp_path / "r.json")]) == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["overall"]["f1"] > 0.9
    assert "Parsing Score" in capsys.readouterr().out


def test_default_epochs_echoed(caplog, tmp_path):
    caplog.set_level("INFO")
    conll = tmp_path / "t.conll"
    conll.write_text("MAIN\tB-STREETBASENAME\nST\tB-ROADTYPE\n")
    assert main(["train", str(conll), str(tmp_path / "m.json")]) == 0
    assert '"epochs": 25' in caplog.text


def test_parse_rule(capsys):
    assert main(["parse", "467 W BROOKWOOD CIR OZARK AL 36360", "--parser", "rule"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 7
    assert lines[1] == "W\tB-PREDIRECTIONAL"


def test_parse_file(tmp_path, capsys):
    f = tmp_path / "in.txt"
    f.write_text("MAIN ST\n\n5 ELM AVE\n")
    assert main(["parse", "--file", str(f), "--format", "json"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 2


def test_parse_usage_errors(tmp_path):
    assert main(["parse", "MAIN ST", "--parser", "tagger"]) == 1
    assert main(["parse"]) == 1
    assert main(["bogus"]) == 1


def test_eval_oracle_predictions(workdir, capsys, tmp_path):
    test = workdir / "data" / "test.conll"
    assert main(["eval", str(test), "--predictions", str(test)]) == 0
    out = capsys.readouterr().out
    # JSON report first, then the table
    report = json.loads(out.split("Address component")[0])
    assert report["parsing_score"] == 149.0
    assert report["overall"]["f1"] == 1.0


def test_eval_prediction_count_mismatch(workdir, tmp_path):
    test = workdir / "data" / "test.conll"
    write_conll(read_conll(test)[:3], tmp_path / "p.conll")
    assert main(["eval", str(test), "--predictions", str(tmp_path / "p.conll")]) == 2


def test_score_only(capsys):
    assert main(["eval", "--score-only", STRONG_F1]) == 0
    assert capsys.readouterr().out.strip() == "148.37200"
    assert main(["eval", "--score-only", "1,2"]) == 1
    assert main(["eval"]) == 1


def test_model_load_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["parse", "MAIN ST", "--parser", "tagger", "--model", str(bad)]) == 2
