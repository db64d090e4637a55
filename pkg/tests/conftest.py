import pytest

from addrbench.address import gold_labels
from addrbench.dataset import dedupe_streets, expand, load_reference, split, synthesize_records
from addrbench.injector import InjectionPolicy
from addrbench.lexicons import default_lexicons
from addrbench.sample import sample_corpus_path
from addrbench.tagger import TrainConfig, train


@pytest.fixture(scope="session")
def lex():
    return default_lexicons()


@pytest.fixture(scope="session")
def corpus():
    return load_reference(sample_corpus_path())


@pytest.fixture(scope="session")
def unique(corpus):
    return dedupe_streets(corpus)


@pytest.fixture(scope="session")
def bundle(unique):
    return split(unique, seed=7)


@pytest.fixture(scope="session")
def small_model(bundle, lex):
    """Tagger trained on 1,000 corrupted records for 5 epochs."""
    records = expand(bundle.train, 1000, seed=3)
    data = synthesize_records(records, InjectionPolicy(seed=3), lex)
    return train([x.sequence for x in data], TrainConfig(epochs=5, seed=3), lex)


@pytest.fixture(scope="session")
def clean_test(bundle):
    return [gold_labels(r) for r in bundle.test]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
