import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))  # make oracles importable

DATA = Path(__file__).resolve().parent / "data"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__.endswith("test_acceptance"):
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        lines = getattr(item.config, "_acceptance_lines", None)
        if lines is None:
            lines = item.config._acceptance_lines = []
        lines.append(f"[{'PASS' if report.passed else 'FAIL'}] {label}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def fixture_docs():
    from argsum import corpus

    return corpus.load_corpus(DATA / "documents.jsonl", "documents")


@pytest.fixture(scope="session")
def fixture_refs():
    from argsum import corpus

    return corpus.load_corpus(DATA / "references.jsonl", "references")


@pytest.fixture(scope="session")
def fixture_candidates():
    from argsum import corpus

    return corpus.load_corpus(DATA / "candidates.jsonl", "candidates")


@pytest.fixture(scope="session")
def fixture_folds_eval():
    from argsum import corpus

    return corpus.load_corpus(DATA / "folds_eval.jsonl", "folds")


@pytest.fixture(scope="session")
def fixture_fold_augment():
    from argsum import corpus

    return corpus.load_corpus(DATA / "folds_augment.jsonl", "folds")[0]
