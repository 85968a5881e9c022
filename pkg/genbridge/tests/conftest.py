import json
import subprocess
import sys
from pathlib import Path

import pytest


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


def run_genbridge(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "genbridge", *map(str, args)],
        cwd=cwd, capture_output=True, text=True,
    )


def run_argsum(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "argsum", *map(str, args)],
        cwd=cwd, capture_output=True, text=True,
    )


def write_jsonl(path: Path, records):
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


@pytest.fixture()
def unlabeled_docs(tmp_path):
    """Six documents without role labels, as they arrive before prediction."""
    docs = []
    for i in range(6):
        docs.append({
            "doc_id": f"case_{i}",
            "role_source": "none",
            "sentences": [
                {"text": f"sentence {j} of case {i} concerns the court and the claim.",
                 "role": "NonArgument"}
                for j in range(5 + i)
            ],
        })
    path = tmp_path / "docs.jsonl"
    write_jsonl(path, docs)
    return path


@pytest.fixture()
def references_for(tmp_path):
    def make(docs_path: Path) -> Path:
        refs = []
        with docs_path.open(encoding="utf-8") as fh:
            for line in fh:
                doc = json.loads(line)
                refs.append({"doc_id": doc["doc_id"],
                             "text": "the court allowed the claim in this case."})
        path = tmp_path / "references.jsonl"
        write_jsonl(path, refs)
        return path

    return make


@pytest.fixture()
def toy_training_set(tmp_path):
    examples = []
    for i in range(5):
        examples.append({
            "doc_id": f"doc_{i}",
            "input_format": "raw",
            "input": f"sentence one of case {i} about the court claim. the judge heard argument.",
            "target": "the court allowed the claim.",
        })
    train = tmp_path / "train.jsonl"
    write_jsonl(train, examples)
    val = tmp_path / "val.jsonl"
    write_jsonl(val, examples[:1])
    return train, val
