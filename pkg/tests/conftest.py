from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from lifegrep.engine import build_indexes
from lifegrep.ingest import ingest_corpus
from lifegrep.synthetic import generate_synthetic


@pytest.fixture(scope="session")
def story_corpus_path(tmp_path_factory):
    """A 400-record corpus with the planted airport/taxi/meeting story."""
    path = tmp_path_factory.mktemp("corpus") / "story.jsonl"
    manifest = generate_synthetic(
        seed=11, days=5, images_per_day=80, out_path=path, plant_story=True
    )
    return path, manifest


@pytest.fixture(scope="session")
def corpus(story_corpus_path):
    return ingest_corpus(story_corpus_path[0])


@pytest.fixture(scope="session")
def manifest(story_corpus_path):
    return story_corpus_path[1]


@pytest.fixture(scope="session")
def idx(corpus):
    return build_indexes(corpus)


def write_jsonl(path: Path, rows: list[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    return path


@pytest.fixture
def jsonl_writer(tmp_path):
    def _write(rows: list[dict], name: str = "corpus.jsonl") -> Path:
        return write_jsonl(tmp_path / name, rows)

    return _write
