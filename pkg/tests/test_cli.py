import json

import pytest
from fastapi.testclient import TestClient

from lifegrep.cli import main


class TestGen:
    def test_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        args = ["gen", "--seed", "1", "--days", "2", "--images-per-day", "30"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_plant_story_reports_target(self, tmp_path, capsys):
        out = tmp_path / "demo.jsonl"
        code = main(
            ["gen", "--seed", "2", "--days", "7", "--images-per-day", "40",
             "--out", str(out), "--plant-story"]
        )
        assert code == 0
        assert "story target:" in capsys.readouterr().out

    def test_bad_params_exit_nonzero(self, tmp_path, capsys):
        code = main(["gen", "--seed", "1", "--days", "0", "--images-per-day", "5",
                     "--out", str(tmp_path / "x.jsonl")])
        assert code != 0
        assert "days" in capsys.readouterr().err


class TestIngest:
    def test_stats(self, story_corpus_path, capsys):
        path, manifest = story_corpus_path
        assert main(["ingest", str(path), "--json"]) == 0
        stats = json.loads(capsys.readouterr().out)
        assert stats["records"] == manifest["record_count"]
        assert stats["days"] == len(manifest["days"])

    def test_corrupt_file_exits_nonzero_with_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id": "a", "ts": "2016-09-05T10:00:00Z"}\n{"id": "b"}\n')
        assert main(["ingest", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "line 2" in err

    def test_missing_file(self, capsys):
        assert main(["ingest", "/no/such/file.jsonl"]) == 2


class TestQuery:
    def test_matches_http_search(self, story_corpus_path, capsys):
        from lifegrep.api import create_app
        from lifegrep.config import ApiConfig

        path, _ = story_corpus_path
        dsl = "--concepts hotel/outdoor --objects car,person"
        assert main(["query", dsl, "--corpus", str(path), "--json"]) == 0
        cli_out = json.loads(capsys.readouterr().out)

        client = TestClient(create_app(ApiConfig(corpus=str(path))))
        http_out = client.get("/api/search", params={"q": dsl}).json()
        assert [h["id"] for h in cli_out["hits"]] == [h["id"] for h in http_out["hits"]]
        assert cli_out["total"] == http_out["total"]

    def test_table_output(self, story_corpus_path, capsys):
        path, _ = story_corpus_path
        assert main(["query", "-w monday", "--corpus", str(path), "--limit", "4"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("#")
        assert len(out) == 5

    def test_parse_error_exit_code(self, story_corpus_path, capsys):
        path, _ = story_corpus_path
        assert main(["query", "--bogus x", "--corpus", str(path)]) == 2
        assert "unknown keyword" in capsys.readouterr().err

    def test_option_flags(self, story_corpus_path, capsys):
        path, _ = story_corpus_path
        assert main(
            ["query", "-o person", "--corpus", str(path), "--score", "0.4",
             "--reduced", "--sort", "confidence", "--json"]
        ) == 0
        out = json.loads(capsys.readouterr().out)
        scores = [h["score"] for h in out["hits"]]
        assert scores == sorted(scores, reverse=True)
