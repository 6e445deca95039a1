import json
from collections import Counter

import pytest

from lifegrep.ingest import ingest_corpus
from lifegrep.model import CorpusError


def minimal(rec_id="a", ts="2016-09-05T10:00:00Z", **extra):
    return {"id": rec_id, "ts": ts, **extra}


class TestBasics:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert len(ingest_corpus(path)) == 0

    def test_single_minimal_record(self, jsonl_writer):
        corpus = ingest_corpus(jsonl_writer([minimal()]))
        assert len(corpus) == 1
        rec = corpus[0]
        assert rec.cluster_id == 0
        assert rec.geo is None and rec.named_location is None and rec.feature is None
        assert rec.detections == ()

    def test_sorted_by_timestamp(self, jsonl_writer):
        rows = [
            minimal("late", "2016-09-05T12:00:00Z"),
            minimal("early", "2016-09-05T08:00:00Z"),
        ]
        corpus = ingest_corpus(jsonl_writer(rows))
        assert [r.id for r in corpus] == ["early", "late"]

    def test_ingestion_idempotent(self, story_corpus_path):
        path, _ = story_corpus_path
        a = ingest_corpus(path)
        b = ingest_corpus(path)
        assert a.records == b.records

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps(minimal()) + "\n\n")
        assert len(ingest_corpus(path)) == 1


class TestErrors:
    def test_malformed_json_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(minimal()) + "\n{nope\n")
        with pytest.raises(CorpusError) as err:
            ingest_corpus(path)
        assert err.value.line == 2

    def test_duplicate_id(self, jsonl_writer):
        with pytest.raises(CorpusError) as err:
            ingest_corpus(jsonl_writer([minimal("x"), minimal("x", "2016-09-05T11:00:00Z")]))
        assert "duplicate id" in str(err.value)
        assert err.value.line == 2

    @pytest.mark.parametrize(
        "row,fieldname",
        [
            (minimal(lat=91.0, lon=0.0), "lat"),
            (minimal(lat=0.0, lon=-181.0), "lon"),
            (minimal(lat=10.0), "lat"),
            (minimal(ts="2016-09-05 25:00"), "ts"),
            (minimal(detections=[{"kind": "object", "term": "car", "score": 1.2}]), "detections.score"),
            (minimal(detections=[{"kind": "blob", "term": "car", "score": 0.5}]), "detections.kind"),
            (minimal(detections=[{"kind": "concept", "term": "", "score": 0.5}]), "detections.term"),
            (minimal(detections=[{"kind": "concept", "term": "a,b", "score": 0.5}]), "detections.term"),
            (minimal(detections=[{"kind": "concept", "term": "office", "score": 0.5, "bbox": [0, 0, 0.1, 0.1]}]), "detections.bbox"),
            (minimal(feat=[0.5, 0.5]), "feat"),
            (minimal(loc="  "), "loc"),
            (minimal(loc="a;b"), "loc"),
        ],
    )
    def test_field_errors_carry_line_and_field(self, jsonl_writer, row, fieldname):
        with pytest.raises(CorpusError) as err:
            ingest_corpus(jsonl_writer([row]))
        assert err.value.line == 1
        assert err.value.fieldname == fieldname

    def test_missing_id(self, jsonl_writer):
        with pytest.raises(CorpusError):
            ingest_corpus(jsonl_writer([{"ts": "2016-09-05T10:00:00Z"}]))

    def test_mixed_feature_dims(self, jsonl_writer):
        rows = [
            minimal("a", feat=[1.0, 0.0]),
            minimal("b", ts="2016-09-05T10:01:00Z", feat=[1.0, 0.0, 0.0]),
        ]
        with pytest.raises(CorpusError) as err:
            ingest_corpus(jsonl_writer(rows))
        assert "dimension" in str(err.value)

    def test_terms_lowercased_not_rejected(self, jsonl_writer):
        corpus = ingest_corpus(
            jsonl_writer([minimal(detections=[{"kind": "object", "term": "Car", "score": 0.5}])])
        )
        assert corpus[0].detections[0].term == "car"


class TestManifestHistograms:
    """The generator's manifest is the declared ground truth for its output."""

    def test_per_day_image_counts(self, corpus, manifest):
        per_day = Counter(r.local_date().isoformat() for r in corpus)
        for day in manifest["days"]:
            assert per_day[day["date"]] == day["image_count"]

    def test_term_histograms_match(self, corpus, manifest):
        counts = {"concept": Counter(), "object": Counter(), "attribute": Counter()}
        for rec in corpus:
            for det in rec.detections:
                counts[det.kind.value][det.term] += 1
        for kind, expected in manifest["term_totals"].items():
            assert dict(counts[kind]) == expected

    def test_location_histograms_match(self, corpus, manifest):
        locs = Counter(r.named_location for r in corpus if r.named_location)
        assert dict(locs) == manifest["location_totals"]

    def test_feature_norms(self, corpus):
        from lifegrep.model import feature_norm

        for rec in corpus:
            assert rec.feature is not None
            assert abs(feature_norm(rec.feature) - 1.0) <= 1e-6
