import pytest
from fastapi.testclient import TestClient

from lifegrep.api import create_app
from lifegrep.config import ApiConfig
from lifegrep.dsl import QueryOptions, parse
from lifegrep.engine import evaluate


@pytest.fixture(scope="module")
def client(story_corpus_path):
    path, _ = story_corpus_path
    app = create_app(ApiConfig(corpus=str(path)))
    return TestClient(app)


class TestSearch:
    def test_envelope_and_engine_equality(self, client, idx):
        r = client.get("/api/search", params={"q": "--weekdays saturday,sunday"})
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"canonical", "options", "total", "hits"}
        expected = evaluate(parse("--weekdays saturday,sunday"), idx)
        assert [h["id"] for h in body["hits"]] == [h.id for h in expected.hits]
        assert body["total"] == expected.total_before_limit

    def test_parse_error_is_400_with_position(self, client):
        r = client.get("/api/search", params={"q": "--bogus x"})
        assert r.status_code == 400
        err = r.json()["error"]
        assert "unknown keyword" in err["message"]
        assert err["position"] == 0

    def test_options_override_defaults(self, client, idx):
        r = client.get(
            "/api/search",
            params={"q": "-o person", "score": 0.5, "limit": 3, "reduced": "true", "sort": "confidence"},
        )
        body = r.json()
        assert body["options"] == {"score": 0.5, "limit": 3, "reduced": True, "sort": "confidence"}
        q = parse("-o person", options=QueryOptions(0.5, 3, True, "confidence"))
        expected = evaluate(q, idx)
        assert [h["id"] for h in body["hits"]] == [h.id for h in expected.hits]

    def test_bad_option_values_are_400(self, client):
        assert client.get("/api/search", params={"q": "", "score": 2.0}).status_code == 400
        assert client.get("/api/search", params={"q": "", "sort": "sideways"}).status_code == 400
        assert client.get("/api/search", params={"q": "", "limit": "soon"}).status_code == 400

    def test_hits_carry_display_fields(self, client):
        hit = client.get("/api/search", params={"q": "", "limit": 1}).json()["hits"][0]
        assert set(hit) == {"id", "ts", "score", "matched_terms", "cluster_id", "loc"}

    def test_repeated_gets_identical(self, client):
        params = {"q": "-o person -t morning", "sort": "confidence"}
        first = client.get("/api/search", params=params).json()
        for _ in range(3):
            assert client.get("/api/search", params=params).json() == first


class TestTemporal:
    def test_chains_envelope(self, client, manifest):
        r = client.post(
            "/api/search/temporal",
            json={"stages": ["-c airport_terminal(0.9)", "-o taxi(0.85)"]},
        )
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"canonical", "stages", "total", "chains"}
        story = manifest["story"]
        assert [story["target_id"], story["taxi_id"]] in [c["ids"] for c in body["chains"]]

    def test_uses_max_span_and_same_day(self, client):
        r = client.post(
            "/api/search/temporal",
            json={"stages": ["-t morning", "-t afternoon"], "max_span_s": 60, "same_day": True},
        )
        assert r.status_code == 200

    def test_single_stage_is_400(self, client):
        r = client.post("/api/search/temporal", json={"stages": ["-o car"]})
        assert r.status_code == 400

    def test_stage_parse_error_is_400(self, client):
        r = client.post("/api/search/temporal", json={"stages": ["-o car", "--huh x"]})
        assert r.status_code == 400
        assert r.json()["error"]["position"] == 0


class TestSummaries:
    def test_envelope(self, client, manifest):
        r = client.get("/api/summaries", params={"page_size": 3})
        body = r.json()
        assert set(body) == {"total", "page", "page_size", "days"}
        assert body["total"] == len(manifest["days"])
        day = body["days"][0]
        assert set(day) == {
            "date", "weekday", "image_count", "representatives",
            "top_locations", "top_concepts", "top_objects",
        }

    def test_weekday_filter_and_sort(self, client):
        r = client.get("/api/summaries", params={"weekday": "monday", "sort": "term:object:car"})
        assert r.status_code == 200
        assert all(d["weekday"] == "monday" for d in r.json()["days"])

    def test_bad_sort_is_400(self, client):
        assert client.get("/api/summaries", params={"sort": "by:vibes"}).status_code == 400


class TestAutocompleteEndpoint:
    def test_suggestions(self, client):
        r = client.get("/api/autocomplete", params={"fragment": "air"})
        assert r.status_code == 200
        terms = [s["term"] for s in r.json()["suggestions"]]
        assert "airport_terminal" in terms

    def test_keyword_listing(self, client):
        r = client.get("/api/autocomplete", params={"fragment": "--"})
        assert len(r.json()["keywords"]) == 7

    def test_unknown_kind_is_400(self, client):
        assert client.get("/api/autocomplete", params={"fragment": "a", "kind": "vibe"}).status_code == 400


class TestImageAndGeo:
    def test_image_detail(self, client, manifest):
        target = manifest["story"]["target_id"]
        r = client.get(f"/api/image/{target}")
        assert r.status_code == 200
        body = r.json()
        assert set(body) == {"record", "neighbors", "links"}
        assert body["record"]["id"] == target
        assert any(d["term"] == "airport_terminal" for d in body["record"]["detections"])
        assert "same-day" in body["links"]

    def test_unknown_image_404(self, client):
        assert client.get("/api/image/not-a-record").status_code == 404

    def test_geo_envelope(self, client):
        r = client.get(
            "/api/geo", params={"center_lat": 48.19, "center_lon": 16.37, "radius_km": 30}
        )
        assert r.status_code == 200
        hits = r.json()["hits"]
        assert hits and set(hits[0]) == {"id", "ts", "distance_km"}
        dists = [h["distance_km"] for h in hits]
        assert dists == sorted(dists)

    def test_geo_bad_params_400(self, client):
        r = client.get("/api/geo", params={"center_lat": 95, "center_lon": 0, "radius_km": 5})
        assert r.status_code == 400
        r = client.get("/api/geo", params={"center_lat": 10, "center_lon": 0, "radius_km": -5})
        assert r.status_code == 400

    def test_thumb_svg(self, client, manifest):
        r = client.get(f"/api/thumb/{manifest['story']['target_id']}")
        assert r.status_code == 200
        assert r.headers["content-type"].startswith("image/svg")
        assert client.get("/api/thumb/nope").status_code == 404


class TestHistoryEndpoint:
    def test_lifecycle(self, client):
        client.delete("/api/history")
        r = client.post("/api/history", json={"query": "-o car"})
        entry = r.json()["entry"]
        assert entry["query"] == "--objects car"
        client.post("/api/history", json={"query": "-c office"})
        client.post("/api/history", json={"query": "--objects car"})  # dedupe, move to front
        entries = client.get("/api/history").json()["entries"]
        assert [e["query"] for e in entries] == ["--objects car", "--concepts office"]

        view = {"entry_id": entry["id"], "record_id": "img1", "view_ms": 300}
        r = client.post("/api/history", json={"view": view})
        assert r.json()["entry"]["first_viewed"] == "img1"

        assert client.delete("/api/history").json() == {"cleared": True}
        assert client.get("/api/history").json()["entries"] == []

    def test_temporal_entries(self, client):
        r = client.post("/api/history", json={"stages": ["-c a", "-o b"]})
        assert r.json()["entry"]["query"] == ["--concepts a", "--objects b"]

    def test_sessions_isolated(self, client):
        client.post("/api/history", json={"query": "-o car"}, headers={"X-Session-Id": "s1"})
        s1 = client.get("/api/history", headers={"X-Session-Id": "s1"}).json()["entries"]
        s2 = client.get("/api/history", headers={"X-Session-Id": "s2"}).json()["entries"]
        assert len(s1) == 1 and s2 == []

    def test_view_on_unknown_entry_404(self, client):
        r = client.post(
            "/api/history",
            json={"view": {"entry_id": "missing", "record_id": "x", "view_ms": 5}},
        )
        assert r.status_code == 404

    def test_malformed_post_400(self, client):
        assert client.post("/api/history", json={"nonsense": 1}).status_code == 400


class TestMeta:
    def test_meta(self, client, corpus, manifest):
        body = client.get("/api/meta").json()
        assert body["records"] == len(corpus)
        assert body["first_date"] == manifest["days"][0]["date"]
        assert body["timenames"]["afternoon"] == "13:00-17:00"
        assert body["defaults"]["score"] == 0.1


class TestStaticMounts:
    def test_images_dir_served_by_path(self, story_corpus_path, tmp_path):
        path, _ = story_corpus_path
        images = tmp_path / "images"
        images.mkdir()
        (images / "x.jpg").write_bytes(b"\xff\xd8fake-jpeg")
        app = create_app(ApiConfig(corpus=str(path), images_dir=str(images)))
        local = TestClient(app)
        assert local.get("/images/x.jpg").status_code == 200
        assert local.get("/images/missing.jpg").status_code == 404


class TestStartupErrors:
    def test_missing_corpus_path(self):
        with pytest.raises(ValueError):
            create_app(ApiConfig())

    def test_corrupt_corpus_fails_loudly(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text("{broken\n")
        from lifegrep.model import CorpusError

        with pytest.raises(CorpusError):
            create_app(ApiConfig(corpus=str(bad)))
