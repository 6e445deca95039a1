import pytest

from lifegrep.engine import build_indexes
from lifegrep.explore import autocomplete, day_summaries
from lifegrep.ingest import ingest_corpus
from lifegrep.model import Corpus
from lifegrep.synthetic import Vocabulary, generate_synthetic


@pytest.fixture(scope="module")
def sixteen_mondays_idx(tmp_path_factory):
    # 112 consecutive days starting on a Monday = exactly 16 Mondays
    path = tmp_path_factory.mktemp("mondays") / "c.jsonl"
    generate_synthetic(seed=3, days=112, images_per_day=3, out_path=path)
    return build_indexes(ingest_corpus(path))


class TestDaySummaries:
    def test_weekday_filter_pagination_6_6_4(self, sixteen_mondays_idx):
        pages = [
            day_summaries(sixteen_mondays_idx, page=p, page_size=6, weekday_filter={"monday"})
            for p in range(4)
        ]
        assert [len(p.days) for p in pages] == [6, 6, 4, 0]
        assert all(p.total == 16 for p in pages)
        assert all(s.weekday == "monday" for p in pages for s in p.days)

    def test_empty_corpus(self):
        idx = build_indexes(Corpus(records=()))
        page = day_summaries(idx)
        assert page.days == () and page.total == 0

    def test_page_beyond_range_is_empty_not_error(self, idx):
        page = day_summaries(idx, page=99, page_size=10)
        assert page.days == ()
        assert page.total == len(idx.day_ranges)

    def test_image_counts_match_manifest(self, idx, manifest):
        page = day_summaries(idx, page_size=100)
        by_date = {s.date.isoformat(): s for s in page.days}
        for entry in manifest["days"]:
            assert by_date[entry["date"]].image_count == entry["image_count"]

    def test_top_lists_sorted_and_match_manifest(self, idx, manifest):
        page = day_summaries(idx, page_size=100, top_k=3)
        for summary, entry in zip(page.days, manifest["days"]):
            expected = sorted(
                entry["term_counts"]["object"].items(), key=lambda kv: (-kv[1], kv[0])
            )[:3]
            assert list(summary.top_objects) == expected
            counts = [c for _, c in summary.top_concepts]
            assert counts == sorted(counts, reverse=True)

    def test_term_frequency_sort_matches_manifest(self, idx, manifest):
        page = day_summaries(idx, page_size=100, sort_term=("object", "car"))
        expected = sorted(
            manifest["days"],
            key=lambda e: (-e["term_counts"]["object"].get("car", 0), e["date"]),
        )
        assert [s.date.isoformat() for s in page.days] == [e["date"] for e in expected]

    def test_location_frequency_sort(self, idx, manifest):
        page = day_summaries(idx, page_size=100, sort_term=("location", "home"))
        expected = sorted(
            manifest["days"],
            key=lambda e: (-e["location_counts"].get("home", 0), e["date"]),
        )
        assert [s.date.isoformat() for s in page.days] == [e["date"] for e in expected]

    def test_representatives_one_per_cluster_chronological(self, idx, corpus):
        page = day_summaries(idx, page_size=1, images_per_day=4)
        summary = page.days[0]
        assert 0 < len(summary.representatives) <= 4
        seen_clusters = []
        last_ts = None
        for rid in summary.representatives:
            rec = corpus.get(rid)
            assert rec.cluster_id not in seen_clusters
            seen_clusters.append(rec.cluster_id)
            if last_ts is not None:
                assert rec.ts > last_ts
            last_ts = rec.ts

    def test_adjustable_images_per_day(self, idx):
        small = day_summaries(idx, page_size=1, images_per_day=2).days[0]
        large = day_summaries(idx, page_size=1, images_per_day=12).days[0]
        assert len(small.representatives) == 2
        assert len(large.representatives) > len(small.representatives)

    def test_summary_counts_cover_corpus(self, idx, corpus):
        page = day_summaries(idx, page_size=1000)
        assert sum(s.image_count for s in page.days) == len(corpus)

    def test_bad_args(self, idx):
        with pytest.raises(ValueError):
            day_summaries(idx, page=-1)
        with pytest.raises(ValueError):
            day_summaries(idx, page_size=0)
        with pytest.raises(ValueError):
            day_summaries(idx, weekday_filter={"funday"})
        with pytest.raises(ValueError):
            day_summaries(idx, sort_term=("nope", "car"))


@pytest.fixture(scope="module")
def indoor_idx(tmp_path_factory):
    vocab = Vocabulary(
        concepts=("indoor", "hotel/indoor", "indoor_pool", "semi_indoor", "gym/indoor", "office", "street"),
        objects=("car", "person"),
        attributes=("wet", "dry"),
    )
    path = tmp_path_factory.mktemp("indoor") / "c.jsonl"
    generate_synthetic(seed=5, days=2, images_per_day=60, out_path=path, vocab=vocab)
    return build_indexes(ingest_corpus(path))


class TestAutocomplete:
    def test_five_planted_indoor_terms(self, indoor_idx):
        result = autocomplete(indoor_idx, "indoor", max_results=50)
        terms = {s.term for s in result.suggestions}
        assert terms == {"indoor", "hotel/indoor", "indoor_pool", "semi_indoor", "gym/indoor"}

    def test_substring_not_prefix(self, indoor_idx):
        result = autocomplete(indoor_idx, "door", max_results=50)
        assert {s.term for s in result.suggestions} >= {"indoor", "hotel/indoor"}

    def test_empty_fragment_with_kind_lists_all_concepts(self, indoor_idx):
        result = autocomplete(indoor_idx, "", kind_filter="concept", max_results=100)
        assert {s.term for s in result.suggestions} == {
            "indoor", "hotel/indoor", "indoor_pool", "semi_indoor", "gym/indoor", "office", "street"
        }
        counts = [s.count for s in result.suggestions]
        assert counts == sorted(counts, reverse=True)

    def test_dash_lists_keywords(self, idx):
        for fragment in ("-", "--"):
            result = autocomplete(idx, fragment)
            assert len(result.keywords) == 7
            assert not result.suggestions

    def test_counts_equal_postings_lengths(self, idx):
        result = autocomplete(idx, "person", kind_filter="object")
        from lifegrep.model import Kind

        (suggestion,) = [s for s in result.suggestions if s.term == "person"]
        assert suggestion.count == len(idx.term_postings[(Kind.OBJECT, "person")])
        assert 1 <= len(suggestion.examples) <= 3

    def test_timename_suggestion_carries_window_and_count(self, idx):
        result = autocomplete(idx, "afternoon")
        (s,) = [x for x in result.suggestions if x.kind == "timename"]
        assert s.window == "13:00-17:00"
        expected = sum(1 for m in idx.minutes if 13 * 60 <= m < 17 * 60)
        assert s.count == expected

    def test_location_suggestions(self, idx):
        result = autocomplete(idx, "home", kind_filter="location")
        (s,) = result.suggestions
        assert s.term == "home"
        assert s.count == len(idx.location_ordinals["home"])

    def test_results_subset_of_vocabulary(self, idx, corpus):
        vocab = {(d.kind.value, d.term) for r in corpus for d in r.detections}
        result = autocomplete(idx, "a", max_results=1000)
        for s in result.suggestions:
            if s.kind in ("concept", "object", "attribute"):
                assert (s.kind, s.term) in vocab
            assert s.count >= 1

    def test_no_matches_is_empty(self, idx):
        result = autocomplete(idx, "zzzzzz")
        assert result.suggestions == () and result.keywords == ()

    def test_truncation(self, idx):
        assert len(autocomplete(idx, "", max_results=5).suggestions) == 5
