"""Deterministic synthetic lifelog generator.

Emits a JSON-lines metadata file at a ~40 s capture cadence across up to
three intra-day blocks (morning / afternoon / evening), with per-day
location itineraries, vocabulary-drawn detections and planted near-duplicate
feature runs. A manifest records every planted ground truth: per-day term
counts, cluster runs, location visits, and the optional story plant. The
same seed always produces byte-identical files.

Ground-truth guarantees relied on by tests:
  * per-day cluster count under the default clustering parameters equals
    the day's planted run count (runs never span blocks or midnight);
  * every vocabulary term occurs at least once corpus-wide;
  * manifest term/location counts equal a linear scan of the emitted file.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone
from pathlib import Path
from typing import Optional

from .model import WEEKDAY_NAMES, format_rfc3339

DEFAULT_START_DATE = date(2016, 8, 15)  # a Monday
DEFAULT_FEATURE_DIM = 8
CADENCE_S = 40
MAX_IMAGES_PER_DAY = 800  # worst-case block schedule must stay inside one calendar date

STORY_TARGET_CONCEPT = "airport_terminal"
STORY_TAXI_OBJECT = "taxi"
STORY_MEETING_CONCEPT = "meeting_room"


@dataclass(frozen=True)
class Vocabulary:
    concepts: tuple[str, ...]
    objects: tuple[str, ...]
    attributes: tuple[str, ...]

    def for_kind(self, kind: str) -> tuple[str, ...]:
        return getattr(self, kind + "s")


DEFAULT_VOCAB = Vocabulary(
    concepts=(
        "airport_terminal",
        "airplane_cabin",
        "hotel/outdoor",
        "hotel/indoor",
        "staircase",
        "office",
        "kitchen",
        "street",
        "park",
        "beach",
        "supermarket",
        "restaurant",
        "living_room",
        "meeting_room",
        "parking_lot",
        "train_station",
        "museum",
        "harbor",
    ),
    objects=(
        "person",
        "bottle",
        "car",
        "taxi",
        "laptop",
        "phone",
        "cup",
        "chair",
        "book",
        "bicycle",
        "dog",
        "apple",
        "banana",
        "backpack",
        "screen",
        "plate",
    ),
    attributes=(
        "wet",
        "dry",
        "indoor",
        "outdoor",
        "sunny",
        "cloudy",
        "dark",
        "bright",
        "crowded",
        "empty",
    ),
)

NAMED_PLACES: dict[str, tuple[float, float]] = {
    "home": (48.1900, 16.3700),
    "work": (48.2100, 16.4100),
    "cafe": (48.2000, 16.3600),
    "gym": (48.1950, 16.3900),
    "airport": (48.1103, 16.5697),
    "park": (48.1840, 16.3120),
    "supermarket": (48.1930, 16.3650),
    "library": (48.2060, 16.3580),
    "restaurant": (48.2010, 16.3770),
    "station": (48.1850, 16.3780),
}

# (start minutes, start jitter minutes, share of the day's images)
_BLOCK_PLAN = ((7 * 60, 60, 0.5), (13 * 60 + 5, 40, 0.3), (17 * 60 + 30, 90, 0.2))


def _weighted_pick(rnd: random.Random, terms: tuple[str, ...], n: int) -> list[str]:
    weights = [1.0 / (i + 1) for i in range(len(terms))]
    return rnd.choices(terms, weights=weights, k=n)


def _unit_gauss(rnd: random.Random, dim: int) -> list[float]:
    v = [rnd.gauss(0.0, 1.0) for _ in range(dim)]
    norm = math.sqrt(sum(x * x for x in v)) or 1.0
    return [x / norm for x in v]


def _run_feature(rnd: random.Random, base_axis: int, dim: int) -> list[float]:
    noise = _unit_gauss(rnd, dim)
    v = [0.03 * x for x in noise]
    v[base_axis] += 1.0
    norm = math.sqrt(sum(x * x for x in v))
    return [round(x / norm, 9) for x in v]


def _block_sizes(total: int) -> list[int]:
    sizes = [int(round(total * share)) for _, _, share in _BLOCK_PLAN]
    sizes[0] += total - sum(sizes)
    if sizes[0] < 0:  # tiny totals can over-round the later blocks
        sizes = [total, 0, 0]
    return sizes


def _detections_for(rnd: random.Random, vocab: Vocabulary) -> list[dict]:
    dets: list[dict] = []
    for term in _weighted_pick(rnd, vocab.concepts, rnd.randint(1, 3)):
        dets.append({"kind": "concept", "term": term, "score": round(rnd.uniform(0.05, 1.0), 3)})
    n_objects = rnd.randint(0, 4)
    object_terms = _weighted_pick(rnd, vocab.objects, n_objects)
    if object_terms and rnd.random() < 0.10:
        object_terms.append(object_terms[0])  # same object seen twice
    for term in object_terms:
        det = {"kind": "object", "term": term, "score": round(rnd.uniform(0.05, 1.0), 3)}
        if rnd.random() < 0.75:
            det["bbox"] = [
                round(rnd.uniform(0.0, 0.7), 3),
                round(rnd.uniform(0.0, 0.7), 3),
                round(rnd.uniform(0.05, 0.3), 3),
                round(rnd.uniform(0.05, 0.3), 3),
            ]
        dets.append(det)
    for term in _weighted_pick(rnd, vocab.attributes, rnd.randint(0, 2)):
        dets.append({"kind": "attribute", "term": term, "score": round(rnd.uniform(0.05, 1.0), 3)})
    return dets


def _generate_day(
    rnd: random.Random,
    day: date,
    images: int,
    vocab: Vocabulary,
    dim: int,
    run_axis_start: int,
) -> tuple[list[dict], dict, int]:
    """One day's records plus its manifest entry. Returns the next run axis."""
    records: list[dict] = []
    run_lengths: list[int] = []
    visits: list[str] = []
    location = "home"
    axis = run_axis_start
    prev_end_minutes = 0.0

    sizes = _block_sizes(images)
    for block_i, count in enumerate(sizes):
        if count == 0:
            continue
        base, jitter, _ = _BLOCK_PLAN[block_i]
        start_minutes = base + rnd.uniform(0, jitter)
        if block_i == 2 and count <= 60 and rnd.random() < 0.15:
            start_minutes = 23 * 60 + rnd.uniform(0, 10)  # late-night block
        start_minutes = max(start_minutes, prev_end_minutes + rnd.uniform(8, 20))
        # never let a block cross its calendar date
        duration_minutes = count * (CADENCE_S + 8) / 60.0
        latest = 24 * 60 - 2 - duration_minutes
        if latest <= 0:
            raise ValueError(f"images_per_day={images} cannot fit in one calendar day")
        start_minutes = min(start_minutes, latest)
        start_minutes = max(start_minutes, prev_end_minutes + 3)

        t = datetime.combine(day, time(0, 0), tzinfo=timezone.utc) + timedelta(
            seconds=int(start_minutes * 60)  # whole seconds: records are second-precision
        )
        emitted = 0
        while emitted < count:
            run_len = min(count - emitted, rnd.randint(1, 8))
            run_lengths.append(run_len)
            if rnd.random() < 0.30:
                location = rnd.choice([p for p in NAMED_PLACES if p != location])
            if not visits or visits[-1] != location:
                visits.append(location)
            for _ in range(run_len):
                rec: dict = {
                    "id": f"{day.strftime('%Y%m%d')}_{len(records):04d}",
                    "ts": format_rfc3339(t),
                    "detections": _detections_for(rnd, vocab),
                    "feat": _run_feature(rnd, axis % dim, dim),
                }
                base_lat, base_lon = NAMED_PLACES[location]
                if rnd.random() >= 0.06:
                    rec["lat"] = round(base_lat + rnd.uniform(-5e-4, 5e-4), 6)
                    rec["lon"] = round(base_lon + rnd.uniform(-5e-4, 5e-4), 6)
                if rnd.random() >= 0.06:
                    rec["loc"] = location
                if t.date() != day:
                    raise AssertionError("block schedule crossed midnight; shrink images_per_day")
                records.append(rec)
                t += timedelta(seconds=CADENCE_S + rnd.randint(-8, 8))
                emitted += 1
            axis += 1
        prev_end_minutes = (t - datetime.combine(day, time(0, 0), tzinfo=timezone.utc)).total_seconds() / 60.0

    day_entry = {
        "date": day.isoformat(),
        "weekday": WEEKDAY_NAMES[day.weekday()],
        "image_count": images,
        "cluster_runs": len(run_lengths),
        "run_lengths": run_lengths,
        "location_visits": visits,
    }
    return records, day_entry, axis


def _plant_story(rnd: random.Random, day_records: dict[str, list[dict]]) -> dict:
    """Plant the airport-morning / taxi / meeting Monday story plus decoys."""
    dates = sorted(day_records)
    mondays = [d for d in dates if date.fromisoformat(d).weekday() == 0]
    others = [d for d in dates if date.fromisoformat(d).weekday() != 0]
    if not mondays or not others:
        raise ValueError("story planting needs at least one Monday and one other day in the span")

    story_day = mondays[0]
    recs = day_records[story_day]
    morning = [r for r in recs if _hour_of(r) < 11]
    afternoon = [r for r in recs if 13 <= _hour_of(r) < 17]
    if len(morning) < 4 or not afternoon:
        raise ValueError("story planting needs a populated morning and afternoon; raise images_per_day")

    target = morning[len(morning) // 6]
    taxi = morning[len(morning) // 2]
    meeting = morning[(5 * len(morning)) // 6]
    target["detections"].append({"kind": "concept", "term": STORY_TARGET_CONCEPT, "score": 0.9})
    taxi["detections"].append({"kind": "object", "term": STORY_TAXI_OBJECT, "score": 0.85})
    meeting["detections"].append({"kind": "concept", "term": STORY_MEETING_CONCEPT, "score": 0.88})

    afternoon_decoy = afternoon[len(afternoon) // 3]
    afternoon_decoy["detections"].append(
        {"kind": "concept", "term": STORY_TARGET_CONCEPT, "score": round(rnd.uniform(0.6, 0.9), 3)}
    )
    other_recs = day_records[others[0]]
    other_morning = [r for r in other_recs if _hour_of(r) < 11]
    if not other_morning:
        raise ValueError("story planting needs a morning on a non-Monday day")
    weekday_decoy = other_morning[len(other_morning) // 3]
    weekday_decoy["detections"].append(
        {"kind": "concept", "term": STORY_TARGET_CONCEPT, "score": round(rnd.uniform(0.6, 0.9), 3)}
    )

    return {
        "day": story_day,
        "target_id": target["id"],
        "taxi_id": taxi["id"],
        "meeting_id": meeting["id"],
        "decoy_ids": [afternoon_decoy["id"], weekday_decoy["id"]],
    }


def _hour_of(rec: dict) -> int:
    return int(rec["ts"][11:13])


def _ensure_term_coverage(rnd: random.Random, records: list[dict], vocab: Vocabulary) -> None:
    seen: dict[str, set[str]] = {"concept": set(), "object": set(), "attribute": set()}
    for rec in records:
        for det in rec["detections"]:
            seen[det["kind"]].add(det["term"])
    slot = 0
    for kind, terms in (("concept", vocab.concepts), ("object", vocab.objects), ("attribute", vocab.attributes)):
        for term in terms:
            if term in seen[kind]:
                continue
            rec = records[(slot * 137) % len(records)]
            rec["detections"].append({"kind": kind, "term": term, "score": round(rnd.uniform(0.2, 1.0), 3)})
            slot += 1


def _count_terms(records: list[dict]) -> tuple[dict, dict]:
    terms: dict[str, dict[str, int]] = {"concept": {}, "object": {}, "attribute": {}}
    locations: dict[str, int] = {}
    for rec in records:
        for det in rec["detections"]:
            bucket = terms[det["kind"]]
            bucket[det["term"]] = bucket.get(det["term"], 0) + 1
        if "loc" in rec:
            locations[rec["loc"]] = locations.get(rec["loc"], 0) + 1
    return terms, locations


def generate_synthetic(
    seed: int,
    days: int,
    images_per_day: int,
    out_path: str | Path,
    manifest_path: Optional[str | Path] = None,
    vocab: Optional[Vocabulary] = None,
    start_date: date = DEFAULT_START_DATE,
    feature_dim: int = DEFAULT_FEATURE_DIM,
    plant_story: bool = False,
) -> dict:
    """Write the metadata file and its ground-truth manifest; return the manifest."""
    if days < 1:
        raise ValueError("days must be >= 1")
    if not (1 <= images_per_day <= MAX_IMAGES_PER_DAY):
        raise ValueError(f"images_per_day must be in [1, {MAX_IMAGES_PER_DAY}]")
    if feature_dim < 2:
        raise ValueError("feature_dim must be >= 2")
    vocab = vocab or DEFAULT_VOCAB
    if not (vocab.concepts and vocab.objects and vocab.attributes):
        raise ValueError("vocabulary must be non-empty for every detection kind")

    rnd = random.Random(seed)
    day_records: dict[str, list[dict]] = {}
    manifest_days: list[dict] = []
    axis = 0
    for i in range(days):
        day = start_date + timedelta(days=i)
        records, entry, axis = _generate_day(rnd, day, images_per_day, vocab, feature_dim, axis)
        day_records[day.isoformat()] = records
        manifest_days.append(entry)

    story = _plant_story(rnd, day_records) if plant_story else None

    all_records = [rec for d in sorted(day_records) for rec in day_records[d]]
    _ensure_term_coverage(rnd, all_records, vocab)

    for entry in manifest_days:
        terms, locations = _count_terms(day_records[entry["date"]])
        entry["term_counts"] = terms
        entry["location_counts"] = locations
    term_totals, location_totals = _count_terms(all_records)

    manifest = {
        "params": {
            "seed": seed,
            "days": days,
            "images_per_day": images_per_day,
            "start_date": start_date.isoformat(),
            "feature_dim": feature_dim,
            "cadence_s": CADENCE_S,
            "plant_story": plant_story,
        },
        "record_count": len(all_records),
        "days": manifest_days,
        "term_totals": term_totals,
        "location_totals": location_totals,
        "story": story,
    }

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        for rec in all_records:
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
    manifest_path = Path(manifest_path) if manifest_path else out_path.with_suffix(".manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
