"""Competition-style submission of a candidate image id.

With no endpoint configured the submission is practice mode: it logs
locally and is accepted. With an endpoint, the body {id, timestamp} is
POSTed there; HTTP 200 means Accepted, any other status Rejected, and a
network failure yields Unreachable — never an exception. A bundled mock
judge server implements the same wire format for end-to-end tests.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Optional

import httpx

from .model import Corpus, format_rfc3339

logger = logging.getLogger(__name__)

SUBMIT_TIMEOUT_S = 5.0


class Outcome(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True, slots=True)
class SubmissionReceipt:
    record_id: str
    submitted_at: str  # RFC-3339
    outcome: Outcome


def submit(record_id: str, corpus: Corpus, submit_url: Optional[str] = None) -> SubmissionReceipt:
    """Submit a record id. Raises UnknownRecordError before any network I/O
    when the id is not in the corpus."""
    corpus.get(record_id)  # existence check
    now = format_rfc3339(datetime.now(timezone.utc).replace(microsecond=0))
    if submit_url is None:
        logger.info("practice submission: %s at %s", record_id, now)
        return SubmissionReceipt(record_id=record_id, submitted_at=now, outcome=Outcome.ACCEPTED)
    try:
        response = httpx.post(
            submit_url, json={"id": record_id, "timestamp": now}, timeout=SUBMIT_TIMEOUT_S
        )
    except httpx.HTTPError as exc:
        logger.warning("submission endpoint unreachable: %s", exc)
        return SubmissionReceipt(record_id=record_id, submitted_at=now, outcome=Outcome.UNREACHABLE)
    outcome = Outcome.ACCEPTED if response.status_code == 200 else Outcome.REJECTED
    return SubmissionReceipt(record_id=record_id, submitted_at=now, outcome=outcome)


def make_mock_judge(accept_ids: Optional[set[str]] = None):
    """A FastAPI app speaking the submission wire format.

    Accepts any well-formed {id, timestamp} body; with an allowlist, ids
    outside it are rejected with 400 so the Rejected path is testable.
    """
    from fastapi import FastAPI
    from fastapi.responses import JSONResponse

    app = FastAPI(title="mock submission judge")
    app.state.received = []

    @app.post("/submit")
    async def submit_endpoint(body: dict):
        record_id = body.get("id")
        timestamp = body.get("timestamp")
        if not isinstance(record_id, str) or not record_id or not isinstance(timestamp, str):
            return JSONResponse({"status": "malformed submission"}, status_code=400)
        if accept_ids is not None and record_id not in accept_ids:
            return JSONResponse({"status": "wrong image"}, status_code=400)
        app.state.received.append({"id": record_id, "timestamp": timestamp})
        return {"status": "accepted"}

    return app
