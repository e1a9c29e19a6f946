"""HTTP client for any conforming embedding service.

Wire contract: POST <endpoint>/embed with body {"texts": [...], "model_id":
"..."} returns HTTP 200 and {"dim": <int>, "vectors": [[...], ...]}. Any
4xx/5xx status is retried with exponential backoff except 400 and 422, which
mean the request itself is wrong. Responses are validated before anything is
written, so a failed batch never leaves partial vectors in the store.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import requests

from .errors import CountMismatch, DimMismatch, TransportError
from .ingest import EmbeddingStore

DEFAULT_BATCH_SIZE = 64
DEFAULT_MAX_IN_FLIGHT = 4
DEFAULT_RETRIES = 3
DEFAULT_TIMEOUT = 30.0

#: Client errors that retrying cannot fix.
_NON_RETRYABLE = {400, 422}


@dataclass
class FetchReport:
    """Counts for one fetch run; ``errors`` holds one message per failed batch."""

    requested: int = 0
    cached: int = 0
    fetched: int = 0
    failed: int = 0
    batches: int = 0
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0


def fetch_embeddings(
    texts: Sequence[str],
    endpoint: str,
    store: EmbeddingStore,
    *,
    model_id: str = "",
    batch_size: int = DEFAULT_BATCH_SIZE,
    max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
    max_retries: int = DEFAULT_RETRIES,
    timeout: float = DEFAULT_TIMEOUT,
    bearer_token: str | None = None,
    backoff_base: float = 0.25,
) -> FetchReport:
    """Fetch vectors for every text not already in the store.

    Texts are deduplicated (first occurrence wins) and only cache misses are
    requested, in batches of ``batch_size`` with up to ``max_in_flight``
    requests outstanding. Each batch is validated (count, then dim) and
    committed atomically, in submission order so reruns produce identical
    store files. Transport failures are retried ``max_retries`` times per
    batch and then recorded in the report; CountMismatch and DimMismatch are
    contract violations and raise immediately.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    unique = list(dict.fromkeys(texts))
    missing = store.missing(unique)
    report = FetchReport(requested=len(missing), cached=len(unique) - len(missing))
    if not missing:
        return report

    batches = [missing[i : i + batch_size] for i in range(0, len(missing), batch_size)]
    url = endpoint.rstrip("/") + "/embed"
    headers = {"Content-Type": "application/json"}
    if bearer_token:
        headers["Authorization"] = f"Bearer {bearer_token}"

    lock = threading.Lock()

    def fetch_one(batch: list[str]) -> list[list[float]]:
        body = {"texts": batch, "model_id": model_id}
        last_error: Exception | None = None
        for attempt in range(max_retries + 1):
            if attempt:
                time.sleep(backoff_base * (2 ** (attempt - 1)))
            try:
                response = requests.post(url, json=body, headers=headers, timeout=timeout)
            except requests.RequestException as exc:
                last_error = TransportError(f"{url}: {exc}")
                continue
            if response.status_code == 200:
                return _validated_vectors(response, batch, store)
            if response.status_code in _NON_RETRYABLE:
                raise TransportError(f"{url}: HTTP {response.status_code} (not retryable)")
            last_error = TransportError(f"{url}: HTTP {response.status_code}")
        assert last_error is not None
        raise last_error

    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        futures = [pool.submit(fetch_one, batch) for batch in batches]
        for batch, future in zip(batches, futures):
            report.batches += 1
            try:
                vectors = future.result()
            except (CountMismatch, DimMismatch):
                raise
            except TransportError as exc:
                report.failed += len(batch)
                report.errors.append(str(exc))
                continue
            with lock:
                for text, vector in zip(batch, vectors):
                    store.put(text, vector)
            report.fetched += len(batch)
    return report


def _validated_vectors(
    response: requests.Response, batch: list[str], store: EmbeddingStore
) -> list[list[float]]:
    try:
        payload = response.json()
    except ValueError as exc:
        raise TransportError(f"response is not JSON: {exc}") from exc
    vectors = payload.get("vectors")
    dim = payload.get("dim")
    if not isinstance(vectors, list) or len(vectors) != len(batch):
        got = len(vectors) if isinstance(vectors, list) else "none"
        raise CountMismatch(f"asked for {len(batch)} vectors, got {got}")
    if store.dim is not None and dim != store.dim:
        raise DimMismatch(f"response dim {dim}, store dim {store.dim}")
    for vector in vectors:
        if not isinstance(vector, list) or len(vector) != dim:
            raise DimMismatch(f"vector length {len(vector)} != response dim {dim}")
    return vectors
