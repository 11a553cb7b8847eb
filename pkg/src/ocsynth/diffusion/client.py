"""HTTP client for the generation service.

Transient failures (timeouts, connection errors, 5xx) are retried with
exponential backoff: 1s, 2s, 4s, ... up to `retries` re-attempts. A 4xx
answer means the payload itself was rejected and is never retried; a
response that decodes but violates the contract raises immediately too,
since resending the same request cannot fix it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import requests

from ..errors import ServiceRejection, ServiceTimeout
from ..imaging import Image
from .payload import ConditioningPayload
from .wire import parse_response, request_body

BACKOFF_BASE_S = 1.0


@dataclass(frozen=True)
class GenerationResult:
    image: Image
    latency_ms: float
    seed: int


def request_generation(
    endpoint: str,
    payload: ConditioningPayload,
    timeout: float = 60.0,
    retries: int = 3,
    *,
    sleep: Callable[[float], None] = time.sleep,
) -> GenerationResult:
    """POST the payload to ``endpoint``/generate and decode the image.

    ``sleep`` is injectable so tests can assert the backoff schedule without
    waiting it out.
    """
    url = endpoint.rstrip("/") + "/generate"
    body = request_body(payload)
    last_failure = "no attempt made"

    for attempt in range(retries + 1):
        if attempt:
            sleep(BACKOFF_BASE_S * 2 ** (attempt - 1))
        t0 = time.perf_counter()
        try:
            response = requests.post(
                url,
                data=body,
                headers={"Content-Type": "application/json"},
                timeout=timeout,
            )
        except requests.Timeout:
            last_failure = f"timed out after {timeout}s"
            continue
        except requests.ConnectionError as exc:
            last_failure = f"connection failed: {exc}"
            continue
        latency_ms = (time.perf_counter() - t0) * 1000.0

        if 400 <= response.status_code < 500:
            raise ServiceRejection(
                f"service rejected the payload ({response.status_code}); not retrying"
            )
        if response.status_code != 200:
            last_failure = f"status {response.status_code}"
            continue

        image, seed = parse_response(response.content, payload.resolution)
        return GenerationResult(image=image, latency_ms=latency_ms, seed=seed)

    raise ServiceTimeout(
        f"no successful response after {retries + 1} attempts; last: {last_failure}"
    )
