"""HTTP-backed provider.

Wire format (documented in docs/api.md): JSON POST to a single endpoint,
``{"op": ..., "model": ..., ...inputs}`` -> ``{...outputs}``. Connection
errors, timeouts, and 5xx responses are retried once with backoff and then
surface as ProviderUnavailable — never as corrupt content. Concurrency is
bounded by a semaphore (default 4 in-flight calls).
"""

from __future__ import annotations

import base64
import threading
import time
from typing import Any

import httpx

from infomorph.errors import (
    ContextOverflow,
    MissingBlob,
    ProviderUnavailable,
    UnsupportedMode,
)
from infomorph.providers.base import (
    DEFAULT_TAU,
    EmbeddingVector,
    Judgment,
    Provider,
    coerce_embed_item,
    judgment_from_score,
)
from infomorph.store.blobs import BlobStore

RETRY_BACKOFF_SECONDS = 0.2

_ERROR_MAP = {
    "context-overflow": ContextOverflow,
    "unsupported-mode": UnsupportedMode,
    "missing-blob": MissingBlob,
}


class HttpProvider(Provider):
    def __init__(
        self,
        endpoint: str,
        name: str = "main",
        token: str | None = None,
        blobs: BlobStore | None = None,
        timeout: float = 10.0,
        max_concurrency: int = 4,
    ):
        self.endpoint = endpoint
        self.provider_id = f"http:{name}"
        self.token = token
        self.blobs = blobs if blobs is not None else BlobStore(None)
        self.timeout = timeout
        self._semaphore = threading.Semaphore(max_concurrency)

    def fingerprint_params(self) -> dict:
        return {"endpoint": self.endpoint}

    def _post(self, payload: dict) -> dict:
        headers = {"content-type": "application/json"}
        if self.token:
            headers["authorization"] = f"Bearer {self.token}"
        last_error: Exception | None = None
        for attempt in range(2):
            if attempt:
                time.sleep(RETRY_BACKOFF_SECONDS * attempt)
            try:
                with self._semaphore:
                    response = httpx.post(self.endpoint, json=payload, headers=headers, timeout=self.timeout)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = ProviderUnavailable(f"provider endpoint returned {response.status_code}")
                continue
            if response.status_code >= 400:
                body = {}
                try:
                    body = response.json()
                except ValueError:
                    pass
                code = body.get("error", {}).get("code") if isinstance(body.get("error"), dict) else body.get("error")
                exc_type = _ERROR_MAP.get(code, ProviderUnavailable)
                raise exc_type(body.get("message") or f"provider rejected the call ({response.status_code})")
            try:
                return response.json()
            except ValueError as exc:
                raise ProviderUnavailable(f"provider returned undecodable JSON: {exc}") from exc
        raise ProviderUnavailable(f"provider endpoint unreachable after retry: {last_error}")

    def complete(self, model: str, system: str, context: list[str], prompt: str) -> str:
        body = self._post(
            {"op": "complete", "model": model, "system": system, "context": list(context), "prompt": prompt}
        )
        return str(body.get("output", ""))

    def embed(self, mode: str, items: list[Any]) -> list[EmbeddingVector]:
        payload_items = [coerce_embed_item(i) for i in items]
        body = self._post({"op": "embed", "mode": mode, "items": payload_items})
        vectors = body.get("vectors", [])
        if len(vectors) != len(items):
            raise ProviderUnavailable("provider returned the wrong number of vectors")
        return [tuple(float(v) for v in vec) for vec in vectors]

    def judge(self, model: str, page: Any, extraction_prompt: str, tau: float = DEFAULT_TAU) -> Judgment:
        text = getattr(page, "text", "") or ""
        body = self._post(
            {"op": "judge", "model": model, "page": {"text": text}, "prompt": extraction_prompt, "tau": tau}
        )
        # The invariant verdict <=> score >= tau is enforced locally.
        return judgment_from_score(float(body.get("score", 0.0)), tau, str(body.get("rationale", "")))

    def generate_image(self, model: str, prompt: str) -> str:
        body = self._post({"op": "generate_image", "model": model, "prompt": prompt})
        return self._store_image(body)

    def restyle_image(self, model: str, source: str, prompt: str) -> str:
        if not self.blobs.has(source):
            raise MissingBlob(f"restyle source {source[:12]}… not in blob store")
        source_b64 = base64.b64encode(self.blobs.get(source)).decode("ascii")
        body = self._post(
            {"op": "restyle_image", "model": model, "prompt": prompt, "source_png_base64": source_b64}
        )
        return self._store_image(body)

    def _store_image(self, body: dict) -> str:
        encoded = body.get("png_base64", "")
        try:
            data = base64.b64decode(encoded, validate=True)
        except (ValueError, TypeError) as exc:
            raise ProviderUnavailable(f"provider returned undecodable image data: {exc}") from exc
        if not data:
            raise ProviderUnavailable("provider returned no image data")
        return self.blobs.put(data)
