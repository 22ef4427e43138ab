"""Provider contract: the seam isolating all generative nondeterminism.

Engine code only ever talks to this interface. The mock implementation is a
pure function of its inputs; the HTTP implementation adapts a remote endpoint
to the same contract. Provider identity, model id, and fingerprint params all
feed node fingerprints, so switching providers or models invalidates caches.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterable

from infomorph.errors import EmptyInput

DEFAULT_TAU = 0.35
DEFAULT_MODEL = "default"
EMBED_MODES = ("text", "image", "multimodal")
CONTEXT_BYTE_BUDGET = 512_000

EmbeddingVector = tuple[float, ...]


@dataclass(frozen=True)
class Judgment:
    verdict: str  # "relevant" | "irrelevant"
    score: float
    rationale: str

    def to_jsonable(self) -> dict:
        return {"verdict": self.verdict, "score": self.score, "rationale": self.rationale}


def judgment_from_score(score: float, tau: float, rationale: str) -> Judgment:
    score = max(0.0, min(1.0, score))
    verdict = "relevant" if score >= tau else "irrelevant"
    return Judgment(verdict=verdict, score=score, rationale=rationale)


def coerce_embed_item(item: Any) -> dict:
    """Normalize an embed input to {"text": str, "image_refs": [hash, ...]}."""
    if isinstance(item, str):
        return {"text": item, "image_refs": []}
    if isinstance(item, dict):
        return {"text": item.get("text", ""), "image_refs": list(item.get("image_refs", ()))}
    raise EmptyInput(f"cannot embed item of type {type(item).__name__}")


class Provider(ABC):
    """All operations must be safe to call concurrently."""

    provider_id: str = "provider"

    def fingerprint_params(self) -> dict:
        """Provider-level parameters that must invalidate node caches when changed."""
        return {}

    @abstractmethod
    def complete(self, model: str, system: str, context: list[str], prompt: str) -> str: ...

    @abstractmethod
    def embed(self, mode: str, items: list[Any]) -> list[EmbeddingVector]: ...

    @abstractmethod
    def judge(self, model: str, page: Any, extraction_prompt: str, tau: float = DEFAULT_TAU) -> Judgment: ...

    @abstractmethod
    def generate_image(self, model: str, prompt: str) -> str: ...

    @abstractmethod
    def restyle_image(self, model: str, source: str, prompt: str) -> str: ...


class CountingProvider(Provider):
    """Delegating wrapper that counts provider invocations (thread-safe)."""

    def __init__(self, inner: Provider):
        self.inner = inner
        self.provider_id = inner.provider_id
        self._lock = threading.Lock()
        self.calls = 0
        self.calls_by_op: dict[str, int] = {}

    def fingerprint_params(self) -> dict:
        return self.inner.fingerprint_params()

    def _tick(self, op: str) -> None:
        with self._lock:
            self.calls += 1
            self.calls_by_op[op] = self.calls_by_op.get(op, 0) + 1

    def complete(self, model, system, context, prompt):
        self._tick("complete")
        return self.inner.complete(model, system, context, prompt)

    def embed(self, mode, items):
        self._tick("embed")
        return self.inner.embed(mode, items)

    def judge(self, model, page, extraction_prompt, tau=DEFAULT_TAU):
        self._tick("judge")
        return self.inner.judge(model, page, extraction_prompt, tau)

    def generate_image(self, model, prompt):
        self._tick("generate_image")
        return self.inner.generate_image(model, prompt)

    def restyle_image(self, model, source, prompt):
        self._tick("restyle_image")
        return self.inner.restyle_image(model, source, prompt)


class ProviderRegistry:
    """Maps provider ids to instances; nodes pick via config["provider"]."""

    def __init__(self, providers: dict[str, Provider], default: str):
        if default not in providers:
            raise KeyError(f"default provider {default!r} not registered")
        self.providers = dict(providers)
        self.default = default

    def get(self, provider_id: str | None = None) -> Provider:
        pid = provider_id or self.default
        try:
            return self.providers[pid]
        except KeyError:
            raise EmptyInput(f"unknown provider {pid!r}") from None

    def for_config(self, config: dict) -> Provider:
        return self.get(config.get("provider"))

    def ids(self) -> Iterable[str]:
        return self.providers.keys()
