from infomorph.providers.base import (
    DEFAULT_MODEL,
    DEFAULT_TAU,
    CountingProvider,
    EmbeddingVector,
    Judgment,
    Provider,
    ProviderRegistry,
    judgment_from_score,
)
from infomorph.providers.mock import MockProvider

__all__ = [
    "CountingProvider",
    "DEFAULT_MODEL",
    "DEFAULT_TAU",
    "EmbeddingVector",
    "Judgment",
    "MockProvider",
    "Provider",
    "ProviderRegistry",
    "judgment_from_score",
]
