from infomorph.ingest.chunking import CHUNK_OVERLAP, CHUNK_SIZE, chunk_text
from infomorph.ingest.ingestion import Ingestor, cosine, scoped_chat

__all__ = ["CHUNK_OVERLAP", "CHUNK_SIZE", "Ingestor", "chunk_text", "cosine", "scoped_chat"]
