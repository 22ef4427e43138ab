from infomorph.store.blobs import BlobStore
from infomorph.store.cache import Cache
from infomorph.store.docs import DocumentStore
from infomorph.store.workflows import graph_hash, load_workflow, save_workflow

__all__ = ["BlobStore", "Cache", "DocumentStore", "graph_hash", "load_workflow", "save_workflow"]
