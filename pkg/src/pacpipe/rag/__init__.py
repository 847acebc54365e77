"""Knowledge-base ingestion, embedding, and top-k retrieval."""

from .chunking import COLLECTIONS, KnowledgeChunk, chunk_text
from .embedders import LEXICAL_DIM, LexicalEmbedder, RemoteEmbedder
from .index import (
    DEFAULT_CHUNK_SIZE, DEFAULT_K, DEFAULT_OVERLAP, IndexStats, RetrievalHit,
    VectorIndex,
)

__all__ = [
    "COLLECTIONS",
    "DEFAULT_CHUNK_SIZE",
    "DEFAULT_K",
    "DEFAULT_OVERLAP",
    "IndexStats",
    "KnowledgeChunk",
    "LEXICAL_DIM",
    "LexicalEmbedder",
    "RemoteEmbedder",
    "RetrievalHit",
    "VectorIndex",
    "chunk_text",
]
