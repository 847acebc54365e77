"""Character-window chunking of knowledge-base documents.

Windows start at multiples of ``chunk_size - overlap`` and the final
window is truncated at end of file, so concatenating bodies (dropping the
leading ``overlap`` characters of every chunk but the first) reconstructs
the source exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

COLLECTIONS = ("opa", "iac")


@dataclass(frozen=True)
class KnowledgeChunk:
    chunk_id: str
    doc_path: str
    start: int
    end: int  # exclusive
    body: str
    collection: str


def chunk_id_for(doc_path: str, start: int, end: int) -> str:
    digest = hashlib.sha256(f"{doc_path}\x00{start}\x00{end}".encode("utf-8"))
    return digest.hexdigest()[:16]


def chunk_text(
    doc_path: str, text: str, collection: str, chunk_size: int, overlap: int
) -> list[KnowledgeChunk]:
    if overlap < 0 or chunk_size <= overlap:
        raise ValueError("chunk_size must exceed overlap and overlap must be >= 0")
    if collection not in COLLECTIONS:
        raise ValueError(f"unknown collection {collection!r}; pick one of {COLLECTIONS}")
    step = chunk_size - overlap
    chunks = []
    for start in range(0, len(text), step):
        end = min(start + chunk_size, len(text))
        chunks.append(
            KnowledgeChunk(
                chunk_id=chunk_id_for(doc_path, start, end),
                doc_path=doc_path,
                start=start,
                end=end,
                body=text[start:end],
                collection=collection,
            )
        )
    return chunks
