"""Vector index: ingestion, top-k retrieval, and JSON-lines persistence.

Desk-scale corpora are scanned linearly; hits come back in non-increasing
score order with ties broken by chunk_id so retrieval is reproducible.
Ingestion upserts by chunk_id, which makes re-ingesting unchanged files a
no-op.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyIndexError, IndexFormatError, KnowledgeBaseError
from .chunking import COLLECTIONS, KnowledgeChunk, chunk_text
from .embedders import LexicalEmbedder, embedder_from_name

FORMAT_NAME = "pacpipe-index"
FORMAT_VERSION = 1

DEFAULT_CHUNK_SIZE = 1000
DEFAULT_OVERLAP = 200
DEFAULT_K = 4

_TEXT_SUFFIXES = (".md", ".txt", ".rego", ".rst")


@dataclass(frozen=True)
class RetrievalHit:
    chunk: KnowledgeChunk
    score: float


@dataclass(frozen=True)
class IndexStats:
    files: int
    new_chunks: int
    updated_chunks: int
    unchanged_chunks: int
    total_chunks: int
    dim: int


class VectorIndex:
    def __init__(self, embedder=None):
        self.embedder = embedder or LexicalEmbedder()
        self._chunks: dict[str, KnowledgeChunk] = {}
        self._vectors: dict[str, np.ndarray] = {}

    # --- ingestion ---

    def ingest(
        self,
        paths,
        collection: str,
        chunk_size: int = DEFAULT_CHUNK_SIZE,
        overlap: int = DEFAULT_OVERLAP,
    ) -> IndexStats:
        """Chunk, embed, and index the given files or directories.

        Raises on unreadable paths or embedder failure before touching the
        index, so a failed ingestion leaves previous state intact.
        """
        files = _gather_files(paths)
        staged: list[tuple[KnowledgeChunk, np.ndarray]] = []
        for file_path in files:
            try:
                text = file_path.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                raise KnowledgeBaseError(f"cannot read {file_path}: {exc}") from exc
            for chunk in chunk_text(str(file_path), text, collection, chunk_size, overlap):
                staged.append((chunk, self.embedder.embed(chunk.body)))
        new = updated = unchanged = 0
        for chunk, vector in staged:
            existing = self._chunks.get(chunk.chunk_id)
            if existing is None:
                new += 1
            elif existing.body == chunk.body and existing.collection == chunk.collection:
                unchanged += 1
                continue
            else:
                updated += 1
            self._chunks[chunk.chunk_id] = chunk
            self._vectors[chunk.chunk_id] = vector
        return IndexStats(
            files=len(files),
            new_chunks=new,
            updated_chunks=updated,
            unchanged_chunks=unchanged,
            total_chunks=len(self._chunks),
            dim=self.embedder.dim,
        )

    # --- retrieval ---

    def query(self, question: str, collection: str, k: int = DEFAULT_K) -> list[RetrievalHit]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if collection not in COLLECTIONS:
            raise ValueError(f"unknown collection {collection!r}")
        candidates = [c for c in self._chunks.values() if c.collection == collection]
        if not candidates:
            raise EmptyIndexError(f"knowledge base {collection!r} is empty")
        qv = self.embedder.embed(question)
        scored = [
            (float(np.dot(qv, self._vectors[c.chunk_id])), c) for c in candidates
        ]
        scored.sort(key=lambda sc: (-sc[0], sc[1].chunk_id))
        return [RetrievalHit(chunk=c, score=s) for s, c in scored[:k]]

    def count(self, collection: str | None = None) -> int:
        if collection is None:
            return len(self._chunks)
        return sum(1 for c in self._chunks.values() if c.collection == collection)

    def chunks(self) -> list[KnowledgeChunk]:
        return sorted(self._chunks.values(), key=lambda c: c.chunk_id)

    # --- persistence ---

    def persist(self, path: str | Path) -> None:
        path = Path(path)
        header = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "dim": self.embedder.dim,
            "embedder": self.embedder.name,
            "chunks": len(self._chunks),
        }
        lines = [json.dumps(header, sort_keys=True)]
        for chunk in self.chunks():
            lines.append(
                json.dumps(
                    {
                        "chunk_id": chunk.chunk_id,
                        "doc_path": chunk.doc_path,
                        "range": [chunk.start, chunk.end],
                        "body": chunk.body,
                        "collection": chunk.collection,
                        "vector": self._vectors[chunk.chunk_id].tolist(),
                    },
                    sort_keys=True,
                )
            )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path, embedder=None) -> "VectorIndex":
        path = Path(path)
        try:
            raw_lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise KnowledgeBaseError(f"cannot read index {path}: {exc}") from exc
        if not raw_lines:
            raise IndexFormatError(f"{path}: empty index file")
        try:
            header = json.loads(raw_lines[0])
        except json.JSONDecodeError as exc:
            raise IndexFormatError(f"{path}: corrupt header: {exc}") from exc
        if header.get("format") != FORMAT_NAME:
            raise IndexFormatError(f"{path}: not a {FORMAT_NAME} file")
        if header.get("version") != FORMAT_VERSION:
            raise IndexFormatError(
                f"{path}: unsupported index version {header.get('version')!r}"
            )
        if embedder is None:
            embedder = embedder_from_name(str(header.get("embedder", "")))
            if embedder is None:
                raise IndexFormatError(
                    f"{path}: index was built with {header.get('embedder')!r}; "
                    "pass a matching embedder to load()"
                )
        if embedder.dim != header.get("dim"):
            raise IndexFormatError(
                f"{path}: index dimension {header.get('dim')} does not match "
                f"embedder dimension {embedder.dim}"
            )
        index = cls(embedder=embedder)
        expected = header.get("chunks")
        body_lines = [ln for ln in raw_lines[1:] if ln.strip()]
        if isinstance(expected, int) and len(body_lines) != expected:
            raise IndexFormatError(
                f"{path}: expected {expected} chunk lines, found {len(body_lines)} "
                "(truncated or corrupt file)"
            )
        for lineno, line in enumerate(body_lines, start=2):
            try:
                rec = json.loads(line)
                chunk = KnowledgeChunk(
                    chunk_id=rec["chunk_id"],
                    doc_path=rec["doc_path"],
                    start=int(rec["range"][0]),
                    end=int(rec["range"][1]),
                    body=rec["body"],
                    collection=rec["collection"],
                )
                vector = np.asarray(rec["vector"], dtype=np.float64)
            except (json.JSONDecodeError, KeyError, IndexError, TypeError, ValueError) as exc:
                raise IndexFormatError(f"{path}:{lineno}: corrupt chunk line: {exc}") from exc
            if vector.shape != (embedder.dim,):
                raise IndexFormatError(f"{path}:{lineno}: vector dimension mismatch")
            index._chunks[chunk.chunk_id] = chunk
            index._vectors[chunk.chunk_id] = vector
        return index


def _gather_files(paths) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            found = sorted(
                q for q in p.rglob("*") if q.is_file() and q.suffix in _TEXT_SUFFIXES
            )
            if not found:
                raise KnowledgeBaseError(f"no text documents under {p}")
            files.extend(found)
        elif p.is_file():
            files.append(p)
        else:
            raise KnowledgeBaseError(f"path not found: {p}")
    return files
