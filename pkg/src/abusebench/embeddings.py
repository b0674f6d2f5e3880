"""Fixed-dimension sentence vectors for the boosted baseline.

Two interchangeable providers: a deterministic character-trigram hashing
embedder (self-contained, desk scale) and a loader for vectors computed
offline by a pretrained sentence encoder. Precomputed files hold one
record per line: ``id<TAB>v1 v2 ... vd`` with decimal floats.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field

import numpy as np

from .corpus import Dataset, LabeledExample
from .errors import (
    BatchEmbedError,
    MissingEmbedding,
    NonFiniteEmbedding,
    ParseError,
    RaggedEmbeddings,
)

DEFAULT_HASH_DIM = 256
DEFAULT_PRECOMPUTED_DIM = 1024


@dataclass
class EmbeddingMatrix:
    """Row-aligned vectors: row i belongs to ids[i]."""

    ids: list[str]
    vectors: np.ndarray
    dim: int
    provider_tag: str = ""

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.shape != (len(self.ids), self.dim):
            raise ValueError(
                f"vectors have shape {self.vectors.shape}, "
                f"expected ({len(self.ids)}, {self.dim})"
            )
        if self.vectors.size and not np.isfinite(self.vectors).all():
            raise NonFiniteEmbedding(f"non-finite value in matrix {self.provider_tag!r}")

    def __len__(self) -> int:
        return len(self.ids)


def _gram_code(gram: str, seed: int, dim: int) -> tuple[int, float]:
    """Signed hashing of one trigram: (bucket index, +-1 sign).

    Bucket and sign come from two independently personalized hashes, both
    keyed on the provider seed.
    """
    data = gram.encode("utf-8")
    key = str(seed).encode("ascii")[:64]
    bucket_digest = hashlib.blake2b(data, key=key, person=b"bucket", digest_size=8)
    sign_digest = hashlib.blake2b(data, key=key, person=b"sign", digest_size=1)
    bucket = int.from_bytes(bucket_digest.digest(), "little") % dim
    sign = 1.0 if sign_digest.digest()[0] & 1 else -1.0
    return bucket, sign


def hash_embed(text: str, dim: int, seed: int) -> np.ndarray:
    """Character-trigram feature hashing with signed buckets.

    The result is L2-normalized unless no trigram exists (text shorter
    than 3 characters), in which case it is all zeros. Identical
    (text, dim, seed) always yields an identical vector.
    """
    if dim < 2:
        raise ValueError(f"embedding dim must be >= 2, got {dim}")
    vec = np.zeros(dim, dtype=np.float64)
    for i in range(len(text) - 2):
        bucket, sign = _gram_code(text[i : i + 3], seed, dim)
        vec[bucket] += sign
    norm = np.linalg.norm(vec)
    if norm > 0.0:
        vec /= norm
    return vec


class HashingEmbedder:
    """Deterministic trigram-hashing provider; immutable after construction."""

    def __init__(self, dim: int = DEFAULT_HASH_DIM, seed: int = 0):
        if dim < 2:
            raise ValueError(f"embedding dim must be >= 2, got {dim}")
        self.dim = dim
        self.seed = seed
        self.tag = f"hash3:dim={dim}:seed={seed}"
        self._cache: dict[str, tuple[int, float]] = {}

    def vector_for(self, example: LabeledExample) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        text = example.text
        for i in range(len(text) - 2):
            gram = text[i : i + 3]
            code = self._cache.get(gram)
            if code is None:
                code = _gram_code(gram, self.seed, self.dim)
                self._cache[gram] = code
            vec[code[0]] += code[1]
        norm = np.linalg.norm(vec)
        if norm > 0.0:
            vec /= norm
        return vec


class PrecomputedEmbedder:
    """Provider backed by an offline id -> vector table."""

    def __init__(self, table: dict[str, np.ndarray], dim: int, tag: str):
        self.table = table
        self.dim = dim
        self.tag = tag

    @classmethod
    def from_file(cls, path) -> "PrecomputedEmbedder":
        table, dim = _read_embedding_file(path)
        return cls(table, dim, f"precomputed:{os.path.basename(str(path))}")

    def vector_for(self, example: LabeledExample) -> np.ndarray:
        try:
            return self.table[example.id]
        except KeyError:
            raise MissingEmbedding(f"no precomputed vector for id {example.id!r}") from None


def embed_batch(provider, dataset: Dataset) -> EmbeddingMatrix:
    """Embed every example; row order equals dataset order.

    Any provider failure is wrapped in BatchEmbedError naming the id.
    """
    rows = []
    for ex in dataset:
        try:
            rows.append(np.asarray(provider.vector_for(ex), dtype=np.float64))
        except Exception as exc:
            raise BatchEmbedError(f"provider {provider.tag!r} failed on id {ex.id!r}: {exc}") from exc
    if rows:
        vectors = np.vstack(rows)
    else:
        vectors = np.zeros((0, provider.dim), dtype=np.float64)
    return EmbeddingMatrix(dataset.ids(), vectors, provider.dim, provider.tag)


def _read_embedding_file(path) -> tuple[dict[str, np.ndarray], int]:
    table: dict[str, np.ndarray] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for line_num, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ParseError(f"{path}:{line_num}: expected 'id<TAB>values'")
            ex_id, values = line.split("\t", 1)
            if ex_id in table:
                raise ParseError(f"{path}:{line_num}: duplicate id {ex_id!r}")
            try:
                vec = np.array([float(v) for v in values.split()], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"{path}:{line_num}: bad float ({exc})") from None
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise RaggedEmbeddings(
                    f"{path}:{line_num}: vector has {vec.shape[0]} entries, expected {dim}"
                )
            if not np.isfinite(vec).all():
                raise NonFiniteEmbedding(f"{path}:{line_num}: non-finite value for id {ex_id!r}")
            table[ex_id] = vec
    if dim is None:
        raise ParseError(f"{path}: file holds no embedding records")
    return table, dim


def load_precomputed(path, expected_ids) -> EmbeddingMatrix:
    """Load an embedding file and reorder its rows to ``expected_ids``."""
    table, dim = _read_embedding_file(path)
    rows = []
    for ex_id in expected_ids:
        if ex_id not in table:
            raise MissingEmbedding(f"{path}: no vector for expected id {ex_id!r}")
        rows.append(table[ex_id])
    vectors = np.vstack(rows) if rows else np.zeros((0, dim), dtype=np.float64)
    tag = f"precomputed:{os.path.basename(str(path))}"
    return EmbeddingMatrix(list(expected_ids), vectors, dim, tag)


def save_embeddings(matrix: EmbeddingMatrix, path) -> None:
    """Write the matrix in the precomputed file format (exact float repr)."""
    with open(path, "w", encoding="utf-8") as fh:
        for ex_id, row in zip(matrix.ids, matrix.vectors):
            fh.write(ex_id)
            fh.write("\t")
            fh.write(" ".join(repr(float(v)) for v in row))
            fh.write("\n")
