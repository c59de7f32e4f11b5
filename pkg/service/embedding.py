# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 10:05
# @File    : embedding.py
# @Software: PyCharm
import abc
import hashlib
import os
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
import requests
from retrying import retry

from config import config
from utils.LogHandler import log
from utils.exceptions import AuthError, BackendUnavailable, DimensionMismatch, MalformedResponse

"""
分块 + 向量化

chunk: 按词滑动窗口切分，窗口 words_per_chunk，步长 words_per_chunk - overlap_words
embed: 通过可替换的 EmbeddingBackend 把每个 chunk 变成单位长度的向量
"""


class ChunkRef(NamedTuple):
    doc_id: str
    index: int


@dataclass(frozen=True)
class ChunkingConfig:
    words_per_chunk: int = config.words_per_chunk
    overlap_words: int = config.overlap_words

    def __post_init__(self):
        if self.words_per_chunk < 1:
            raise ValueError('words_per_chunk must be positive')
        if not 0 <= self.overlap_words < self.words_per_chunk:
            raise ValueError('overlap_words must be in [0, words_per_chunk)')

    @property
    def stride(self):
        return self.words_per_chunk - self.overlap_words


@dataclass(frozen=True)
class Chunk:
    doc_id: str
    index: int
    text: str
    start_word: int

    @property
    def ref(self):
        return ChunkRef(self.doc_id, self.index)

    @property
    def word_count(self):
        return len(self.text.split())


class EmbeddingVector:
    """只读的定长向量，非零向量为单位长度"""

    __slots__ = ('values',)

    def __init__(self, values):
        array = np.array(values, dtype=np.float64)
        if array.ndim != 1 or array.size == 0:
            raise DimensionMismatch('embedding must be a non-empty 1-d vector')
        array.setflags(write=False)
        self.values = array

    @property
    def dim(self):
        return int(self.values.size)

    @property
    def norm(self):
        return float(np.linalg.norm(self.values))

    def is_zero(self):
        return not np.any(self.values)

    def __eq__(self, other):
        return isinstance(other, EmbeddingVector) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return f'EmbeddingVector(dim={self.dim}, norm={self.norm:.6f})'

    @classmethod
    def normalized(cls, values):
        array = np.asarray(values, dtype=np.float64)
        norm = np.linalg.norm(array)
        if norm > 0:
            array = array / norm
        return cls(array)


def chunk(clean_text: str, cfg: ChunkingConfig, doc_id: str = '') -> List[Chunk]:
    """
    词 = 连续的非空白字符
    窗口起点为 0, stride, 2*stride ...；越过文本末尾的窗口截断输出，且只输出这一个
    """
    words = clean_text.split()
    chunks = []
    for start in range(0, len(words), cfg.stride):
        chunks.append(Chunk(doc_id=doc_id, index=len(chunks),
                            text=' '.join(words[start:start + cfg.words_per_chunk]), start_word=start))
        if start + cfg.words_per_chunk > len(words):
            break
    return chunks


class EmbeddingBackend(abc.ABC):
    """embedding 后端的统一接口"""

    backend_id = 'abstract'

    @property
    @abc.abstractmethod
    def dim(self) -> Optional[int]:
        """向量维度；远程后端在第一次返回之前可能未知"""

    @abc.abstractmethod
    def embed_texts(self, texts: Sequence[str]) -> List[EmbeddingVector]:
        """texts 与返回值一一对应"""


class LocalHashedEmbedder(EmbeddingBackend):
    """
    本地哈希词袋 embedding: 空白切词、小写，
    每个词用带 seed 的 blake2b 散列到 dim 个桶里计数，最后 L2 归一化
    完全确定，不需要网络，线程安全
    """

    backend_id = 'local-hashed'

    def __init__(self, dim=config.embedding_dim, seed=config.embedding_seed):
        if dim < 1:
            raise ValueError('dim must be positive')
        self._dim = dim
        self._key = int(seed).to_bytes(8, 'little', signed=True)

    @property
    def dim(self):
        return self._dim

    def bucket(self, token: str) -> int:
        digest = hashlib.blake2b(token.encode('utf-8'), digest_size=8, key=self._key).digest()
        return int.from_bytes(digest, 'little') % self._dim

    def embed_text(self, text: str) -> EmbeddingVector:
        buckets = [self.bucket(token) for token in text.lower().split()]
        counts = np.bincount(np.array(buckets, dtype=np.int64), minlength=self._dim).astype(np.float64)
        return EmbeddingVector.normalized(counts)

    def embed_texts(self, texts):
        return [self.embed_text(text) for text in texts]


def _is_transient(exception):
    return isinstance(exception, (requests.ConnectionError, requests.Timeout, _TransientHTTPError))


class _TransientHTTPError(Exception):
    pass


class RemoteEmbedder(EmbeddingBackend):
    """
    远程 embedding 服务
    POST {"texts": [...]}  ->  {"vectors": [[...], ...]}
    token 从 api_key_env 指定的环境变量读取
    """

    backend_id = 'remote-embedder'

    def __init__(self, endpoint, api_key_env=config.openai_api_key_env, dim=None,
                 timeout=config.request_timeout, batch_size=config.embedding_batch_size):
        if not endpoint:
            raise BackendUnavailable('remote embedder needs an endpoint')
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.batch_size = max(1, batch_size)
        self._dim = dim

    @property
    def dim(self):
        return self._dim

    def _headers(self):
        token = os.environ.get(self.api_key_env) if self.api_key_env else None
        if self.api_key_env and not token:
            raise AuthError(f'environment variable {self.api_key_env} is not set')
        headers = {'Content-Type': 'application/json'}
        if token:
            headers['Authorization'] = f'Bearer {token}'
        return headers

    @retry(retry_on_exception=_is_transient, stop_max_attempt_number=config.max_retries + 1,
           wait_exponential_multiplier=1000, wait_exponential_max=30000)
    def _post(self, texts, headers):
        response = requests.post(self.endpoint, json={'texts': list(texts)}, headers=headers, timeout=self.timeout)
        if response.status_code in (401, 403):
            raise AuthError(f'embedding service rejected credentials ({response.status_code})')
        if response.status_code == 429 or response.status_code >= 500:
            raise _TransientHTTPError(f'embedding service returned {response.status_code}')
        if response.status_code != 200:
            raise BackendUnavailable(f'embedding service returned {response.status_code}')
        try:
            vectors = response.json()['vectors']
        except (ValueError, KeyError, TypeError) as e:
            raise MalformedResponse(f'embedding response has no "vectors": {e}') from e
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise MalformedResponse('embedding response length differs from request')
        return vectors

    def embed_texts(self, texts):
        headers = self._headers()
        result = []
        for start in range(0, len(texts), self.batch_size):
            batch = texts[start:start + self.batch_size]
            try:
                vectors = self._post(batch, headers)
            except (requests.ConnectionError, requests.Timeout, _TransientHTTPError) as e:
                raise BackendUnavailable(f'embedding service unreachable: {e}') from e
            for raw in vectors:
                vector = EmbeddingVector.normalized(raw)
                if self._dim is None:
                    self._dim = vector.dim
                    log.info(f'远程 embedding 维度: {self._dim}')
                if vector.dim != self._dim:
                    raise DimensionMismatch(f'expected dim {self._dim}, backend returned {vector.dim}')
                result.append(vector)
        return result


def embed(chunks: Sequence[Chunk], backend: EmbeddingBackend) -> List[EmbeddingVector]:
    """一个 chunk 对应一个向量，顺序不变"""
    if not chunks:
        return []
    vectors = backend.embed_texts([c.text for c in chunks])
    if len(vectors) != len(chunks):
        raise DimensionMismatch(f'{backend.backend_id} returned {len(vectors)} vectors for {len(chunks)} chunks')
    expected = backend.dim
    for vector in vectors:
        if expected is not None and vector.dim != expected:
            raise DimensionMismatch(f'expected dim {expected}, {backend.backend_id} returned {vector.dim}')
    return vectors
