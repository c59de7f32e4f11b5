# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 10:37
# @File    : retrieval.py
# @Software: PyCharm
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from service.embedding import ChunkRef, EmbeddingVector
from utils.exceptions import DimensionMismatch, EmptyInput

"""
精确最近邻检索

全量扫描计算余弦相似度，不做近似；同分按 (doc_id, chunk index) 升序
"""

SCORE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RetrievalResult:
    chunk_ref: ChunkRef
    score: float


class VectorIndex:
    """build 之后只读，可以被多个线程同时查询"""

    def __init__(self, refs: Sequence[ChunkRef], matrix: np.ndarray):
        self._refs = tuple(ChunkRef(*ref) for ref in refs)
        matrix = np.array(matrix, dtype=np.float64)
        matrix.setflags(write=False)
        self._matrix = matrix
        norms = np.sqrt((matrix * matrix).sum(axis=1))
        norms.setflags(write=False)
        self._norms = norms

    @property
    def dim(self):
        return int(self._matrix.shape[1])

    @property
    def refs(self) -> Tuple[ChunkRef, ...]:
        return self._refs

    def __len__(self):
        return len(self._refs)

    def scores(self, q: EmbeddingVector) -> np.ndarray:
        if q.dim != self.dim:
            raise DimensionMismatch(f'query dim {q.dim} does not match index dim {self.dim}')
        # 逐行求和，相同的行得到完全相同的分数
        dots = (self._matrix * q.values).sum(axis=1)
        denominators = self._norms * q.norm
        with np.errstate(divide='ignore', invalid='ignore'):
            cosines = np.where(denominators > 0, dots / denominators, 0.0)
        return np.clip(cosines, -1.0, 1.0)


def build_index(vectors: Sequence[Tuple[ChunkRef, EmbeddingVector]]) -> VectorIndex:
    if not vectors:
        raise EmptyInput('cannot build an index from zero vectors')
    dims = {vector.dim for _, vector in vectors}
    if len(dims) != 1:
        raise DimensionMismatch(f'vectors have mixed dims {sorted(dims)}')
    refs = [ref for ref, _ in vectors]
    matrix = np.vstack([vector.values for _, vector in vectors])
    return VectorIndex(refs, matrix)


def query(index: VectorIndex, q: EmbeddingVector, k: int) -> List[RetrievalResult]:
    """返回 min(k, 条目数) 个结果，分数降序"""
    if k < 1:
        raise ValueError('k must be >= 1')
    scores = index.scores(q)
    refs = index.refs
    order = sorted(range(len(refs)), key=lambda i: (-scores[i], refs[i].doc_id, refs[i].index))
    return [RetrievalResult(chunk_ref=refs[i], score=float(scores[i])) for i in order[:k]]
