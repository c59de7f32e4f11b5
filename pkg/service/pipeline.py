# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 15:48
# @File    : pipeline.py
# @Software: PyCharm
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from config.run_config import EMBEDDER_REMOTE, RunConfig
from service.completion import CompletionClient, CompletionRequest
from service.corpus import Corpus, Document
from service.embedding import Chunk, EmbeddingBackend, LocalHashedEmbedder, RemoteEmbedder, chunk, embed
from service.prompting import PromptTemplate, assemble, default_template, load_template
from service.retrieval import build_index, query
from service.schema import (ExtractionRecord, ExtractionSchema, default_schema, load_schema, normalize_answers,
                            parse_response)
from utils.LogHandler import log
from utils.exceptions import AbstractionError, EmptyContext

"""
单个文档: chunk -> embed -> index -> 用问题检索 -> 拼提示词 -> 补全 -> 解析 -> 标准化
多个文档并发处理，结果按 doc_id 收集
"""


@dataclass(frozen=True)
class DocumentFailure:
    doc_id: str
    error: str


@dataclass
class ExtractionRun:
    records: List[ExtractionRecord] = field(default_factory=list)
    failures: List[DocumentFailure] = field(default_factory=list)

    @property
    def mean_seconds(self) -> Optional[float]:
        if not self.records:
            return None
        return sum(r.elapsed for r in self.records) / len(self.records)


class Extractor:
    """一次运行内共享的只读组件：schema、模板、embedding 后端、补全 client"""

    def __init__(self, schema: ExtractionSchema, template: PromptTemplate, embedder: EmbeddingBackend,
                 client: CompletionClient, run: RunConfig):
        self.schema = schema
        self.template = template
        self.embedder = embedder
        self.client = client
        self.run = run
        self._query_vector = None

    @classmethod
    def from_run_config(cls, run: RunConfig) -> 'Extractor':
        schema = load_schema(run.schema_file) if run.schema_file else default_schema()
        template = load_template(run.template_file) if run.template_file else default_template(schema)
        if run.embedder == EMBEDDER_REMOTE:
            embedder = RemoteEmbedder(run.embedding_endpoint, api_key_env=run.backend.api_key_env)
        else:
            embedder = LocalHashedEmbedder(dim=run.embedding_dim)
        return cls(schema, template, embedder, CompletionClient(run.backend), run)

    def query_vector(self):
        if self._query_vector is None:
            self._query_vector = embed_question(self.template.question_body, self.embedder)
        return self._query_vector

    def extract_document(self, doc: Document) -> ExtractionRecord:
        started = time.perf_counter()
        chunks = chunk(doc.clean_text, self.run.chunking, doc_id=doc.id)
        if not chunks:
            raise EmptyContext(f'{doc.id}: document has no text')
        vectors = embed(chunks, self.embedder)
        index = build_index([(c.ref, v) for c, v in zip(chunks, vectors)])
        results = query(index, self.query_vector(), self.run.k)
        lookup = {c.ref: c for c in chunks}
        prompt = assemble(self.template, results, lookup, doc.id, max_chars=self.run.max_prompt_chars)
        response = self.client.complete(CompletionRequest(prompt.text, max_answer_tokens=self.run.max_answer_tokens,
                                                          temperature=self.run.temperature,
                                                          context_marker=self.template.context_slot_marker))
        answers = parse_response(response.text, self.schema)
        if self.run.backend.deterministic:
            elapsed = response.latency
        else:
            elapsed = time.perf_counter() - started
        record = normalize_answers(doc.id, answers, self.schema, elapsed=elapsed)
        for warning in record.warnings:
            log.warning(warning)
        log.info(f'{doc.id} 完成, 用时 {elapsed:.3f}s, {len(prompt.included_chunk_refs)} 个 chunk, '
                 f'{response.retries} 次重试')
        return record


def embed_question(question: str, embedder: EmbeddingBackend):
    return embed([Chunk(doc_id='', index=0, text=question, start_word=0)], embedder)[0]


def run_extraction(corpus: Corpus, extractor: Extractor, concurrency: int = 1) -> ExtractionRun:
    """文档级 worker pool；失败的文档单独记录，不影响其他文档"""
    extractor.query_vector()

    def work(doc) -> Tuple[Optional[ExtractionRecord], Optional[DocumentFailure]]:
        try:
            return extractor.extract_document(doc), None
        except AbstractionError as e:
            log.error(f'{doc.id} 抽取失败: {type(e).__name__}: {e}')
            return None, DocumentFailure(doc.id, f'{type(e).__name__}: {e}')

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        outcomes = list(pool.map(work, corpus.documents))

    run = ExtractionRun()
    for record, failure in outcomes:
        if record is not None:
            run.records.append(record)
        else:
            run.failures.append(failure)
    run.records.sort(key=lambda r: r.doc_id)
    return run
