# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 09:41
# @File    : corpus.py
# @Software: PyCharm
import enum
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, TextIO, Tuple

from PyPDF2 import PdfReader
from PyPDF2.errors import PdfReadError

from utils.LogHandler import log
from utils.exceptions import DocumentNotFound, EmptyCorpus, NoTextLayer, UnsupportedFormat

"""
读取输入目录中的 PDF / txt 文件，抽取文本层并清洗

PDF 必须已经带有文本层（扫描件需要先在上游做 OCR），
同名的 .txt 文件视为 PDF 的文本 sidecar，优先使用
"""

PDF_SUFFIX = '.pdf'
TEXT_SUFFIX = '.txt'
ELIGIBLE_SUFFIXES = (PDF_SUFFIX, TEXT_SUFFIX)

_NON_NEWLINE_SPACE = re.compile(r'[^\S\n]')
_SPACE_RUN = re.compile(r' {2,}')
_SPACE_AROUND_NEWLINE = re.compile(r' *\n *')
_NEWLINE_RUN = re.compile(r'\n{2,}')


class IngestKind(str, enum.Enum):
    PDF_TEXT_LAYER = 'pdf-text-layer'
    PLAIN_TEXT = 'plain-text'


@dataclass(frozen=True)
class Document:
    id: str
    source_path: str
    raw_text: str
    clean_text: str
    ingest_kind: IngestKind


@dataclass(frozen=True)
class LoadFailure:
    path: str
    error: str

    def __str__(self):
        return f'SKIP {self.path}: {self.error}'


@dataclass(frozen=True)
class Corpus:
    documents: Tuple[Document, ...]
    source_dir: str
    failures: Tuple[LoadFailure, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def ids(self):
        return [doc.id for doc in self.documents]

    def get(self, doc_id) -> Optional[Document]:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        return None


def _extract_pdf(path):
    try:
        reader = PdfReader(path)
    except PdfReadError as e:
        raise UnsupportedFormat(f'unreadable PDF: {e}') from e
    if reader.is_encrypted:
        raise UnsupportedFormat('encrypted PDF')
    try:
        pages = [page.extract_text() or '' for page in reader.pages]
    except PdfReadError as e:
        raise UnsupportedFormat(f'unreadable PDF: {e}') from e
    text = '\n'.join(pages)
    if not text.strip():
        raise NoTextLayer('PDF has no extractable text layer; run OCR upstream')
    return text


def extract_text(path) -> str:
    """
    抽取单个文件的文本
    PDF 按阅读顺序拼接各页文本层，txt 原样返回
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise DocumentNotFound(f'no such file: {path}')
    suffix = os.path.splitext(path)[1].lower()
    if suffix == PDF_SUFFIX:
        return _extract_pdf(path)
    if suffix == TEXT_SUFFIX:
        with open(path, encoding='utf-8', errors='replace', newline='') as f:
            return f.read()
    raise UnsupportedFormat(f'unsupported file type: {suffix or "(none)"}')


def clean_text(raw: str) -> str:
    """
    whitespace (除换行) 统一成空格，删除不可打印的控制字符，
    合并连续空格和空行，去掉首尾空白；幂等
    """
    text = _NON_NEWLINE_SPACE.sub(' ', raw)
    text = ''.join(c for c in text if c == '\n' or c.isprintable())
    text = _SPACE_RUN.sub(' ', text)
    text = _SPACE_AROUND_NEWLINE.sub('\n', text)
    text = _NEWLINE_RUN.sub('\n', text)
    return text.strip()


def _ingest_kind(path):
    if path.lower().endswith(PDF_SUFFIX):
        return IngestKind.PDF_TEXT_LAYER
    return IngestKind.PLAIN_TEXT


def _load_document(doc_id, path):
    raw = extract_text(path)
    return Document(id=doc_id, source_path=path, raw_text=raw, clean_text=clean_text(raw),
                    ingest_kind=_ingest_kind(path))


def _select_sources(directory):
    """doc_id -> path，同名时 txt sidecar 优先"""
    sources = {}
    for name in sorted(os.listdir(directory)):
        path = os.path.join(directory, name)
        stem, suffix = os.path.splitext(name)
        if not stem or suffix.lower() not in ELIGIBLE_SUFFIXES or not os.path.isfile(path):
            continue
        if stem in sources:
            if suffix.lower() == TEXT_SUFFIX:
                log.debug(f'{name} 作为 {sources[stem]} 的文本 sidecar')
                sources[stem] = path
            continue
        sources[stem] = path
    return sources


def load_corpus(directory, concurrency=1, report_stream: Optional[TextIO] = None) -> Corpus:
    """
    读取目录下的所有 *.pdf / *.txt，按 id 排序
    失败的文件写到 report_stream（默认 stderr），不会被静默丢弃
    """
    directory = os.fspath(directory)
    if not os.path.isdir(directory):
        raise DocumentNotFound(f'input directory does not exist: {directory}')
    sources = _select_sources(directory)
    if not sources:
        raise EmptyCorpus(f'no *.pdf or *.txt files in {directory}')

    doc_ids = sorted(sources)

    def _try_load(doc_id):
        try:
            return _load_document(doc_id, sources[doc_id])
        except (DocumentNotFound, NoTextLayer, UnsupportedFormat, OSError) as e:
            return LoadFailure(path=sources[doc_id], error=f'{type(e).__name__}: {e}')

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        loaded = list(pool.map(_try_load, doc_ids))

    documents = tuple(item for item in loaded if isinstance(item, Document))
    failures = tuple(item for item in loaded if isinstance(item, LoadFailure))

    stream = report_stream if report_stream is not None else sys.stderr
    for failure in failures:
        log.warning(str(failure))
        print(str(failure), file=stream)

    log.info(f'载入 {directory}: {len(documents)} 个文档, {len(failures)} 个失败')
    return Corpus(documents=documents, source_dir=directory, failures=failures)
