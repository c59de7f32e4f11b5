# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 13:15
# @File    : prompting.py
# @Software: PyCharm
import os
from dataclasses import dataclass
from typing import Callable, List, Mapping, Optional, Sequence, Tuple, Union

from service.embedding import Chunk, ChunkRef
from service.retrieval import RetrievalResult
from service.schema import ExtractionSchema, default_schema
from utils.LogHandler import log
from utils.exceptions import ConfigError, EmptyContext, PromptTooLong, UnresolvableChunkRef

"""
拼接发送给补全模型的提示词

布局:
    <instruction_header>
    (空行)
    Search results:
    [1] <得分最高的 chunk>
    [2] ...
    (空行)
    <question_body>
"""

INSTRUCTION_HEADER = (
    "Compose a comprehensive reply to the query using the search results given. "
    "If the search results mention multiple subjects with the same name, create separate answers for each. "
    "Only include information found in the results and don't add any additional information. "
    "Make sure the answer is correct and don't output false content. "
    "If the text does not relate to the query, simply state 'Found Nothing'. "
    "Ignore outlier search results which has nothing to do with the question. "
    "Only answer what is asked. The answer should be short and concise."
)

QUESTION_LEAD = ("Complete the following list of variables with the corresponding values extracted from the "
                 "given pathology report: ")

CONTEXT_SLOT_MARKER = 'Search results:'

HEADER_SECTION = '[HEADER]'
QUESTION_SECTION = '[QUESTION]'
MARKER_SECTION = '[MARKER]'


@dataclass(frozen=True)
class PromptTemplate:
    instruction_header: str
    question_body: str
    context_slot_marker: str = CONTEXT_SLOT_MARKER

    def __post_init__(self):
        if not self.context_slot_marker.strip():
            raise ConfigError('context slot marker must not be empty')
        if not self.question_body.strip():
            raise ConfigError('question body must not be empty')
        for part in (self.instruction_header, self.question_body):
            if self.context_slot_marker in part:
                raise ConfigError(f'{self.context_slot_marker!r} may only appear once in the prompt layout')


@dataclass(frozen=True)
class AssembledPrompt:
    text: str
    doc_id: str
    included_chunk_refs: Tuple[ChunkRef, ...]


def question_for(schema: ExtractionSchema) -> str:
    return QUESTION_LEAD + ', '.join(schema.names) + '.'


def default_template(schema: Optional[ExtractionSchema] = None) -> PromptTemplate:
    """默认提示词；不传 schema 时就是 14 个变量的原始问题"""
    if schema is None:
        schema = default_schema()
    return PromptTemplate(instruction_header=INSTRUCTION_HEADER, question_body=question_for(schema))


def dump_template(template: PromptTemplate) -> str:
    return '\n'.join([
        HEADER_SECTION, template.instruction_header,
        QUESTION_SECTION, template.question_body,
        MARKER_SECTION, template.context_slot_marker,
    ]) + '\n'


def parse_template(text: str, source='<template>') -> PromptTemplate:
    sections = {}
    current = None
    for line in text.splitlines():
        if line.strip() in (HEADER_SECTION, QUESTION_SECTION, MARKER_SECTION):
            current = line.strip()
            sections[current] = []
            continue
        if current is None:
            if line.strip():
                raise ConfigError(f'{source}: text before the first section')
            continue
        sections[current].append(line)
    if HEADER_SECTION not in sections or QUESTION_SECTION not in sections:
        raise ConfigError(f'{source}: template needs {HEADER_SECTION} and {QUESTION_SECTION} sections')

    def body(name):
        return '\n'.join(sections[name]).strip('\n')

    marker = body(MARKER_SECTION).strip() if MARKER_SECTION in sections else CONTEXT_SLOT_MARKER
    return PromptTemplate(instruction_header=body(HEADER_SECTION), question_body=body(QUESTION_SECTION),
                          context_slot_marker=marker)


def load_template(path) -> PromptTemplate:
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise ConfigError(f'template file not found: {path}')
    with open(path, encoding='utf-8') as f:
        template = parse_template(f.read(), source=path)
    log.info(f'载入提示词模板 {path}')
    return template


ChunkLookup = Union[Mapping[ChunkRef, Chunk], Callable[[ChunkRef], Optional[Chunk]]]


def _resolve(chunks: ChunkLookup, ref: ChunkRef) -> Chunk:
    try:
        found = chunks(ref) if callable(chunks) else chunks.get(ref)
    except (KeyError, IndexError):
        found = None
    if found is None:
        raise UnresolvableChunkRef(f'chunk {ref.doc_id}#{ref.index} is not available')
    return found


def assemble(template: PromptTemplate, results: Sequence[RetrievalResult], chunks: ChunkLookup, doc_id: str,
             max_chars: Optional[int] = None) -> AssembledPrompt:
    """
    按得分从高到低编号 [1] [2] ...，同分按 (doc_id, index)
    max_chars 超出时报错，不做截断
    """
    if not results:
        raise EmptyContext(f'{doc_id}: no search results to put into the prompt')
    ordered = sorted(results, key=lambda r: (-r.score, r.chunk_ref.doc_id, r.chunk_ref.index))
    blocks: List[str] = []
    for position, result in enumerate(ordered, start=1):
        blocks.append(f'[{position}] {_resolve(chunks, result.chunk_ref).text}')
    text = (template.instruction_header + '\n\n' + template.context_slot_marker + '\n' + '\n'.join(blocks)
            + '\n\n' + template.question_body)
    if max_chars is not None and len(text) > max_chars:
        raise PromptTooLong(f'{doc_id}: prompt has {len(text)} characters, limit is {max_chars}')
    return AssembledPrompt(text=text, doc_id=doc_id, included_chunk_refs=tuple(r.chunk_ref for r in ordered))


def context_lines(prompt_text: str, marker: str = CONTEXT_SLOT_MARKER) -> List[str]:
    """取出提示词中 Search results 部分的 chunk 文本"""
    _, found, rest = prompt_text.partition(marker + '\n')
    if not found:
        return []
    context, _, _ = rest.partition('\n\n')
    lines = []
    for line in context.split('\n'):
        head, sep, body = line.partition('] ')
        if sep and head.startswith('[') and head[1:].isdigit():
            lines.append(body)
        elif line:
            lines.append(line)
    return lines
