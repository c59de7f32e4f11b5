# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 15:10
# @File    : run_config.py
# @Software: PyCharm
import os
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional

from config import config
from service.completion import BackendConfig, BackendKind
from service.embedding import ChunkingConfig
from utils.LogHandler import log
from utils.exceptions import ConfigError

"""
运行配置

优先级: 命令行参数 > --config 指定的 key = value 文件 > config/config.py 中的默认值
API key 只能通过环境变量传入，配置文件里出现 key / token / secret 会直接报错
"""

FILE_KEYS = {
    'input': str, 'output': str, 'schema': str, 'template': str, 'excel': str, 'rules': str,
    'backend': str, 'model': str, 'endpoint': str, 'api_key_env': str,
    'max_retries': int, 'timeout': float, 'requests_per_minute': float, 'max_answer_tokens': int,
    'temperature': float, 'k': int, 'chunk_words': int, 'overlap': int, 'concurrency': int, 'seed': int,
    'embedder': str, 'embedding_endpoint': str, 'embedding_dim': int, 'max_prompt_chars': int,
    'margin': float, 'alpha': float,
}

_SECRET_MARKERS = ('key', 'token', 'secret', 'password')

EMBEDDER_LOCAL = 'local'
EMBEDDER_REMOTE = 'remote'


def read_config_file(path) -> Dict[str, object]:
    """key = value，# 开头为注释"""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise ConfigError(f'config file not found: {path}')
    values = {}
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            key, sep, value = line.partition('=')
            key = key.strip().lower().replace('-', '_')
            if not sep:
                raise ConfigError(f'{path}:{number}: expected "key = value"')
            if key not in FILE_KEYS and any(marker in key for marker in _SECRET_MARKERS):
                raise ConfigError(f'{path}:{number}: secrets are only read from the environment ({key})')
            if key not in FILE_KEYS:
                raise ConfigError(f'{path}:{number}: unknown key {key!r}')
            try:
                values[key] = FILE_KEYS[key](value.strip())
            except ValueError:
                raise ConfigError(f'{path}:{number}: bad value for {key}: {value.strip()!r}') from None
    log.info(f'载入配置文件 {path}: {sorted(values)}')
    return values


@dataclass(frozen=True)
class RunConfig:
    input_dir: str
    output_path: str
    schema_file: Optional[str] = None
    template_file: Optional[str] = None
    excel_path: Optional[str] = None
    backend: BackendConfig = field(default_factory=BackendConfig)
    chunking: ChunkingConfig = field(default_factory=ChunkingConfig)
    k: int = config.retrieval_k
    concurrency: int = config.concurrency
    seed: int = config.seed
    max_answer_tokens: int = config.max_answer_tokens
    temperature: float = config.temperature
    embedder: str = EMBEDDER_LOCAL
    embedding_endpoint: Optional[str] = None
    embedding_dim: int = config.embedding_dim
    max_prompt_chars: Optional[int] = None
    paper_mode: bool = False

    def validate(self) -> 'RunConfig':
        if not os.path.isdir(self.input_dir):
            raise ConfigError(f'input directory does not exist: {self.input_dir}')
        for label, path in (('schema', self.schema_file), ('template', self.template_file)):
            if path and not os.path.isfile(path):
                raise ConfigError(f'{label} file does not exist: {path}')
        if self.backend.kind is BackendKind.MOCK_RULES and not os.path.isfile(self.backend.rules_path):
            raise ConfigError(f'mock rules file does not exist: {self.backend.rules_path}')
        if not self.output_path:
            raise ConfigError('an output path is required')
        if self.k < 1:
            raise ConfigError('k must be >= 1')
        if self.concurrency < 1:
            raise ConfigError('concurrency must be >= 1')
        if self.embedder not in (EMBEDDER_LOCAL, EMBEDDER_REMOTE):
            raise ConfigError(f'unknown embedder {self.embedder!r}')
        if self.embedder == EMBEDDER_REMOTE and not self.embedding_endpoint:
            raise ConfigError('remote embedder needs embedding_endpoint')
        needs_key = self.backend.kind is BackendKind.REMOTE_API or self.embedder == EMBEDDER_REMOTE
        if needs_key and not os.environ.get(self.backend.api_key_env):
            raise ConfigError(f'environment variable {self.backend.api_key_env} is not set')
        return self

    def pinned_to_paper(self) -> 'RunConfig':
        """--paper-mode: k=5，200/50 分块，temperature 0，默认 schema 和提示词"""
        return replace(self, k=config.retrieval_k, temperature=0.0, schema_file=None, template_file=None,
                       chunking=ChunkingConfig(config.words_per_chunk, config.overlap_words), paper_mode=True)


def build_run_config(options: Mapping[str, object], file_values: Optional[Mapping[str, object]] = None) -> RunConfig:
    """options 为命令行参数（未给出的为 None），file_values 为配置文件内容"""
    merged = dict(file_values or {})
    merged.update({key: value for key, value in options.items() if value is not None})

    def get(key, default):
        return merged.get(key, default)

    try:
        backend = BackendConfig(
            kind=BackendKind(get('backend', BackendKind.MOCK_RULES.value)),
            endpoint=get('endpoint', config.openai_baseurl),
            api_key_env=get('api_key_env', config.openai_api_key_env),
            model_name=get('model', config.openai_model_name),
            max_retries=get('max_retries', config.max_retries),
            timeout=get('timeout', config.request_timeout),
            requests_per_minute=get('requests_per_minute', config.requests_per_minute),
            rules_path=get('rules', config.MOCK_RULES_PATH),
            seed=get('seed', config.seed),
        )
        chunking = ChunkingConfig(words_per_chunk=get('chunk_words', config.words_per_chunk),
                                  overlap_words=get('overlap', config.overlap_words))
    except ValueError as e:
        raise ConfigError(str(e)) from None

    run = RunConfig(
        input_dir=get('input', ''),
        output_path=get('output', ''),
        schema_file=get('schema', None),
        template_file=get('template', None),
        excel_path=get('excel', None),
        backend=backend,
        chunking=chunking,
        k=get('k', config.retrieval_k),
        concurrency=get('concurrency', config.concurrency),
        seed=get('seed', config.seed),
        max_answer_tokens=get('max_answer_tokens', config.max_answer_tokens),
        temperature=get('temperature', config.temperature),
        embedder=get('embedder', EMBEDDER_LOCAL),
        embedding_endpoint=get('embedding_endpoint', None),
        embedding_dim=get('embedding_dim', config.embedding_dim),
        max_prompt_chars=get('max_prompt_chars', None),
    )
    if merged.get('paper_mode'):
        run = run.pinned_to_paper()
    return run
