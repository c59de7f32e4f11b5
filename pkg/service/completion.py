# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 14:02
# @File    : completion.py
# @Software: PyCharm
import enum
import functools
import os
import random
import re
import threading
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import openai
from openai import OpenAIError
from retrying import Retrying

from config import config
from config.config import FATAL_REMOTE_ERRORS
from service.prompting import CONTEXT_SLOT_MARKER, context_lines
from utils.LogHandler import log
from utils.exceptions import (AuthError, BackendUnavailable, CompletionTimeout, ConfigError, MalformedResponse,
                              RateLimitExhausted)

"""
把拼好的提示词发给补全后端，拿回原始回答

remote-api: OpenAI 兼容的 completions 接口，429/5xx/超时 指数退避重试（full jitter）
mock-rules: 用仓库自带的正则规则表在检索到的上下文里找答案，完全确定，测试用
"""

FOUND_NOTHING = 'Found Nothing'
MOCK_SECONDS_PER_CHAR = 0.0005


class BackendKind(str, enum.Enum):
    REMOTE_API = 'remote-api'
    MOCK_RULES = 'mock-rules'


@dataclass(frozen=True)
class CompletionRequest:
    prompt_text: str
    max_answer_tokens: int = config.max_answer_tokens
    temperature: float = config.temperature
    context_marker: str = CONTEXT_SLOT_MARKER

    def __post_init__(self):
        if not self.prompt_text:
            raise ValueError('prompt_text must not be empty')
        if not self.context_marker.strip():
            raise ValueError('context_marker must not be empty')
        if self.max_answer_tokens < 1:
            raise ValueError('max_answer_tokens must be positive')
        if self.temperature < 0:
            raise ValueError('temperature must be >= 0')


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    latency: float
    backend_id: str
    attempts: int = 1

    @property
    def retries(self):
        return self.attempts - 1


@dataclass(frozen=True)
class BackendConfig:
    kind: BackendKind = BackendKind.MOCK_RULES
    endpoint: Optional[str] = config.openai_baseurl
    api_key_env: str = config.openai_api_key_env
    model_name: str = config.openai_model_name
    max_retries: int = config.max_retries
    timeout: float = config.request_timeout
    backoff_base: float = config.backoff_base
    backoff_factor: float = config.backoff_factor
    requests_per_minute: float = config.requests_per_minute
    rules_path: str = config.MOCK_RULES_PATH
    seed: int = config.seed

    def __post_init__(self):
        object.__setattr__(self, 'kind', BackendKind(self.kind))
        if self.kind is BackendKind.REMOTE_API and not (self.endpoint and self.api_key_env and self.model_name):
            raise ConfigError('remote-api backend needs endpoint, api_key_env and model_name')
        if self.max_retries < 0:
            raise ConfigError('max_retries must be >= 0')
        if self.timeout <= 0:
            raise ConfigError('timeout must be positive')

    @property
    def deterministic(self):
        return self.kind is BackendKind.MOCK_RULES


# ---------------------------------------------------------------------------
# 退避与限流
# ---------------------------------------------------------------------------

def backoff_delay(attempt: int, base: float = config.backoff_base, factor: float = config.backoff_factor) -> float:
    """第 attempt 次失败之后的退避上限（秒），jitter 之前严格递增"""
    return base * factor ** (attempt - 1)


def full_jitter(delay: float, rng: random.Random) -> float:
    return rng.uniform(0, delay)


class TokenBucket:
    """所有文档 worker 共享的令牌桶，requests_per_minute <= 0 表示不限流"""

    def __init__(self, requests_per_minute: float, capacity: float = 1.0, clock=time.monotonic, sleep=time.sleep):
        self.rate = requests_per_minute / 60.0
        self.capacity = capacity
        self._clock = clock
        self._sleep = sleep
        self._tokens = float(capacity)
        self._updated = clock()
        self._lock = threading.Lock()

    def acquire(self):
        if self.rate <= 0:
            return 0.0
        waited = 0.0
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self.capacity, self._tokens + (now - self._updated) * self.rate)
                self._updated = now
                if self._tokens >= 1:
                    self._tokens -= 1
                    return waited
                wait = (1 - self._tokens) / self.rate
            self._sleep(wait)
            waited += wait


# ---------------------------------------------------------------------------
# mock 规则表
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MockRule:
    variable: str
    pattern: re.Pattern
    template: str


@dataclass(frozen=True)
class MockRuleTable:
    version: str
    rules: Tuple[MockRule, ...] = field(default_factory=tuple)

    @property
    def variables(self) -> List[str]:
        seen = []
        for rule in self.rules:
            if rule.variable not in seen:
                seen.append(rule.variable)
        return seen


@functools.lru_cache(maxsize=8)
def load_mock_rules(path=config.MOCK_RULES_PATH) -> MockRuleTable:
    """
    VARIABLE<TAB>REGEX<TAB>VALUE_TEMPLATE，# 开头为注释，"# version: N" 标明版本
    同一变量按文件顺序，第一条命中的规则生效
    """
    version = 'unversioned'
    rules = []
    with open(path, encoding='utf-8') as f:
        for number, line in enumerate(f, start=1):
            line = line.rstrip('\n')
            if line.startswith('#'):
                key, _, value = line[1:].partition(':')
                if key.strip().lower() == 'version':
                    version = value.strip()
                continue
            if not line.strip():
                continue
            parts = line.split('\t')
            if len(parts) != 3:
                raise ConfigError(f'{path}:{number}: expected 3 tab-separated fields')
            variable, regex, template = parts
            try:
                pattern = re.compile(regex, re.IGNORECASE)
            except re.error as e:
                raise ConfigError(f'{path}:{number}: bad regex: {e}') from None
            rules.append(MockRule(variable=variable, pattern=pattern, template=template))
    return MockRuleTable(version=version, rules=tuple(rules))


def mock_rules_answer(prompt_text: str, table: Optional[MockRuleTable] = None,
                      marker: str = CONTEXT_SLOT_MARKER) -> str:
    """在提示词的上下文部分（marker 之后）应用规则表，每个变量输出一行 "变量: 值" """
    if table is None:
        table = load_mock_rules()
    context = '\n'.join(context_lines(prompt_text, marker))
    answers = {}
    for rule in table.rules:
        if rule.variable in answers:
            continue
        match = rule.pattern.search(context)
        if match:
            answers[rule.variable] = match.expand(rule.template).strip()
    return '\n'.join(f'{name}: {answers.get(name, FOUND_NOTHING)}' for name in table.variables)


def simulated_latency(prompt_text: str) -> float:
    return round(len(prompt_text) * MOCK_SECONDS_PER_CHAR, 3)


# ---------------------------------------------------------------------------
# 客户端
# ---------------------------------------------------------------------------

class _TransientError(Exception):
    def __init__(self, message, is_timeout=False, is_rate_limit=False):
        super().__init__(message)
        self.is_timeout = is_timeout
        self.is_rate_limit = is_rate_limit


def _scrub(message: str, secret: Optional[str]) -> str:
    if secret:
        message = message.replace(secret, '***')
    return message


class CompletionClient:
    """
    多个文档 worker 共享一个 client：
    令牌桶限流是全局的，jitter 用带 seed 的随机数，结果可复现
    """

    def __init__(self, cfg: BackendConfig, limiter: Optional[TokenBucket] = None):
        self.cfg = cfg
        self._rng = random.Random(cfg.seed)
        self._rng_lock = threading.Lock()
        if cfg.kind is BackendKind.REMOTE_API:
            self.limiter = limiter or TokenBucket(cfg.requests_per_minute)
            self.backend_id = f'{cfg.kind.value}:{cfg.model_name}'
        else:
            self.limiter = None
            self._table = load_mock_rules(cfg.rules_path)
            self.backend_id = f'{cfg.kind.value}:v{self._table.version}'

    def _wait_ms(self, attempt_number, delay_since_first_attempt_ms):
        with self._rng_lock:
            delay = full_jitter(backoff_delay(attempt_number, self.cfg.backoff_base, self.cfg.backoff_factor),
                                self._rng)
        log.info(f'第 {attempt_number} 次请求失败，{delay:.2f}s 后重试')
        return delay * 1000

    def _api_key(self):
        key = os.environ.get(self.cfg.api_key_env)
        if not key:
            raise AuthError(f'environment variable {self.cfg.api_key_env} is not set')
        return key

    def _translate(self, error: OpenAIError, key: str) -> Exception:
        message = _scrub(str(error), key)
        for known in FATAL_REMOTE_ERRORS:
            if known['error'] in message:
                return AuthError(f'{known["desc"]}: {message}')
        if isinstance(error, (openai.error.AuthenticationError, openai.error.PermissionError)):
            return AuthError(f'credentials rejected: {message}')
        if isinstance(error, openai.error.RateLimitError):
            return _TransientError(f'rate limited: {message}', is_rate_limit=True)
        if isinstance(error, openai.error.Timeout):
            return _TransientError(f'timed out: {message}', is_timeout=True)
        if isinstance(error, (openai.error.ServiceUnavailableError, openai.error.APIConnectionError,
                              openai.error.TryAgain)):
            return _TransientError(f'service unavailable: {message}')
        status = getattr(error, 'http_status', None)
        if isinstance(error, openai.error.APIError) and (status is None or status >= 500):
            return _TransientError(f'server error {status}: {message}')
        return BackendUnavailable(f'request rejected: {message}')

    def _call_remote(self, req: CompletionRequest, key: str) -> str:
        self.limiter.acquire()
        try:
            response = openai.Completion.create(
                model=self.cfg.model_name,
                prompt=req.prompt_text,
                max_tokens=req.max_answer_tokens,
                temperature=req.temperature,
                api_key=key,
                api_base=self.cfg.endpoint,
                request_timeout=self.cfg.timeout,
            )
        except OpenAIError as e:
            raise self._translate(e, key) from None
        try:
            text = response['choices'][0]['text']
        except (KeyError, IndexError, TypeError):
            raise MalformedResponse('completion response has no choices[0].text') from None
        if not isinstance(text, str):
            raise MalformedResponse('choices[0].text is not a string')
        return text

    def complete(self, req: CompletionRequest) -> CompletionResponse:
        if self.cfg.kind is BackendKind.MOCK_RULES:
            text = mock_rules_answer(req.prompt_text, self._table, marker=req.context_marker)
            return CompletionResponse(text=text, latency=simulated_latency(req.prompt_text),
                                      backend_id=self.backend_id)

        key = self._api_key()
        attempts = [0]

        def attempt():
            attempts[0] += 1
            return self._call_remote(req, key)

        retrying = Retrying(stop_max_attempt_number=self.cfg.max_retries + 1, wait_func=self._wait_ms,
                            retry_on_exception=lambda e: isinstance(e, _TransientError))
        started = time.monotonic()
        try:
            text = retrying.call(attempt)
        except _TransientError as e:
            log.error(f'{attempts[0]} 次请求后仍失败: {e}')
            if e.is_timeout:
                raise CompletionTimeout(str(e), attempts=attempts[0]) from None
            raise RateLimitExhausted(f'gave up after {attempts[0]} attempts: {e}', attempts=attempts[0]) from None
        latency = time.monotonic() - started
        if attempts[0] > 1:
            log.info(f'请求在第 {attempts[0]} 次尝试成功')
        return CompletionResponse(text=text, latency=latency, backend_id=self.backend_id, attempts=attempts[0])


def complete(req: CompletionRequest, cfg: BackendConfig, client: Optional[CompletionClient] = None) -> CompletionResponse:
    return (client or CompletionClient(cfg)).complete(req)
