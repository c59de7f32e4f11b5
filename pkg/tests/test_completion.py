# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 21:15
# @File    : test_completion.py
# @Software: PyCharm
import random

import openai
import pytest

from service.completion import (FOUND_NOTHING, BackendConfig, BackendKind, CompletionClient, CompletionRequest,
                                TokenBucket, backoff_delay, complete, full_jitter, load_mock_rules,
                                mock_rules_answer)
from service.prompting import CONTEXT_SLOT_MARKER
from utils.exceptions import AuthError, BackendUnavailable, CompletionTimeout, MalformedResponse, RateLimitExhausted

KEY_ENV = 'ABSTRACT_TEST_KEY'
SECRET = 'sk-test-0123456789'


def prompt_with(*context):
    blocks = '\n'.join(f'[{i}] {text}' for i, text in enumerate(context, start=1))
    return f'Header.\n\n{CONTEXT_SLOT_MARKER}\n{blocks}\n\nComplete the list.'


def remote_config(**overrides):
    values = dict(kind=BackendKind.REMOTE_API, api_key_env=KEY_ENV, backoff_base=0.0, requests_per_minute=0,
                  max_retries=3)
    values.update(overrides)
    return BackendConfig(**values)


class ScriptedCompletion:
    """按顺序抛出异常或返回结果，记录调用参数"""

    def __init__(self, *script):
        self.script = list(script)
        self.calls = []

    def __call__(self, **kwargs):
        self.calls.append(kwargs)
        step = self.script.pop(0)
        if isinstance(step, Exception):
            raise step
        return step


def ok(text):
    return {'choices': [{'text': text}]}


def test_mock_backend_reads_gleason_score():
    response = complete(CompletionRequest(prompt_with('GLEASON SCORE: 3+4=7.')), BackendConfig())
    assert 'Primary Gleason Grade: 3' in response.text
    assert 'Secondary Gleason Grade: 4' in response.text
    assert 'Gleason Sum Score: 7' in response.text
    assert response.retries == 0


def test_mock_rules_answer_lines():
    answer = mock_rules_answer(prompt_with('Seminal vesicle invasion: not identified.'))
    assert 'Seminal Vesical Invasion: No' in answer.splitlines()
    assert f'Specific Prostate Weight in g: {FOUND_NOTHING}' in answer.splitlines()
    assert len(answer.splitlines()) == len(load_mock_rules().variables) == 14


def test_mock_backend_is_deterministic():
    request = CompletionRequest(prompt_with('Prostate weight: 52.3 g.', 'pT3a pN0'))
    first, second = complete(request, BackendConfig()), complete(request, BackendConfig())
    assert first == second
    assert 'Specific Prostate Weight in g: 52.3 g' in first.text


def test_mock_rules_ignore_text_outside_context():
    prompt = 'Prostate weight: 10 g\n\n' + CONTEXT_SLOT_MARKER + '\n[1] nothing here\n\nGleason Sum Score?'
    assert f'Specific Prostate Weight in g: {FOUND_NOTHING}' in mock_rules_answer(prompt)


def test_backoff_is_strictly_increasing():
    delays = [backoff_delay(attempt, 0.5, 2.0) for attempt in range(1, 6)]
    assert delays == [0.5, 1.0, 2.0, 4.0, 8.0]
    rng = random.Random(0)
    assert all(0 <= full_jitter(d, rng) <= d for d in delays)


def test_token_bucket_spaces_requests():
    now = [0.0]
    slept = []

    def sleep(seconds):
        slept.append(seconds)
        now[0] += seconds

    bucket = TokenBucket(requests_per_minute=60, clock=lambda: now[0], sleep=sleep)
    assert bucket.acquire() == 0.0
    assert bucket.acquire() == pytest.approx(1.0)
    now[0] += 5.0
    assert bucket.acquire() == 0.0
    assert TokenBucket(0).acquire() == 0.0


def test_missing_key_fails_before_any_call(monkeypatch):
    monkeypatch.delenv(KEY_ENV, raising=False)
    fake = ScriptedCompletion()
    monkeypatch.setattr(openai.Completion, 'create', fake)
    with pytest.raises(AuthError):
        CompletionClient(remote_config()).complete(CompletionRequest('prompt'))
    assert fake.calls == []


def test_rate_limited_twice_then_success(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)
    fake = ScriptedCompletion(openai.error.RateLimitError('slow down'), openai.error.RateLimitError('slow down'),
                              ok('pT-Stage: pT2'))
    monkeypatch.setattr(openai.Completion, 'create', fake)
    response = CompletionClient(remote_config()).complete(CompletionRequest('prompt', max_answer_tokens=64))
    assert response.text == 'pT-Stage: pT2'
    assert response.attempts == 3 and response.retries == 2
    assert fake.calls[0]['api_key'] == SECRET
    assert fake.calls[0]['max_tokens'] == 64
    assert fake.calls[0]['temperature'] == 0.0


def test_retries_exhausted(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)
    fake = ScriptedCompletion(*[openai.error.RateLimitError('slow down')] * 3)
    monkeypatch.setattr(openai.Completion, 'create', fake)
    with pytest.raises(RateLimitExhausted) as info:
        CompletionClient(remote_config(max_retries=2)).complete(CompletionRequest('prompt'))
    assert info.value.attempts == 3
    assert len(fake.calls) == 3


def test_timeouts_exhausted(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)
    fake = ScriptedCompletion(*[openai.error.Timeout('read timed out')] * 2)
    monkeypatch.setattr(openai.Completion, 'create', fake)
    with pytest.raises(CompletionTimeout):
        CompletionClient(remote_config(max_retries=1)).complete(CompletionRequest('prompt'))


def test_rejected_key_is_not_retried_and_not_echoed(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)
    fake = ScriptedCompletion(openai.error.AuthenticationError(f'Incorrect API key provided: {SECRET}'))
    monkeypatch.setattr(openai.Completion, 'create', fake)
    with pytest.raises(AuthError) as info:
        CompletionClient(remote_config()).complete(CompletionRequest('prompt'))
    assert len(fake.calls) == 1
    assert SECRET not in str(info.value)


def test_quota_exhausted_is_fatal(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)
    fake = ScriptedCompletion(openai.error.RateLimitError('You exceeded your current quota, please check'))
    monkeypatch.setattr(openai.Completion, 'create', fake)
    with pytest.raises(AuthError):
        CompletionClient(remote_config()).complete(CompletionRequest('prompt'))
    assert len(fake.calls) == 1


def test_client_errors_are_not_retried(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)
    fake = ScriptedCompletion(openai.error.InvalidRequestError('bad model', param='model'))
    monkeypatch.setattr(openai.Completion, 'create', fake)
    with pytest.raises(BackendUnavailable):
        CompletionClient(remote_config()).complete(CompletionRequest('prompt'))
    assert len(fake.calls) == 1


def test_malformed_response(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)
    monkeypatch.setattr(openai.Completion, 'create', ScriptedCompletion({'choices': []}))
    with pytest.raises(MalformedResponse):
        CompletionClient(remote_config()).complete(CompletionRequest('prompt'))


def test_request_validation():
    with pytest.raises(ValueError):
        CompletionRequest('')
    with pytest.raises(ValueError):
        CompletionRequest('prompt', max_answer_tokens=0)


def test_mock_backend_reads_context_under_custom_marker():
    prompt = 'Header.\n\nContext:\n[1] GLEASON SCORE: 3+4=7.\n\nComplete the list.'
    assert 'Primary Gleason Grade: 3' in mock_rules_answer(prompt, marker='Context:').splitlines()
    assert f'Primary Gleason Grade: {FOUND_NOTHING}' in mock_rules_answer(prompt).splitlines()
    response = complete(CompletionRequest(prompt, context_marker='Context:'), BackendConfig())
    assert 'Gleason Sum Score: 7' in response.text.splitlines()


def test_request_rejects_blank_context_marker():
    with pytest.raises(ValueError):
        CompletionRequest('prompt', context_marker='  ')
