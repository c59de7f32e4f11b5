# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 09:20
# @File    : exceptions.py
# @Software: PyCharm
"""
项目内所有异常的定义

全部继承 AbstractionError，命令层据此转换为退出码
"""


class AbstractionError(Exception):
    """Root of every error raised by the abstraction tool."""


# ---- corpus
class DocumentNotFound(AbstractionError, FileNotFoundError):
    pass


class NoTextLayer(AbstractionError):
    """The PDF carries no extractable text; it needs OCR upstream."""


class UnsupportedFormat(AbstractionError):
    pass


class EmptyCorpus(AbstractionError):
    pass


# ---- embedding / retrieval
class BackendUnavailable(AbstractionError):
    pass


class DimensionMismatch(AbstractionError):
    pass


class EmptyInput(AbstractionError):
    pass


# ---- prompting
class UnresolvableChunkRef(AbstractionError):
    pass


class EmptyContext(AbstractionError):
    pass


class PromptTooLong(AbstractionError):
    pass


# ---- completion
class AuthError(AbstractionError):
    """Non-retryable: missing or rejected credentials, exhausted quota."""


class RateLimitExhausted(AbstractionError):
    def __init__(self, message, attempts=0):
        super().__init__(message)
        self.attempts = attempts


class CompletionTimeout(AbstractionError):
    def __init__(self, message, attempts=0):
        super().__init__(message)
        self.attempts = attempts


class MalformedResponse(AbstractionError):
    pass


# ---- evaluation
class WrongArity(AbstractionError):
    pass


class LengthMismatch(AbstractionError):
    pass


class UnresolvedTruth(AbstractionError):
    pass


class NoDiscordantPairs(AbstractionError):
    pass


class ZeroVariance(AbstractionError):
    """All paired differences are equal; ``mean_diff`` is the exact difference."""

    def __init__(self, mean_diff, n):
        super().__init__(f'all {n} paired differences equal {mean_diff}')
        self.mean_diff = mean_diff
        self.n = n


class TooFewSamples(AbstractionError):
    pass


# ---- configuration / input files
class ConfigError(AbstractionError):
    pass


class InputFormatError(AbstractionError):
    pass
