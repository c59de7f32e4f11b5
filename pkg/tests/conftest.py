# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 20:00
# @File    : conftest.py
# @Software: PyCharm
import os

os.environ.setdefault('ABSTRACT_LOG_FILE', '0')
os.environ.setdefault('ABSTRACT_LOG_LEVEL', 'WARNING')

import pytest

from config.config import DATA_DIR
from config.run_config import RunConfig
from service.completion import BackendConfig, BackendKind
from service.evaluation import Ratings
from service.schema import default_schema

SAMPLE_CORPUS = os.path.join(DATA_DIR, 'sample_corpus')
SAMPLE_TRUTH = os.path.join(SAMPLE_CORPUS, 'truth.csv')


@pytest.fixture
def schema():
    return default_schema()


@pytest.fixture
def sample_corpus():
    return SAMPLE_CORPUS


@pytest.fixture
def sample_truth():
    return SAMPLE_TRUTH


@pytest.fixture
def mock_run(tmp_path):
    """mock 后端 + 论文参数的运行配置，输出到临时目录"""
    def make(input_dir=SAMPLE_CORPUS, output='out.csv', **overrides):
        return RunConfig(input_dir=str(input_dir), output_path=str(tmp_path / output),
                         backend=BackendConfig(kind=BackendKind.MOCK_RULES), **overrides).pinned_to_paper()
    return make


@pytest.fixture
def paired_ratings():
    """
    n 个 datapoint 的两个评分者，正确数分别为 correct_a / correct_b，
    错误集合嵌套（准确率高的一方的错误是另一方的子集）
    返回 (a, b, keys, truth_values)
    """
    def make(n, correct_a, correct_b, truth_value='Yes', wrong_value='No'):
        keys = [(f'doc_{i // 14:04d}', f'var_{i % 14:02d}') for i in range(n)]
        a = Ratings('a', {k: truth_value if i < correct_a else wrong_value for i, k in enumerate(keys)})
        b = Ratings('b', {k: truth_value if i < correct_b else wrong_value for i, k in enumerate(keys)})
        return a, b, keys, [truth_value] * n
    return make
