# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 09:28
# @File    : config.py
# @Software: PyCharm
import os

"""
默认配置

运行时可以用 --config 指定 key = value 格式的配置文件覆盖，命令行参数优先级最高，
API key 只从环境变量读取，这里只保存环境变量的名字
"""

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir))
DATA_DIR = os.path.join(PROJECT_ROOT, 'data')
MOCK_RULES_PATH = os.path.join(DATA_DIR, 'mock_rules.tsv')

# completion 相关配置
openai_model_name = "text-davinci-003"
openai_baseurl = "https://api.openai.com/v1"
openai_api_key_env = "OPENAI_API_KEY"
max_answer_tokens = 512
temperature = 0.0
max_retries = 3
request_timeout = 60.0
backoff_base = 1.0
backoff_factor = 2.0
requests_per_minute = 60

# embedding 相关配置
embedding_dim = 512
embedding_seed = 20230707
embedding_batch_size = 64

# chunk / retrieval
words_per_chunk = 200
overlap_words = 50
retrieval_k = 5

# pipeline
concurrency = 4
seed = 0

# evaluation
noninferiority_margin = -0.10
noninferiority_alpha = 0.025
superiority_alpha = 0.05
accuracy_threshold = 0.90

# 输出中 NotReported 的写法
NOT_REPORTED_TOKEN = "NR"

# 错误类型
# 没有费用
ERROR_NO_FEE = {
    "error": 'You exceeded your current quota',
    "desc": "quota exhausted"
}
# 账号信息不对
ERROR_ACCOUNT_INFO = {
    "error": 'Incorrect API key provided',
    "desc": "API key rejected"
}
# 违法政策
ERROR_VIOLATION_POLICIES = {
    "error": 'Your access was terminated due to violation of our policies',
    "desc": "access terminated"
}

FATAL_REMOTE_ERRORS = (ERROR_NO_FEE, ERROR_ACCOUNT_INFO, ERROR_VIOLATION_POLICIES)
