# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 18:20
# @File    : extract.py
# @Software: PyCharm
import sys

from config.run_config import EMBEDDER_LOCAL, EMBEDDER_REMOTE, RunConfig, build_run_config, read_config_file
from service.completion import BackendKind
from service.corpus import load_corpus
from service.pipeline import Extractor, run_extraction
from service.schema import write_table
from utils.LogHandler import log
from utils.exceptions import AbstractionError, ConfigError, DocumentNotFound, EmptyCorpus

"""
extract 命令

读取输入目录下的报告，逐个抽取 14 个变量，写出 CSV（可选 xlsx）
退出码: 0 成功（个别文件失败只给警告），1 配置错误，2 全部失败
"""

# 与配置文件 key 同名的命令行参数
OPTION_KEYS = (
    'input', 'output', 'schema', 'template', 'excel', 'rules', 'backend', 'model', 'endpoint', 'api_key_env',
    'max_retries', 'timeout', 'requests_per_minute', 'k', 'chunk_words', 'overlap', 'concurrency', 'seed',
    'embedder', 'embedding_endpoint', 'max_prompt_chars', 'paper_mode',
)


def add_parser(subparsers):
    parser = subparsers.add_parser('extract', help='abstract variables from a folder of reports')
    parser.add_argument('--config', help='key = value run configuration file')
    parser.add_argument('--input', help='folder with *.pdf / *.txt reports')
    parser.add_argument('--output', help='CSV file to write')
    parser.add_argument('--excel', help='also write the table as .xlsx')
    parser.add_argument('--schema', help='variable schema file (default: the 14 prostatectomy variables)')
    parser.add_argument('--template', help='prompt template file')
    parser.add_argument('--backend', choices=[kind.value for kind in BackendKind])
    parser.add_argument('--rules', help='rule table for the mock-rules backend')
    parser.add_argument('--model')
    parser.add_argument('--endpoint')
    parser.add_argument('--api-key-env', dest='api_key_env',
                        help='name of the environment variable holding the API key')
    parser.add_argument('--max-retries', dest='max_retries', type=int)
    parser.add_argument('--timeout', type=float)
    parser.add_argument('--requests-per-minute', dest='requests_per_minute', type=float)
    parser.add_argument('--k', type=int, help='chunks retrieved per report')
    parser.add_argument('--chunk-words', dest='chunk_words', type=int)
    parser.add_argument('--overlap', type=int)
    parser.add_argument('--concurrency', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--embedder', choices=[EMBEDDER_LOCAL, EMBEDDER_REMOTE])
    parser.add_argument('--embedding-endpoint', dest='embedding_endpoint')
    parser.add_argument('--max-prompt-chars', dest='max_prompt_chars', type=int)
    parser.add_argument('--paper-mode', dest='paper_mode', action='store_true', default=None,
                        help='pin k=5, 200/50 chunking, temperature 0 and the default schema and prompt')
    parser.set_defaults(handler=run)
    return parser


def run(args) -> int:
    try:
        file_values = read_config_file(args.config) if args.config else {}
        options = {key: getattr(args, key) for key in OPTION_KEYS}
        run_config = build_run_config(options, file_values)
    except ConfigError as e:
        print(f'error: {e}', file=sys.stderr)
        return 1
    return cmd_extract(run_config)


def cmd_extract(run_config: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        run_config.validate()
        extractor = Extractor.from_run_config(run_config)
        corpus = load_corpus(run_config.input_dir, concurrency=run_config.concurrency, report_stream=err)
    except (ConfigError, DocumentNotFound) as e:
        log.error(f'无法开始抽取: {e}')
        print(f'error: {e}', file=err)
        return 1
    except (OSError, UnicodeDecodeError) as e:
        log.error(f'读取输入文件失败: {e}')
        print(f'error: cannot read input: {e}', file=err)
        return 1
    except EmptyCorpus as e:
        print(f'error: {e}', file=err)
        return 2

    log.info(f'开始抽取: {len(corpus)} 个文档, backend={extractor.client.backend_id}, k={run_config.k}, '
             f'chunk={run_config.chunking.words_per_chunk}/{run_config.chunking.overlap_words}')
    result = run_extraction(corpus, extractor, concurrency=run_config.concurrency)
    for failure in result.failures:
        print(f'FAIL {failure.doc_id}: {failure.error}', file=err)

    summary = (f'{len(result.records)} documents processed, {len(result.failures)} failed, '
               f'{len(corpus.failures)} skipped')
    if not result.records:
        print(summary, file=out)
        print('error: no document could be abstracted', file=err)
        return 2
    try:
        write_table(result.records, run_config.output_path, extractor.schema, excel_path=run_config.excel_path)
    except (AbstractionError, OSError) as e:
        print(f'error: cannot write output: {e}', file=err)
        return 1
    print(f'{summary}, mean {result.mean_seconds:.3f} seconds per report -> {run_config.output_path}', file=out)
    return 0
