# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 18:45
# @File    : evaluate.py
# @Software: PyCharm
import sys
from typing import Optional, Sequence

from config import config
from service.evaluation import (accuracy_line, build_ground_truth, evaluate, load_ratings, load_single_rater,
                                read_overrides, truth_from_ratings, write_report)
from service.schema import default_schema, load_schema
from utils.LogHandler import log
from utils.exceptions import AbstractionError

"""
evaluate 命令

两种模式:
    共识模式: 三名抽取员的回答（一个长表或多个文件）取多数作为 ground truth，可用 --overrides 覆盖
    直接模式: --truth 给出已裁定的答案表
"""


def add_parser(subparsers):
    parser = subparsers.add_parser('evaluate', help='score predictions against consensus or adjudicated truth')
    parser.add_argument('--predictions', required=True, help='extraction table written by "extract"')
    parser.add_argument('--abstractors', nargs='+', default=[], help='abstractor response file(s)')
    parser.add_argument('--truth', help='adjudicated truth table (direct mode)')
    parser.add_argument('--overrides', help='adjudication overrides: doc_id, variable, truth')
    parser.add_argument('--output', default='evaluation', help='folder for the report files')
    parser.add_argument('--schema')
    parser.add_argument('--tool-name', dest='tool_name', default='tool')
    parser.add_argument('--margin', type=float, default=config.noninferiority_margin)
    parser.add_argument('--alpha', type=float, default=config.noninferiority_alpha)
    parser.set_defaults(handler=run)
    return parser


def run(args) -> int:
    return cmd_evaluate(args.predictions, args.abstractors, overrides_csv=args.overrides, truth_csv=args.truth,
                        output_dir=args.output, schema_file=args.schema, tool_name=args.tool_name,
                        margin=args.margin, alpha=args.alpha)


def cmd_evaluate(predictions_csv, abstractor_csvs: Sequence[str] = (), overrides_csv: Optional[str] = None,
                 truth_csv: Optional[str] = None, output_dir='evaluation', schema_file: Optional[str] = None,
                 tool_name='tool', margin: float = config.noninferiority_margin,
                 alpha: float = config.noninferiority_alpha, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        schema = load_schema(schema_file) if schema_file else default_schema()
        predictions = load_single_rater(predictions_csv, schema, rater_id=tool_name)
        abstractors = []
        for path in abstractor_csvs:
            abstractors.extend(load_ratings(path, schema).values())
        if truth_csv:
            truth = truth_from_ratings(load_single_rater(truth_csv, schema, rater_id='truth'), schema)
        elif len(abstractors) == 3:
            overrides = read_overrides(overrides_csv, schema) if overrides_csv else None
            truth = build_ground_truth(abstractors, overrides, schema)
        else:
            print(f'error: consensus needs 3 abstractors, found {len(abstractors)}; or pass --truth', file=err)
            return 1
        report = evaluate(predictions, truth, abstractors, margin=margin, alpha=alpha)
        paths = write_report(report, output_dir)
    except (AbstractionError, OSError) as e:
        log.error(f'评估失败: {e}')
        print(f'error: {e}', file=err)
        return 1

    if report.excluded:
        print(f'warning: {len(report.excluded)} unresolved datapoints excluded; see {paths["ground_truth"]}',
              file=err)
    print(f'{report.n} datapoints', file=out)
    for rater, estimate in report.overall.items():
        print(accuracy_line(rater, estimate), file=out)
    for comparison in report.comparisons:
        print(f'{comparison.label}: {comparison.noninferiority.verdict}', file=out)
    print(f'report written to {paths["report"]}', file=out)
    return 0
