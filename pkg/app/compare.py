# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 19:02
# @File    : compare.py
# @Software: PyCharm
import os
import sys
from collections import OrderedDict
from typing import Optional

from config import config
from service.evaluation import (accuracy_line, build_ground_truth, comparison_lines, evaluate, load_ratings,
                                load_single_rater, truth_from_ratings, write_report)
from service.schema import default_schema, load_schema
from utils.exceptions import AbstractionError, InputFormatError

"""
compare 命令：两个评分者在同一批报告上的配对比较（工具 vs 人、工具 vs 工具）
"""


def add_parser(subparsers):
    parser = subparsers.add_parser('compare', help='paired comparison of two raters on the same reports')
    parser.add_argument('--a', dest='predictions_a', required=True, help='candidate predictions')
    parser.add_argument('--b', dest='predictions_b', required=True, help='comparator predictions')
    parser.add_argument('--truth', required=True, help='truth table, or a response file with 3 abstractors')
    parser.add_argument('--margin', type=float, default=config.noninferiority_margin)
    parser.add_argument('--alpha', type=float, default=config.noninferiority_alpha)
    parser.add_argument('--schema')
    parser.add_argument('--output', help='also write the report files to this folder')
    parser.set_defaults(handler=run)
    return parser


def run(args) -> int:
    return cmd_compare(args.predictions_a, args.predictions_b, args.truth, margin=args.margin, alpha=args.alpha,
                       schema_file=args.schema, output_dir=args.output)


def _rater_name(path, taken=None):
    name = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    return f'{name} (b)' if name == taken else name


def _load_truth(path, schema):
    raters = load_ratings(path, schema, rater_id='truth')
    if len(raters) == 1:
        return truth_from_ratings(next(iter(raters.values())), schema)
    if len(raters) == 3:
        return build_ground_truth(list(raters.values()), schema=schema)
    raise InputFormatError(f'{path}: expected a truth table or 3 abstractors, found {len(raters)} raters')


def cmd_compare(predictions_a, predictions_b, truth_csv, margin: float = config.noninferiority_margin,
                alpha: float = config.noninferiority_alpha, schema_file: Optional[str] = None,
                output_dir: Optional[str] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        schema = load_schema(schema_file) if schema_file else default_schema()
        name_a = _rater_name(predictions_a)
        a = load_single_rater(predictions_a, schema, rater_id=name_a)
        b = load_single_rater(predictions_b, schema, rater_id=_rater_name(predictions_b, taken=name_a))
        if a.doc_ids != b.doc_ids:
            raise InputFormatError(f'{a.rater_id} and {b.rater_id} cover different reports')
        truth = _load_truth(truth_csv, schema)
        covered = set(a.doc_ids)
        shared = OrderedDict((key, cell) for key, cell in truth.items() if key[0] in covered)
        missing = covered - {doc_id for doc_id, _ in shared}
        if missing:
            raise InputFormatError(f'no truth for {len(missing)} reports, e.g. {sorted(missing)[0]}')
        report = evaluate(a, shared, [b], margin=margin, alpha=alpha)
        if output_dir:
            write_report(report, output_dir)
    except (AbstractionError, OSError) as e:
        print(f'error: {e}', file=err)
        return 1

    for rater, estimate in report.overall.items():
        print(accuracy_line(rater, estimate), file=out)
    for line in comparison_lines(report.comparisons[0]):
        print(line, file=out)
    return 0
