# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 19:20
# @File    : synthesize.py
# @Software: PyCharm
import os
import sys

from service.synthetic import generate_reports, simulate_abstractor, write_corpus, write_responses

"""
synthesize 命令：生成带已知答案的合成报告，可选同时生成三名模拟抽取员的回答
"""

ABSTRACTOR_ERROR_RATES = (('abstractor_1', 0.053), ('abstractor_2', 0.022), ('abstractor_3', 0.036))


def add_parser(subparsers):
    parser = subparsers.add_parser('synthesize', help='write a synthetic report corpus with planted values')
    parser.add_argument('--output', required=True, help='folder for the generated *.txt reports')
    parser.add_argument('--count', type=int, default=20)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--not-reported-rate', dest='not_reported_rate', type=float, default=0.1)
    parser.add_argument('--truth', help='where to write the planted values (default: <output>/truth.csv)')
    parser.add_argument('--abstractors', help='also write simulated abstractor responses to this CSV')
    parser.set_defaults(handler=run)
    return parser


def run(args) -> int:
    if args.count < 1 or not 0 <= args.not_reported_rate <= 1:
        print('error: --count must be >= 1 and --not-reported-rate within [0, 1]', file=sys.stderr)
        return 1
    reports = generate_reports(args.count, seed=args.seed, not_reported_rate=args.not_reported_rate)
    truth = args.truth or os.path.join(args.output, 'truth.csv')
    write_corpus(reports, args.output, truth_path=truth)
    if args.abstractors:
        responses = []
        for rater, error_rate in ABSTRACTOR_ERROR_RATES:
            responses.extend(simulate_abstractor(reports, rater, error_rate, seed=args.seed))
        write_responses(responses, args.abstractors)
    print(f'{len(reports)} reports written to {args.output}, planted values in {truth}')
    return 0
