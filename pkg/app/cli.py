# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 19:30
# @File    : cli.py
# @Software: PyCharm
import argparse
import sys

from app import compare, evaluate, extract, synthesize
from utils.LogHandler import log

# 子命令注册顺序即帮助信息中的顺序
COMMANDS = (extract, evaluate, compare, synthesize)


class CommandParser(argparse.ArgumentParser):
    """参数错误按配置错误处理，退出码 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f'{self.prog}: error: {message}\n')


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(prog='app.py', description='zero-shot abstraction of pathology reports')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        command.add_parser(subparsers)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    log.info(f'执行 {args.command}')
    return args.handler(args)
