# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 23:40
# @File    : deal_package.py
# @Software: PyCharm
import os
import sys

"""
依赖管理: python deal_package.py [install|export]
"""


def export_package():
    """
    导出当前项目的依赖包（tests 目录下的测试依赖需要手动补回 requirements.txt）
    """
    os.system("pipreqs ./ --encoding='utf-8' --force --ignore examples,tests")


def input_package():
    """
    安装当前项目的依赖包
    """
    os.system(f"{sys.executable} -m pip install -r requirements.txt")


if __name__ == '__main__':
    if sys.argv[1:] == ['export']:
        export_package()
    else:
        input_package()
