# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 19:30
# @File    : app.py
# @Software: PyCharm
"""
    项目启动文件

    python app.py extract --input reports/ --output abstraction.csv --backend mock-rules --paper-mode
    python app.py evaluate --predictions abstraction.csv --abstractors responses.csv
    python app.py compare --a vectorized.csv --b scanned.csv --truth truth.csv
    python app.py synthesize --output data/sample_corpus --count 20
"""

import sys

from app.cli import main

if __name__ == '__main__':
    sys.exit(main())
