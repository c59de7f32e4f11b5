# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 19:25
# @File    : __init__.py
# @Software: PyCharm
