# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 09:12
# @File    : LogHandler.py
# @Software: PyCharm
import os

import logging

from logging.handlers import TimedRotatingFileHandler

INFO = logging.INFO

current_dir = os.path.abspath(os.path.dirname(__file__))
parent_dir = os.path.abspath(os.path.join(current_dir, ".."))
LOG_PATH = os.environ.get('ABSTRACT_LOG_DIR', os.path.join(parent_dir, 'logs'))

LOG_FORMAT = ('%(asctime)s.%(msecs)03d %(levelname)s | [%(threadName)s] %(name)s [%(lineno)d] | '
              '%(filename)s %(funcName)s | %(message)s')
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def _env_flag(name, default=True):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() not in ('0', 'false', 'no', 'off')


class LogHandler(logging.Logger):
    """
    LogHandler

    stream 输出到 stderr，file 按天回滚写入 logs/ 目录
    """

    def __init__(self, name, level=INFO, stream=True, file=True):
        self.name = name
        self.level = level
        logging.Logger.__init__(self, self.name, level=level)
        if stream:
            self.__setStreamHandler__()
        if file:
            self.__setFileHandler__()

    def __setFileHandler__(self, level=None):
        """
        set file handler
        :param level:
        :return:
        """
        if not os.path.exists(LOG_PATH):
            os.makedirs(LOG_PATH)
        file_name = os.path.join(LOG_PATH, '{name}.log'.format(name=self.name))
        # 设置日志回滚, 保存在log目录, 一天保存一个文件, 保留15天
        file_handler = TimedRotatingFileHandler(filename=file_name, when='D', interval=1, backupCount=15,
                                                encoding="utf-8", delay=True)
        file_handler.suffix = '%Y%m%d.log'
        file_handler.setLevel(level or self.level)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        self.addHandler(file_handler)

    def __setStreamHandler__(self, level=None):
        """
        set stream handler
        :param level:
        :return:
        """
        stream_handler = logging.StreamHandler()
        stream_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        stream_handler.setLevel(level or self.level)
        self.addHandler(stream_handler)


project_name = 'abstract'
_level = logging.getLevelName(os.environ.get('ABSTRACT_LOG_LEVEL', 'INFO').upper())
log = LogHandler(project_name,
                 level=_level if isinstance(_level, int) else INFO,
                 file=_env_flag('ABSTRACT_LOG_FILE'))

if __name__ == '__main__':
    log.info('this is a test msg')
