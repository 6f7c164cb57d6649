"""日志配置模块"""
import logging
import sys
from typing import Optional, TextIO

from tsl.core.config.settings import settings


def configure_logging(stream: Optional[TextIO] = None) -> None:
    """配置应用日志

    Args:
        stream: 日志输出流，默认标准输出；命令行把报告写到标准输出时改用标准错误
    """
    log_format = settings.LOG_FORMAT
    log_level = getattr(logging, settings.LOG_LEVEL)

    # 配置根日志记录器
    logging.basicConfig(
        level=log_level,
        format=log_format,
        handlers=[logging.StreamHandler(stream or sys.stdout)],
        force=True,
    )

    logging.getLogger("sympy").setLevel(logging.WARNING)

    logging.info(f"日志配置完成: 级别={settings.LOG_LEVEL}")
