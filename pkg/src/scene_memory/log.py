"""
日志配置

库内模块只调用 logging.getLogger(__name__)，处理器由命令行入口安装。
"""

import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "scene_memory"


def setup_logging(verbose: bool = False) -> logging.Logger:
    """
    为 scene_memory 安装 RichHandler（输出到 stderr）

    Args:
        verbose: 是否输出 DEBUG 级别日志

    Returns:
        配置好的包级 logger
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)

    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=True,
        )
        handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
        logger.addHandler(handler)
        logger.propagate = False

    return logger
