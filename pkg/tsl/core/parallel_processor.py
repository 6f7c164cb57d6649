"""并行计算模块

提供两种并行策略：
1. 环面分块：把一个和的 (q^k−1)^n 个点切成连续区间，各块独立计数后相加
2. 任务映射：对互不相关的作业（不同闭点、不同 r）并行求值
"""
import concurrent.futures
import contextvars
import logging
import os
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

from tsl.core.config.settings import current_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class ParallelProcessor:
    """基于线程池的并行处理器；numpy 内核会释放 GIL"""

    def __init__(
        self,
        max_workers: Optional[int] = None,
        chunk_size: Optional[int] = None,
        enabled: bool = True,
    ):
        """初始化并行处理器

        Args:
            max_workers: 最大工作线程数，如果为None则使用CPU核心数
            chunk_size: 每块的点数
            enabled: 为False时所有任务在当前线程中顺序执行
        """
        self.max_workers = max_workers or min(32, (os.cpu_count() or 1) * 2)
        self.chunk_size = chunk_size or current_settings().PARALLEL_CHUNK_SIZE
        self.enabled = enabled

        logger.debug(
            f"初始化并行处理器，最大工作线程数: {self.max_workers}，块大小: {self.chunk_size}，启用: {enabled}"
        )

    def split_range(self, total: int, chunk_size: Optional[int] = None) -> List[Tuple[int, int]]:
        """把 [0, total) 切成不相交的连续区间

        Args:
            total: 区间长度
            chunk_size: 块大小，默认使用实例配置

        Returns:
            分块边界列表，每个元素为(开始位置, 结束位置)
        """
        size = chunk_size or self.chunk_size
        return [(start, min(start + size, total)) for start in range(0, total, size)]

    def map(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """对每个元素并行调用 func，结果按提交顺序返回"""
        items = list(items)
        if not self.enabled or len(items) <= 1:
            return [func(item) for item in items]

        results: List[Optional[R]] = [None] * len(items)
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            # 每个任务在提交时上下文的副本中运行，current_settings() 随之传递
            futures = {
                executor.submit(contextvars.copy_context().run, func, item): i for i, item in enumerate(items)
            }
            for future in concurrent.futures.as_completed(futures):
                index = futures[future]
                try:
                    results[index] = future.result()
                except Exception as e:
                    logger.error(f"并行任务 {index} 失败: {str(e)}")
                    raise
        return results  # type: ignore[return-value]

    def map_range(self, func: Callable[[int, int], R], total: int) -> List[R]:
        """对 [0, total) 的每个分块调用 func(start, stop)"""
        chunks = self.split_range(total)
        logger.debug(f"区间 {total} 被切分为 {len(chunks)} 块")
        return self.map(lambda bounds: func(*bounds), chunks)


# 创建单例实例
_parallel_processor: Optional[ParallelProcessor] = None


def get_parallel_processor(
    max_workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> ParallelProcessor:
    """获取并行处理器单例

    Args:
        max_workers: 最大工作线程数，如果为None则使用配置中的默认值
        chunk_size: 每块点数，如果为None则使用配置中的默认值

    Returns:
        并行处理器实例
    """
    global _parallel_processor

    config = current_settings()
    max_workers = max_workers or config.PARALLEL_MAX_WORKERS
    chunk_size = chunk_size or config.PARALLEL_CHUNK_SIZE
    enabled = config.PARALLEL_PROCESSING_ENABLED

    # 如果实例不存在或参数与当前实例不同，创建新实例
    if (
        _parallel_processor is None
        or _parallel_processor.max_workers != max_workers
        or _parallel_processor.chunk_size != chunk_size
        or _parallel_processor.enabled != enabled
    ):
        _parallel_processor = ParallelProcessor(
            max_workers=max_workers,
            chunk_size=chunk_size,
            enabled=enabled,
        )

    return _parallel_processor
