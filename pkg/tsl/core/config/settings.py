import logging
from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache
from typing import Iterator, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # 应用配置
    APP_NAME: str = "环面指数和 L 函数计算库"
    DEBUG: bool = False

    # 日志配置
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # 和缓存配置
    TSL_CACHE_DIR: str = Field(default=".tsl_cache")
    TSL_CACHE_ENABLED: bool = Field(default=True)

    # 枚举上限：域大小、每个和的环面点数、闭点所在域、格点包围盒
    ENUMERATION_CEILING: int = Field(default=10**7)
    # 非退化性穷举搜索的环面点数上限
    NONDEG_SEARCH_CEILING: int = Field(default=10**6)

    # 默认搜索深度与截断次数
    DEFAULT_KMAX: int = Field(default=2)
    DEFAULT_DMAX: int = Field(default=2)

    # 基底权重截断在 n 之上最多再提高的层数
    BASIS_CUTOFF_ESCALATION: int = Field(default=2)

    # 并行处理配置
    PARALLEL_PROCESSING_ENABLED: bool = Field(default=True)
    PARALLEL_MAX_WORKERS: Optional[int] = Field(default=4)
    PARALLEL_CHUNK_SIZE: int = Field(default=200000)  # 每块环面点数

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"未知的日志级别: {v}")
        return level

    @field_validator("ENUMERATION_CEILING", "NONDEG_SEARCH_CEILING", "PARALLEL_CHUNK_SIZE")
    @classmethod
    def positive_limit(cls, v: int) -> int:
        if v <= 0:
            raise ValueError(f"上限必须为正整数: {v}")
        return v

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """获取应用配置单例"""
    return Settings()


settings = get_settings()

_scoped: ContextVar[Optional[Settings]] = ContextVar("tsl_settings", default=None)


def current_settings() -> Settings:
    """当前上下文生效的配置；没有 use_settings 时为全局 settings"""
    return _scoped.get() or settings


@contextmanager
def use_settings(config: Settings) -> Iterator[Settings]:
    """在 with 块内（包括由它提交的并行任务）让 current_settings() 返回 config"""
    token = _scoped.set(config)
    try:
        yield config
    finally:
        _scoped.reset(token)
