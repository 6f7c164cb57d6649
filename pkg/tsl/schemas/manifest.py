"""运行清单模式"""
from typing import Any, Dict

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """一次命令行运行的可复现信息；wall_time_seconds 与缓存计数不参与报告的逐字节一致性"""
    input_hash: str = Field(..., description="问题文件内容的 sha256")
    library_version: str
    command: str
    resolved: Dict[str, Any] = Field(default_factory=dict, description="解析后的全部参数与上限")
    wall_time_seconds: float = 0.0
    cache_hits: int = 0
    cache_misses: int = 0
