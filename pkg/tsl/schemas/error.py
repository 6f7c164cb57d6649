from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class ErrorCode(int, Enum):
    """错误码枚举，同时作为命令行退出码"""
    SUCCESS = 0
    GENERAL_ERROR = 1
    HYPOTHESIS_FAILURE = 2
    THEOREM_VIOLATION = 3
    RESOURCE_CEILING = 4


class ErrorResponse(BaseModel):
    """错误响应模型"""
    code: int = Field(..., description="错误码")
    error: str = Field(..., description="错误类型")
    message: str = Field(..., description="错误消息")
    details: Optional[Dict[str, Any]] = Field(None, description="错误详情")
