"""问题文件模式

问题文件是 JSON：整数系数按 mod p 解释，m > 1 时系数也可以写成系数向量（低次在前）。
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from tsl.core.exceptions import ParseError

CoefficientValue = Union[int, List[int]]


class TermModel(BaseModel):
    """f 的一项 coeff·x^exp"""
    coeff: CoefficientValue = Field(..., description="系数：整数或域元素的系数向量")
    exp: List[int] = Field(..., description="整数指数向量")


class LowerOrderModel(BaseModel):
    """低阶形变项 coeff·t^{t_exp}·Λ^{lambda_exp}·x^{x_exp}"""
    coeff: CoefficientValue
    t_exp: List[int] = Field(..., description="t 的指数，分量非负")
    lambda_exp: int = Field(..., description="Λ 的指数 r")
    x_exp: List[int] = Field(..., description="x 的指数 u")

    @field_validator("t_exp")
    @classmethod
    def nonnegative_t(cls, v: List[int]) -> List[int]:
        if any(e < 0 for e in v):
            raise ValueError(f"t 的指数必须非负: {v}")
        return v


class LimitsModel(BaseModel):
    """资源上限；缺省时使用配置中的值"""
    ceiling: Optional[int] = Field(None, description="枚举上限 ENUMERATION_CEILING")
    search_ceiling: Optional[int] = Field(None, description="非退化性搜索上限 NONDEG_SEARCH_CEILING")
    k_max: Optional[int] = Field(None, description="非退化性搜索深度")
    d_max: Optional[int] = Field(None, description="整体 L 函数的截断次数")


class ProblemFile(BaseModel):
    """一个族 F(Λ, x) = f(x) + Λ^{±1}x^μ 的完整描述"""
    p: int = Field(..., description="特征")
    m: int = Field(1, description="底域 𝔽_q 的扩张次数，q = p^m")
    modulus: Optional[List[int]] = Field(None, description="𝔽_q 的模多项式（低次在前）")
    f: List[TermModel] = Field(..., description="f 的项")
    mu: List[int] = Field(..., description="指数 μ")
    deformation_exponent: int = Field(1, description="Λ ↦ Λ^M 的 M")
    lower_order: List[LowerOrderModel] = Field(default_factory=list)
    op: Optional[str] = Field(None, description="线性代数运算，如 sym2、ext2、sym1*ext1")
    limits: LimitsModel = Field(default_factory=LimitsModel)

    @field_validator("f")
    @classmethod
    def nonempty_f(cls, v: List[TermModel]) -> List[TermModel]:
        if not v:
            raise ValueError("f 至少需要一项")
        return v

    @field_validator("deformation_exponent")
    @classmethod
    def positive_m(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"deformation_exponent 必须为正整数: {v}")
        return v

    @model_validator(mode="after")
    def check_lengths(self) -> "ProblemFile":
        n = len(self.mu)
        if n == 0:
            raise ValueError("μ 不能为空")
        for i, term in enumerate(self.f):
            if len(term.exp) != n:
                raise ValueError(f"f 的第 {i} 项指数 {term.exp} 长度不是 {n}")
        t_dims = {len(term.t_exp) for term in self.lower_order}
        if len(t_dims) > 1:
            raise ValueError(f"低阶项的 t 指数长度不一致: {sorted(t_dims)}")
        for i, term in enumerate(self.lower_order):
            if len(term.x_exp) != n:
                raise ValueError(f"第 {i} 个低阶项的 x 指数 {term.x_exp} 长度不是 {n}")
        return self

    def to_family(self):
        """构造底域与 ToricFamily

        Raises:
            NotPrimeError: p 不是素数
            ReducibleModulusError: 模多项式不合法
        """
        from tsl.core.finite_field import make_field
        from tsl.core.geometry.laurent import make_family

        field = make_field(self.p, self.m, self.modulus, self.limits.ceiling)
        return make_family(
            field,
            [(term.coeff, term.exp) for term in self.f],
            self.mu,
            self.deformation_exponent,
            [(t.coeff, t.t_exp, t.lambda_exp, t.x_exp) for t in self.lower_order],
        )


def _describe_errors(e: ValidationError) -> List[Dict[str, Any]]:
    return [
        {"loc": ".".join(str(x) for x in err["loc"]), "msg": err["msg"]}
        for err in e.errors(include_url=False)
    ]


def parse_problem(data: Union[str, Dict[str, Any]]) -> ProblemFile:
    """由 JSON 文本或字典解析问题文件

    Raises:
        ParseError: JSON 语法错误或字段不合法，details 中给出出错位置
    """
    try:
        if isinstance(data, str):
            return ProblemFile.model_validate_json(data)
        return ProblemFile.model_validate(data)
    except ValidationError as e:
        errors = _describe_errors(e)
        raise ParseError(f"问题文件不合法: {errors[0]['loc']}: {errors[0]['msg']}", {"errors": errors}) from e


def load_problem(path: Union[str, Path]) -> ProblemFile:
    """读取问题文件

    Raises:
        ParseError: 文件不存在或内容不合法
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"无法读取问题文件 {path}: {e}", {"path": str(path)}) from e
    try:
        json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"问题文件 {path} 不是合法的 JSON: 第 {e.lineno} 行第 {e.colno} 列",
            {"path": str(path), "line": e.lineno, "column": e.colno},
        ) from e
    return parse_problem(text)
