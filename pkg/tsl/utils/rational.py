"""有理数的文本表示

报告中的有理数一律写成 "num/den"，避免浮点误差。
"""
from fractions import Fraction
from typing import Iterable, List, Union

RationalLike = Union[int, Fraction, str]


def format_rational(x: RationalLike) -> str:
    """把有理数写成 "num/den"（整数也带分母 1）"""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: RationalLike) -> Fraction:
    """解析 "num/den" 或整数文本"""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"无法解析有理数: {text!r}") from e


def format_vector(values: Iterable[RationalLike]) -> List[str]:
    return [format_rational(v) for v in values]
