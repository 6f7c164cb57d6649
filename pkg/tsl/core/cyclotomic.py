"""ℚ(ζ_p) 中的精确算术

数 Σ c_i ζ^i 以基底 1, ζ, …, ζ^{p−2} 下的有理系数向量存储，利用 1 + ζ + … + ζ^{p−1} = 0 约化。
p 进赋值按完全分歧的一致化元 1−ζ 计算，并归一化为 ord_p(p) = 1。
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import multiplicity

from tsl.core.exceptions import (
    BadConstantTermError,
    LengthMismatchError,
    MixedPrimesError,
    ZeroPolynomialError,
)
from tsl.utils.rational import format_rational, parse_rational

Scalar = Union[int, Fraction]


class CyclotomicNumber:
    """ℚ(ζ_p) 的元素"""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[Scalar]):
        if len(coeffs) == p:
            coeffs = _reduce_full(coeffs)
        if len(coeffs) != p - 1:
            raise ValueError(f"系数向量长度应为 {p - 1}: {len(coeffs)}")
        self.p = p
        self.coeffs: Tuple[Fraction, ...] = tuple(Fraction(c) for c in coeffs)

    # 构造

    @classmethod
    def from_int(cls, p: int, value: Scalar) -> "CyclotomicNumber":
        return cls(p, [value] + [0] * (p - 2))

    @classmethod
    def zero(cls, p: int) -> "CyclotomicNumber":
        return cls.from_int(p, 0)

    @classmethod
    def one(cls, p: int) -> "CyclotomicNumber":
        return cls.from_int(p, 1)

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CyclotomicNumber":
        full = [0] * p
        full[k % p] = 1
        return cls(p, full)

    @classmethod
    def from_power_counts(cls, p: int, counts: Sequence[int]) -> "CyclotomicNumber":
        """Σ_j counts[j]·ζ^j，counts 长度为 p"""
        if len(counts) != p:
            raise ValueError(f"计数向量长度应为 {p}: {len(counts)}")
        return cls(p, [int(c) for c in counts])

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "CyclotomicNumber":
        p = int(data["p"])  # type: ignore[arg-type]
        return cls(p, [parse_rational(c) for c in data["coeffs"]])  # type: ignore[union-attr]

    # 运算

    def _coerce(self, other: Union["CyclotomicNumber", Scalar]) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.p != self.p:
                raise MixedPrimesError(f"不同素数的分圆数不能运算: p={self.p} 与 p={other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_int(self.p, other)
        return NotImplemented

    def __add__(self, other: Union["CyclotomicNumber", Scalar]) -> "CyclotomicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.p, [-a for a in self.coeffs])

    def __sub__(self, other: Union["CyclotomicNumber", Scalar]) -> "CyclotomicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "CyclotomicNumber":
        return self._coerce(other) - self

    def __mul__(self, other: Union["CyclotomicNumber", Scalar]) -> "CyclotomicNumber":
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.p, [a * other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        full = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        full[(i + j) % p] += a * b
        return CyclotomicNumber(p, full)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "CyclotomicNumber":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return CyclotomicNumber(self.p, [a / other for a in self.coeffs])

    def __pow__(self, e: int) -> "CyclotomicNumber":
        if e < 0:
            raise ValueError("分圆数只支持非负整数次幂")
        result = CyclotomicNumber.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, c: int) -> "CyclotomicNumber":
        """Galois 作用 ζ ↦ ζ^c（p ∤ c）"""
        if c % self.p == 0:
            raise ValueError(f"Galois 作用要求 p ∤ c: c={c}")
        full = [Fraction(0)] * self.p
        for i, a in enumerate(self.coeffs):
            full[(i * c) % self.p] += a
        return CyclotomicNumber(self.p, full)

    # 判定

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_int(self.p, other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        """是否属于 ℤ[ζ_p]"""
        return all(c.denominator == 1 for c in self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"不是有理数: {self}")
        return self.coeffs[0]

    def to_dict(self) -> Dict[str, object]:
        return {"p": self.p, "coeffs": [format_rational(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return " + ".join(terms) or "0"


def _reduce_full(full: Sequence[Scalar]) -> List[Fraction]:
    """长度 p 的向量按 ζ^{p−1} = −(1 + … + ζ^{p−2}) 约化"""
    top = Fraction(full[-1])
    return [Fraction(c) - top for c in full[:-1]]


def cyc_arith(a: CyclotomicNumber, b: Optional[CyclotomicNumber], op: str) -> CyclotomicNumber:
    """add | mul | neg 的统一入口"""
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"运算 {op} 需要两个操作数")
    if a.p != b.p:
        raise MixedPrimesError(f"不同素数的分圆数不能运算: p={a.p} 与 p={b.p}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"未知运算: {op}")


@total_ordering
@dataclass(frozen=True)
class PadicValuation:
    """p 进赋值，value 为 None 表示 +∞"""

    value: Optional[Fraction]

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: "PadicValuation") -> "PadicValuation":
        if self.value is None or other.value is None:
            return PadicValuation(None)
        return PadicValuation(self.value + other.value)

    def __lt__(self, other: "PadicValuation") -> bool:
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __truediv__(self, unit: Scalar) -> "PadicValuation":
        if self.value is None:
            return self
        return PadicValuation(self.value / Fraction(unit))

    def __str__(self) -> str:
        return "inf" if self.value is None else format_rational(self.value)


@lru_cache(maxsize=None)
def _inverse_uniformizer(p: int) -> CyclotomicNumber:
    """(1−ζ)^{−1} = (1/p)·∏_{j=2}^{p−1}(1 − ζ^j)"""
    inv = CyclotomicNumber.one(p)
    for j in range(2, p):
        inv = inv * (CyclotomicNumber.one(p) - CyclotomicNumber.zeta(p, j))
    return inv / p


def ord_p(x: Union[CyclotomicNumber, Scalar], p: Optional[int] = None) -> PadicValuation:
    """ord_p(x)，归一化 ord_p(p) = 1、ord_p(1−ζ_p) = 1/(p−1)

    先提出有理容量 a，使 x = a·y 且 y ∈ ℤ[ζ] 本原；再用剩余映射 ζ ↦ 1 判断 (1−ζ) | y，
    逐次精确相除得到 y 的 (1−ζ) 进赋值 k。
    """
    if not isinstance(x, CyclotomicNumber):
        if p is None:
            raise ValueError("有理数输入需要给出 p")
        x = CyclotomicNumber.from_int(p, x)
    p = x.p
    if x.is_zero():
        return PadicValuation(None)

    den = math.lcm(*(c.denominator for c in x.coeffs))
    ints = [int(c * den) for c in x.coeffs]
    content = math.gcd(*ints)
    y = CyclotomicNumber(p, [c // content for c in ints])
    value = Fraction(multiplicity(p, content) - multiplicity(p, den))

    inv = _inverse_uniformizer(p)
    k = 0
    while sum(int(c) for c in y.coeffs) % p == 0:
        y = y * inv
        if not y.is_integral():
            raise ArithmeticError(f"除以 1−ζ 后不再是整数: {y}")
        k += 1
        if k >= p - 1:
            raise ArithmeticError("本原元素被 p 整除")
    return PadicValuation(value + Fraction(k, p - 1))


# 截断幂级数；系数列表下标即 T 的次数

Series = List[CyclotomicNumber]


def _as_series(p: int, coeffs: Iterable[Union[CyclotomicNumber, Scalar]]) -> Series:
    return [c if isinstance(c, CyclotomicNumber) else CyclotomicNumber.from_int(p, c) for c in coeffs]


def _coeff(series: Series, i: int, p: int) -> CyclotomicNumber:
    return series[i] if i < len(series) else CyclotomicNumber.zero(p)


def series_exp(coeffs: Series, order: int) -> Series:
    """exp(f) 截断到 T^order；要求 f(0) = 0"""
    p = coeffs[0].p
    if not coeffs[0].is_zero():
        raise BadConstantTermError(f"exp 的输入常数项必须为 0: {coeffs[0]}")
    g = [CyclotomicNumber.one(p)]
    weighted = [_coeff(coeffs, k, p) * k for k in range(order + 1)]
    for n in range(1, order + 1):
        acc = CyclotomicNumber.zero(p)
        for k in range(1, n + 1):
            if not weighted[k].is_zero():
                acc = acc + weighted[k] * g[n - k]
        g.append(acc / n)
    return g


def series_log(coeffs: Series, order: int) -> Series:
    """log(g) 截断到 T^order；要求 g(0) = 1"""
    p = coeffs[0].p
    if coeffs[0] != CyclotomicNumber.one(p):
        raise BadConstantTermError(f"log 的输入常数项必须为 1: {coeffs[0]}")
    f = [CyclotomicNumber.zero(p)]
    for n in range(1, order + 1):
        acc = _coeff(coeffs, n, p) * n
        for k in range(1, n):
            if not f[k].is_zero():
                acc = acc - f[k] * k * _coeff(coeffs, n - k, p)
        f.append(acc / n)
    return f


def series_exp_log(
    coeffs: Sequence[Union[CyclotomicNumber, Scalar]],
    direction: str,
    order: int,
    p: Optional[int] = None,
) -> Series:
    """按 direction 计算 exp 或 log 的截断级数

    Raises:
        BadConstantTermError: exp 输入常数项非 0，或 log 输入常数项非 1
    """
    if p is None:
        p = next(c.p for c in coeffs if isinstance(c, CyclotomicNumber))
    series = _as_series(p, coeffs) or [CyclotomicNumber.zero(p)]
    if direction == "exp":
        return series_exp(series, order)
    if direction == "log":
        return series_log(series, order)
    raise ValueError(f"未知方向: {direction}")


def series_mul(a: Series, b: Series, order: int) -> Series:
    p = a[0].p
    out = [CyclotomicNumber.zero(p) for _ in range(order + 1)]
    for i, x in enumerate(a[: order + 1]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def series_inverse(a: Series, order: int) -> Series:
    """1/a 截断到 T^order；要求 a(0) = 1"""
    p = a[0].p
    if a[0] != CyclotomicNumber.one(p):
        raise BadConstantTermError(f"求逆要求常数项为 1: {a[0]}")
    inv = [CyclotomicNumber.one(p)]
    for n in range(1, order + 1):
        acc = CyclotomicNumber.zero(p)
        for k in range(1, n + 1):
            c = _coeff(a, k, p)
            if not c.is_zero():
                acc = acc - c * inv[n - k]
        inv.append(acc)
    return inv


def series_substitute_power(a: Series, k: int, order: int) -> Series:
    """a(T^k) 截断到 T^order"""
    p = a[0].p
    out = [CyclotomicNumber.zero(p) for _ in range(order + 1)]
    for i, c in enumerate(a):
        if i * k > order:
            break
        out[i * k] = c
    return out


@dataclass(frozen=True)
class NewtonPolygon:
    """下凸包折线；顶点横坐标严格递增"""

    vertices: Tuple[Tuple[int, Fraction], ...]

    @classmethod
    def from_slopes(cls, slopes: Iterable[Scalar]) -> "NewtonPolygon":
        """从原点出发、按斜率从小到大拼接"""
        ordered = sorted(Fraction(s) for s in slopes)
        vertices: List[Tuple[int, Fraction]] = [(0, Fraction(0))]
        for i, s in enumerate(ordered):
            x, y = vertices[-1]
            if i > 0 and ordered[i - 1] == s:
                vertices[-1] = (x + 1, y + s)
            else:
                vertices.append((x + 1, y + s))
        return cls(tuple(vertices))

    @property
    def start(self) -> int:
        return self.vertices[0][0]

    @property
    def length(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0]

    @property
    def slopes(self) -> List[Fraction]:
        out: List[Fraction] = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            out.extend([(y1 - y0) / (x1 - x0)] * (x1 - x0))
        return out

    @property
    def total_rise(self) -> Fraction:
        return self.vertices[-1][1] - self.vertices[0][1]

    def value_at(self, x: Scalar) -> Fraction:
        x = Fraction(x)
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        if len(self.vertices) == 1 and x == self.vertices[0][0]:
            return self.vertices[0][1]
        raise ValueError(f"横坐标 {x} 不在多边形范围内")

    def to_dict(self) -> Dict[str, object]:
        return {
            "vertices": [[x, format_rational(y)] for x, y in self.vertices],
            "slopes": [format_rational(s) for s in self.slopes],
        }


def _lower_hull(points: List[Tuple[int, Fraction]]) -> List[Tuple[int, Fraction]]:
    """Andrew 单调链的下半部分；共线的中间点被去掉"""
    hull: List[Tuple[int, Fraction]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (pt[1] - y1) * (x1 - x0) <= (y1 - y0) * (pt[0] - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(
    coeffs: Sequence[Union[CyclotomicNumber, Scalar]],
    ord_unit: Scalar = 1,
    p: Optional[int] = None,
) -> NewtonPolygon:
    """点集 {(i, ord_p(a_i)/ord_unit)} 的下凸包

    Raises:
        ZeroPolynomialError: 所有系数为零
    """
    unit = Fraction(ord_unit)
    points = []
    for i, a in enumerate(coeffs):
        v = ord_p(a, p)
        if not v.is_infinite:
            points.append((i, v.value / unit))  # type: ignore[operator]
    if not points:
        raise ZeroPolynomialError("零多项式没有牛顿多边形")
    return NewtonPolygon(tuple(_lower_hull(points)))


def polygon_dominates(upper: NewtonPolygon, lower: NewtonPolygon) -> bool:
    """upper 是否处处不低于 lower（在两者所有顶点处比较）

    Raises:
        LengthMismatchError: 两个多边形的横坐标范围不同
    """
    if upper.start != lower.start or upper.length != lower.length:
        raise LengthMismatchError(
            f"多边形长度不同: {upper.length} 与 {lower.length}",
            {"upper": upper.to_dict(), "lower": lower.to_dict()},
        )
    xs = sorted({x for x, _ in upper.vertices} | {x for x, _ in lower.vertices})
    return all(upper.value_at(x) >= lower.value_at(x) for x in xs)
