"""族 f(x) + Λ^{±1}x^μ 的锥与权重几何

GeometryContext 汇总 l_σ、Cone(f) 的刻面形式 φ^(τ)、可见面 Γ₁、情形（μ 在超平面之下或之上）、
胞腔分解以及常数 D、d、e、N。权重按胞腔上的线性公式求值，公共边界上各公式必须一致。

两种情形统一写成 s = |1 − l_σ(μ)|：
    W(r, v) = l_σ(v) + r·s，  w(v) = l_σ(v) + s·m(v)。
"""
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from tsl.core.config.settings import current_settings
from tsl.core.exceptions import (
    ExcludedCaseError,
    GeometryInconsistency,
    MuNotInteriorError,
    MuOnFacetError,
    NotFullDimensionalError,
    NotQuasihomogeneousError,
    OutsideConeError,
    OutsideMonoidError,
    SizeCeilingExceeded,
)
from tsl.core.geometry.polytope import Polytope, dot, linear_rank

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


class Case(str, Enum):
    """μ 相对于超平面 l_σ = 1 的位置"""

    BELOW = "below"  # l_σ(μ) < 1，μ ∉ Cone(f)
    ABOVE = "above"  # l_σ(μ) > 1，μ 是 Cone(f) 的内点


@dataclass(frozen=True)
class ConeFacet:
    """Cone(f) 的刻面 φ^(τ) ≥ 0 及其对应的余维 2 无穷远面 τ"""

    tau_id: str
    form: Tuple[int, ...]
    tau: Tuple[Exponent, ...]
    mu_value: int

    def value(self, v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.form, v))


@dataclass(frozen=True)
class Chamber:
    """胞腔 Cone(f) 或 Cone(τ, μ)：inequalities 中每个整数形式在胞腔上非负"""

    kind: str  # "cone_f" | "tau_mu"
    tau_id: Optional[str]
    inequalities: Tuple[Tuple[int, ...], ...]
    weight_form: Tuple[Fraction, ...]
    m_form: Tuple[Fraction, ...]

    def contains(self, v: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(ineq, v)) >= 0 for ineq in self.inequalities)

    def weight(self, v: Sequence[int]) -> Fraction:
        return dot(self.weight_form, v)

    def m(self, v: Sequence[int]) -> Fraction:
        return dot(self.m_form, v)


def _support_of(f) -> List[Exponent]:
    support = f.support if hasattr(f, "support") else f
    return sorted(tuple(int(x) for x in v) for v in support)


def compute_lsigma(f) -> Tuple[Fraction, ...]:
    """满足 l_σ(v) = 1（v ∈ Supp f）的唯一有理线性形式

    Args:
        f: LaurentPolynomial 或指数向量列表

    Raises:
        NotFullDimensionalError: 支撑的线性秩小于 n
        NotQuasihomogeneousError: 支撑不在一个不过原点的仿射超平面上
    """
    support = _support_of(f)
    if not support:
        raise NotFullDimensionalError("支撑为空")
    n = len(support[0])
    rank = linear_rank(support)
    if rank < n:
        raise NotFullDimensionalError(
            f"Supp(f) ∪ {{0}} 的秩为 {rank}，小于 n = {n}", {"rank": rank, "n": n}
        )
    system = Matrix([list(v) for v in support])
    try:
        solution, params = system.gauss_jordan_solve(Matrix([1] * len(support)))
    except ValueError as e:
        raise NotQuasihomogeneousError(
            "f 的支撑不在同一个仿射超平面 l(x) = 1 上", {"support": [list(v) for v in support]}
        ) from e
    if params.shape[0]:
        raise NotFullDimensionalError("l_σ 不唯一")
    return tuple(Fraction(int(Rational(x).p), int(Rational(x).q)) for x in solution)


def cone_facets(f) -> List[ConeFacet]:
    """Cone(f) 的刻面，φ^(τ) 为本原整数形式且在锥上非负，按形式排序

    n = 1 时唯一的刻面对应空面 τ = ∅，形式为 ±x。mu_value 在这里记为 0，由 visible_faces 填写。
    """
    support = _support_of(f)
    n = len(support[0])
    zero = (0,) * n
    hull = Polytope([zero] + support)
    if not hull.is_full_dimensional:
        raise NotFullDimensionalError(f"Δ∞(f) 的维数 {hull.dim} 小于 {n}")
    forms = []
    for facet in hull.facets:
        if facet.offset != 0:
            continue
        form = tuple(-a for a in facet.normal)
        tau = tuple(sorted(v for v in support if sum(a * b for a, b in zip(form, v)) == 0))
        forms.append((form, tau))
    forms.sort()
    return [ConeFacet(f"tau{i}", form, tau, 0) for i, (form, tau) in enumerate(forms)]


def faces_at_infinity(hull: Polytope) -> List[Tuple[Exponent, ...]]:
    """凸包中不含原点的闭面，每个面以其整点指数的有序元组表示"""
    origin = hull.index_of((0,) * hull.ambient_dim)
    out = []
    for face in hull.faces():
        if origin in face:
            continue
        out.append(tuple(sorted(tuple(int(x) for x in hull.points[i]) for i in face)))
    return out


def visible_faces(
    facets: Sequence[ConeFacet], lsigma: Sequence[Fraction], mu: Sequence[int]
) -> Tuple[Case, List[ConeFacet], List[ConeFacet]]:
    """判定情形并给出 Γ₁

    Returns:
        (情形, 带 φ(μ) 的全部刻面, Γ₁)

    Raises:
        ExcludedCaseError: l_σ(μ) = 1，或 l_σ(μ) < 1 而 μ ∈ Cone(f)
        MuOnFacetError: l_σ(μ) > 1 而 μ 落在某个 φ = 0 上
        MuNotInteriorError: l_σ(μ) > 1 而 μ 在 Cone(f) 之外
    """
    lmu = dot(lsigma, mu)
    facets = [ConeFacet(f.tau_id, f.form, f.tau, f.value(mu)) for f in facets]
    if lmu == 1:
        raise ExcludedCaseError("l_σ(μ) = 1 的情形不处理", {"lsigma_mu": str(lmu)})
    if lmu < 1:
        if all(f.mu_value >= 0 for f in facets):
            raise ExcludedCaseError(
                "l_σ(μ) < 1 且 μ ∈ Cone(f)：这是低阶形变，不属于本族", {"mu": list(mu)}
            )
        return Case.BELOW, facets, [f for f in facets if f.mu_value < 0]

    on_facet = [f.tau_id for f in facets if f.mu_value == 0]
    if on_facet:
        raise MuOnFacetError(f"μ 落在刻面 {on_facet} 上", {"tau": on_facet})
    outside = [f.tau_id for f in facets if f.mu_value < 0]
    if outside:
        raise MuNotInteriorError(f"l_σ(μ) > 1 但 μ 不在 Cone(f) 内部: {outside}", {"tau": outside})
    return Case.ABOVE, facets, list(facets)


class GeometryContext:
    """一个族的全部多面体数据；构造后不再修改"""

    def __init__(self, support: Sequence[Sequence[int]], mu: Sequence[int]):
        self.support: Tuple[Exponent, ...] = tuple(_support_of(support))
        self.n = len(self.support[0])
        self.mu: Exponent = tuple(int(x) for x in mu)
        if len(self.mu) != self.n:
            raise ValueError(f"μ 的长度 {len(self.mu)} 与 n = {self.n} 不符")
        zero = (0,) * self.n

        self.lsigma = compute_lsigma(self.support)
        self.lsigma_mu = dot(self.lsigma, self.mu)
        self.case, self.facets, self.gamma1 = visible_faces(
            cone_facets(self.support), self.lsigma, self.mu
        )
        self.s = abs(1 - self.lsigma_mu)
        self.m_sign = 1 if self.case == Case.BELOW else -1

        self.base_hull = Polytope([zero] + list(self.support))
        self.hull = Polytope([zero] + list(self.support) + [self.mu])
        self.chambers = self._build_chambers()

        self.D = math.lcm(*(abs(f.mu_value) for f in self.gamma1)) if self.gamma1 else 1
        volume = self.hull.normalized_volume(apex=zero)
        if volume.denominator != 1 or volume <= 0:
            raise GeometryInconsistency(f"归一化体积不是正整数: {volume}")
        self.N = int(volume)
        self.d = self._weight_denominator()
        self.e = math.lcm(self.D, self.d, (self.s / self.D).denominator)

        logger.info(
            f"几何构建完成: n={self.n}, 情形={self.case.value}, Γ₁={[f.tau_id for f in self.gamma1]}, "
            f"D={self.D}, d={self.d}, e={self.e}, N={self.N}"
        )

    # 构造

    def _build_chambers(self) -> Tuple[Chamber, ...]:
        zero = (0,) * self.n
        chambers: List[Chamber] = []
        if self.case == Case.BELOW:
            chambers.append(
                Chamber(
                    kind="cone_f",
                    tau_id=None,
                    inequalities=tuple(f.form for f in self.facets),
                    weight_form=self.lsigma,
                    m_form=(Fraction(0),) * self.n,
                )
            )
        factor = 1 - self.lsigma_mu
        for facet in self.gamma1:
            pyramid = Polytope([zero] + list(facet.tau) + [self.mu])
            if not pyramid.is_full_dimensional:
                raise GeometryInconsistency(f"Cone({facet.tau_id}, μ) 不是满维的")
            inequalities = tuple(
                tuple(-a for a in hf.normal) for hf in pyramid.facets if hf.offset == 0
            )
            ratio = [Fraction(a, facet.mu_value) for a in facet.form]
            chambers.append(
                Chamber(
                    kind="tau_mu",
                    tau_id=facet.tau_id,
                    inequalities=inequalities,
                    weight_form=tuple(l + r * factor for l, r in zip(self.lsigma, ratio)),
                    m_form=tuple(self.m_sign * r for r in ratio),
                )
            )
        return tuple(chambers)

    def _weight_denominator(self) -> int:
        """max(1, n) 以内的权重已经覆盖每个胞腔的基本平行体"""
        values = [self.weight(v) for v in self.enumerate_weight_le(max(1, self.n))]
        return math.lcm(*(w.denominator for w in values))

    # 求值

    def lsigma_of(self, v: Sequence[int]) -> Fraction:
        return dot(self.lsigma, v)

    def in_cone(self, v: Sequence[int]) -> bool:
        """v ∈ Cone(f, μ)"""
        return all(
            dot(hf.normal, v) <= 0 for hf in self.hull.facets if hf.offset == 0
        )

    def chambers_containing(self, v: Sequence[int]) -> List[Chamber]:
        return [c for c in self.chambers if c.contains(v)]

    def _chamber_value(self, v: Sequence[int], attr: str) -> Fraction:
        v = tuple(v)
        if not self.in_cone(v):
            raise OutsideConeError(f"{list(v)} 不在 Cone(f, μ) 中", {"v": list(v)})
        containing = self.chambers_containing(v)
        if not containing:
            raise GeometryInconsistency(f"{list(v)} 不属于任何胞腔")
        values = {getattr(c, attr)(v) for c in containing}
        if len(values) != 1:
            raise GeometryInconsistency(
                f"胞腔公式在 {list(v)} 处不一致: {sorted(values)}",
                {"v": list(v), "chambers": [c.tau_id for c in containing]},
            )
        return values.pop()

    def weight(self, v: Sequence[int]) -> Fraction:
        """w(v)：使 v ∈ b·Δ∞(f, μ) 的最小 b ≥ 0"""
        return self._chamber_value(v, "weight")

    def m_of(self, v: Sequence[int]) -> Fraction:
        """使 Λ^{m(v)}x^v 落入扩展幺半群的最小 Λ 指数"""
        return self._chamber_value(v, "m")

    def oracle_weight(self, v: Sequence[int]) -> Fraction:
        """用 Δ∞(f, μ) 的无穷远刻面直接取最大值"""
        if not self.in_cone(v):
            raise OutsideConeError(f"{list(v)} 不在 Cone(f, μ) 中")
        values = [dot(hf.normal, v) / hf.offset for hf in self.hull.facets if hf.offset > 0]
        return max([Fraction(0)] + values)

    def in_extended_monoid(self, r: Fraction, v: Sequence[int]) -> bool:
        r = Fraction(r)
        if (r * self.D).denominator != 1:
            return False
        return self.in_cone(v) and r >= self.m_of(v)

    def total_weight(self, r: Fraction, v: Sequence[int]) -> Fraction:
        """W(r, v) = l_σ(v) + r·|1 − l_σ(μ)|

        Raises:
            OutsideMonoidError: (r, v) 不在扩展幺半群中
        """
        r = Fraction(r)
        if not self.in_extended_monoid(r, v):
            raise OutsideMonoidError(f"({r}, {list(v)}) 不在扩展幺半群中")
        value = self.lsigma_of(v) + r * self.s
        if value != self.weight(v) + (r - self.m_of(v)) * self.s:
            raise GeometryInconsistency(f"W 与 w + (r − m)s 在 ({r}, {list(v)}) 处不一致")
        return value

    def cofacial(self, v1: Sequence[int], v2: Sequence[int]) -> bool:
        """两点是否落在同一个闭胞腔中"""
        return any(c.contains(v1) and c.contains(v2) for c in self.chambers)

    # 枚举

    def bounding_box(self, bound: Fraction) -> List[Tuple[int, int]]:
        bound = Fraction(bound)
        box = []
        for j in range(self.n):
            coords = [p[j] for p in self.hull.points]
            lo = math.floor(bound * min(coords))
            hi = math.ceil(bound * max(coords))
            box.append((lo, hi))
        return box

    def enumerate_weight_le(self, bound: Fraction) -> List[Exponent]:
        """w(v) ≤ bound 的全部格点，按 (w(v), v) 排序

        Raises:
            SizeCeilingExceeded: 包围盒超过枚举上限
        """
        bound = Fraction(bound)
        if bound < 0:
            raise ValueError(f"权重上界必须非负: {bound}")
        box = self.bounding_box(bound)
        size = math.prod(hi - lo + 1 for lo, hi in box)
        limit = current_settings().ENUMERATION_CEILING
        if size > limit:
            raise SizeCeilingExceeded(
                f"包围盒 {size} 个格点超过上限 {limit}",
                {"bound": str(bound), "size": size},
            )
        found = []
        for v in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
            if self.in_cone(v):
                w = self.weight(v)
                if w <= bound:
                    found.append((w, v))
        found.sort()
        return [v for _, v in found]

    # 面

    def fiber_faces_at_infinity(self) -> List[Tuple[Exponent, ...]]:
        """Δ∞(f, μ) 的不含原点的闭面"""
        return faces_at_infinity(self.hull)

    def vertices(self) -> List[Exponent]:
        return sorted(tuple(int(x) for x in v) for v in self.hull.vertices())


def build_geometry(f, mu: Sequence[int]) -> GeometryContext:
    """由 f（或其支撑）与 μ 构造 GeometryContext"""
    return GeometryContext(_support_of(f), mu)


def structure_constants(ctx: GeometryContext) -> Tuple[int, int, int, int]:
    """(D, d, e, N)"""
    return ctx.D, ctx.d, ctx.e, ctx.N


def weight(ctx: GeometryContext, v: Sequence[int]) -> Fraction:
    return ctx.weight(v)


def m_of(ctx: GeometryContext, v: Sequence[int]) -> Fraction:
    return ctx.m_of(v)


def total_weight(ctx: GeometryContext, r: Fraction, v: Sequence[int]) -> Fraction:
    return ctx.total_weight(r, v)


def in_extended_monoid(ctx: GeometryContext, r: Fraction, v: Sequence[int]) -> bool:
    return ctx.in_extended_monoid(r, v)


def enumerate_weight_le(ctx: GeometryContext, bound: Fraction) -> List[Exponent]:
    return ctx.enumerate_weight_le(bound)
