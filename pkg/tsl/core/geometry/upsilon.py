"""低阶形变 H = G + P 的相对多面体 Υ ⊂ ℝ^s

G(Λ, x) = F(Λ^M, x) 的总权重为 W_G(r; u) = l_σ(u) + (r/M)|1 − l_σ(μ)|。
P 的每个单项 c·t^γ·Λ^r·x^u 给出点 γ/(1 − W_G(r; u))，Υ 是这些点与原点的凸包。
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from tsl.core.exceptions import NotLowerOrderError, OutsideConeError
from tsl.core.geometry.context import GeometryContext
from tsl.core.geometry.polytope import Polytope, Vector, as_vector, dot

logger = logging.getLogger(__name__)


def deformed_weight(ctx: GeometryContext, M: int, r: int, u: Sequence[int]) -> Fraction:
    """W_G(r; u)"""
    return ctx.lsigma_of(u) + Fraction(r, M) * ctx.s


def deformed_denominator(ctx: GeometryContext, M: int) -> int:
    """Λ ↦ Λ^M 之后扩展幺半群的 Λ 指数分母 lcm |φ(μ)|/gcd(|φ(μ)|, M)"""
    values = [abs(f.mu_value) // math.gcd(abs(f.mu_value), M) for f in ctx.gamma1]
    return math.lcm(*values) if values else 1


@dataclass
class UpsilonPolytope:
    """Υ 及其权重函数"""

    dim: int
    points: Tuple[Vector, ...]
    polytope: Polytope
    s: Fraction  # |1 − l_σ(μ)|
    M: int

    @property
    def span_dim(self) -> int:
        return self.polytope.dim

    def vertices(self) -> List[Vector]:
        return sorted(self.polytope.vertices())

    def normalized_volume(self) -> Fraction:
        """非满维时为 0"""
        if self.dim == 0:
            return Fraction(1)
        return self.polytope.normalized_volume(apex=(0,) * self.dim)

    def weight(self, gamma: Sequence[int]) -> Fraction:
        """w_Υ(γ)：使 γ ∈ b·Υ 的最小 b ≥ 0

        Raises:
            OutsideConeError: γ 不在 Υ 张成的锥中
            NotFullDimensionalError: Υ 不是满维的
        """
        gamma = as_vector(gamma)
        if all(g == 0 for g in gamma):
            return Fraction(0)
        facets = self.polytope.facets
        if any(dot(hf.normal, gamma) > 0 for hf in facets if hf.offset == 0):
            raise OutsideConeError(f"γ = {[str(g) for g in gamma]} 不在 Υ 的锥中")
        return max([Fraction(0)] + [dot(hf.normal, gamma) / hf.offset for hf in facets if hf.offset > 0])

    def total_weight(self, gamma: Sequence[int], r: int) -> Fraction:
        """W_Υ(γ; r) = w_Υ(γ) + (r/M)|1 − l_σ(μ)|"""
        return self.weight(gamma) + Fraction(r, self.M) * self.s


def upsilon_from_weights(
    terms: Sequence[Tuple[Sequence[int], Fraction]],
    dim: Optional[int] = None,
    s: Fraction = Fraction(1),
    M: int = 1,
) -> UpsilonPolytope:
    """由 (γ, W_G) 列表构造 Υ

    Raises:
        NotLowerOrderError: 某个 W_G ≥ 1
    """
    if dim is None:
        if not terms:
            raise ValueError("没有项时必须给出 t 的维数")
        dim = len(terms[0][0])
    zero = (Fraction(0),) * dim
    points: List[Vector] = [zero]
    for gamma, w in terms:
        w = Fraction(w)
        if w >= 1:
            raise NotLowerOrderError(
                f"单项 t^{list(gamma)} 的权重 W_G = {w} ≥ 1，不是低阶形变",
                {"gamma": list(gamma), "weight": str(w)},
            )
        points.append(tuple(Fraction(g) / (1 - w) for g in gamma))
    polytope = Polytope(points)
    upsilon = UpsilonPolytope(dim, polytope.points, polytope, Fraction(s), M)
    logger.info(f"Υ 构建完成: s={dim}, 顶点数={len(upsilon.vertices())}, 张成维数={upsilon.span_dim}")
    return upsilon


def relative_polytope_upsilon(family) -> UpsilonPolytope:
    """族（含低阶项）对应的 Υ

    Args:
        family: ToricFamily

    Raises:
        NotLowerOrderError: 某个低阶项的 W_G(r; u) ≥ 1
    """
    ctx = family.geometry
    M = family.deformation_exponent
    terms = [
        (term.t_exp, deformed_weight(ctx, M, term.lambda_exp, term.x_exp))
        for term in family.lower_order
    ]
    return upsilon_from_weights(terms, dim=family.t_dim, s=ctx.s, M=M)
