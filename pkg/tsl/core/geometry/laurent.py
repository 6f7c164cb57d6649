"""有限域上的 Laurent 多项式与形变族 f(x) + Λ^{±1}x^μ"""
import hashlib
import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from tsl.core.exceptions import LengthMismatchError, MixedPrimesError
from tsl.core.finite_field import Embedding, FieldElement, FieldSpec, FieldTower

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Coefficient = Union[int, Sequence[int], FieldElement]


def _as_exponent(v: Sequence[int], n: int) -> Exponent:
    exp = tuple(int(x) for x in v)
    if len(exp) != n:
        raise LengthMismatchError(f"指数向量 {list(exp)} 的长度不是 {n}", {"exp": list(exp), "n": n})
    return exp


def _as_element(field: FieldSpec, c: Coefficient) -> FieldElement:
    if isinstance(c, FieldElement):
        if c.field != field:
            raise MixedPrimesError(f"系数 {c} 不属于 {field}")
        return c
    return field.element(c)


class LaurentPolynomial:
    """Σ A(v)x^v，只保存非零系数，项按指数字典序排列"""

    def __init__(self, field: FieldSpec, n: int, terms: Union[Mapping, Iterable] = ()):
        self.field = field
        self.n = n
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: Dict[Exponent, FieldElement] = {}
        for v, c in items:
            exp = _as_exponent(v, n)
            coeff = _as_element(field, c)
            merged[exp] = merged[exp] + coeff if exp in merged else coeff
        self._terms: Tuple[Tuple[Exponent, FieldElement], ...] = tuple(
            sorted((v, c) for v, c in merged.items() if not c.is_zero())
        )

    @property
    def support(self) -> List[Exponent]:
        return [v for v, _ in self._terms]

    def items(self) -> List[Tuple[Exponent, FieldElement]]:
        return list(self._terms)

    def coefficient(self, v: Sequence[int]) -> FieldElement:
        v = tuple(v)
        for exp, c in self._terms:
            if exp == v:
                return c
        return self.field.zero()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.field == other.field and self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.field, self.n, self._terms))

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        if other.field != self.field or other.n != self.n:
            raise MixedPrimesError("只能相加同一个域、同一维数的多项式")
        return LaurentPolynomial(self.field, self.n, self._terms + other._terms)

    def with_term(self, v: Sequence[int], c: Coefficient) -> "LaurentPolynomial":
        return LaurentPolynomial(self.field, self.n, self._terms + ((tuple(v), c),))

    def restrict(self, face: Iterable[Sequence[int]]) -> "LaurentPolynomial":
        """f^(σ)：只保留指数落在 face 中的项"""
        keep = {tuple(v) for v in face}
        return LaurentPolynomial(self.field, self.n, [(v, c) for v, c in self._terms if v in keep])

    def toric_partial(self, i: int) -> "LaurentPolynomial":
        """x_i ∂/∂x_i：系数乘以 v_i（在 𝔽_p 中约化）"""
        return LaurentPolynomial(self.field, self.n, [(v, c * v[i]) for v, c in self._terms])

    def toric_partials(self) -> List["LaurentPolynomial"]:
        return [self.toric_partial(i) for i in range(self.n)]

    def map_coefficients(self, embedding: Embedding) -> "LaurentPolynomial":
        if embedding.source != self.field:
            raise MixedPrimesError(f"嵌入的源域 {embedding.source} 与系数域 {self.field} 不符")
        return LaurentPolynomial(embedding.target, self.n, [(v, embedding(c)) for v, c in self._terms])

    def evaluate(self, point: Sequence[FieldElement]) -> FieldElement:
        if len(point) != self.n:
            raise LengthMismatchError(f"点的维数 {len(point)} 不是 {self.n}")
        total = self.field.zero()
        for v, c in self._terms:
            term = c
            for x, e in zip(point, v):
                term = term * (x**e)
            total = total + term
        return total

    def exponent_matrix(self) -> np.ndarray:
        """形状 (项数, n) 的指数矩阵"""
        return np.array([v for v, _ in self._terms], dtype=np.int64).reshape(len(self._terms), self.n)

    def coefficient_logs(self) -> np.ndarray:
        return np.array([c.log() for _, c in self._terms], dtype=np.int64)

    def fingerprint(self) -> Dict[str, object]:
        return {
            "field": self.field.describe(),
            "n": self.n,
            "terms": [[list(v), list(c.coeffs)] for v, c in self._terms],
        }

    def __repr__(self) -> str:
        body = " + ".join(f"{list(c.coeffs)}*x^{list(v)}" for v, c in self._terms) or "0"
        return f"LaurentPolynomial({body} over {self.field})"


@dataclass(frozen=True)
class LowerOrderTerm:
    """c·t^γ·Λ^r·x^u"""

    coeff: FieldElement
    t_exp: Exponent
    lambda_exp: int
    x_exp: Exponent


class ToricFamily:
    """族 F(Λ, x) = f(x) + Λ^{±1}x^μ，可带 Λ ↦ Λ^M 与低阶形变 P(t, Λ, x)

    μ 在超平面 l_σ = 1 之下时取 Λx^μ，之上时取 Λ^{−1}x^μ。
    """

    def __init__(
        self,
        f: LaurentPolynomial,
        mu: Sequence[int],
        deformation_exponent: int = 1,
        lower_order: Sequence[LowerOrderTerm] = (),
    ):
        if f.is_zero():
            raise ValueError("f 不能为零多项式")
        if deformation_exponent < 1:
            raise ValueError(f"形变指数 M 必须为正整数: {deformation_exponent}")
        self.f = f
        self.n = f.n
        self.mu: Exponent = _as_exponent(mu, f.n)
        self.deformation_exponent = deformation_exponent
        self.lower_order: Tuple[LowerOrderTerm, ...] = tuple(lower_order)
        self.tower = FieldTower(f.field)
        t_dims = {len(term.t_exp) for term in self.lower_order}
        if len(t_dims) > 1:
            raise LengthMismatchError(f"低阶项的 t 指数长度不一致: {sorted(t_dims)}")
        self.t_dim = t_dims.pop() if t_dims else 0

    @property
    def base_field(self) -> FieldSpec:
        return self.f.field

    @property
    def p(self) -> int:
        return self.base_field.p

    @cached_property
    def geometry(self):
        from tsl.core.geometry.context import build_geometry

        return build_geometry(self.f, self.mu)

    @property
    def lambda_sign(self) -> int:
        from tsl.core.geometry.context import Case

        return 1 if self.geometry.case == Case.BELOW else -1

    def coefficients_in(self, field: FieldSpec) -> LaurentPolynomial:
        """f 在塔中某一层上的像"""
        k = self.tower.degree_of(field)
        if k == 1:
            return self.f
        return self.f.map_coefficients(self.tower.embedding(1, k))

    def fiber(self, lam: FieldElement) -> LaurentPolynomial:
        """F(λ, x) = f(x) + λ^{±1}x^μ，系数在 λ 所在的域中"""
        if lam.is_zero():
            raise ZeroDivisionError("λ = 0 不是 𝔾_m 的点；零纤维请用 zero_fiber")
        return self.coefficients_in(lam.field).with_term(self.mu, lam**self.lambda_sign)

    def zero_fiber(self) -> LaurentPolynomial:
        """F(0, x) = f(x)"""
        return self.f

    def deformed_fiber(self, t: Sequence[FieldElement], lam: FieldElement) -> LaurentPolynomial:
        """H(t, λ, x) = f(x) + λ^{±M}x^μ + Σ c t^γ λ^r x^u"""
        if len(t) != self.t_dim:
            raise LengthMismatchError(f"t 的维数 {len(t)} 不是 {self.t_dim}")
        field = lam.field
        if any(x.field != field for x in t):
            raise MixedPrimesError("t 与 λ 必须在同一个域中")
        k = self.tower.degree_of(field)
        embed = self.tower.embedding(1, k)
        poly = self.coefficients_in(field).with_term(
            self.mu, lam ** (self.lambda_sign * self.deformation_exponent)
        )
        for term in self.lower_order:
            c = embed(term.coeff) * (lam**term.lambda_exp)
            for x, e in zip(t, term.t_exp):
                c = c * (x**e)
            poly = poly.with_term(term.x_exp, c)
        return poly

    def describe(self) -> Dict[str, object]:
        return {
            "f": self.f.fingerprint(),
            "mu": list(self.mu),
            "deformation_exponent": self.deformation_exponent,
            "lower_order": [
                {
                    "coeff": list(term.coeff.coeffs),
                    "t_exp": list(term.t_exp),
                    "lambda_exp": term.lambda_exp,
                    "x_exp": list(term.x_exp),
                }
                for term in self.lower_order
            ],
        }

    @cached_property
    def family_hash(self) -> str:
        payload = json.dumps(self.describe(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def make_family(
    field: FieldSpec,
    terms: Iterable[Tuple[Coefficient, Sequence[int]]],
    mu: Sequence[int],
    deformation_exponent: int = 1,
    lower_order: Iterable[Tuple[Coefficient, Sequence[int], int, Sequence[int]]] = (),
) -> ToricFamily:
    """由 (系数, 指数) 列表构造族

    Args:
        field: 底域 𝔽_q
        terms: f 的项
        mu: 指数 μ
        deformation_exponent: M
        lower_order: (系数, γ, r, u) 列表
    """
    mu = tuple(mu)
    f = LaurentPolynomial(field, len(mu), [(exp, c) for c, exp in terms])
    lower: List[LowerOrderTerm] = [
        LowerOrderTerm(_as_element(field, c), tuple(g), int(r), _as_exponent(u, len(mu)))
        for c, g, r, u in lower_order
    ]
    return ToricFamily(f, mu, deformation_exponent, lower)
