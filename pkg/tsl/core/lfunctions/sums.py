"""精确特征和 S_r = Σ_x ζ_p^{Tr F(x)}

迹是 𝔽_p-线性的，所以 Tr F(x) = Σ_v Tr(A(v)x^v)。每个单项在对数坐标下是
log A(v) + ⟨v, log x⟩，查表得到迹后按 mod p 的值计数，和就是 Σ_j count_j·ζ^j。
"""
import logging
from typing import Optional, Sequence

import numpy as np

from tsl.core.cyclotomic import CyclotomicNumber
from tsl.core.finite_field import ClosedPoint, FieldElement, FieldSpec, check_torus, torus_log_block
from tsl.core.geometry.laurent import LaurentPolynomial, ToricFamily
from tsl.core.parallel_processor import get_parallel_processor
from tsl.storage.sum_cache import SumCache, get_sum_cache, make_header

logger = logging.getLogger(__name__)


def _trace_counts(
    field: FieldSpec, n: int, exps: np.ndarray, coef_logs: np.ndarray, start: int, stop: int
) -> np.ndarray:
    tables = field.tables
    logs = torus_log_block(field, n, start, stop)
    term_logs = (logs @ exps.T + coef_logs) % (field.order - 1)
    traces = tables.trace_by_log[term_logs].sum(axis=1) % field.p
    return np.bincount(traces, minlength=field.p)


def character_sum(poly: LaurentPolynomial, ceiling: Optional[int] = None) -> CyclotomicNumber:
    """Σ_{x ∈ (K*)^n} ζ_p^{Tr_{K/𝔽_p}(poly(x))}，K 为 poly 的系数域

    Raises:
        SizeCeilingExceeded: 环面点数超过上限
    """
    field = poly.field
    size = check_torus(field, poly.n, ceiling)
    exps = poly.exponent_matrix()
    coef_logs = poly.coefficient_logs()
    processor = get_parallel_processor()
    chunks = processor.map_range(
        lambda start, stop: _trace_counts(field, poly.n, exps, coef_logs, start, stop), size
    )
    counts = np.sum(chunks, axis=0) if chunks else np.zeros(field.p, dtype=np.int64)
    return CyclotomicNumber.from_power_counts(field.p, [int(c) for c in counts])


def _cached(cache: Optional[SumCache], header, compute) -> CyclotomicNumber:
    cache = cache or get_sum_cache()
    value = cache.get(header)
    if value is not None:
        logger.debug(f"缓存命中: r={header['r']}")
        return value
    value = compute()
    cache.put(header, value)
    return value


def exp_sum(
    family: ToricFamily,
    point: ClosedPoint,
    r: int,
    cache: Optional[SumCache] = None,
    ceiling: Optional[int] = None,
) -> CyclotomicNumber:
    """纤维 λ 上的 S_r，在 𝔽_{q^{r·deg λ}} 的环面上求和

    Raises:
        SizeCeilingExceeded: 环面点数超过上限
    """
    if r < 1:
        raise ValueError(f"r 必须为正整数: {r}")
    d = point.degree
    embedding = family.tower.embedding(d, d * r)
    lam = embedding(point.representative)
    header = make_header(family.family_hash, embedding.target.describe(), point.describe(), r)
    return _cached(cache, header, lambda: character_sum(family.fiber(lam), ceiling))


def level_sum(
    family: ToricFamily,
    lam: FieldElement,
    j: int,
    cache: Optional[SumCache] = None,
    ceiling: Optional[int] = None,
) -> CyclotomicNumber:
    """λ 作为 𝔽_{q^k} 的点（k 为 λ 所在层），其纤维在 𝔽_{q^{kj}} 上的和

    Raises:
        SizeCeilingExceeded: 环面点数超过上限
    """
    if j < 1:
        raise ValueError(f"j 必须为正整数: {j}")
    k = family.tower.degree_of(lam.field)
    embedding = family.tower.embedding(k, k * j)
    header = make_header(
        family.family_hash,
        embedding.target.describe(),
        {"level": k, "element": list(lam.coeffs)},
        j,
    )
    return _cached(cache, header, lambda: character_sum(family.fiber(embedding(lam)), ceiling))


def conjugate_sums_agree(family: ToricFamily, point: ClosedPoint, ceiling: Optional[int] = None) -> bool:
    """S_1 在闭点的各个 Frobenius 共轭上取同一个值"""
    q = family.base_field.order
    values = {character_sum(family.fiber(c), ceiling) for c in point.conjugates(q)}
    return len(values) == 1


def zero_fiber_sum(
    family: ToricFamily, r: int, cache: Optional[SumCache] = None, ceiling: Optional[int] = None
) -> CyclotomicNumber:
    """λ = 0 的纤维 F(0, x) = f(x) 在 𝔽_{q^r} 上的和"""
    level = family.tower.level(r)
    header = make_header(family.family_hash, level.describe(), {"degree": 1, "representative": "zero"}, r)
    return _cached(cache, header, lambda: character_sum(family.coefficients_in(level), ceiling))


def multiparam_exp_sum(
    family: ToricFamily,
    t: Sequence[FieldElement],
    point: ClosedPoint,
    r: int,
    cache: Optional[SumCache] = None,
    ceiling: Optional[int] = None,
) -> CyclotomicNumber:
    """形变族 H(t, λ, x) 的 S_r(t, λ)；t 与 λ 的代表元在同一个域中

    Raises:
        SizeCeilingExceeded: 环面点数超过上限
    """
    if r < 1:
        raise ValueError(f"r 必须为正整数: {r}")
    d = point.degree
    embedding = family.tower.embedding(d, d * r)
    lam = embedding(point.representative)
    t_lifted = [embedding(x) for x in t]
    header = make_header(
        family.family_hash,
        embedding.target.describe(),
        point.describe(),
        r,
        extra={"t": [list(x.coeffs) for x in t]},
    )
    return _cached(cache, header, lambda: character_sum(family.deformed_fiber(t_lifted, lam), ceiling))


def shift_character(x: FieldElement, r: int) -> CyclotomicNumber:
    """ζ_p^{r·Tr(x)}：常数项 x 对 S_r 的贡献因子"""
    return CyclotomicNumber.zeta(x.field.p, r * x.trace())
