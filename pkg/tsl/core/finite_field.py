"""有限域 𝔽_{p^m} 的精确算术

元素用整数码表示：系数向量 (c_0, …, c_{m−1}) 对应码 Σ c_i p^i。
乘法、幂、迹都走 numpy 查找表（对数/反对数表），表在第一次使用时构建并在线程间共享。
元素的字典序指系数向量从低次到高次逐个比较。
"""
import itertools
import logging
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import divisors, factorint, isprime, mobius
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from tsl.core.config.settings import current_settings
from tsl.core.exceptions import (
    MixedPrimesError,
    NotPrimeError,
    ReducibleModulusError,
    SizeCeilingExceeded,
)

logger = logging.getLogger(__name__)

Poly = Tuple[int, ...]  # 𝔽_p 上的多项式，低次在前


def _poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Poly, p: int) -> Poly:
    """在 𝔽_p[t]/(modulus) 中相乘，输入输出都是长度 m 的系数向量"""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _poly_reduce(prod, modulus, p, m)


def _poly_reduce(poly: Sequence[int], modulus: Poly, p: int, m: int) -> Poly:
    work = [c % p for c in poly]
    for k in range(len(work) - 1, m - 1, -1):
        c = work[k] % p
        if c:
            for j in range(m + 1):
                work[k - m + j] -= c * modulus[j]
    work = [c % p for c in work[:m]]
    return tuple(work + [0] * (m - len(work)))


def _poly_powmod(a: Poly, e: int, modulus: Poly, p: int) -> Poly:
    m = len(modulus) - 1
    result: Poly = tuple([1] + [0] * (m - 1))
    base = a
    while e > 0:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """判断 𝔽_p 上的多项式（低次在前）是否不可约"""
    if len(modulus) <= 2:
        return len(modulus) == 2 and modulus[1] % p != 0
    # galoistools 使用高次在前的稠密表示
    dense = [int(c) % p for c in reversed(modulus)]
    return bool(gf_irreducible_p(dense, p, ZZ))


@lru_cache(maxsize=None)
def _default_modulus(p: int, m: int) -> Poly:
    """字典序最小的首一 m 次不可约多项式"""
    for low in itertools.product(range(p), repeat=m):
        candidate = tuple(low) + (1,)
        if is_irreducible(candidate, p):
            logger.debug(f"𝔽_{p}^{m} 选用模多项式 {candidate}")
            return candidate
    raise ReducibleModulusError(f"找不到 {m} 次不可约多项式: p={p}")


@dataclass(frozen=True)
class FieldTables:
    """有限域查找表；所有数组只读"""

    generator: int
    digits: np.ndarray        # (Q, m) 每个码的系数
    exp: np.ndarray           # (Q−1,) g^k 的码
    log: np.ndarray           # (Q,) 码的离散对数，log[0] = −1
    trace: np.ndarray         # (Q,) 每个码的绝对迹
    trace_by_log: np.ndarray  # (Q−1,) g^k 的绝对迹
    digits_by_log: np.ndarray  # (Q−1, m) g^k 的系数


@dataclass(frozen=True)
class FieldSpec:
    """有限域 𝔽_{p^m} = 𝔽_p[t]/(modulus)"""

    p: int
    m: int
    modulus: Poly

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def tables(self) -> FieldTables:
        return _field_tables(self)

    def describe(self) -> Dict[str, object]:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def __str__(self) -> str:
        return f"F_{self.p}^{self.m}"

    # 元素构造

    def element(self, coeffs: Union[int, Sequence[int]]) -> "FieldElement":
        """由系数向量（或素域中的整数）构造元素"""
        if isinstance(coeffs, (int, np.integer)):
            return FieldElement(self, int(coeffs) % self.p)
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) > self.m:
            raise ValueError(f"系数向量长度 {len(coeffs)} 超过扩张次数 {self.m}")
        return FieldElement(self, self.code_of(coeffs))

    def code_of(self, coeffs: Sequence[int]) -> int:
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def digits_of(self, code: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.m):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """模多项式的根 t 在本域中的像"""
        return FieldElement(self, self.code_of(_poly_reduce((0, 1), self.modulus, self.p, self.m)))

    def primitive_element(self) -> "FieldElement":
        return FieldElement(self, self.tables.generator)

    def from_log(self, k: int) -> "FieldElement":
        return FieldElement(self, int(self.tables.exp[k % (self.order - 1)]))

    def elements(self) -> List["FieldElement"]:
        """按字典序列出全部元素"""
        # product 把第一个分量当最高位，正好是低次系数优先的字典序
        return [
            FieldElement(self, self.code_of(c))
            for c in itertools.product(range(self.p), repeat=self.m)
        ]


def make_field(
    p: int,
    m: int = 1,
    modulus: Optional[Sequence[int]] = None,
    ceiling: Optional[int] = None,
) -> FieldSpec:
    """构造 𝔽_{p^m}

    Args:
        p: 特征
        m: 扩张次数
        modulus: 首一 m 次不可约多项式（低次在前），缺省时取字典序最小者
        ceiling: 域大小上限，默认 settings.ENUMERATION_CEILING

    Returns:
        FieldSpec

    Raises:
        NotPrimeError: p 不是素数
        ReducibleModulusError: 模多项式不是首一 m 次或可约
        SizeCeilingExceeded: p^m 超过上限
    """
    if not isprime(p):
        raise NotPrimeError(f"特征不是素数: {p}")
    if m < 1:
        raise ValueError(f"扩张次数必须 ≥ 1: {m}")
    limit = ceiling or current_settings().ENUMERATION_CEILING
    if p**m > limit:
        raise SizeCeilingExceeded(
            f"域大小 {p}^{m} 超过上限 {limit}", {"p": p, "m": m, "ceiling": limit}
        )
    if modulus is None:
        return FieldSpec(p, m, _default_modulus(p, m))

    mod = tuple(int(c) % p for c in modulus)
    if len(mod) != m + 1 or mod[-1] != 1:
        raise ReducibleModulusError(f"模多项式必须是首一 {m} 次多项式: {list(modulus)}")
    if not is_irreducible(mod, p):
        raise ReducibleModulusError(f"模多项式在 𝔽_{p} 上可约: {list(modulus)}")
    return FieldSpec(p, m, mod)


def _find_generator(spec: FieldSpec) -> Poly:
    """字典序最小的本原元"""
    p, m, n_el = spec.p, spec.m, spec.order - 1
    one = tuple([1] + [0] * (m - 1))
    primes = list(factorint(n_el).keys()) if n_el > 1 else []
    for coeffs in itertools.product(range(p), repeat=m):
        if not any(coeffs):
            continue
        if all(_poly_powmod(coeffs, n_el // r, spec.modulus, p) != one for r in primes):
            return tuple(coeffs)
    raise ReducibleModulusError(f"{spec} 中找不到本原元，模多项式可能可约")


def _matpow_mod(mat: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(mat.shape[0], dtype=np.int64)
    base = mat.copy()
    while e > 0:
        if e & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        e >>= 1
    return result


_tables_lock = threading.Lock()


@lru_cache(maxsize=64)
def _cached_tables(spec: FieldSpec) -> FieldTables:
    p, m, q = spec.p, spec.m, spec.order
    n_el = q - 1

    codes = np.arange(q, dtype=np.int64)
    digits = np.empty((q, m), dtype=np.int64)
    rem = codes.copy()
    for i in range(m):
        digits[:, i] = rem % p
        rem //= p
    weights = p ** np.arange(m, dtype=np.int64)

    g = _find_generator(spec)
    # 乘 g 的 𝔽_p 线性映射，第 j 列是 g·t^j
    mult = np.zeros((m, m), dtype=np.int64)
    for j in range(m):
        basis = tuple(1 if i == j else 0 for i in range(m))
        mult[:, j] = _poly_mulmod(g, basis, spec.modulus, p)

    # 先顺序算出一段 g^0..g^{B−1}，再整段乘 g^B
    block = max(1, math.isqrt(n_el))
    seq = np.zeros((n_el, m), dtype=np.int64)
    x = np.zeros(m, dtype=np.int64)
    x[0] = 1
    for k in range(min(block, n_el)):
        seq[k] = x
        x = (mult @ x) % p
    step = _matpow_mod(mult, block, p)
    for start in range(block, n_el, block):
        stop = min(start + block, n_el)
        seq[start:stop] = (seq[start - block : stop - block] @ step.T) % p

    exp = seq @ weights
    if np.unique(exp).size != n_el or np.any(exp == 0):
        raise ReducibleModulusError(f"{spec} 的本原元表不完整")
    log = np.full(q, -1, dtype=np.int64)
    log[exp] = np.arange(n_el, dtype=np.int64)

    # 迹是 𝔽_p 线性的：Tr(x) = Σ c_j Tr(t^j)
    basis_traces = np.zeros(m, dtype=np.int64)
    for j in range(m):
        tj = tuple(1 if i == j else 0 for i in range(m))
        total = [0] * m
        power = tj
        for _ in range(m):
            total = [(a + b) % p for a, b in zip(total, power)]
            power = _poly_powmod(power, p, spec.modulus, p)
        if any(total[1:]):
            raise ReducibleModulusError(f"{spec} 中 t^{j} 的迹不在素域中")
        basis_traces[j] = total[0]
    trace = (digits @ basis_traces) % p

    logger.debug(f"构建 {spec} 查找表: 大小 {q}, 本原元 {g}")
    return FieldTables(
        generator=int(exp[1]) if n_el > 1 else 1,
        digits=digits,
        exp=exp,
        log=log,
        trace=trace,
        trace_by_log=trace[exp],
        digits_by_log=digits[exp],
    )


def _field_tables(spec: FieldSpec) -> FieldTables:
    with _tables_lock:
        return _cached_tables(spec)


@dataclass(frozen=True)
class FieldElement:
    """有限域元素，码 Σ c_i p^i"""

    field: FieldSpec
    code: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.digits_of(self.code)

    def lex_key(self) -> Tuple[int, ...]:
        return self.coeffs

    def is_zero(self) -> bool:
        return self.code == 0

    def log(self) -> int:
        if self.code == 0:
            raise ZeroDivisionError("零没有离散对数")
        return int(self.field.tables.log[self.code])

    def _coerce(self, other: Union["FieldElement", int]) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedPrimesError(f"不同域的元素不能直接运算: {self.field} 与 {other.field}")
            return other
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.field, int(other) % self.field.p)
        return NotImplemented

    def __add__(self, other: Union["FieldElement", int]) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.field.p
        a, b = self.coeffs, other.coeffs
        return FieldElement(self.field, self.field.code_of([(x + y) % p for x, y in zip(a, b)]))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, self.field.code_of([(-c) % p for c in self.coeffs]))

    def __sub__(self, other: Union["FieldElement", int]) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: Union["FieldElement", int]) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.code == 0 or other.code == 0:
            return self.field.zero()
        t = self.field.tables
        k = (int(t.log[self.code]) + int(t.log[other.code])) % (self.field.order - 1)
        return FieldElement(self.field, int(t.exp[k]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise ZeroDivisionError("零不可逆")
        return self**-1

    def __truediv__(self, other: Union["FieldElement", int]) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        if self.code == 0:
            if e < 0:
                raise ZeroDivisionError("零的负次幂")
            return self.field.one() if e == 0 else self
        t = self.field.tables
        k = (int(t.log[self.code]) * e) % (self.field.order - 1)
        return FieldElement(self.field, int(t.exp[k]))

    def frobenius(self, times: int = 1) -> "FieldElement":
        """x ↦ x^{p^times}"""
        return self ** (self.field.p**times)

    def trace(self) -> int:
        return absolute_trace(self)

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return f"{' + '.join(terms) or '0'} in {self.field}"


def absolute_trace(x: FieldElement) -> int:
    """Tr_{𝔽_{p^m}/𝔽_p}(x) = Σ_{i<m} x^{p^i}"""
    return int(x.field.tables.trace[x.code])


class Embedding:
    """域嵌入 source → target，由 source 的模多项式在 target 中的一个根确定"""

    def __init__(self, source: FieldSpec, target: FieldSpec, root: FieldElement):
        if root.field != target:
            raise MixedPrimesError("嵌入的根必须属于目标域")
        self.source = source
        self.target = target
        self.root = root
        self._images: Optional[np.ndarray] = None
        self._lock = threading.Lock()

    @property
    def images(self) -> np.ndarray:
        """source 中每个码的像"""
        with self._lock:
            if self._images is None:
                p = self.source.p
                rows = np.array(
                    [(self.root**j).coeffs for j in range(self.source.m)], dtype=np.int64
                )
                src_digits = self.source.tables.digits
                weights = p ** np.arange(self.target.m, dtype=np.int64)
                self._images = ((src_digits @ rows) % p) @ weights
            return self._images

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field != self.source:
            raise MixedPrimesError(f"元素不属于嵌入的源域 {self.source}")
        return FieldElement(self.target, int(self.images[x.code]))


def polynomial_roots(poly: Sequence[int], field: FieldSpec) -> List[FieldElement]:
    """𝔽_p 系数多项式（低次在前）在 field 中的全部根，按字典序排列"""
    t = field.tables
    p, q = field.p, field.order
    codes = np.arange(q, dtype=np.int64)
    safe_log = np.where(t.log >= 0, t.log, 0)
    values = np.zeros((q, field.m), dtype=np.int64)
    for j, c in enumerate(poly):
        c = int(c) % p
        if not c:
            continue
        if j == 0:
            values[:, 0] += c
            continue
        powers = t.exp[(j * safe_log) % (q - 1)]
        term = t.digits[powers] * c
        term[0] = 0  # 0^j = 0
        values += term
    mask = np.all(values % p == 0, axis=1)
    roots = [FieldElement(field, int(c)) for c in codes[mask]]
    return sorted(roots, key=FieldElement.lex_key)


class FieldTower:
    """以 𝔽_q 为底的扩张塔 𝔽_{q^k}，各层之间的嵌入彼此相容

    ι_{k→l} ∘ ι_{1→k} = ι_{1→l}；ι_{1→l} 取底域模多项式的字典序最小根。
    """

    def __init__(self, base: FieldSpec):
        self.base = base
        self._embeddings: Dict[Tuple[int, int], Embedding] = {}
        self._lock = threading.RLock()

    @property
    def q(self) -> int:
        return self.base.order

    def level(self, k: int) -> FieldSpec:
        if k < 1:
            raise ValueError(f"扩张层次必须 ≥ 1: {k}")
        if k == 1:
            return self.base
        return make_field(self.base.p, self.base.m * k)

    def degree_of(self, field: FieldSpec) -> int:
        if field.p != self.base.p or field.m % self.base.m:
            raise MixedPrimesError(f"{field} 不在以 {self.base} 为底的扩张塔中")
        k = field.m // self.base.m
        if field != self.level(k):
            raise MixedPrimesError(f"{field} 不是塔中第 {k} 层的模型")
        return k

    def embedding(self, k: int, l: int) -> Embedding:
        """第 k 层到第 l 层的嵌入（k 整除 l）"""
        if l % k:
            raise ValueError(f"{k} 不整除 {l}，不存在嵌入")
        with self._lock:
            key = (k, l)
            if key not in self._embeddings:
                self._embeddings[key] = self._build_embedding(k, l)
            return self._embeddings[key]

    def _build_embedding(self, k: int, l: int) -> Embedding:
        source, target = self.level(k), self.level(l)
        if k == l:
            return Embedding(source, target, target.gen())
        roots = polynomial_roots(source.modulus, target)
        if k == 1:
            chosen = roots[0]
        else:
            # 要求 ι_{k→l}(ι_{1→k}(t)) = ι_{1→l}(t)
            base_in_source = self.embedding(1, k)(self.base.gen())
            base_in_target = self.embedding(1, l)(self.base.gen())
            chosen = None
            for root in roots:
                candidate = Embedding(source, target, root)
                if candidate(base_in_source) == base_in_target:
                    chosen = root
                    break
            if chosen is None:
                raise ReducibleModulusError(f"找不到与底域相容的嵌入 {source} → {target}")
        logger.debug(f"嵌入 {source} → {target}: 根 {chosen.coeffs}")
        return Embedding(source, target, chosen)

    def embed(self, x: FieldElement, l: int) -> FieldElement:
        """把塔中任意层的元素嵌入第 l 层"""
        k = self.degree_of(x.field)
        return self.embedding(k, l)(x)


@dataclass(frozen=True)
class ClosedPoint:
    """𝔾_m 的闭点：Frobenius 轨道的字典序最小代表元及其次数"""

    representative: FieldElement
    degree: int

    @property
    def field(self) -> FieldSpec:
        return self.representative.field

    def conjugates(self, q: int) -> List[FieldElement]:
        return [self.representative ** (q**i) for i in range(self.degree)]

    def describe(self) -> Dict[str, object]:
        return {
            "degree": self.degree,
            "representative": list(self.representative.coeffs),
            "field": self.field.describe(),
        }


def torus_size(field: FieldSpec, n: int) -> int:
    return (field.order - 1) ** n


def check_torus(field: FieldSpec, n: int, ceiling: Optional[int] = None) -> int:
    """环面点数；超过上限时抛出 SizeCeilingExceeded"""
    limit = ceiling or current_settings().ENUMERATION_CEILING
    size = torus_size(field, n)
    if size > limit:
        raise SizeCeilingExceeded(
            f"环面 ({field.order}−1)^{n} = {size} 个点超过上限 {limit}",
            {"field": field.describe(), "n": n, "size": size, "ceiling": limit},
        )
    return size


def torus_log_block(field: FieldSpec, n: int, start: int, stop: int) -> np.ndarray:
    """环面第 start..stop−1 个点的离散对数坐标，形状 (stop−start, n)

    第 i 个点的坐标是 i 的 (q−1) 进制展开，首坐标为最高位。
    """
    radix = field.order - 1
    index = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = index % radix
        index //= radix
    return out


def enumerate_torus(
    field: FieldSpec,
    n: int,
    ceiling: Optional[int] = None,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[Tuple[FieldElement, ...]]:
    """按固定顺序列出 (𝔽*)^n 的点；[start, stop) 用于分块消费

    Raises:
        SizeCeilingExceeded: 点数超过上限
    """
    size = check_torus(field, n, ceiling)
    stop = size if stop is None else min(stop, size)
    exp = field.tables.exp
    chunk = current_settings().PARALLEL_CHUNK_SIZE
    for lo in range(start, stop, chunk):
        block = torus_log_block(field, n, lo, min(lo + chunk, stop))
        for row in exp[block]:
            yield tuple(FieldElement(field, int(c)) for c in row)


def closed_point_count(q: int, d: int) -> int:
    """次数恰为 d 的闭点个数 (1/d)Σ_{e|d} μ(d/e)(q^e − 1)"""
    total = sum(int(mobius(d // e)) * (q**e - 1) for e in divisors(d))
    return total // d


def closed_points(
    field: Union[FieldSpec, FieldTower],
    d_max: int,
    ceiling: Optional[int] = None,
) -> List[ClosedPoint]:
    """𝔾_m 在 𝔽_q 上次数 ≤ d_max 的全部闭点，按 (次数, 代表元字典序) 排序

    Raises:
        SizeCeilingExceeded: q^{d_max} 超过上限
    """
    tower = field if isinstance(field, FieldTower) else FieldTower(field)
    q = tower.q
    limit = ceiling or current_settings().ENUMERATION_CEILING
    if d_max >= 1 and q**d_max > limit:
        raise SizeCeilingExceeded(
            f"q^{d_max} = {q**d_max} 超过上限 {limit}", {"q": q, "d_max": d_max}
        )

    points: List[ClosedPoint] = []
    for d in range(1, d_max + 1):
        level = tower.level(d)
        exp = level.tables.exp
        n_el = level.order - 1
        visited = np.zeros(n_el, dtype=bool)
        reps: List[FieldElement] = []
        for k in range(n_el):
            if visited[k]:
                continue
            orbit = []
            j = k
            while not visited[j]:
                visited[j] = True
                orbit.append(j)
                j = (j * q) % n_el
            if len(orbit) != d:
                continue
            members = [FieldElement(level, int(exp[i])) for i in orbit]
            reps.append(min(members, key=FieldElement.lex_key))
        reps.sort(key=FieldElement.lex_key)
        expected = closed_point_count(q, d)
        if len(reps) != expected:
            raise ArithmeticError(f"次数 {d} 的闭点个数 {len(reps)} 与公式值 {expected} 不符")
        points.extend(ClosedPoint(rep, d) for rep in reps)
        logger.debug(f"次数 {d} 的闭点: {len(reps)} 个")
    return points
