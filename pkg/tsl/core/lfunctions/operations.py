"""特征值多重集上的线性代数运算 ℒ = Sym^{k_1} ⊗ … ⊗ ∧^{l_1} ⊗ …

det(1 − AT) = P(T) 给出 A 的幂和 p_r = −r·[T^r] log P。对 A^j：
Tr Sym^k(A^j) 与 Tr ∧^l(A^j) 由 p_{ij} 经 Newton 递推得到，张量积的迹是各因子迹的乘积，
最后 det(1 − ℒ(A)T) = exp(−Σ_j Tr ℒ(A^j) T^j/j)。
"""
import logging
import math
import re
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from tsl.core.cyclotomic import CyclotomicNumber, series_exp, series_log
from tsl.core.exceptions import BadConstantTermError, ParseError

logger = logging.getLogger(__name__)

_FACTOR = re.compile(r"^(sym|ext)(\d+)$")


@dataclass(frozen=True)
class OpSpec:
    """张量因子列表，每个因子为 ("sym", k) 或 ("ext", l)"""

    factors: Tuple[Tuple[str, int], ...]

    @classmethod
    def parse(cls, text: str) -> "OpSpec":
        """解析 "sym2"、"ext2"、"sym2*ext1" 这样的写法

        Raises:
            ParseError: 无法识别的因子
        """
        factors = []
        for part in text.strip().lower().split("*"):
            match = _FACTOR.match(part.strip())
            if not match:
                raise ParseError(f"无法识别的运算因子: {part!r}", {"op": text})
            factors.append((match.group(1), int(match.group(2))))
        return cls(tuple(factors))

    @property
    def order(self) -> int:
        """|ℒ|：ℒ 作为张量幂商的最小阶数，取正整数

        只有 Sym⁰、∧⁰ 因子时 Σk = 0，此时取 1。
        """
        return max(1, sum(k for _, k in self.factors))

    def dimension(self, N: int) -> int:
        """ℒ 作用在 N 维空间上的维数 ℒN"""
        dim = 1
        for kind, k in self.factors:
            dim *= math.comb(N + k - 1, k) if kind == "sym" else math.comb(N, k)
        return dim

    @property
    def max_index(self) -> int:
        return max([1] + [k for _, k in self.factors])

    def __str__(self) -> str:
        return "*".join(f"{kind}{k}" for kind, k in self.factors)


def _degree(P: Sequence[CyclotomicNumber]) -> int:
    return max((i for i, c in enumerate(P) if not c.is_zero()), default=0)


def power_sums(P: Sequence[CyclotomicNumber], count: int) -> List[CyclotomicNumber]:
    """P = ∏(1 − π_i T) 的幂和 p_1 … p_count（下标 0 处为 N）

    Raises:
        BadConstantTermError: P(0) ≠ 1
    """
    p = P[0].p
    if P[0] != CyclotomicNumber.one(p):
        raise BadConstantTermError(f"多项式常数项必须为 1: {P[0]}")
    log = series_log(list(P), count)
    return [CyclotomicNumber.from_int(p, _degree(P))] + [log[r] * (-r) for r in range(1, count + 1)]


def _complete_homogeneous(q: Sequence[CyclotomicNumber], k: int) -> CyclotomicNumber:
    """由幂和 q_1 … q_k 递推 h_k：k·h_k = Σ_{i=1}^k q_i h_{k−i}"""
    p = q[0].p
    h = [CyclotomicNumber.one(p)]
    for m in range(1, k + 1):
        acc = CyclotomicNumber.zero(p)
        for i in range(1, m + 1):
            acc = acc + q[i] * h[m - i]
        h.append(acc / m)
    return h[k]


def _elementary(q: Sequence[CyclotomicNumber], l: int) -> CyclotomicNumber:
    """由幂和递推 e_l：l·e_l = Σ_{i=1}^l (−1)^{i−1} q_i e_{l−i}"""
    p = q[0].p
    e = [CyclotomicNumber.one(p)]
    for m in range(1, l + 1):
        acc = CyclotomicNumber.zero(p)
        for i in range(1, m + 1):
            term = q[i] * e[m - i]
            acc = acc + term if i % 2 == 1 else acc - term
        e.append(acc / m)
    return e[l]


def op_trace(q: Sequence[CyclotomicNumber], op: OpSpec) -> CyclotomicNumber:
    """Tr ℒ(A)，q[i] 为 A 的幂和 p_i（i = 1 … op.max_index，q[0] 只用来确定 p）"""
    value = CyclotomicNumber.one(q[0].p)
    for kind, k in op.factors:
        value = value * (_complete_homogeneous(q, k) if kind == "sym" else _elementary(q, k))
    return value


def op_traces(P: Sequence[CyclotomicNumber], op: OpSpec, count: int) -> List[CyclotomicNumber]:
    """Tr ℒ(A^j)，j = 1 … count

    Raises:
        BadConstantTermError: P(0) ≠ 1
    """
    sums = power_sums(P, op.max_index * count)
    traces = []
    for j in range(1, count + 1):
        # q_i = p_{ij} 是 A^j 的幂和
        q = [sums[0]] + [sums[i * j] for i in range(1, op.max_index + 1)]
        traces.append(op_trace(q, op))
    return traces


def op_char_poly(P: Sequence[CyclotomicNumber], op: OpSpec) -> List[CyclotomicNumber]:
    """det(1 − ℒ(A)T)，次数 ℒN

    Raises:
        BadConstantTermError: P(0) ≠ 1
    """
    p = P[0].p
    N = _degree(P)
    dim = op.dimension(N)
    traces = op_traces(P, op, dim)
    log_coeffs = [CyclotomicNumber.zero(p)] + [t * (-1) / j for j, t in enumerate(traces, start=1)]
    result = series_exp(log_coeffs, dim)
    logger.debug(f"{op} 作用后的特征多项式次数 {dim}")
    return result
