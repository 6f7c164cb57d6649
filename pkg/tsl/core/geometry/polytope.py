"""ℚ^k 中有限点集凸包的精确组合结构

小规模（k ≤ 4，十余个点）下直接枚举 k 元子集求支撑超平面，所有运算在有理数上进行。
面格由刻面点集的交生成；体积按从给定顶点出发的扇形三角剖分累加。
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from tsl.core.exceptions import NotFullDimensionalError

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


def as_vector(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def primitive_integer(vec: Sequence[Fraction]) -> Tuple[int, ...]:
    """同方向的本原整数向量"""
    den = math.lcm(*(Fraction(x).denominator for x in vec))
    ints = [int(Fraction(x) * den) for x in vec]
    g = math.gcd(*ints)
    if g == 0:
        raise ValueError("零向量没有本原表示")
    return tuple(x // g for x in ints)


def _to_sympy(rows: Sequence[Sequence[Fraction]], cols: int) -> Matrix:
    if not rows:
        return Matrix.zeros(0, cols)
    return Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in rows])


def _from_sympy(x) -> Fraction:
    r = Rational(x)
    return Fraction(int(r.p), int(r.q))


def linear_rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    cols = len(vectors[0])
    return _to_sympy([as_vector(v) for v in vectors], cols).rank()


def affine_rank(points: Sequence[Sequence]) -> int:
    pts = [as_vector(p) for p in points]
    if len(pts) <= 1:
        return 0
    base = pts[0]
    return linear_rank([tuple(a - b for a, b in zip(p, base)) for p in pts[1:]])


def _normal(diffs: List[Vector], k: int) -> Optional[Tuple[int, ...]]:
    """k−1 个差向量张成超平面时返回其本原法向量"""
    if k == 1:
        return (1,)
    null = _to_sympy(diffs, k).nullspace()
    if len(null) != 1:
        return None
    return primitive_integer([_from_sympy(x) for x in null[0]])


@dataclass(frozen=True)
class HullFacet:
    """刻面 {x : normal·x = offset}，凸包位于 normal·x ≤ offset 一侧"""

    normal: Tuple[int, ...]
    offset: Fraction
    members: FrozenSet[int]  # 落在刻面上的点的下标


@lru_cache(maxsize=512)
def _facets_cached(points: Tuple[Vector, ...]) -> Tuple[HullFacet, ...]:
    k = len(points[0])
    found = {}
    for combo in itertools.combinations(range(len(points)), k):
        base = points[combo[0]]
        diffs = [tuple(a - b for a, b in zip(points[i], base)) for i in combo[1:]]
        normal = _normal(diffs, k)
        if normal is None:
            continue
        offset = dot(normal, base)
        values = [dot(normal, x) - offset for x in points]
        if all(v <= 0 for v in values):
            pass
        elif all(v >= 0 for v in values):
            normal = tuple(-a for a in normal)
            offset = -offset
            values = [-v for v in values]
        else:
            continue
        key = (normal, offset)
        if key not in found:
            members = frozenset(i for i, v in enumerate(values) if v == 0)
            found[key] = HullFacet(normal, offset, members)
    return tuple(sorted(found.values(), key=lambda f: (f.normal, f.offset)))


class Polytope:
    """有限点集的凸包（点集去重后保持首次出现的顺序）"""

    def __init__(self, points: Iterable[Sequence]):
        unique: List[Vector] = []
        for p in points:
            v = as_vector(p)
            if v not in unique:
                unique.append(v)
        if not unique:
            raise ValueError("空点集没有凸包")
        self.points: Tuple[Vector, ...] = tuple(unique)
        self.ambient_dim = len(unique[0])
        self.dim = affine_rank(unique)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def index_of(self, point: Sequence) -> int:
        return self.points.index(as_vector(point))

    @property
    def facets(self) -> Tuple[HullFacet, ...]:
        if not self.is_full_dimensional:
            raise NotFullDimensionalError(
                f"凸包维数 {self.dim} 小于 {self.ambient_dim}，无法给出刻面描述"
            )
        if self.ambient_dim == 0:
            return ()
        return _facets_cached(self.points)

    def contains(self, x: Sequence) -> bool:
        return all(dot(f.normal, x) <= f.offset for f in self.facets)

    def faces(self) -> List[FrozenSet[int]]:
        """全部非空真面（以点下标集表示），按 (大小, 下标) 排序"""
        faces = {f.members for f in self.facets}
        frontier = set(faces)
        while frontier:
            new = set()
            for a in frontier:
                for b in faces:
                    c = a & b
                    if c and c not in faces:
                        new.add(c)
            faces |= new
            frontier = new
        return sorted(faces, key=lambda s: (len(s), sorted(s)))

    def vertices(self) -> List[Vector]:
        if len(self.points) == 1:
            return list(self.points)
        if not self.is_full_dimensional:
            # 投影到仿射包的主元坐标上，投影在仿射包上是单射
            coords = self._affine_pivots()
            projected = Polytope([tuple(p[j] for j in coords) for p in self.points])
            return [self.points[projected.points.index(v)] for v in projected.vertices()]
        return [self.points[next(iter(f))] for f in self.faces() if len(f) == 1]

    def _affine_pivots(self) -> List[int]:
        base = self.points[0]
        diffs = [tuple(a - b for a, b in zip(p, base)) for p in self.points[1:]]
        _, pivots = _to_sympy(diffs, self.ambient_dim).rref()
        return list(pivots)

    def normalized_volume(self, apex: Optional[Sequence] = None) -> Fraction:
        """k!·Vol；非满维时为 0"""
        if not self.is_full_dimensional:
            return Fraction(0)
        if self.ambient_dim == 0:
            return Fraction(1)
        apex_index = 0 if apex is None else self.index_of(apex)
        total = Fraction(0)
        for simplex in fan_triangulation(self.points, apex_index):
            base = self.points[simplex[0]]
            rows = [tuple(a - b for a, b in zip(self.points[i], base)) for i in simplex[1:]]
            total += abs(_from_sympy(_to_sympy(rows, self.ambient_dim).det()))
        return total


@lru_cache(maxsize=512)
def fan_triangulation(points: Tuple[Vector, ...], apex: int) -> Tuple[Tuple[int, ...], ...]:
    """以 apex 为锥顶、覆盖满维凸包的单纯形（以点下标表示）

    对每个不含 apex 的刻面，去掉法向量非零的一个坐标后在刻面内递归。
    """
    k = len(points[0])
    if k == 0:
        return ((apex,),)
    out: List[Tuple[int, ...]] = []
    for facet in _facets_cached(points):
        if apex in facet.members:
            continue
        members = sorted(facet.members)
        j = next(i for i, a in enumerate(facet.normal) if a != 0)
        projected = tuple(points[i][:j] + points[i][j + 1 :] for i in members)
        for simplex in fan_triangulation(projected, 0):
            out.append((apex,) + tuple(members[s] for s in simplex))
    return tuple(out)
