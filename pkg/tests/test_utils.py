"""
测试工具模块
提供测试中反复使用的族与问题文件
"""
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from tsl.core.finite_field import make_field  # noqa: E402
from tsl.core.geometry.laurent import ToricFamily, make_family  # noqa: E402

EXAMPLES_DIR = Path(__file__).resolve().parent.parent / "tsl" / "examples"


def kl2(p: int = 3) -> ToricFamily:
    """Kl₂: f = x, μ = −1"""
    return make_family(make_field(p), [(1, [1])], [-1])


def kl3(p: int = 3) -> ToricFamily:
    """Kl₃: f = x₁ + x₂, μ = (−1, −1)"""
    return make_family(make_field(p), [(1, [1, 0]), (1, [0, 1])], [-1, -1])


def line_mu(p: int = 5) -> ToricFamily:
    """f = x₁ + x₂, μ = (−1, 0)"""
    return make_family(make_field(p), [(1, [1, 0]), (1, [0, 1])], [-1, 0])


def above(p: int = 3) -> ToricFamily:
    """f = x₁ + x₂, μ = (1, 1)，l_σ(μ) = 2"""
    return make_family(make_field(p), [(1, [1, 0]), (1, [0, 1])], [1, 1])


def sheared(p: int = 5) -> ToricFamily:
    """f = x₁ + x₁x₂, μ = (−1, 0)，l_σ = (1, 0)"""
    return make_family(make_field(p), [(1, [1, 0]), (1, [1, 1])], [-1, 0])


def load_example(name: str) -> Dict[str, Any]:
    """读取 tsl/examples 下的问题文件"""
    with open(EXAMPLES_DIR / f"{name}.json", "r", encoding="utf-8") as f:
        return json.load(f)
