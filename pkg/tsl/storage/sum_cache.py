"""特征和缓存模块，避免重复枚举同一个环面

每个条目是一个 JSON 文件，文件名为条目头部（族哈希、域、λ、r）的 sha256。
内存字典位于磁盘之前；写入由锁串行化。
"""
import hashlib
import json
import logging
import os
import re
import threading
from typing import Any, Dict, List, Optional, Tuple

from tsl.core.config.settings import current_settings
from tsl.core.cyclotomic import CyclotomicNumber

logger = logging.getLogger(__name__)

_ENTRY_NAME = re.compile(r"^[0-9a-f]{64}\.json(\.tmp)?$")


class SumEntry:
    """缓存条目：头部 + 分圆整数系数"""

    def __init__(self, header: Dict[str, Any], value: CyclotomicNumber):
        """初始化缓存条目

        Args:
            header: 条目头部
            value: 特征和
        """
        self.header = header
        self.value = value

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SumEntry":
        """从字典创建缓存条目

        Args:
            data: 字典数据

        Returns:
            缓存条目
        """
        p = int(data["value"]["p"])
        coeffs = [int(c) for c in data["value"]["coeffs"]]
        return cls(header=data["header"], value=CyclotomicNumber(p, coeffs))

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典，系数写成十进制整数文本"""
        if not self.value.is_integral():
            raise ValueError(f"特征和必须是分圆整数: {self.value}")
        return {
            "header": self.header,
            "value": {"p": self.value.p, "coeffs": [str(c.numerator) for c in self.value.coeffs]},
        }


def make_header(
    family_hash: str,
    field: Dict[str, Any],
    lam: Dict[str, Any],
    r: int,
    extra: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    header = {"family": family_hash, "field": field, "lambda": lam, "r": r}
    if extra:
        header["extra"] = extra
    return header


class SumCache:
    """内容寻址的特征和缓存"""

    def __init__(self, cache_dir: Optional[str] = None, enabled: Optional[bool] = None):
        """初始化缓存

        Args:
            cache_dir: 缓存目录，如果为None则使用 settings.TSL_CACHE_DIR
            enabled: 为False时只使用内存字典
        """
        self.cache_dir = cache_dir or current_settings().TSL_CACHE_DIR
        self.enabled = current_settings().TSL_CACHE_ENABLED if enabled is None else enabled
        self._memory: Dict[str, CyclotomicNumber] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.enabled:
            os.makedirs(self.cache_dir, exist_ok=True)
        logger.debug(f"初始化特征和缓存，目录: {self.cache_dir}，磁盘缓存: {self.enabled}")

    @staticmethod
    def compute_key(header: Dict[str, Any]) -> str:
        payload = json.dumps(header, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _get_entry_path(self, key: str) -> str:
        return os.path.join(self.cache_dir, f"{key}.json")

    def _load(self, key: str, header: Dict[str, Any]) -> Optional[CyclotomicNumber]:
        path = self._get_entry_path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                entry = SumEntry.from_dict(json.load(f))
        except Exception as e:
            logger.error(f"加载缓存条目失败 {path}: {str(e)}")
            return None
        if entry.header != header:
            logger.warning(f"缓存条目头部不匹配，忽略: {path}")
            return None
        return entry.value

    def get(self, header: Dict[str, Any]) -> Optional[CyclotomicNumber]:
        """按头部查找；命中与未命中都计数"""
        key = self.compute_key(header)
        with self._lock:
            value = self._memory.get(key)
            if value is None and self.enabled:
                value = self._load(key, header)
                if value is not None:
                    self._memory[key] = value
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def put(self, header: Dict[str, Any], value: CyclotomicNumber) -> bool:
        """写入内存和磁盘

        Returns:
            磁盘写入是否成功（禁用磁盘时为 True）
        """
        key = self.compute_key(header)
        with self._lock:
            self._memory[key] = value
            if not self.enabled:
                return True
            path = self._get_entry_path(key)
            tmp = f"{path}.tmp"
            try:
                with open(tmp, "w", encoding="utf-8") as f:
                    json.dump(SumEntry(header, value).to_dict(), f, ensure_ascii=False, indent=2)
                os.replace(tmp, path)
                return True
            except Exception as e:
                logger.error(f"保存缓存条目失败: {str(e)}")
                return False

    def _owned_entries(self) -> List[str]:
        """目录中由缓存自己写出的文件名：<sha256>.json 及写入中断留下的 <sha256>.json.tmp"""
        names = []
        for name in sorted(os.listdir(self.cache_dir)):
            if _ENTRY_NAME.match(name) and os.path.isfile(os.path.join(self.cache_dir, name)):
                names.append(name)
        return names

    def _is_valid_entry(self, name: str) -> bool:
        if name.endswith(".tmp"):
            return False
        try:
            with open(os.path.join(self.cache_dir, name), "r", encoding="utf-8") as f:
                entry = SumEntry.from_dict(json.load(f))
        except Exception:
            return False
        return self.compute_key(entry.header) == name[: -len(".json")]

    def gc(self, purge: bool = False) -> Tuple[int, int]:
        """清理无法读取或文件名与头部哈希不符的条目；purge=True 时删除全部条目

        只处理缓存自己命名的文件，目录中的其他文件和子目录保持不动。

        Returns:
            (保留的条目数, 删除的条目数)
        """
        with self._lock:
            self._memory.clear()
            if not os.path.isdir(self.cache_dir):
                return 0, 0

            kept, removed = 0, 0
            for name in self._owned_entries():
                if not purge and self._is_valid_entry(name):
                    kept += 1
                    continue
                try:
                    os.remove(os.path.join(self.cache_dir, name))
                    removed += 1
                except OSError as e:
                    logger.error(f"删除缓存条目失败 {name}: {str(e)}")
                    kept += 1
            logger.info(f"缓存清理完成: 保留 {kept} 个，删除 {removed} 个，清空: {purge}")
            return kept, removed

    def stats(self) -> Dict[str, int]:
        return {"hits": self.hits, "misses": self.misses}

    def reset_stats(self) -> None:
        with self._lock:
            self.hits = 0
            self.misses = 0


# 创建单例实例
_sum_cache: Optional[SumCache] = None


def get_sum_cache(cache_dir: Optional[str] = None) -> SumCache:
    """获取特征和缓存单例

    Args:
        cache_dir: 缓存目录，与当前实例不同时重新创建

    Returns:
        缓存实例
    """
    global _sum_cache

    config = current_settings()
    cache_dir = cache_dir or config.TSL_CACHE_DIR
    enabled = config.TSL_CACHE_ENABLED
    if _sum_cache is None or _sum_cache.cache_dir != cache_dir or _sum_cache.enabled != enabled:
        _sum_cache = SumCache(cache_dir=cache_dir, enabled=enabled)
    return _sum_cache
