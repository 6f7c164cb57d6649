"""
特征和缓存测试
"""
import json
import os

from tsl.core.cyclotomic import CyclotomicNumber
from tsl.storage.sum_cache import SumCache, get_sum_cache, make_header


def _header(r=1):
    return make_header("abc123", {"p": 3, "m": 1, "modulus": [0, 1]}, {"degree": 1, "representative": [1]}, r)


def test_roundtrip_across_instances(tmp_path):
    cache_dir = str(tmp_path / "sums")
    value = CyclotomicNumber(3, [2, -1])
    assert SumCache(cache_dir, enabled=True).put(_header(), value)

    fresh = SumCache(cache_dir, enabled=True)
    assert fresh.get(_header()) == value
    assert fresh.get(_header(2)) is None
    assert fresh.stats() == {"hits": 1, "misses": 1}
    fresh.reset_stats()
    assert fresh.stats() == {"hits": 0, "misses": 0}


def test_header_mismatch_is_a_miss(sum_cache):
    sum_cache.put(_header(), CyclotomicNumber.one(3))
    key = sum_cache.compute_key(_header())
    path = os.path.join(sum_cache.cache_dir, f"{key}.json")
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    data["header"]["r"] = 7
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f)

    fresh = SumCache(sum_cache.cache_dir, enabled=True)
    assert fresh.get(_header()) is None


def _write(path, text=""):
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def test_gc_removes_corrupt_entries(sum_cache):
    sum_cache.put(_header(1), CyclotomicNumber.one(3))
    sum_cache.put(_header(2), CyclotomicNumber.zeta(3))
    _write(os.path.join(sum_cache.cache_dir, f"{'a' * 64}.json"), "{not json")
    # 名字合法但头部哈希不符
    valid = sum_cache.compute_key(_header(1))
    with open(os.path.join(sum_cache.cache_dir, f"{valid}.json"), "r", encoding="utf-8") as f:
        data = f.read()
    _write(os.path.join(sum_cache.cache_dir, f"{'b' * 64}.json"), data)
    _write(os.path.join(sum_cache.cache_dir, f"{'c' * 64}.json.tmp"))

    assert sum_cache.gc() == (2, 3)
    assert sum_cache.get(_header(1)) == CyclotomicNumber.one(3)
    assert sum_cache.gc(purge=True) == (0, 2)
    assert os.listdir(sum_cache.cache_dir) == []


def test_gc_leaves_foreign_files_alone(sum_cache):
    sum_cache.put(_header(1), CyclotomicNumber.one(3))
    cache_dir = sum_cache.cache_dir
    _write(os.path.join(cache_dir, "notes.txt"), "keep me")
    _write(os.path.join(cache_dir, "broken.json"), "{not json")
    os.makedirs(os.path.join(cache_dir, "nested"))
    _write(os.path.join(cache_dir, "nested", "inner.json"), "{}")
    # 目录名也像条目
    os.makedirs(os.path.join(cache_dir, f"{'d' * 64}.json"))

    assert sum_cache.gc() == (1, 0)
    assert sum_cache.gc(purge=True) == (0, 1)
    assert sorted(os.listdir(cache_dir)) == sorted(["notes.txt", "broken.json", "nested", f"{'d' * 64}.json"])
    assert os.path.exists(os.path.join(cache_dir, "nested", "inner.json"))


def test_memory_only_cache_writes_nothing(tmp_path):
    cache = SumCache(str(tmp_path / "none"), enabled=False)
    assert cache.put(_header(), CyclotomicNumber.one(5))
    assert cache.get(_header()) == CyclotomicNumber.one(5)
    assert not (tmp_path / "none").exists()


def test_singleton_follows_cache_dir(tmp_path):
    first = get_sum_cache(str(tmp_path / "a"))
    assert get_sum_cache(str(tmp_path / "a")) is first
    assert get_sum_cache(str(tmp_path / "b")) is not first
