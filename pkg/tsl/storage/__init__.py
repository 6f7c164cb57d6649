from tsl.storage.sum_cache import SumCache, get_sum_cache

__all__ = ["SumCache", "get_sum_cache"]
