import logging
import os
import sys

import pytest
from dotenv import load_dotenv

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from tsl.core.config.settings import settings  # noqa: E402
from tsl.storage.sum_cache import SumCache  # noqa: E402

# 配置日志
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


# 测试前加载环境变量
@pytest.fixture(scope="session", autouse=True)
def load_env():
    """自动加载环境变量"""
    logger.info("加载环境变量")
    load_dotenv(verbose=True)
    yield


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path):
    """每个测试使用独立的缓存目录，结束后恢复测试中直接改写的配置"""
    saved = settings.model_dump()
    settings.TSL_CACHE_DIR = str(tmp_path / "cache")
    yield settings
    for key, value in saved.items():
        setattr(settings, key, value)


@pytest.fixture
def sum_cache(tmp_path):
    """临时目录中的特征和缓存"""
    return SumCache(cache_dir=str(tmp_path / "sums"), enabled=True)


@pytest.fixture
def memory_cache():
    """只用内存的缓存"""
    return SumCache(enabled=False)
