"""配置模块"""
from tsl.core.config.settings import Settings, current_settings, get_settings, settings, use_settings

__all__ = ["Settings", "current_settings", "get_settings", "settings", "use_settings"]
