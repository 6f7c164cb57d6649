"""服务层"""
from tsl.services.family_service import FamilyService, apply_limits, gc_cache, geometry_report

__all__ = ["FamilyService", "apply_limits", "gc_cache", "geometry_report"]
