"""环面指数和族的精确计算库"""

__version__ = "0.1.0"
