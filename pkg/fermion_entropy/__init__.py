"""自由费米子本征态纠缠熵的统计"""

__version__ = "0.1.0"
