"""通用数值工具"""

from .summation import CompensatedSum, compensated_sum

__all__ = ['CompensatedSum', 'compensated_sum']
