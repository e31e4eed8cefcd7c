"""补偿求和"""
import math
from typing import Iterable


class CompensatedSum:
    """Neumaier 补偿求和累加器

    同时记录部分和的最大绝对值，用于估计求和的条件数。
    """

    def __init__(self):
        self.sum = 0.0
        self.carry = 0.0
        self.max_partial = 0.0
        self.count = 0

    def add(self, value: float) -> None:
        """累加一项"""
        value = float(value)
        total = self.sum + value
        if abs(self.sum) >= abs(value):
            self.carry += (self.sum - total) + value
        else:
            self.carry += (value - total) + self.sum
        self.sum = total
        self.count += 1
        self.max_partial = max(self.max_partial, abs(value), abs(self.sum + self.carry))

    def extend(self, values: Iterable[float]) -> 'CompensatedSum':
        for value in values:
            self.add(value)
        return self

    @property
    def value(self) -> float:
        return self.sum + self.carry

    @property
    def condition(self) -> float:
        """最大部分和与最终值之比；最终值为零而部分和非零时返回 inf"""
        final = abs(self.value)
        if final == 0.0:
            return 0.0 if self.max_partial == 0.0 else math.inf
        return self.max_partial / final

    def __iadd__(self, value: float) -> 'CompensatedSum':
        self.add(value)
        return self

    def __float__(self) -> float:
        return self.value


def compensated_sum(values: Iterable[float]) -> float:
    """对可迭代对象做补偿求和"""
    return CompensatedSum().extend(values).value
