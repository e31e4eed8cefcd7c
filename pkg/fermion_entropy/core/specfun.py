"""标量特殊函数：digamma、trigamma、Pochhammer 符号与 Gamma 比值"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import mpmath
from scipy.special import gammaln

from .exceptions import DomainError

EULER_GAMMA = 0.57721566490153286061
ZETA2 = math.pi ** 2 / 6

# 平移阈值，x 不小于该值时直接使用渐近级数
SHIFT_THRESHOLD = 12.0
ASYMPTOTIC_TERMS = 6


@lru_cache(maxsize=None)
def bernoulli(n: int) -> float:
    """Bernoulli 数 B_n"""
    return float(mpmath.bernoulli(n))


@dataclass(frozen=True)
class PolyGammaValue:
    """多伽马函数值"""
    value: float
    order: int
    argument: float


def _check_positive(x: float, name: str) -> float:
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"{name} 的自变量必须为正有限数: {x}")
    return x


def polygamma_asymptotic(order: int, x: float, terms: int = ASYMPTOTIC_TERMS) -> float:
    """大自变量渐近级数

    order=0: ln x − 1/(2x) − Σ B_{2l}/(2l x^{2l})
    order=1: (1+2x)/(2x²) + Σ B_{2l}/x^{2l+1}

    Args:
        order: 0 或 1
        x: 自变量
        terms: 截断项数 l=1..terms

    Returns:
        截断级数的值
    """
    x = _check_positive(x, "polygamma_asymptotic")
    if order == 0:
        result = math.log(x) - 0.5 / x
        for l in range(terms, 0, -1):
            result -= bernoulli(2 * l) / (2 * l * x ** (2 * l))
        return result
    if order == 1:
        result = (1.0 + 2.0 * x) / (2.0 * x * x)
        for l in range(terms, 0, -1):
            result += bernoulli(2 * l) / x ** (2 * l + 1)
        return result
    raise DomainError(f"只支持 0 阶和 1 阶多伽马函数: {order}")


def digamma(x: float) -> float:
    """digamma 函数 ψ₀(x)，x > 0

    先用 ψ₀(x) = ψ₀(x+1) − 1/x 将自变量平移到阈值以上，再用渐近级数。
    """
    x = _check_positive(x, "digamma")
    shift = 0.0
    while x < SHIFT_THRESHOLD:
        shift += 1.0 / x
        x += 1.0
    return polygamma_asymptotic(0, x) - shift


def trigamma(x: float) -> float:
    """trigamma 函数 ψ₁(x)，x > 0"""
    x = _check_positive(x, "trigamma")
    shift = 0.0
    while x < SHIFT_THRESHOLD:
        shift += 1.0 / (x * x)
        x += 1.0
    return polygamma_asymptotic(1, x) + shift


def polygamma(order: int, x: float) -> PolyGammaValue:
    """按阶数返回带元数据的多伽马函数值"""
    if order == 0:
        return PolyGammaValue(digamma(x), 0, float(x))
    if order == 1:
        return PolyGammaValue(trigamma(x), 1, float(x))
    raise DomainError(f"只支持 0 阶和 1 阶多伽马函数: {order}")


def pochhammer(a: float, k: int) -> float:
    """Pochhammer 符号 (a)_k = a(a+1)…(a+k−1)"""
    if k < 0 or int(k) != k:
        raise DomainError(f"Pochhammer 符号的 k 必须是非负整数: {k}")
    result = 1.0
    for j in range(int(k)):
        result *= a + j
    return result


def log_gamma(x: float) -> float:
    """ln Γ(x)，x > 0"""
    return float(gammaln(_check_positive(x, "log_gamma")))


def log_gamma_ratio(num_args: Sequence[float], den_args: Sequence[float]) -> float:
    """Σ lnΓ(num) − Σ lnΓ(den)，所有自变量必须为正"""
    total = 0.0
    for x in num_args:
        total += log_gamma(x)
    for x in den_args:
        total -= log_gamma(x)
    return total


def gamma_ratio(num_args: Sequence[float], den_args: Sequence[float]) -> float:
    """Gamma 函数乘积之比

    分母中出现非正整数时 1/Γ 为零，结果为 0；分子出现非正整数则为极点，报错。
    其余非正自变量先用 Pochhammer 符号平移到正半轴。
    """
    factor = 1.0
    num_pos, den_pos = [], []
    for x in den_args:
        if x <= 0 and float(x).is_integer():
            return 0.0
    for x in num_args:
        if x <= 0 and float(x).is_integer():
            raise DomainError(f"Gamma 函数在非正整数处有极点: {x}")
    for group, target, is_num in ((num_args, num_pos, True), (den_args, den_pos, False)):
        for x in group:
            if x > 0:
                target.append(x)
                continue
            # Γ(x) = Γ(x+n) / (x)_n，把负自变量移到正半轴
            n = int(math.ceil(-x)) + 1
            poch = pochhammer(x, n)
            target.append(x + n)
            if is_num:
                factor /= poch
            else:
                factor *= poch
    return factor * math.exp(log_gamma_ratio(num_pos, den_pos))
