"""冯·诺依曼熵的精确均值、方差及其渐近形式"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy.special import xlogy

from .exceptions import DomainError
from .kernel import EnsembleSpec
from .specfun import digamma as psi0, trigamma as psi1, pochhammer

ArrayLike = Union[float, np.ndarray]

METHODS = ('closed_form', 'summation', 'quadrature', 'monte_carlo')
LN2 = math.log(2.0)


@dataclass
class MomentReport:
    """均值与方差报告

    error_estimate 随计算方法而定：closed_form 与 summation 为 0，
    quadrature 为换阶前后均值与方差之差的较大者，monte_carlo 与 variance_stderr 相同。
    """
    mean: float
    variance: float
    method: str
    error_estimate: float
    spec: EnsembleSpec
    mean_stderr: Optional[float] = None
    variance_stderr: Optional[float] = None
    trace: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"未知的计算方法: {self.method}")
        if self.variance < 0:
            raise DomainError(f"方差不能为负: {self.variance}")
        upper = self.spec.m * LN2
        if not -1e-12 <= self.mean <= upper + 1e-12:
            raise DomainError(f"均值超出 [0, m ln2] 范围: {self.mean}")

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'spec': self.spec.to_dict(),
            'method': self.method,
            'mean': self.mean,
            'variance': self.variance,
            'error_estimate': self.error_estimate,
        }
        if self.mean_stderr is not None:
            data['mean_stderr'] = self.mean_stderr
        if self.variance_stderr is not None:
            data['variance_stderr'] = self.variance_stderr
        return data


@dataclass(frozen=True)
class AsymptoticPoint:
    """渐近区域中的点 f1 = m/(n+m), f2 = p/(n+m)"""
    f1: float
    f2: Optional[float] = None
    order: str = 'leading'
    dimension: Optional[int] = None

    def __post_init__(self):
        if self.order not in ('leading', 'corrected'):
            raise DomainError(f"渐近阶必须是 leading 或 corrected: {self.order}")
        if not 0.0 < self.f1 <= 0.5:
            raise DomainError(f"需要 0 < f1 <= 1/2: f1={self.f1}")
        if self.f2 is not None and not self.f1 <= self.f2 <= 0.5:
            raise DomainError(f"需要 f1 <= f2 <= 1/2: f1={self.f1}, f2={self.f2}")
        if self.order == 'corrected' and not self.dimension:
            raise DomainError("修正阶渐近式需要总维数 m+n")


def entropy_v(x: ArrayLike) -> ArrayLike:
    """v(x) = ((1−x)/2)ln((1−x)/2) + ((1+x)/2)ln((1+x)/2)，端点取 0"""
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 1.0) or np.any(np.isnan(xs)):
        raise DomainError(f"v(x) 需要 |x| <= 1: {x}")
    return entropy_v_halves((1.0 + xs) / 2.0, (1.0 - xs) / 2.0)


def entropy_v_halves(plus_half: ArrayLike, minus_half: ArrayLike) -> ArrayLike:
    """由 (1+x)/2 与 (1−x)/2 直接计算 v"""
    value = xlogy(plus_half, plus_half) + xlogy(minus_half, minus_half)
    return float(value) if np.ndim(value) == 0 else value


def mean_exact(spec: EnsembleSpec) -> float:
    """熵均值的闭式结果"""
    m, n = spec.m, spec.n
    if spec.case == 'A':
        return ((m + n - 0.5) * psi0(2 * m + 2 * n) + (0.25 - m) * psi0(m + n)
                + (0.5 - n) * psi0(2 * n) - 0.25 * psi0(n) - m)
    p = spec.p
    return (-m * (m + n - p) / (m + n) * psi0(m + n - p) + (m + n) * psi0(m + n + 1)
            - m * p / (m + n) * psi0(p + 1) - n * psi0(n + 1) - m)


def variance_coefficients(m: int, n: int, p: int) -> Dict[str, float]:
    """情形 B 方差公式中的系数 c0…c4"""
    s = m + n
    poch3 = pochhammer(s - 1, 3)
    poch2 = pochhammer(s, 2)
    return {
        'c0': m * (s - p) * (m * m + 2 * m * n + n * n - n * p - 1) / poch3,
        'c1': m * p * (m * m + m * n + n * p - 1) / poch3,
        'c2': m * n * p * (s - p) / (s * poch3),
        'c3': -m * (m + 1) * (s - 2 * p) / (s * poch2),
        'c4': -m * (2 * m + n + 2) / (s * poch2),
    }


def variance_exact(spec: EnsembleSpec) -> float:
    """熵方差的闭式结果"""
    m, n = spec.m, spec.n
    if spec.case == 'A':
        return ((0.5 - m - n) * psi1(2 * m + 2 * n) + (n - 0.5) * psi1(2 * n)
                + (m * (2 * m + n - 1) / (2 * m + 2 * n - 1) - 0.125) * psi1(m + n)
                + psi1(n) / 8 - 0.5 * (psi0(2 * m + 2 * n) - psi0(2 * n)))
    p = spec.p
    c = variance_coefficients(m, n, p)
    diff = psi0(m + n - p) - psi0(p)
    return (c['c0'] * psi1(m + n - p) - (m + n) * psi1(m + n) + n * psi1(n) + c['c1'] * psi1(p)
            + c['c2'] * diff ** 2 + c['c3'] * diff - psi0(m + n) + psi0(n) + c['c4'])


def exact_report(spec: EnsembleSpec) -> MomentReport:
    return MomentReport(mean_exact(spec), variance_exact(spec), 'closed_form', 0.0, spec)


def asymptotic_point(spec: EnsembleSpec, order: str = 'leading') -> AsymptoticPoint:
    """由维数构造渐近点"""
    total = spec.m + spec.n
    f2 = spec.p / total if spec.case == 'B' else None
    return AsymptoticPoint(spec.m / total, f2, order, total)


def variance_asymptotic(point: AsymptoticPoint, case: str) -> float:
    """渐近方差

    情形 A 只有主阶；情形 B 的 corrected 阶加上 1/(12(m+n)²) 修正项。
    """
    f1 = point.f1
    base = f1 + f1 * f1 + math.log(1.0 - f1)
    if case == 'A':
        if point.order == 'corrected':
            raise DomainError("情形 A 没有修正阶渐近式")
        return 0.5 * base
    if case != 'B':
        raise DomainError(f"情形必须是 A 或 B: {case}")
    f2 = point.f2
    if f2 is None:
        raise DomainError("情形 B 的渐近式需要 f2")
    L = math.log((1.0 - f2) / f2)
    leading = base + f1 * f2 * (1 - f1) * (1 - f2) * L * L + f1 * f1 * (2 * f2 - 1) * L
    if point.order == 'leading':
        return leading
    bracket = (f1 ** 2 / (f2 - 1) ** 2 + f1 ** 2 / f2 ** 2 + 12 * f1 ** 2 - 12 * f1
               + 1 / (f1 - 1) ** 2 + (f1 - 3 * f1 ** 2) / (f2 - 1) + (3 * f1 ** 2 - f1) / f2 - 1
               + 2 * (f1 - 1) * f1 * (12 * f2 ** 3 - 18 * f2 ** 2 + 4 * f2 + 1) / ((f2 - 1) * f2) * L
               + 12 * (f1 - 1) * f1 * (f2 - 1) * f2 * L * L)
    return leading + bracket / (12.0 * point.dimension ** 2)


def standardize(samples: ArrayLike, spec: EnsembleSpec) -> np.ndarray:
    """X = (S − E[S]) / √V[S]，使用精确矩"""
    mean = mean_exact(spec)
    sd = math.sqrt(variance_exact(spec))
    return (np.asarray(samples, dtype=float) - mean) / sd


def gaussian_density(x: ArrayLike) -> ArrayLike:
    """标准正态密度"""
    xs = np.asarray(x, dtype=float)
    value = np.exp(-0.5 * xs * xs) / math.sqrt(2.0 * math.pi)
    return float(value) if value.ndim == 0 else value
