"""Jacobi 多项式、归一化常数与 Gauss–Jacobi 求积"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union, TYPE_CHECKING

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln

from .exceptions import DomainError

if TYPE_CHECKING:
    from .kernel import EnsembleSpec

ArrayLike = Union[float, np.ndarray]


def _check_parameters(alpha: float, beta: float) -> None:
    if not (alpha > -1 and beta > -1):
        raise DomainError(f"Jacobi 参数必须大于 -1: alpha={alpha}, beta={beta}")


def jacobi_eval(k: int, alpha: float, beta: float, x: ArrayLike) -> ArrayLike:
    """三项递推计算 J_k^{(alpha,beta)}(x)

    归一化满足 J_k(1) = (alpha+1)_k / k!。x 可以是标量或 numpy 数组。
    """
    _check_parameters(alpha, beta)
    if k < 0:
        raise DomainError(f"多项式次数必须非负: {k}")
    x = np.asarray(x, dtype=float)
    if k == 0:
        result = np.ones_like(x)
        return float(result) if result.ndim == 0 else result
    apb = alpha + beta
    prev = np.ones_like(x)
    curr = 0.5 * (alpha - beta + (apb + 2.0) * x)
    for n in range(2, k + 1):
        a1 = 2.0 * n * (n + apb) * (2.0 * n + apb - 2.0)
        a2 = (2.0 * n + apb - 1.0) * (alpha * alpha - beta * beta)
        a3 = (2.0 * n + apb - 2.0) * (2.0 * n + apb - 1.0) * (2.0 * n + apb)
        a4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + apb)
        prev, curr = curr, ((a2 + a3 * x) * curr - a4 * prev) / a1
    return float(curr) if curr.ndim == 0 else curr


def jacobi_table(max_degree: int, alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """一次递推返回 0..max_degree 全部次数的值，形状 (max_degree+1, len(x))"""
    _check_parameters(alpha, beta)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    table = np.empty((max_degree + 1, x.size))
    table[0] = 1.0
    if max_degree == 0:
        return table
    apb = alpha + beta
    table[1] = 0.5 * (alpha - beta + (apb + 2.0) * x)
    for n in range(2, max_degree + 1):
        a1 = 2.0 * n * (n + apb) * (2.0 * n + apb - 2.0)
        a2 = (2.0 * n + apb - 1.0) * (alpha * alpha - beta * beta)
        a3 = (2.0 * n + apb - 2.0) * (2.0 * n + apb - 1.0) * (2.0 * n + apb)
        a4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + apb)
        table[n] = ((a2 + a3 * x) * table[n - 1] - a4 * table[n - 2]) / a1
    return table


def jacobi_series_power(k: int, alpha: float, beta: float, x: float) -> float:
    """((1+x)/2) 的幂级数形式，仅作校验"""
    _check_parameters(alpha, beta)
    y = (1.0 + x) / 2.0
    total = 0.0
    term = 1.0
    for i in range(k + 1):
        if i > 0:
            term *= (-k + i - 1) * (k + alpha + beta + i) / ((beta + i) * i)
        total += term * y ** i
    prefactor = (-1) ** k * math.exp(gammaln(beta + 1 + k) - gammaln(beta + 1) - gammaln(k + 1))
    return prefactor * total


def jacobi_series_bernstein(k: int, alpha: float, beta: float, x: float) -> float:
    """(1−x)/2 与 (1+x)/2 的双变量展开形式，仅作校验"""
    _check_parameters(alpha, beta)
    y = (1.0 + x) / 2.0
    z = (1.0 - x) / 2.0
    total = 0.0
    for i in range(k + 1):
        log_coeff = (gammaln(alpha + k + 1) - gammaln(i + 1) - gammaln(alpha + i + 1)
                     - gammaln(k - i + 1) + gammaln(k + beta + 1) - gammaln(k + beta - i + 1))
        total += (-1) ** i * math.exp(log_coeff) * z ** i * y ** (k - i)
    return total


def jacobi_norm(k: int, alpha: float, beta: float) -> float:
    """∫ ((1−x)/2)^alpha ((1+x)/2)^beta J_k² dx"""
    _check_parameters(alpha, beta)
    if k == 0:
        log_h = math.log(2.0) + gammaln(alpha + 1) + gammaln(beta + 1) - gammaln(alpha + beta + 2)
        return math.exp(log_h)
    log_h = (math.log(2.0) + gammaln(k + alpha + 1) + gammaln(k + beta + 1)
             - math.log(2 * k + alpha + beta + 1) - gammaln(k + 1) - gammaln(k + alpha + beta + 1))
    return math.exp(log_h)


def norm_h(k: int, spec: 'EnsembleSpec') -> float:
    """按系综返回归一化常数 h_k

    情形 A 对应 J_{2k}^{(a,a)} 在 [0,1] 上的范数，情形 B 对应 J_k^{(a,b)} 在 [−1,1] 上的范数。
    """
    if not 0 <= k < spec.m:
        raise DomainError(f"k 必须满足 0 <= k < m={spec.m}: {k}")
    if spec.case == 'A':
        return 0.5 * jacobi_norm(2 * k, spec.a, spec.a)
    return jacobi_norm(k, spec.a, spec.b)


@dataclass(frozen=True)
class JacobiBasis:
    """Jacobi 多项式基"""
    alpha: float
    beta: float
    max_degree: int
    norms: Tuple[float, ...]

    @classmethod
    def build(cls, alpha: float, beta: float, max_degree: int) -> 'JacobiBasis':
        _check_parameters(alpha, beta)
        norms = tuple(jacobi_norm(k, alpha, beta) for k in range(max_degree + 1))
        return cls(alpha, beta, max_degree, norms)

    def recurrence(self, n: int) -> Tuple[float, float]:
        """首一递推系数 (a_n, b_n²)"""
        return _recurrence_coefficients(n, self.alpha, self.beta)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return jacobi_table(self.max_degree, self.alpha, self.beta, x)


def _recurrence_coefficients(n: int, alpha: float, beta: float) -> Tuple[float, float]:
    apb = alpha + beta
    if n == 0:
        diag = (beta - alpha) / (apb + 2.0)
        return diag, 0.0
    diag = (beta * beta - alpha * alpha) / ((2 * n + apb) * (2 * n + apb + 2))
    if n == 1:
        off2 = 4.0 * (1 + alpha) * (1 + beta) / ((2 + apb) ** 2 * (3 + apb))
    else:
        off2 = (4.0 * n * (n + alpha) * (n + beta) * (n + apb)
                / ((2 * n + apb) ** 2 * (2 * n + apb + 1) * (2 * n + apb - 1)))
    return diag, off2


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """求积规则，积分 ∫(1−x)^alpha (1+x)^beta f(x) dx

    plus_half、minus_half 分别保存节点处 (1+x)/2 与 (1−x)/2 的精确值，供端点对数使用。
    """
    nodes: np.ndarray
    weights: np.ndarray
    alpha: float
    beta: float
    plus_half: Optional[np.ndarray] = None
    minus_half: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.plus_half is None:
            object.__setattr__(self, 'plus_half', (1.0 + self.nodes) / 2.0)
        if self.minus_half is None:
            object.__setattr__(self, 'minus_half', (1.0 - self.nodes) / 2.0)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def __len__(self) -> int:
        return self.nodes.size


def gauss_jacobi_rule(order: int, alpha: float, beta: float) -> QuadratureRule:
    """Golub–Welsch 方法构造 Gauss–Jacobi 求积规则

    Args:
        order: 节点数
        alpha: (1−x) 的指数
        beta: (1+x) 的指数

    Returns:
        对次数不超过 2*order−1 的多项式精确的 QuadratureRule
    """
    _check_parameters(alpha, beta)
    if order < 1:
        raise DomainError(f"求积阶数必须为正: {order}")
    coeffs = [_recurrence_coefficients(n, alpha, beta) for n in range(order)]
    diag = np.array([c[0] for c in coeffs])
    off = np.sqrt(np.array([c[1] for c in coeffs[1:]]))
    if order == 1:
        nodes, vectors = diag.copy(), np.ones((1, 1))
    else:
        nodes, vectors = eigh_tridiagonal(diag, off)
    log_mu0 = (alpha + beta + 1.0) * math.log(2.0) + betaln(alpha + 1.0, beta + 1.0)
    weights = math.exp(log_mu0) * vectors[0, :] ** 2
    order_idx = np.argsort(nodes)
    return QuadratureRule(nodes[order_idx], weights[order_idx], float(alpha), float(beta))


def composite_rule(order: int, levels: int = 15, ratio: float = 0.1) -> QuadratureRule:
    """向两端几何加密的复合 Gauss–Legendre 规则

    每个面板使用 order 点 Gauss–Legendre，面板端点为 0, ½ratio^levels, …, ½ratio, ½ 及其关于 ½ 的镜像。
    节点同时保存 (1+x)/2 和 (1−x)/2，端点附近不损失相对精度。
    """
    if not 0.0 < ratio < 1.0:
        raise DomainError(f"加密比例必须在 (0,1) 内: {ratio}")
    if levels < 0:
        raise DomainError(f"加密层数必须非负: {levels}")
    base = gauss_jacobi_rule(order, 0.0, 0.0)
    s = (base.nodes + 1.0) / 2.0
    ws = base.weights / 2.0
    breaks = np.concatenate(([0.0], 0.5 * ratio ** np.arange(levels, 0, -1), [0.5]))

    near, weights = [], []
    for left, right in zip(breaks[:-1], breaks[1:]):
        near.append(left + (right - left) * s)
        weights.append(2.0 * (right - left) * ws)
    near = np.concatenate(near)
    weights = np.concatenate(weights)
    far = 1.0 - near

    # 左半区间 y=near，右半区间 1−y=near
    plus_half = np.concatenate((near, far[::-1]))
    minus_half = np.concatenate((far, near[::-1]))
    nodes = plus_half - minus_half
    return QuadratureRule(nodes, np.concatenate((weights, weights[::-1])), 0.0, 0.0,
                          plus_half=plus_half, minus_half=minus_half)
