"""关联核模块：系综参数、关联核 K(x,y) 与 Christoffel–Darboux 对角公式"""
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from .exceptions import DomainError
from .jacobi import JacobiBasis, jacobi_table, norm_h

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class EnsembleSpec:
    """费米高斯系综的维数与情形

    情形 A（粒子数任意）：gamma=2, a=b=n−m，支撑 [0,1]；
    情形 B（粒子数固定为 p）：gamma=1, a=n−p, b=p−m，支撑 [−1,1]。
    """
    case: str
    m: int
    n: int
    p: Optional[int] = None

    def __post_init__(self):
        if self.case not in ('A', 'B'):
            raise DomainError(f"情形必须是 A 或 B: {self.case}")
        for name in ('m', 'n'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} 必须是正整数: {value}")
        if self.m > self.n:
            raise DomainError(f"需要 m <= n: m={self.m}, n={self.n}")
        if self.case == 'A':
            if self.p is not None:
                raise DomainError("情形 A 不接受粒子数 p")
        else:
            if self.p is None:
                raise DomainError("情形 B 必须给出粒子数 p")
            if int(self.p) != self.p or not self.m <= self.p <= self.n:
                raise DomainError(f"需要 m <= p <= n: m={self.m}, p={self.p}, n={self.n}")

    @property
    def gamma(self) -> int:
        return 2 if self.case == 'A' else 1

    @property
    def a(self) -> int:
        return self.n - self.m if self.case == 'A' else self.n - self.p

    @property
    def b(self) -> int:
        return self.n - self.m if self.case == 'A' else self.p - self.m

    @property
    def support(self) -> Tuple[float, float]:
        return (0.0, 1.0) if self.case == 'A' else (-1.0, 1.0)

    @property
    def degrees(self) -> Tuple[int, ...]:
        """核中出现的多项式次数"""
        if self.case == 'A':
            return tuple(2 * k for k in range(self.m))
        return tuple(range(self.m))

    @property
    def fold(self) -> float:
        """[0,1] 上的积分等于 [−1,1] 上偶被积函数积分的一半"""
        return 0.5 if self.case == 'A' else 1.0

    @property
    def label(self) -> str:
        if self.case == 'A':
            return f"A(m={self.m}, n={self.n})"
        return f"B(m={self.m}, p={self.p}, n={self.n})"

    def sort_key(self) -> Tuple[str, int, int, int]:
        return (self.case, self.m, self.n, self.p or 0)

    def to_dict(self) -> Dict[str, Any]:
        data = {'case': self.case, 'm': self.m, 'n': self.n}
        if self.p is not None:
            data['p'] = self.p
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EnsembleSpec':
        return cls(data['case'], int(data['m']), int(data['n']),
                   int(data['p']) if data.get('p') is not None else None)


def _cd_coefficients(spec: EnsembleSpec, h_last: float) -> Tuple[float, float]:
    m, apb = spec.m, spec.a + spec.b
    poch = (apb + 2 * m - 1) * (apb + 2 * m)
    alpha1 = m * (apb + m) * (apb + m + 1) / (h_last * poch)
    alpha2 = m * (apb + m) ** 2 / (h_last * poch)
    return alpha1, alpha2


@dataclass(frozen=True)
class KernelContext:
    """关联核上下文"""
    spec: EnsembleSpec
    basis: JacobiBasis
    norms: Tuple[float, ...]
    cd_coeffs: Optional[Tuple[float, float]]

    @classmethod
    def build(cls, spec: EnsembleSpec) -> 'KernelContext':
        if spec.case == 'A':
            basis = JacobiBasis.build(spec.a, spec.a, 2 * spec.m - 2)
            cd = None
        else:
            basis = JacobiBasis.build(spec.a, spec.b, spec.m)
        norms = tuple(norm_h(k, spec) for k in range(spec.m))
        if spec.case == 'B':
            cd = _cd_coefficients(spec, norms[-1])
        return cls(spec, basis, norms, cd)

    def polynomials(self, x: np.ndarray) -> np.ndarray:
        """核中各次多项式在 x 处的值，形状 (m, len(x))"""
        table = self.basis.evaluate(x)
        return table[list(self.spec.degrees)]

    def half_log_weight(self, plus_half: np.ndarray, minus_half: np.ndarray) -> np.ndarray:
        """½ ln w，w = ((1−x)/2)^a ((1+x)/2)^b，0·ln0 记为 0"""
        spec = self.spec
        b = spec.a if spec.case == 'A' else spec.b
        with np.errstate(divide='ignore'):
            log_minus = np.log(minus_half) if spec.a else np.zeros_like(minus_half)
            log_plus = np.log(plus_half) if b else np.zeros_like(plus_half)
        return 0.5 * (spec.a * log_minus + b * log_plus)


def _check_support(spec: EnsembleSpec, x: np.ndarray) -> None:
    low, high = spec.support
    if np.any(x < low) or np.any(x > high) or np.any(np.isnan(x)):
        raise DomainError(f"自变量超出支撑 [{low}, {high}]: {x}")


def _scalar_or_array(value: np.ndarray, like: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def kernel_eval(ctx: KernelContext, x: ArrayLike, y: ArrayLike) -> ArrayLike:
    """关联核 K(x,y) = √(w(x)w(y)) Σ J_k(x)J_k(y)/h_k"""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    _check_support(ctx.spec, xs)
    _check_support(ctx.spec, ys)
    xs_b, ys_b = np.broadcast_arrays(xs, ys)
    flat_x, flat_y = xs_b.ravel(), ys_b.ravel()
    inv_h = 1.0 / np.asarray(ctx.norms)[:, None]
    px = ctx.polynomials(flat_x)
    py = ctx.polynomials(flat_y)
    series = np.sum(px * py * inv_h, axis=0)
    log_w = (ctx.half_log_weight((1 + flat_x) / 2, (1 - flat_x) / 2)
             + ctx.half_log_weight((1 + flat_y) / 2, (1 - flat_y) / 2))
    result = (np.exp(log_w) * series).reshape(xs_b.shape)
    return _scalar_or_array(result, xs_b)


def kernel_diagonal(ctx: KernelContext, plus_half: np.ndarray, minus_half: np.ndarray) -> np.ndarray:
    """在由 (1±x)/2 给出的节点上计算 K(x,x)"""
    x = plus_half - minus_half
    poly = ctx.polynomials(x)
    series = np.sum(poly ** 2 / np.asarray(ctx.norms)[:, None], axis=0)
    return np.exp(2.0 * ctx.half_log_weight(plus_half, minus_half)) * series


def kernel_matrix(ctx: KernelContext, plus_half: np.ndarray, minus_half: np.ndarray) -> np.ndarray:
    """节点两两之间的 K(x_i, x_j) 矩阵"""
    x = plus_half - minus_half
    scaled = ctx.polynomials(x) / np.sqrt(np.asarray(ctx.norms))[:, None]
    scaled = scaled * np.exp(ctx.half_log_weight(plus_half, minus_half))[None, :]
    return scaled.T @ scaled


def kernel_diag_cd(ctx: KernelContext, x: ArrayLike) -> ArrayLike:
    """Christoffel–Darboux 汇合形式计算 Σ_{k<m} J_k(x)²/h_k（仅情形 B）"""
    spec = ctx.spec
    if spec.case != 'B' or ctx.cd_coeffs is None:
        raise DomainError("Christoffel–Darboux 对角公式只适用于情形 B")
    xs = np.asarray(x, dtype=float)
    _check_support(spec, xs)
    flat = xs.ravel()
    m, a, b = spec.m, spec.a, spec.b
    alpha1, alpha2 = ctx.cd_coeffs
    shifted = jacobi_table(m - 1, a + 1, b + 1, flat)
    plain = jacobi_table(m, a, b, flat)
    result = alpha1 * shifted[m - 1] * plain[m - 1]
    if m >= 2:
        result = result - alpha2 * shifted[m - 2] * plain[m]
    return _scalar_or_array(result.reshape(xs.shape), xs)


def density_one_point(ctx: KernelContext, x: ArrayLike) -> ArrayLike:
    """单点密度 g₁(x) = K(x,x)/m"""
    return kernel_eval(ctx, x, x) / ctx.spec.m
