"""验证预言机：精确求和表示与关联核数值积分

求和路线把 Jacobi 多项式的双变量展开与 Beta 型对数矩积分组合，
在有理数运算下得到每个带标签的分项，形式为 R + Z·ζ(2)。
积分路线在复合 Gauss–Legendre 规则上直接积分 I_A、I_B 与均值。
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

import mpmath
import numpy as np

from .appendix import printed_terms
from .config import Settings
from .exceptions import DomainError
from .jacobi import QuadratureRule, composite_rule
from .kernel import EnsembleSpec, KernelContext, kernel_matrix
from .moments import MomentReport, entropy_v_halves, mean_exact, variance_exact
from .specfun import ZETA2

logger = logging.getLogger(__name__)

CASE_A_LABELS = ('A1', 'A2', 'B1', 'B2')
CASE_B_LABELS = ('fA1', 'fA2', 'fB1', 'fB2')
ROUNDING_DIGITS = 50


@dataclass(frozen=True)
class ZetaValue:
    """R + Z·ζ(2)，R、Z 为有理数"""
    rational: Fraction = Fraction(0)
    zeta2: Fraction = Fraction(0)

    def __add__(self, other: 'ZetaValue') -> 'ZetaValue':
        return ZetaValue(self.rational + other.rational, self.zeta2 + other.zeta2)

    def __sub__(self, other: 'ZetaValue') -> 'ZetaValue':
        return ZetaValue(self.rational - other.rational, self.zeta2 - other.zeta2)

    def scale(self, factor: Fraction) -> 'ZetaValue':
        return ZetaValue(self.rational * factor, self.zeta2 * factor)

    def square(self) -> Fraction:
        if self.zeta2:
            raise DomainError("只能对纯有理数值求平方")
        return self.rational * self.rational

    def __float__(self) -> float:
        with mpmath.workdps(ROUNDING_DIGITS):
            value = (mpmath.mpf(self.rational.numerator) / self.rational.denominator
                     + mpmath.mpf(self.zeta2.numerator) / self.zeta2.denominator * mpmath.zeta(2))
            return float(value)

    @property
    def condition(self) -> float:
        """(|R| + |Z·ζ(2)|) / |R + Z·ζ(2)|"""
        magnitude = abs(float(self.rational)) + abs(float(self.zeta2)) * ZETA2
        if magnitude == 0.0:
            return 0.0
        return magnitude / abs(float(self))


@dataclass
class SummationTermTrace:
    """求和预言机中单个分项的记录"""
    label: str
    value: float
    condition_estimate: float
    printed_value: Optional[float] = None
    printed_condition: Optional[float] = None
    agrees: Optional[bool] = None
    note: str = ''

    def to_dict(self) -> Dict[str, object]:
        return {
            'label': self.label,
            'value': self.value,
            'condition_estimate': self.condition_estimate,
            'printed_value': self.printed_value,
            'printed_condition': self.printed_condition,
            'agrees': self.agrees,
            'note': self.note,
        }


@dataclass(frozen=True)
class ExactPieces:
    """一个系综的全部精确分项"""
    spec: EnsembleSpec
    mean: ZetaValue
    pieces: Dict[str, ZetaValue]

    @property
    def variance(self) -> ZetaValue:
        if self.spec.case == 'A':
            p = self.pieces
            return (p['A1'] + p['A2']) - (p['B1'] + p['B2'])
        p = self.pieces
        return (p['fA1'] + p['fA2']) - (p['fB1'] + p['fB2'])


# ---------------------------------------------------------------------------
# Beta 型对数矩：∫_0^1 y^P (1−y)^Q (ln 项) dy


@lru_cache(maxsize=None)
def _harmonic(n: int, power: int) -> Fraction:
    total = Fraction(0)
    for j in range(1, n + 1):
        total += Fraction(1, j ** power)
    return total


def _beta(P: int, Q: int) -> Fraction:
    return Fraction(factorial(P) * factorial(Q), factorial(P + Q + 1))


def _digamma_gap(P: int, Q: int) -> Fraction:
    """ψ(P+1) − ψ(P+Q+2)"""
    return _harmonic(P, 1) - _harmonic(P + Q + 1, 1)


@lru_cache(maxsize=None)
def _log_moment(P: int, Q: int) -> Fraction:
    """∫ y^P (1−y)^Q ln y dy"""
    return _beta(P, Q) * _digamma_gap(P, Q)


@lru_cache(maxsize=None)
def _log_square_moment(P: int, Q: int) -> Fraction:
    """∫ y^P (1−y)^Q ln² y dy"""
    gap = _digamma_gap(P, Q)
    trigamma_gap = _harmonic(P + Q + 1, 2) - _harmonic(P, 2)
    return _beta(P, Q) * (gap * gap + trigamma_gap)


@lru_cache(maxsize=None)
def _log_product_moment(P: int, Q: int) -> ZetaValue:
    """∫ y^P (1−y)^Q ln y ln(1−y) dy"""
    beta = _beta(P, Q)
    rational = beta * (_digamma_gap(P, Q) * _digamma_gap(Q, P) + _harmonic(P + Q + 1, 2))
    return ZetaValue(rational, -beta)


def _moment(kind: str, P: int, Q: int) -> ZetaValue:
    """[−1,1] 上 y^P (1−y)^Q 乘以对数因子的积分，y = (1+x)/2"""
    if kind == 'ylny':
        value = ZetaValue(_log_moment(P + 1, Q))
    elif kind == 'zlnz':
        value = ZetaValue(_log_moment(Q + 1, P))
    elif kind == 'v':
        value = ZetaValue(_log_moment(P + 1, Q) + _log_moment(Q + 1, P))
    elif kind == 'y2ln2y':
        value = ZetaValue(_log_square_moment(P + 2, Q))
    elif kind == 'z2ln2z':
        value = ZetaValue(_log_square_moment(Q + 2, P))
    elif kind == 'cross':
        value = _log_product_moment(P + 1, Q + 1)
    else:
        raise DomainError(f"未知的积分类型: {kind}")
    # dx = 2 dy
    return value.scale(Fraction(2))


# ---------------------------------------------------------------------------
# Jacobi 多项式的整数系数


@lru_cache(maxsize=None)
def _jacobi_coefficients(k: int, alpha: int, beta: int) -> Tuple[int, ...]:
    """J_k = Σ_i c_i (1−y)^i y^{k−i}"""
    return tuple((-1) ** i * comb(alpha + k, k - i) * comb(k + beta, i) for i in range(k + 1))


def _convolve(first: Tuple[int, ...], second: Tuple[int, ...]) -> List[int]:
    out = [0] * (len(first) + len(second) - 1)
    for i, x in enumerate(first):
        if x == 0:
            continue
        for j, y in enumerate(second):
            out[i + j] += x * y
    return out


def _exact_norm(k: int, alpha: int, beta: int) -> Fraction:
    """∫ ((1−x)/2)^alpha ((1+x)/2)^beta J_k² dx 的有理值"""
    return Fraction(2 * factorial(k + alpha) * factorial(k + beta),
                    (2 * k + alpha + beta + 1) * factorial(k) * factorial(k + alpha + beta))


def _product_integral(kind: str, k: int, l: int, alpha: int, beta: int) -> ZetaValue:
    """∫ (对数因子) ((1−x)/2)^alpha ((1+x)/2)^beta J_k J_l dx"""
    product = _convolve(_jacobi_coefficients(k, alpha, beta), _jacobi_coefficients(l, alpha, beta))
    total = ZetaValue()
    for q, coeff in enumerate(product):
        if coeff:
            total = total + _moment(kind, k + l - q + beta, q + alpha).scale(Fraction(coeff))
    return total


def _pieces_case_a(spec: EnsembleSpec) -> ExactPieces:
    a = spec.a
    degrees = spec.degrees
    norms = [Fraction(1, 2) * _exact_norm(d, a, a) for d in degrees]
    A1, A2, mean = ZetaValue(), ZetaValue(), ZetaValue()
    B1, B2 = Fraction(0), Fraction(0)
    for k, dk in enumerate(degrees):
        inv_h = 1 / norms[k]
        A1 = A1 + _product_integral('y2ln2y', dk, dk, a, a).scale(inv_h)
        A2 = A2 + _product_integral('cross', dk, dk, a, a).scale(inv_h)
        diag = _product_integral('ylny', dk, dk, a, a)
        mean = mean - diag.scale(inv_h)
        B1 += diag.square() * inv_h * inv_h
        for l in range(k + 1, len(degrees)):
            off = _product_integral('ylny', dk, degrees[l], a, a)
            B2 += 2 * off.square() * inv_h / norms[l]
    pieces = {'A1': A1, 'A2': A2, 'B1': ZetaValue(B1), 'B2': ZetaValue(B2)}
    return ExactPieces(spec, mean, pieces)


def _pieces_case_b(spec: EnsembleSpec) -> ExactPieces:
    a, b = spec.a, spec.b
    m = spec.m
    norms = [_exact_norm(k, a, b) for k in range(m)]
    fA1_ab, fA1_ba, fA2, mean = ZetaValue(), ZetaValue(), ZetaValue(), ZetaValue()
    fB1, fB2 = Fraction(0), Fraction(0)
    for k in range(m):
        inv_h = 1 / norms[k]
        fA1_ab = fA1_ab + _product_integral('y2ln2y', k, k, a, b).scale(inv_h)
        fA1_ba = fA1_ba + _product_integral('z2ln2z', k, k, a, b).scale(inv_h)
        fA2 = fA2 + _product_integral('cross', k, k, a, b).scale(2 * inv_h)
        diag = _product_integral('v', k, k, a, b)
        mean = mean - diag.scale(inv_h)
        fB1 += diag.square() * inv_h * inv_h
        for l in range(k + 1, m):
            off = _product_integral('v', k, l, a, b)
            fB2 += 2 * off.square() * inv_h / norms[l]
    pieces = {
        'fA1': fA1_ab + fA1_ba,
        'fA1_ab': fA1_ab,
        'fA1_ba': fA1_ba,
        'fA2': fA2,
        'fB1': ZetaValue(fB1),
        'fB2': ZetaValue(fB2),
    }
    return ExactPieces(spec, mean, pieces)


@lru_cache(maxsize=256)
def exact_pieces(spec: EnsembleSpec) -> ExactPieces:
    """按有理数运算计算均值与方差的全部分项"""
    if spec.case == 'A':
        return _pieces_case_a(spec)
    return _pieces_case_b(spec)


def mean_summation(spec: EnsembleSpec) -> float:
    """求和路线的熵均值"""
    return float(exact_pieces(spec).mean)


def variance_summation(spec: EnsembleSpec,
                       settings: Optional[Settings] = None) -> Tuple[float, List[SummationTermTrace]]:
    """求和路线的熵方差

    返回值由精确分项组合而成。附录印刷形式逐项同时求值，
    结果只写入跟踪记录中的 printed_value 与 agrees，不影响返回值。

    Args:
        spec: 系综参数
        settings: 容差设置，默认使用内置值

    Returns:
        (方差, 各分项的 SummationTermTrace 列表)
    """
    settings = settings or Settings()
    tol = settings.tolerances
    exact = exact_pieces(spec)
    labels = CASE_A_LABELS if spec.case == 'A' else CASE_B_LABELS
    printed = printed_terms(spec)

    trace = []
    for label in labels:
        piece = exact.pieces[label]
        entry = SummationTermTrace(label, float(piece), piece.condition)
        term = printed.get(label)
        if term is not None:
            entry.printed_condition = term.condition_estimate
            entry.note = term.note
            if term.evaluable:
                entry.printed_value = term.value
                limit = max(tol.verify_abs, tol.verify_rel * abs(entry.value))
                entry.agrees = abs(term.value - entry.value) <= limit
                if not entry.agrees:
                    logger.warning("%s 的印刷形式 %s 与精确值不符: %.15g vs %.15g",
                                   spec.label, label, term.value, entry.value)
                elif term.condition_estimate > tol.condition_limit:
                    logger.warning("%s 的印刷形式 %s 条件数过大: %.3g",
                                   spec.label, label, term.condition_estimate)
            else:
                logger.info("%s 的印刷形式 %s 无法求值: %s", spec.label, label, term.note)
        logger.debug("%s %s = %.17g (cond %.3g)", spec.label, label, entry.value, entry.condition_estimate)
        trace.append(entry)

    if spec.case == 'A':
        if exact.pieces['B1'].rational < 0:
            raise DomainError(f"{spec.label} 的 B1 为负，应为平方和")
    elif exact.pieces['fB1'].rational < 0:
        raise DomainError(f"{spec.label} 的 fB1 为负，应为平方和")

    return float(exact.variance), trace


def summation_report(spec: EnsembleSpec, settings: Optional[Settings] = None) -> MomentReport:
    """求和路线的 MomentReport"""
    variance, trace = variance_summation(spec, settings)
    exact = exact_pieces(spec)
    return MomentReport(float(exact.mean), variance, 'summation', 0.0, spec,
                        trace={'terms': [t.to_dict() for t in trace],
                               'variance_condition': exact.variance.condition})


# ---------------------------------------------------------------------------
# 数值积分路线


def default_order(spec: EnsembleSpec, settings: Optional[Settings] = None) -> int:
    """每个面板的默认求积阶数 4m + 2(a+b) + offset"""
    settings = settings or Settings()
    return 4 * spec.m + 2 * (spec.a + spec.b) + settings.quadrature.order_offset


def _rule(order: int, settings: Settings) -> QuadratureRule:
    if order < 1:
        raise DomainError(f"求积阶数必须为正: {order}")
    q = settings.quadrature
    return composite_rule(order, q.grading_levels, q.grading_ratio)


@dataclass(frozen=True)
class QuadratureMoments:
    """一次求积得到的均值与两个积分"""
    mean: float
    I_A: float
    I_B: float
    order: int

    @property
    def variance(self) -> float:
        return self.I_A - self.I_B


def quadrature_moments(spec: EnsembleSpec, order: int,
                       settings: Optional[Settings] = None) -> QuadratureMoments:
    """在给定阶数的复合规则上计算均值、I_A 与 I_B

    I_B 使用因子分解形式 Σ_{k,l} G_kl² / (h_k h_l)。
    """
    settings = settings or Settings()
    rule = _rule(order, settings)
    ctx = KernelContext.build(spec)
    poly = ctx.polynomials(rule.nodes)
    weight = np.exp(2.0 * ctx.half_log_weight(rule.plus_half, rule.minus_half)) * rule.weights
    v = entropy_v_halves(rule.plus_half, rule.minus_half)
    norms = np.asarray(ctx.norms)
    fold = spec.fold

    gram = (poly * (weight * v)) @ poly.T
    second = (poly ** 2) @ (weight * v * v)
    mean = -fold * float(np.sum(np.diag(gram) / norms))
    I_A = fold * float(np.sum(second / norms))
    I_B = fold * fold * float(np.sum(gram ** 2 / np.outer(norms, norms)))
    return QuadratureMoments(mean, I_A, I_B, order)


def two_point_integral(ctx: KernelContext, rule: QuadratureRule) -> float:
    """张量积规则直接计算 ∬ v(x) v(y) K²(x,y) dx dy"""
    kmat = kernel_matrix(ctx, rule.plus_half, rule.minus_half)
    f = rule.weights * entropy_v_halves(rule.plus_half, rule.minus_half)
    fold = ctx.spec.fold
    return fold * fold * float(f @ (kmat ** 2) @ f)


def _with_error(spec: EnsembleSpec, order: Optional[int],
                settings: Optional[Settings]) -> Tuple[QuadratureMoments, QuadratureMoments]:
    settings = settings or Settings()
    order = order or default_order(spec, settings)
    coarse = quadrature_moments(spec, order, settings)
    fine = quadrature_moments(spec, order + settings.quadrature.error_step, settings)
    return coarse, fine


def mean_quadrature(spec: EnsembleSpec, order: Optional[int] = None,
                    settings: Optional[Settings] = None) -> Tuple[float, float]:
    """−fold·∫ v(x) K(x,x) dx 的数值积分

    Returns:
        (均值, |Q(order) − Q(order+error_step)|)
    """
    coarse, fine = _with_error(spec, order, settings)
    return coarse.mean, abs(coarse.mean - fine.mean)


def variance_quadrature(spec: EnsembleSpec, order: Optional[int] = None,
                        settings: Optional[Settings] = None) -> Tuple[float, float]:
    """I_A − I_B 的数值积分

    Returns:
        (方差, |Q(order) − Q(order+error_step)|)
    """
    coarse, fine = _with_error(spec, order, settings)
    if coarse.variance <= 0:
        raise DomainError(f"{spec.label} 的数值方差非正: {coarse.variance}")
    return coarse.variance, abs(coarse.variance - fine.variance)


def quadrature_report(spec: EnsembleSpec, order: Optional[int] = None,
                      settings: Optional[Settings] = None) -> MomentReport:
    coarse, fine = _with_error(spec, order, settings)
    error = max(abs(coarse.mean - fine.mean), abs(coarse.variance - fine.variance))
    return MomentReport(coarse.mean, coarse.variance, 'quadrature', error, spec,
                        trace={'order': coarse.order, 'I_A': coarse.I_A, 'I_B': coarse.I_B})


# ---------------------------------------------------------------------------
# 三方一致性检查


@dataclass
class SpecVerification:
    """单个系综的三方一致性结果"""
    spec: EnsembleSpec
    mean_exact: float
    variance_exact: float
    mean_quadrature: float
    variance_quadrature: float
    mean_summation: float
    variance_summation: float
    residuals: Dict[str, float] = field(default_factory=dict)
    passed: bool = True
    printed_disagreements: List[str] = field(default_factory=list)

    @property
    def worst_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    def to_dict(self) -> Dict[str, object]:
        return {
            'spec': self.spec.to_dict(),
            'mean_exact': self.mean_exact,
            'variance_exact': self.variance_exact,
            'mean_quadrature': self.mean_quadrature,
            'variance_quadrature': self.variance_quadrature,
            'mean_summation': self.mean_summation,
            'variance_summation': self.variance_summation,
            'residuals': self.residuals,
            'passed': self.passed,
            'printed_disagreements': self.printed_disagreements,
        }


def verify_spec(spec: EnsembleSpec, settings: Optional[Settings] = None,
                order: Optional[int] = None) -> SpecVerification:
    """比较闭式结果、求和预言机与数值积分预言机"""
    settings = settings or Settings()
    tol = settings.tolerances
    m_exact, v_exact = mean_exact(spec), variance_exact(spec)
    m_quad, _ = mean_quadrature(spec, order, settings)
    v_quad, _ = variance_quadrature(spec, order, settings)
    v_sum, trace = variance_summation(spec, settings)
    m_sum = mean_summation(spec)

    result = SpecVerification(spec, m_exact, v_exact, m_quad, v_quad, m_sum, v_sum)
    result.residuals = {
        'variance_exact_summation': abs(v_exact - v_sum),
        'variance_exact_quadrature': abs(v_exact - v_quad),
        'variance_summation_quadrature': abs(v_sum - v_quad),
        'mean_exact_quadrature': abs(m_exact - m_quad),
        'mean_exact_summation': abs(m_exact - m_sum),
    }
    v_limit = max(tol.verify_abs, tol.verify_rel * abs(v_exact))
    result.passed = (all(result.residuals[k] <= v_limit for k in result.residuals if k.startswith('variance'))
                     and all(result.residuals[k] <= tol.mean_abs for k in result.residuals if k.startswith('mean')))
    result.printed_disagreements = [t.label for t in trace if t.agrees is False]
    if not result.passed:
        logger.warning("%s 三方一致性检查失败: %s", spec.label, result.residuals)
    return result


def sweep_specs(case: str, max_n: int, min_n: int = 1) -> List[EnsembleSpec]:
    """列出 min_n <= n <= max_n 范围内的全部系综"""
    if max_n < min_n or min_n < 1:
        raise DomainError(f"扫描范围无效: {min_n}..{max_n}")
    specs = []
    for n in range(min_n, max_n + 1):
        for m in range(1, n + 1):
            if case == 'A':
                specs.append(EnsembleSpec('A', m, n))
            elif case == 'B':
                specs.extend(EnsembleSpec('B', m, n, p) for p in range(m, n + 1))
            else:
                raise DomainError(f"情形必须是 A 或 B: {case}")
    return sorted(specs, key=EnsembleSpec.sort_key)


def verify_sweep(specs: List[EnsembleSpec], settings: Optional[Settings] = None) -> List[SpecVerification]:
    """并行验证一组系综，结果按系综排序"""
    settings = settings or Settings()
    logger.info("验证 %d 个系综，线程数 %d", len(specs), settings.threads)
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        results = list(pool.map(lambda s: verify_spec(s, settings), specs))
    return sorted(results, key=lambda r: r.spec.sort_key())
