"""附录中印刷的求和表示，逐字求值

每个表示都按印刷形式展开为有限项之和：Gamma 比值在对数空间计算，
1/Γ 的极点给出零项，零系数的项在求多伽马函数之前跳过，空和为零。
多伽马函数自变量非正时该项标记为不可求值。
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Optional

from ..utils.summation import CompensatedSum
from .exceptions import DomainError
from .kernel import EnsembleSpec
from .specfun import digamma, gamma_ratio, pochhammer, trigamma

logger = logging.getLogger(__name__)


class NotEvaluable(Exception):
    """印刷形式在该参数处没有意义"""


@dataclass
class PrintedTerm:
    """一个印刷求和表示的求值结果"""
    label: str
    value: Optional[float]
    condition_estimate: float
    evaluable: bool
    note: str = ''


def _psi0(x: float) -> float:
    if x <= 0:
        raise NotEvaluable(f"ψ0({x:g})")
    return digamma(x)


def _psi1(x: float) -> float:
    if x <= 0:
        raise NotEvaluable(f"ψ1({x:g})")
    return trigamma(x)


def _div(num: float, den: float, limit: Optional[float] = None) -> float:
    """num/den；0/0 取给定的极限值"""
    if den == 0:
        if num == 0 and limit is not None:
            return limit
        raise NotEvaluable(f"{num:g}/0")
    return num / den


def _sign(power: int) -> int:
    return -1 if power % 2 else 1


def _gr(num, den) -> float:
    try:
        return gamma_ratio(num, den)
    except DomainError as e:
        raise NotEvaluable(str(e)) from e


# ---------------------------------------------------------------------------
# 情形 A


def _case_a_a1(m: int, a: int) -> Iterator[float]:
    for k in range(m):
        for j in range(2 * k - 2, 2 * k + 1):
            coeff = 2 * _sign(j) * (2 * a + 4 * k + 1) * pochhammer(j + 1, 2) * pochhammer(a + j + 1, 2)
            if coeff == 0:
                continue
            coeff *= _div(_gr([], [2 * k - j + 1, j - 2 * k + 3]), pochhammer(2 * a + j + 2 * k + 1, 3))
            if coeff == 0:
                continue
            d = _psi0(j + 3) - _psi0(2 * a + j + 2 * k + 4) - _psi0(j - 2 * k + 3) + _psi0(a + j + 3)
            yield coeff * (d * d - _psi1(2 * a + j + 2 * k + 4) + _psi1(a + j + 3)
                           - _psi1(j - 2 * k + 3) + _psi1(j + 3))
        for j in range(0, 2 * k - 2):
            coeff = _div(4 * (2 * a + 4 * k + 1) * pochhammer(j + 1, 2) * pochhammer(a + j + 1, 2),
                         pochhammer(2 * k - j - 2, 3) * pochhammer(2 * a + j + 2 * k + 1, 3))
            yield coeff * (_psi0(2 * a + j + 2 * k + 4) - _psi0(a + j + 3)
                           + _psi0(2 * k - j - 2) - _psi0(j + 3))


def _case_a_a2(m: int, a: int) -> Iterator[float]:
    for k in range(m):
        pref = (2 * a + 4 * k + 1) * _gr([2 * k + 1, 2 * a + 2 * k + 1], [2 * a + 4 * k + 4])
        top = 2 * a + 4 * k + 4
        for j in range(2 * k + 1):
            c = 2 * (j + 1) * (2 * k - j + 1) * _gr([a + 2 * k + 2, a + 2 * k + 2],
                                                    [j + 1, a + j + 1, 2 * k - j + 1, a + 2 * k - j + 1])
            if c:
                base = _psi0(a + 2 * k + 2) - _psi0(top)
                yield pref * c * ((base - _psi0(2) + _psi0(2 * k - j + 2))
                                  * (base + _psi0(j + 2) - _psi0(2)) - _psi1(top))
        for j in range(2 * k + 1):
            c = (j + 1) * _gr([a + 2 * k + 1, a + 2 * k + 3], [j, a + j + 1, a - j + 2 * k + 1, 2 * k - j + 1])
            if c:
                yield -pref * c * ((_psi0(a + 2 * k + 1) - _psi0(top) + _psi0(2 * k - j + 2) - _psi0(1))
                                   * (_psi0(a + 2 * k + 3) - _psi0(top) + _psi0(j + 2) - _psi0(3))
                                   - _psi1(top))
        for j in range(2 * k + 1):
            c = (2 * k - j + 1) * _gr([a + 2 * k + 1, a + 2 * k + 3],
                                      [a + j + 1, 2 * k - j, 2 * k - j + a + 1, j + 1])
            if c:
                yield -pref * c * ((_psi0(a + 2 * k + 3) - _psi0(top) + _psi0(2 * k - j + 2) - _psi0(3))
                                   * (_psi0(a + 2 * k + 1) - _psi0(top) + _psi0(j + 2) - _psi0(1))
                                   - _psi1(top))
        for j in range(1, 2 * k):
            for i in range(1, 2 * k - j + 1):
                c = 4 * i * (2 * k - i + 2) * _gr([a + 2 * k - j + 1, a + 2 * k + j + 3],
                                                  [a + i, a + 2 * k - i + 2, j + i + 1, 2 * k - j - i + 1])
                if c:
                    c = _div(c, pochhammer(j, 3))
                    yield pref * c * (_psi0(a + 2 * k + j + 3) - _psi0(top)
                                      + _psi0(2 * k - i + 3) - _psi0(j + 3))


def _case_a_b1(m: int, a: int) -> Iterator[float]:
    for k in range(m):
        bracket = (_psi0(a + 2 * k) + _psi0(2 * a + 2 * k) - 2 * _psi0(2 * a + 4 * k)
                   - 0.5 * (_div(a, a + 2 * k + 1) + _div(a, a + 2 * k) + _div(2, 2 * a + 4 * k + 1)) + 1)
        yield bracket * bracket


def _case_a_b2(m: int, a: int) -> Iterator[float]:
    for k in range(1, m):
        for j in range(1, m - k + 1):
            ratio = _gr([2 * a + 2 * k - 1, 2 * j + 2 * k - 1], [2 * k - 1, 2 * a + 2 * j + 2 * k - 1])
            if not ratio:
                continue
            front = _div(ratio, 2 * (2 * j - 1) ** 2 * j ** 2 * (2 * j + 1) ** 2)
            middle = _div((2 * a + 4 * k - 3) * (2 * a + 4 * j + 4 * k - 3),
                          (a + j + 2 * k - 2) ** 2 * (a + j + 2 * k - 1) ** 2 * (2 * a + 2 * j + 4 * k - 3) ** 2)
            poly = (a * a * (2 * j + 1) + a * (j + 1) * (2 * j + 4 * k - 3)
                    + 2 * j * j + j * (4 * k - 3) + 4 * k * k - 6 * k + 2)
            yield front * middle * poly * poly


# ---------------------------------------------------------------------------
# 情形 B


def _case_b_a1_ab(m: int, a: int, b: int) -> Iterator[float]:
    s = a + b + 2 * m
    pref = -2 * m * (b + m) / s
    for i in range(1, m - 2):
        c = _div((b + i + 1) * pochhammer(i, 2), pochhammer(m - i - 2, 3) * (a + b + i + m + 1))
        yield pref * c * (_psi0(b + i + 2) - _psi0(a + b + i + m + 2) - _psi0(m - i - 2) + _psi0(i + 2))
    pref = (a + b + m) / s * 2 * (a + m)
    for i in range(1, m - 1):
        c = _div((b + i + 1) * pochhammer(i, 2), (m - i - 1) * pochhammer(a + b + i + m, 3))
        yield pref * c * (-_psi0(a + b + i + m + 3) + _psi0(b + i + 2) - _psi0(m - i - 1) + _psi0(i + 2))
    pref = -m * (b + m) / s
    for i in range(m - 3, m):
        c = (b + i + 2) * _sign(i + m) * pochhammer(i + 1, 2)
        if c == 0:
            continue
        c = _div(c * _gr([], [m - i, i - m + 4]), a + b + i + m + 2)
        if c == 0:
            continue
        d = _psi0(i + 3) - _psi0(a + b + i + m + 3) - _psi0(i - m + 4) + _psi0(b + i + 3)
        yield pref * c * (_psi1(b + i + 3) + _psi1(i + 3) - _psi1(i - m + 4)
                          - _psi1(a + b + i + m + 3) + d * d)
    c = -_div((a + m) * (a + b + m) * (b + m) * pochhammer(m - 1, 2), s * pochhammer(s - 1, 3))
    if c:
        top = s + 2
        yield c * (-_psi1(top) + _psi1(b + m + 1) + _psi1(m + 1) - _psi1(1) + _psi0(1) ** 2
                   + (_psi0(b + m + 1) - _psi0(top) + _psi0(m + 1))
                   * (_psi0(b + m + 1) + _psi0(m + 1) - _psi0(top) - 2 * _psi0(1)))


def _case_b_a1(m: int, a: int, b: int) -> Iterator[float]:
    yield from _case_b_a1_ab(m, a, b)
    yield from _case_b_a1_ab(m, b, a)


def _case_b_a2_ab(m: int, a: int, b: int) -> Iterator[float]:
    s = a + b + 2 * m
    top = s + 2
    pref = 2 * (a + m) * (b + m) * (a + b + m + 1) / s
    for i in range(1, m - 1):
        for j in range(1, m - i):
            c = i * (m - i + 1) * _gr([m + 1, a + b + m + 1, a + j + m + 2, b - j + m],
                                      [top, b + i + 1, a - i + m + 2, i + j + 1, m - i - j])
            if c:
                c = _div(c, pochhammer(j, 3))
                yield pref * c * (_psi0(m - i + 2) - _psi0(top) - _psi0(j + 3) + _psi0(a + j + m + 2))
    pref = -2 * (a + b + m) / s
    # 印刷式第二个和式中的 j 未绑定，按 i 读取
    for i in range(1, m):
        c = i * (m - i) * _gr([m + 1, a + b + m + 1], [top, b + i + 1, a - i + m + 1])
        if c:
            yield pref * c * (_psi0(a + i + m + 1) - _psi0(top) + _psi0(m - i + 1) - _psi0(i + 1))


def _case_b_a2(m: int, a: int, b: int) -> Iterator[float]:
    s = a + b + 2 * m
    top = s + 2
    pref = -2 * (a + m) * (b + m) / s
    for i in range(m):
        for j in range(i - 1, i + 2):
            c = _gr([m + 1, a + b + m + 2, a + i - j + m + 1],
                    [a + b + 2 * m + 2, a + i + 2, j + 1, i - j + 2, j - i + 2, m - j])
            if c == 0:
                continue
            c *= _sign(i + j) * (i + 1) * (m - i) * pochhammer(b - i + m + 1, j)
            yield pref * c * (_psi1(top) + (_psi0(a + i - j + m + 1) - _psi0(top) - _psi0(i - j + 2) + _psi0(i + 2))
                              * (_psi0(top) + _psi0(j - i + 2) - _psi0(b - i + j + m + 1) - _psi0(m - i + 1)))
    pref = -2 * (a + b + m) / s
    for i in range(m - 1):
        c = _gr([m + 1, a + m + 1, b + m + 1, a + b + m + 1],
                [a + b + 2 * m + 2, i + 1, a + i + 2, m - i - 1, b - i + m])
        if c:
            yield pref * c * (_psi1(top) + (_psi0(a + m + 1) - _psi0(top) + _psi0(i + 2) - _psi0(1))
                              * (_psi0(top) - _psi0(b + m + 1) - _psi0(m - i) + _psi0(1)))
    yield from _case_b_a2_ab(m, a, b)
    yield from _case_b_a2_ab(m, b, a)


def _case_b_b1(m: int, a: int, b: int) -> Iterator[float]:
    diff = (a - b) * (a + b)
    for k in range(m):
        low, high = 4 * (a + b + 2 * k), 4 * (a + b + 2 * k + 2)
        c_plus = _div(diff, low, 0.0) - diff / high + 0.5
        c_minus = diff / high - _div(diff, low, 0.0) + 0.5
        bracket = (c_plus * _psi0(a + k + 1) + c_minus * _psi0(b + k + 1) + _psi0(a + b + k + 1)
                   - 2 * _psi0(a + b + 2 * k + 2) - _div(a + b, 2 * (a + b + 2 * k), 0.5)
                   - (a + b) / (2 * (a + b + 2 * k + 2)) + 1 / (a + b + 2 * k + 1) + 1)
        yield bracket * bracket


def _case_b_b2(m: int, a: int, b: int) -> Iterator[float]:
    for k in range(1, m):
        c = _div(k * (a + b + k), 2 * (a + k) * (b + k) * (a + b + 2 * k) * pochhammer(a + b + 2 * k - 1, 3))
        inner = (2 * (a + k) * (b + k) * (_psi0(b + k + 1) - _psi0(a + k + 1))
                 + _div((k - 1) * (a - b) * (a + b + 2 * k + 1), a + b + k))
        yield c * inner * inner
    for k in range(1, m - 1):
        for j in range(1, m - k):
            # Γ(a+k)Γ(b+k) 从方括号中提出
            pref = (2 * (a + b + 2 * k - 1) * (a + b + 2 * j + 2 * k + 1)
                    * _gr([j + k + 1, a + b + k, a + k, b + k],
                          [k, a + j + k + 1, b + j + k + 1, a + b + j + k + 1]))
            if pref == 0:
                continue
            den = pochhammer(j, 3) * pochhammer(a + b + j + 2 * k - 1, 3)
            p1 = (a * a * (j + 2) + a * (j + 2) * (b + j + 2 * k) + j * (b + 2 * k + 1)
                  + 2 * k * (b + k) + j * j)
            p2 = (2 * (k - 1) * (a + (b + 1) * (j + 2) + 2 * k - 2)
                  + (b + 1) * (j + 2) * (a + b + j + 1))
            bracket = _div(pochhammer(b + k, j + 1) * p1 - _sign(j) * pochhammer(a + k, j + 1) * p2, den)
            yield pref * bracket * bracket


CASE_A_FORMS: Dict[str, Callable[[int, int], Iterator[float]]] = {
    'A1': _case_a_a1,
    'A2': _case_a_a2,
    'B1': _case_a_b1,
    'B2': _case_a_b2,
}

CASE_B_FORMS: Dict[str, Callable[[int, int, int], Iterator[float]]] = {
    'fA1': _case_b_a1,
    'fA2': _case_b_a2,
    'fB1': _case_b_b1,
    'fB2': _case_b_b2,
}

NOTES = {
    'B1': "括号中 ψ0(a+2k) 在 a=k=0 处发散；a > 0 且 m >= 2 时与精确值不符",
    'fA2': "A2^(a,b) 第二个和式中的 j 按 i 读取；m >= 2 时与精确值不符",
    'fB1': "(a+b)/(2(a+b)) 在 a=b=k=0 处取 1/2",
    'fB2': "m >= 4 时与精确值不符",
}


def _evaluate(label: str, terms: Iterator[float]) -> PrintedTerm:
    acc = CompensatedSum()
    try:
        for term in terms:
            acc.add(term)
    except NotEvaluable as e:
        note = f"不可求值: {e}"
        if label in NOTES:
            note = f"{note}；{NOTES[label]}"
        return PrintedTerm(label, None, 0.0, False, note)
    return PrintedTerm(label, acc.value, acc.condition, True, NOTES.get(label, ''))


def printed_terms(spec: EnsembleSpec) -> Dict[str, PrintedTerm]:
    """逐项计算该系综的全部印刷求和表示

    Args:
        spec: 系综参数

    Returns:
        标签到 PrintedTerm 的映射；情形 A 为 A1、A2、B1、B2，情形 B 为 fA1、fA2、fB1、fB2
    """
    result = {}
    if spec.case == 'A':
        for label, form in CASE_A_FORMS.items():
            result[label] = _evaluate(label, form(spec.m, spec.a))
    else:
        for label, form in CASE_B_FORMS.items():
            result[label] = _evaluate(label, form(spec.m, spec.a, spec.b))
    for term in result.values():
        logger.debug("%s 印刷形式 %s = %s (cond %.3g)", spec.label, term.label, term.value, term.condition_estimate)
    return result
