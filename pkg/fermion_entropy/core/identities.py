"""有限和恒等式的数值验证

每个恒等式登记为 Identity：左右两边按印刷形式逐项求值，
参数由带种子的生成器在恒等式的定义域内抽取。
status 为 verified 的恒等式残差超过容差即记为失败；
unresolved 的恒等式只报告残差，不计入失败。
"""
import json
import logging
import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.summation import CompensatedSum
from .config import Settings
from .exceptions import DomainError
from .specfun import EULER_GAMMA, digamma, gamma_ratio, trigamma

logger = logging.getLogger(__name__)

Params = Dict[str, float]
Side = Callable[[Params], Iterable[float]]

STATUSES = ('verified', 'unresolved')


# ---------------------------------------------------------------------------
# 基本函数


def P0(x: float) -> float:
    return digamma(x)


def P1(x: float) -> float:
    return trigamma(x)


def G(num: Sequence[float], den: Sequence[float] = ()) -> float:
    """Γ 乘积之比"""
    return gamma_ratio(num, den)


def phi(x: float, a: float, b: float, c: float, d: float) -> float:
    """Φ_{a,b,c,d}^{(x)} = Γ(x+c+1)Γ(x+d+1) / (Γ(x+a+1)Γ(x+b+1))"""
    return gamma_ratio([x + c + 1, x + d + 1], [x + a + 1, x + b + 1])


def _div(num: float, den: float) -> float:
    if den == 0:
        raise DomainError(f"除数为零: {num}/0")
    return num / den


def _sign(power: int) -> int:
    return -1 if int(power) % 2 else 1


def hyper_terminating(upper: Sequence[float], lower: Sequence[float]) -> float:
    """单位自变量的终止型超几何级数 pFq(upper; lower; 1)

    级数在第一个由非正整数上参数产生的零因子处截断，
    截断前遇到为零的下参数则报错。
    """
    stops = [-int(u) for u in upper if u <= 0 and float(u).is_integer()]
    if not stops:
        raise DomainError(f"超几何级数不终止: upper={list(upper)}")
    last = min(stops)
    acc = CompensatedSum()
    term = 1.0
    acc.add(term)
    for k in range(last):
        num = 1.0
        for u in upper:
            num *= u + k
        den = float(k + 1)
        for l in lower:
            if l + k == 0:
                raise DomainError(f"下参数 {l} 在第 {k} 项为零")
            den *= l + k
        term *= num / den
        acc.add(term)
    return acc.value


def _rng(p: Params) -> range:
    return range(1, int(p['m']) + 1)


# ---------------------------------------------------------------------------
# 登记表


@dataclass(frozen=True)
class Identity:
    """一个有限和恒等式"""
    id: str
    lhs: Side
    rhs: Side
    generate: Callable[[np.random.Generator], Params]
    requires: Tuple[Tuple[str, Callable[[Params], bool]], ...] = ()
    status: str = 'verified'
    note: str = ''

    def check_domain(self, params: Params) -> None:
        for text, predicate in self.requires:
            if not predicate(params):
                raise DomainError(f"{self.id} 的参数违反定义域 {text}: {params}")


REGISTRY: Dict[str, Identity] = {}


def register(identity: Identity) -> Identity:
    if identity.status not in STATUSES:
        raise DomainError(f"未知的恒等式状态: {identity.status}")
    REGISTRY[identity.id] = identity
    return identity


def _int(rng: np.random.Generator, low: int, high: int) -> int:
    return int(rng.integers(low, high + 1))


def _real(rng: np.random.Generator, low: float, high: float) -> float:
    return float(rng.uniform(low, high))


def _distinct(rng: np.random.Generator, low: float, high: float) -> Tuple[float, float]:
    a = _real(rng, low, high)
    b = _real(rng, low, high)
    while abs(a - b) < 0.1:
        b = _real(rng, low, high)
    return a, b


M_OK = ('m 为正整数', lambda p: p['m'] >= 1 and float(p['m']).is_integer())
A_NONNEG = ('a >= 0', lambda p: p['a'] >= 0)
B_NONNEG = ('b >= 0', lambda p: p['b'] >= 0)
A_POS = ('a > 0', lambda p: p['a'] > 0)
B_POS = ('b > 0', lambda p: p['b'] > 0)
C_POS = ('c > 0', lambda p: p['c'] > 0)
A_NEQ_B = ('a != b', lambda p: p['a'] != p['b'])
C_POS_INT = ('c 为正整数', lambda p: p['c'] >= 1 and float(p['c']).is_integer())
D_POS_INT = ('d 为正整数', lambda p: p['d'] >= 1 and float(p['d']).is_integer())
N_GE_M = ('n >= m 且为整数', lambda p: p['n'] >= p['m'] and float(p['n']).is_integer())


def _gen_mab(rng):
    return {'m': _int(rng, 1, 12), 'a': _real(rng, 0.0, 10.0), 'b': _real(rng, 0.0, 10.0)}


def _gen_mabc(rng):
    return {'m': _int(rng, 1, 12), 'a': _real(rng, 0.0, 10.0), 'b': _real(rng, 0.0, 10.0),
            'c': _real(rng, 0.0, 10.0)}


def _gen_ma(rng):
    return {'m': _int(rng, 1, 15), 'a': _real(rng, 0.0, 10.0)}


def _gen_ma_pos(rng):
    return {'m': _int(rng, 1, 15), 'a': _real(rng, 0.1, 10.0)}


def _gen_m_distinct(rng):
    a, b = _distinct(rng, 0.1, 10.0)
    return {'m': _int(rng, 1, 12), 'a': a, 'b': b}


def _gen_mn(rng):
    m = _int(rng, 1, 12)
    return {'m': m, 'n': m + _int(rng, 0, 10)}


# ---------------------------------------------------------------------------
# 引理与辅助恒等式

def _lemma_den(p: Params, i: int) -> float:
    """1 / (Γ(i)Γ(a+i)Γ(m−i+1)Γ(b−i+m+1))"""
    a, b, m = p['a'], p['b'], p['m']
    return G([], [i, a + i, m - i + 1, b - i + m + 1])


register(Identity(
    'lemma1',
    lambda p: (G([], [i, p['a'] + i, p['m'] + 1 - i, p['m'] + p['b'] + 1 - i]) / (p['c'] + i) for i in _rng(p)),
    lambda p: (G([p['c'] - i + p['m'] + 1, p['a'] + p['b'] - i + 2 * p['m']],
                 [p['b'] + p['m'], p['c'] + p['m'] + 1, p['a'] + p['b'] + p['m'],
                  p['m'] - i + 1, p['a'] - i + p['m'] + 1]) for i in _rng(p)),
    _gen_mabc,
    (M_OK, A_NONNEG, B_NONNEG, ('c >= 0', lambda p: p['c'] >= 0)),
))

register(Identity(
    'ofgi',
    lambda p: (_lemma_den(p, i) for i in _rng(p)),
    lambda p: [G([p['a'] + p['b'] + 2 * p['m'] - 1],
                 [p['m'], p['a'] + p['m'], p['b'] + p['m'], p['a'] + p['b'] + p['m']])],
    _gen_mab,
    (M_OK, A_NONNEG, B_NONNEG),
))


def _gen_lemma2(rng):
    params = _gen_mab(rng)
    params['c'] = _int(rng, 1, 8)
    return params


register(Identity(
    'lemma2',
    lambda p: (G([], [p['c'] + i, p['a'] + i, p['m'] + 1 - i, p['m'] + p['b'] + 1 - i]) for i in _rng(p)),
    lambda p: (G([p['m'] + p['a'] + p['b'] + i - 1, p['m'] + p['c'] - i],
                 [p['m'] + p['b'], p['m'] + p['a'] + p['b'], p['c'], p['m'] + p['c'],
                  p['a'] + i, p['m'] - i + 1]) for i in _rng(p)),
    _gen_lemma2,
    (M_OK, A_NONNEG, B_NONNEG, C_POS_INT),
))


def _gen_lemma3(rng):
    params = _gen_lemma2(rng)
    params['a'] = _real(rng, 0.1, 10.0)
    return params


def _lemma3_rhs(p: Params) -> Iterable[float]:
    a, b, c, m = p['a'], p['b'], p['c'], p['m']
    for i in _rng(p):
        yield G([a - i + m, b + c + i + m], [a, a + m, 1 + b + m, b + c + m, c + i, m - i + 1]) / i
    yield (P0(a) - P0(a + m)) * G([], [a, c, m + 1, b + m + 1])


register(Identity(
    'lemma3',
    lambda p: (G([], [p['c'] + i, p['a'] + i, p['m'] - i + 1, p['b'] - i + p['m'] + 1]) / i for i in _rng(p)),
    _lemma3_rhs,
    _gen_lemma3,
    (M_OK, A_POS, B_NONNEG, C_POS_INT),
))


def _gen_lemma4(rng):
    params = _gen_lemma2(rng)
    params['d'] = _int(rng, 1, 8)
    return params


def _lemma4_rhs(p: Params) -> Iterable[float]:
    a, b, c, d, m = p['a'], p['b'], p['c'], p['d'], p['m']
    for i in _rng(p):
        yield G([c + d + i - 1, a + b - i + 2 * m], [d, a + m, a + b + m, c + d + m, c + i, b - i + m + 1])
        yield G([c + d + i - 1, a + b - i + 2 * m], [c, b + m, a + b + m, c + d + m, d + i, a - i + m + 1])


register(Identity(
    'lemma4',
    lambda p: (G([], [p['c'] + i, p['a'] + i, p['d'] + p['m'] - i + 1, p['b'] + p['m'] - i + 1]) for i in _rng(p)),
    _lemma4_rhs,
    _gen_lemma4,
    (M_OK, A_NONNEG, B_NONNEG, C_POS_INT, D_POS_INT),
))


def _gen_lemma5(rng):
    """交错和的抵消随 m、a 增长，参数范围取小"""
    return {'m': _int(rng, 1, 8), 'a': _real(rng, 0.0, 5.0), 'c': _real(rng, 0.0, 5.0)}


def _lemma5_lhs(p: Params) -> Iterable[float]:
    a, c, m = p['a'], p.get('c', 0.0), p['m']
    for i in _rng(p):
        yield _sign(i) * G([a - i + m + 1], [m - i + 1]) * (1 / (a + c - i + 2 * m + 1) - 1 / (c + i))


def _lemma5_rhs(p: Params) -> Iterable[float]:
    a, c, m = p['a'], p['c'], p['m']
    pref = G([a + c + m + 1], [c + m + 1])
    for i in _rng(p):
        x = m - i
        yield pref * phi(x, 0, a + c, a, c) / (a + c - 2 * i + 2 * m + 1)
        yield pref * a * phi(x, 1, a + c + 1, a, c)
        yield -pref * phi(x, 1, a + c, a + 1, c) / (a + c - 2 * i + 2 * m + 2)


register(Identity(
    'lemma5',
    _lemma5_lhs,
    _lemma5_rhs,
    _gen_lemma5,
    (M_OK, A_NONNEG, ('c >= 0', lambda p: p['c'] >= 0)),
))

register(Identity(
    'lemma5c0',
    _lemma5_lhs,
    lambda p: [G([p['a'] + p['m'] + 1], [p['m'] + 1])
               * (P0(p['a'] + 2 * p['m'] + 1) - P0(p['a'] + p['m'] + 1))],
    lambda rng: {'m': _int(rng, 1, 8), 'a': _real(rng, 0.0, 5.0)},
    (M_OK, A_NONNEG),
))


def _lemma6_lhs(p: Params) -> Iterable[float]:
    a, b, c, m = p['a'], p['b'], p['c'], p['m']
    for i in _rng(p):
        yield phi(m - i, 0, a, b, a + b) * (1 / (a + b + c - i + 2 * m + 1) - 1 / (c + i))


def _lemma6_rhs(p: Params) -> Iterable[float]:
    a, b, c, m = p['a'], p['b'], p['c'], p['m']
    for i in _rng(p):
        # Φ^{(m+c)}_{0,a,b,a+b} · Φ^{(c+i−1)}_{b,a+b,0,a} 合并为一个 Γ 比值
        outer = G([m + c + b + 1, m + c + a + b + 1, c + i, c + i + a],
                  [m + c + 1, m + c + a + 1, c + i + b, c + i + a + b])
        bracket = (1 / (a + b + c + 2 * i - 1)
                   - b * (a + b) / (a * i * (a + b + c + i))
                   - b * (a - b) / (a * (a + i) * (b + c + i))
                   + (b + i) * (a + b + i) / (i * (a + i) * (a + b + c + 2 * i))
                   - (a + b + 2 * i - 2) / ((b + i - 1) * (a + b + i - 1)))
        yield outer * phi(i - 1, 0, a, b, a + b) * bracket
    yield phi(m - 1, 0, a, b, a + b) / b


register(Identity(
    'lemma6',
    _lemma6_lhs,
    _lemma6_rhs,
    lambda rng: {'m': _int(rng, 1, 12), 'a': _real(rng, 0.1, 8.0), 'b': _real(rng, 0.1, 8.0),
                 'c': _real(rng, 0.0, 8.0)},
    (M_OK, A_POS, B_POS, ('c >= 0', lambda p: p['c'] >= 0)),
))


def _lemma6i_lhs(p: Params) -> Iterable[float]:
    a1, b1, c1, d1, m = p['a1'], p['b1'], p['c1'], p['d1'], p['m']
    for j in _rng(p):
        yield (c1 - b1) * phi(m - j, a1, b1 + 1, c1, d1 + 1)
        yield (d1 - a1 + 1) * phi(m - j, a1, b1, c1, d1)


register(Identity(
    'lemma6I',
    _lemma6i_lhs,
    lambda p: [phi(p['m'], p['a1'] - 1, p['b1'], p['c1'], p['d1']),
               -phi(0, p['a1'] - 1, p['b1'], p['c1'], p['d1'])],
    lambda rng: {'m': _int(rng, 1, 12), 'a1': _real(rng, 0.1, 6.0), 'b1': _real(rng, 0.0, 6.0),
                 'c1': _real(rng, 0.0, 6.0), 'd1': _real(rng, 0.0, 6.0)},
    (M_OK, ('a1 > 0', lambda p: p['a1'] > 0), ('b1, c1, d1 >= 0', lambda p: min(p['b1'], p['c1'], p['d1']) >= 0)),
))

register(Identity(
    'dumys',
    lambda p: [G([p['i']], [p['c'] + p['i']])],
    lambda p: (_sign(j + 1) * G([], [j, p['c'] - j + 1]) / (p['i'] + j - 1) for j in range(1, int(p['c']) + 1)),
    lambda rng: {'c': _int(rng, 1, 12), 'i': _real(rng, 0.5, 15.0)},
    (C_POS_INT, ('i > 0', lambda p: p['i'] > 0)),
))


def _gen_gauss(rng):
    b = _real(rng, 0.0, 5.0)
    return {'a': -_int(rng, 0, 10), 'b': b, 'c': b + _real(rng, 0.1, 6.0)}


register(Identity(
    'gauss2f1',
    lambda p: [hyper_terminating([p['a'], p['b']], [p['c']])],
    lambda p: [G([p['c'], p['c'] - p['a'] - p['b']], [p['c'] - p['a'], p['c'] - p['b']])],
    _gen_gauss,
    (('a 为非正整数', lambda p: p['a'] <= 0 and float(p['a']).is_integer()),
     ('c > a + b', lambda p: p['c'] > p['a'] + p['b']),
     C_POS),
))

register(Identity(
    'chu_vandermonde',
    lambda p: (G([p['n'] - i + 1], [p['m'] - i + 1]) for i in _rng(p)),
    lambda p: [G([p['n'] + 1], [p['m']]) / (p['n'] - p['m'] + 1)],
    _gen_mn,
    (M_OK, N_GE_M),
))


# ---------------------------------------------------------------------------
# 单位自变量的变换公式


def _gen_tf(rng):
    return {'m': _int(rng, 1, 12), 'a': _real(rng, 0.1, 10.0), 'b': _real(rng, 0.1, 10.0),
            'c': _real(rng, 0.1, 10.0)}


register(Identity(
    'tf1',
    lambda p: [hyper_terminating([p['c'] + 1, 1 - p['m'], 1 - p['b'] - p['m']], [p['a'] + 1, p['c'] + 2])],
    lambda p: [(p['c'] + 1) / (p['c'] + p['m'])
               * G([p['a'] + 1, p['a'] + p['b'] + 2 * p['m'] - 1], [p['a'] + p['m'], p['a'] + p['b'] + p['m']])
               * hyper_terminating([1, 1 - p['m'], 1 - p['a'] - p['m']],
                                   [2 - p['a'] - p['b'] - 2 * p['m'], 1 - p['c'] - p['m']])],
    _gen_tf,
    (M_OK, A_POS, B_POS, C_POS),
))

register(Identity(
    'tf2',
    lambda p: [hyper_terminating([1, 1 - p['m'], 1 - p['b'] - p['m']], [p['a'] + 1, p['c'] + 1])],
    lambda p: [p['c'] / (p['c'] + p['m'] - 1)
               * hyper_terminating([1, 1 - p['m'], p['a'] + p['b'] + p['m']], [p['a'] + 1, 2 - p['c'] - p['m']])],
    _gen_tf,
    (M_OK, A_POS, B_POS, C_POS),
))


def _gen_tf3(rng):
    params = _gen_tf(rng)
    params['a'] = _real(rng, 1.0, 10.0)
    return params


register(Identity(
    'tf3',
    lambda p: [hyper_terminating([1, 1, 1 - p['m'], 1 - p['b'] - p['m']], [2, p['a'] + 1, p['c'] + 1])],
    lambda p: [p['a'] * (p['b'] + p['c'] + p['m']) / ((p['a'] + p['m'] - 1) * (p['b'] + p['m']))
               * hyper_terminating([1, 1, 1 - p['m'], p['b'] + p['c'] + p['m'] + 1],
                                   [2, p['c'] + 1, 2 - p['a'] - p['m']]),
               p['a'] * p['c'] * (P0(p['a']) - P0(p['a'] + p['m'])) / (p['m'] * (p['b'] + p['m']))],
    _gen_tf3,
    (M_OK, ('a >= 1', lambda p: p['a'] >= 1), B_POS, C_POS),
))


def _tf4_lhs(p: Params) -> Iterable[float]:
    a, b, c, d, m = p['a'], p['b'], p['c'], p['d'], p['m']
    yield (hyper_terminating([1, 1 - b - m, 1 - d - m], [a + 1, c + 1])
           * G([], [a + 1, c + 1, b + m, d + m]))


def _tf4_rhs(p: Params) -> Iterable[float]:
    a, b, c, d, m = p['a'], p['b'], p['c'], p['d'], p['m']
    yield hyper_terminating([1, 1 - b, 1 - d], [a + m + 1, c + m + 1]) * G([], [b, d, a + m + 1, c + m + 1])
    scale = -1 / (a + b + m - 1)
    yield scale * (hyper_terminating([1, 1 - a, c + d + m], [2 - a - b - m, d + m + 1])
                   * G([], [a, c, b + m, d + m + 1]))
    yield scale * (hyper_terminating([1, 1 - b, c + d + m], [2 - a - b - m, c + m + 1])
                   * G([], [b, d, a + m, c + m + 1]))
    pref = G([c + d, a + b + 2 * m - 1], [c, d, a + m, b + m, a + b + m, c + d + m])
    yield pref / d * hyper_terminating([1, c + d, 1 - a - m], [d + 1, 2 - a - b - 2 * m])
    yield pref / c * hyper_terminating([1, c + d, 1 - b - m], [c + 1, 2 - a - b - 2 * m])


register(Identity(
    'tf4',
    _tf4_lhs,
    _tf4_rhs,
    lambda rng: {'m': _int(rng, 1, 5), 'a': _int(rng, 1, 4), 'b': _int(rng, 1, 4),
                 'c': _real(rng, 0.1, 4.0), 'd': _int(rng, 1, 4)},
    (M_OK, ('a, b, d 为正整数', lambda p: all(p[k] >= 1 and float(p[k]).is_integer() for k in 'abd')), C_POS),
    note="两边的终止型级数需要整数 a、b、d",
))


# ---------------------------------------------------------------------------
# 已有框架的恒等式


register(Identity(
    'B1',
    lambda p: (P0(i + p['a']) for i in _rng(p)),
    lambda p: [(p['m'] + p['a']) * P0(p['m'] + p['a'] + 1), -p['a'] * P0(p['a'] + 1), -p['m']],
    _gen_ma,
    (M_OK, A_NONNEG),
))


def _b3_rhs(p: Params) -> Iterable[float]:
    a, m = p['a'], p['m']
    yield -0.5 * (a - m - 1) * (a + m) * P0(a + m + 1)
    yield 0.5 * (a - 1) * a * P0(a + 1)
    yield -0.25 * m * (-2 * a + m + 3)


register(Identity(
    'B3',
    lambda p: (i * P0(i + p['a']) for i in _rng(p)),
    _b3_rhs,
    _gen_ma,
    (M_OK, A_NONNEG),
))


def _b31_rhs(p: Params) -> Iterable[float]:
    a, m = p['a'], p['m']
    yield (2 * a ** 3 - 3 * a ** 2 + a + 2 * m ** 3 + 3 * m ** 2 + m) / 6 * P0(a + m + 1)
    yield -a * (2 * a ** 2 - 3 * a + 1) / 6 * P0(a + 1)
    yield -m * (12 * a ** 2 - 6 * a * m - 24 * a + 4 * m ** 2 + 15 * m + 17) / 36


register(Identity(
    'B31',
    lambda p: (i * i * P0(i + p['a']) for i in _rng(p)),
    _b31_rhs,
    _gen_ma,
    (M_OK, A_NONNEG),
))


def _b32_rhs(p: Params) -> Iterable[float]:
    a, m = p['a'], p['m']
    yield -(a ** 4 - 2 * a ** 3 + a ** 2 - m ** 4 - 2 * m ** 3 - m ** 2) / 4 * P0(a + m + 1)
    yield (a - 1) ** 2 * a ** 2 / 4 * P0(a + 1)
    yield -m * (-12 * a ** 3 + 6 * a ** 2 * m + 30 * a ** 2 - 4 * a * m ** 2 - 18 * a * m - 26 * a
                + 3 * m ** 3 + 14 * m ** 2 + 21 * m + 10) / 48


register(Identity(
    'B32',
    lambda p: (i ** 3 * P0(i + p['a']) for i in _rng(p)),
    _b32_rhs,
    _gen_ma,
    (M_OK, A_NONNEG),
))

register(Identity(
    'B2',
    lambda p: (P1(i + p['a']) for i in _rng(p)),
    lambda p: [(p['m'] + p['a']) * P1(p['m'] + p['a'] + 1), -p['a'] * P1(p['a'] + 1),
               P0(p['m'] + p['a'] + 1), -P0(p['a'] + 1)],
    _gen_ma,
    (M_OK, A_NONNEG),
))


def _b30_rhs(p: Params) -> Iterable[float]:
    a, m = p['a'], p['m']
    yield (a + m) * P0(a + m) ** 2
    yield -(2 * a + 2 * m - 1) * P0(a + m)
    yield -a * P0(a) ** 2
    yield (2 * a - 1) * P0(a)
    yield 2 * m


register(Identity(
    'B30',
    lambda p: (P0(i + p['a']) ** 2 for i in _rng(p)),
    _b30_rhs,
    _gen_ma_pos,
    (M_OK, A_POS),
))

register(Identity(
    'B4',
    lambda p: (P0(i + p['a']) / (i + p['a']) for i in _rng(p)),
    lambda p: [0.5 * (P1(p['m'] + p['a'] + 1) - P1(p['a'] + 1)),
               0.5 * (P0(p['m'] + p['a'] + 1) ** 2 - P0(p['a'] + 1) ** 2)],
    _gen_ma,
    (M_OK, A_NONNEG),
))

register(Identity(
    'B5',
    lambda p: (P0(p['m'] + 1 - i) / i for i in _rng(p)),
    lambda p: [P0(p['m'] + 1) ** 2, -P0(1) * P0(p['m'] + 1), P1(p['m'] + 1), -P1(1)],
    lambda rng: {'m': _int(rng, 1, 15)},
    (M_OK,),
))

register(Identity(
    'B6',
    lambda p: (P0(p['m'] + 1 + i) / i for i in _rng(p)),
    lambda p: [P0(p['m'] + 1) ** 2, -P0(1) * P0(p['m'] + 1), -0.5 * P1(p['m'] + 1), 0.5 * P1(1)],
    lambda rng: {'m': _int(rng, 1, 15)},
    (M_OK,),
))


def _ratio_sum(p: Params) -> Iterable[float]:
    """Σ_{i=1}^{m−1} ψ0(a+i)/(b+i)"""
    a, b = p['a'], p['b']
    return (P0(a + i) / (b + i) for i in range(1, int(p['m'])))


def _b7_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    for term in _ratio_sum(p):
        yield (b - a) * term
    yield -a * P0(a + 1) * P0(b + 1)
    yield (m + a) * P0(m + a) * P0(m + b)
    yield a * P0(a + 1)
    yield -(m + a - 1) * P0(m + a)
    yield -(m + b) * P0(m + b)
    yield (b + 1) * P0(b + 1)
    yield 2 * m - 2


register(Identity(
    'B7',
    lambda p: (P0(i + p['a']) * P0(i + p['b']) for i in _rng(p)),
    _b7_rhs,
    _gen_m_distinct,
    (M_OK, A_NONNEG, B_NONNEG, A_NEQ_B),
))


def _b71_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    for term in _ratio_sum(p):
        yield 0.5 * (a - b) * (a + b - 1) * term
    yield -0.25 * a * (a + 2 * b - 3) * P0(a + 1)
    yield -0.25 * (b + 1) * (2 * a + b - 2) * P0(b + 1)
    yield 0.5 * (a - 1) * a * P0(a + 1) * P0(b + 1)
    yield 0.25 * (a + m - 1) * (a + 2 * b - m - 2) * P0(a + m)
    yield 0.25 * (b + m) * (2 * a + b - m - 1) * P0(b + m)
    yield -0.5 * (a * a - a - m * (m + 1)) * P0(a + m) * P0(b + m)
    yield -0.25 * (m - 1) * (3 * a + 3 * b - m - 4)


register(Identity(
    'B71',
    lambda p: (i * P0(i + p['a']) * P0(i + p['b']) for i in _rng(p)),
    _b71_rhs,
    _gen_m_distinct,
    (M_OK, A_NONNEG, B_NONNEG, A_NEQ_B),
    note="比值和的系数取 (a−b)(a+b−1)/2；印刷的 (b−a+1)(a−b)/2 在 m >= 2 时不成立",
))


def _b72_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    for term in _ratio_sum(p):
        yield (a - b) * (3 * a * a + 2 * a * b - 4 * a - 2 * b * b - b + 1) / 6 * term
    yield -(-a * a * (5 * b + 2) + 3 * a ** 3 + a * (5 * b - 1) - m * (2 * m * m + 3 * m + 1)) / 6 \
        * P0(a + m) * P0(b + m)
    yield (a - 1) * a * (3 * a - 5 * b + 1) / 6 * P0(a + 1) * P0(b + 1)
    yield -(-(2 * b - 1) * m * m / 12
            + m * (24 * a * a - 24 * a * b - 24 * a + 12 * b * b + 12 * b - 1) / 36
            + (a - 1) * (28 * a * a - 18 * a * b - 5 * a + 6 * b + 12 * b * b + 6) / 36
            + (a - 1) * (a - b) / (3 * (b + m - 1)) + m ** 3 / 9) * P0(a + m)
    # 印刷系数中 "4m³12a²b" 按 4m³ + 12a²b 读取
    yield -(4 * m ** 3 + 12 * a * a * b - 3 * (2 * a - 1) * m * m + (12 * a * a - 12 * a - 1) * m
            - 30 * a * a + 6 * a * b * b - 12 * a * b + 30 * a + 4 * b ** 3 - 3 * b * b - b) / 36 * P0(b + m)
    yield a * (28 * a * a - 9 * a * (2 * b + 1) + 12 * b * b - 13) / 36 * P0(a + 1)
    yield (6 * a * a * (2 * b - 3) + 6 * a * (b * b - 2 * b + 2) + 4 * b ** 3 - 3 * b * b - b + 6) / 36 * P0(b + 1)
    yield 2 * m ** 3 / 27 - 5 * m * m * (a + b - 1) / 36
    yield (-40 * a * a + 12 * a * b + 51 * a - 16 * b * b + 3 * b - 16) / 36
    yield m * (120 * a * a - 36 * a * b - 138 * a + 48 * b * b + 6 * b + 25) / 108
    yield (a - 1) / (3 * (b + m - 1)) - (a - 1) / (3 * (a + m - 1))


register(Identity(
    'B72',
    lambda p: (i * i * P0(i + p['a']) * P0(i + p['b']) for i in _rng(p)),
    _b72_rhs,
    _gen_m_distinct,
    (M_OK, A_NONNEG, B_NONNEG, A_NEQ_B),
    status='unresolved',
    note="印刷系数缺失运算符，按 4m³ + 12a²b 读取后与逐项求和不符",
))


def _b9_rhs(p: Params) -> Iterable[float]:
    a, m = p['a'], p['m']
    for i in _rng(p):
        yield -P0(i + a - m) / i
    yield 0.5 * (P1(a + 1) - P1(a - m))
    yield (P0(a - m) + P0(a + 1)) * (P0(m + 1) - P0(1))
    yield 0.5 * (P0(a - m) - P0(a + 1)) ** 2


def _gen_b9(rng):
    m = _int(rng, 1, 12)
    return {'m': m, 'a': m + _real(rng, 0.1, 10.0)}


register(Identity(
    'B9',
    lambda p: (P0(p['a'] + 1 - i) / i for i in _rng(p)),
    _b9_rhs,
    _gen_b9,
    (M_OK, ('a > m', lambda p: p['a'] > p['m'])),
))


def _b12c1_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    yield P0(m + a + 1) * P0(m + b + 1)
    yield -P0(a + 1) * P0(b + 1)
    yield (P0(m + a + 1) - P0(m + b + 1) - P0(a + 1) + P0(b + 1)) / (a - b)


register(Identity(
    'B12c1',
    lambda p: (P0(i + p['b']) / (i + p['a']) + P0(i + p['a']) / (i + p['b']) for i in _rng(p)),
    _b12c1_rhs,
    _gen_m_distinct,
    (M_OK, A_NONNEG, B_NONNEG, A_NEQ_B),
))


def _b11ic_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    for i in _rng(p):
        yield P0(b + i) / i
    for i in range(1, int(a) + 1):
        yield -P0(b + i + m) / (b + i - 1)
    yield 0.5 * ((P0(a + b) - P0(b)) * (P0(a + b) + P0(b) + 2 * (P0(m + 1) - P0(1)))
                 - P1(a + b) + P1(b))


register(Identity(
    'B11ic',
    lambda p: (P0(p['a'] + p['b'] + i) / i for i in _rng(p)),
    _b11ic_rhs,
    lambda rng: {'m': _int(rng, 1, 12), 'a': _int(rng, 1, 10), 'b': _real(rng, 0.1, 10.0)},
    (M_OK, ('a 为正整数', lambda p: p['a'] >= 1 and float(p['a']).is_integer()), B_POS),
))


def _b12c2_lhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    for i in _rng(p):
        yield P0(a + b + i + m) / (b + i)
        yield P0(a + i) / (b + i)
        yield P0(a + b + 2 * i) / (a + i)
        yield -P0(a + b + i) / (a + i)
        yield -P0(a + b + 2 * i) / (b + i)


def _b12c2_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    yield P0(a / 2 + b / 2 + m) / (b - a)
    yield -(a + b + m) * P0(a + b + m) / (b * (a + m))
    yield P0(a + b + 2 * m) / (a + m)
    yield P0(a + m) * (P0(b + m + 1) - P0(b) - 1 / (b - a))
    yield a * P0(a) / (b * (b - a))
    yield P0(a + b) / b
    yield -P0(a / 2 + b / 2) / (b - a)


register(Identity(
    'B12c2',
    _b12c2_lhs,
    _b12c2_rhs,
    _gen_m_distinct,
    (M_OK, A_POS, B_POS, A_NEQ_B),
))


def _b12c3_lhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    for i in _rng(p):
        yield P0(a + b + i + m) / (a + i)
        yield P0(a + b + i + m) / (b + i)
        yield -P0(a + b + i) / (a + i)
        yield -P0(a + b + i) / (b + i)


def _b12c3_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    yield (a + b + 2 * m) * P0(a + b + 2 * m) / ((a + m) * (b + m))
    yield -(1 / (a + m) + 1 / a + 1 / (b + m) + 1 / b) * P0(a + b + m)
    yield (1 / a + 1 / b) * P0(a + b)
    yield (P0(a + m) - P0(a)) * (P0(b + m) - P0(b))


register(Identity(
    'B12c3',
    _b12c3_lhs,
    _b12c3_rhs,
    _gen_m_distinct,
    (M_OK, A_POS, B_POS, A_NEQ_B),
))

register(Identity(
    'B20',
    lambda p: (G([p['n'] - i + 1], [p['m'] - i + 1]) for i in _rng(p)),
    lambda p: [G([p['n'] + 1], [p['m']]) / (p['n'] - p['m'] + 1)],
    _gen_mn,
    (M_OK, N_GE_M),
))

register(Identity(
    'B21',
    lambda p: (G([p['n'] - i + 1], [p['m'] - i + 1]) / i for i in _rng(p)),
    lambda p: [G([p['n'] + 1], [p['m'] + 1]) * (P0(p['n'] + 1) - P0(p['n'] - p['m'] + 1))],
    _gen_mn,
    (M_OK, N_GE_M),
))


def _b22_rhs(p: Params) -> Iterable[float]:
    m, n = p['m'], p['n']
    pref = G([n + 1], [m + 1])
    for i in _rng(p):
        yield pref * P0(i + n - m) / i
    yield pref * 0.5 * (P1(n - m + 1) - P1(n + 1) + P0(n - m + 1) ** 2 - P0(n + 1) ** 2)
    yield pref * P0(n - m) * (-P0(n - m + 1) + P0(n + 1) - P0(m + 1) + P0(1))


def _gen_b22(rng):
    m = _int(rng, 1, 12)
    return {'m': m, 'n': m + _int(rng, 1, 10)}


register(Identity(
    'B22',
    lambda p: (G([p['n'] - i + 1], [p['m'] - i + 1]) / (i * i) for i in _rng(p)),
    _b22_rhs,
    _gen_b22,
    (M_OK, ('n > m 且为整数', lambda p: p['n'] > p['m'] and float(p['n']).is_integer())),
))


def _gen_b201(rng):
    while True:
        m = _int(rng, 1, 10)
        params = {'m': m, 'n': m + _int(rng, 0, 10), 'a': _int(rng, 1, 8)}
        if params['n'] - params['m'] - params['a'] + 1 != 0:
            return params


B201_DOMAIN = (M_OK, N_GE_M, ('a 为正整数', lambda p: p['a'] >= 1 and float(p['a']).is_integer()),
               ('n − m − a + 1 != 0', lambda p: p['n'] - p['m'] - p['a'] + 1 != 0))

register(Identity(
    'B201',
    lambda p: (G([p['n'] - i + 1], [p['m'] + p['a'] - i + 1]) for i in _rng(p)),
    lambda p: [(G([p['n'] + 1], [p['a'] + p['m']]) - G([p['n'] - p['m'] + 1], [p['a']]))
               / (p['n'] - p['m'] - p['a'] + 1)],
    _gen_b201,
    B201_DOMAIN,
))


def _b202_rhs(p: Params) -> Iterable[float]:
    a, m, n = p['a'], p['m'], p['n']
    gap = 1 - a - m + n
    yield G([n + 1], [a + m]) * (P0(a + m) - 1 / gap) / gap
    yield -G([n - m + 1], [a]) * (P0(a) - 1 / gap) / gap


register(Identity(
    'B202',
    lambda p: (G([p['n'] - i + 1], [p['m'] + p['a'] - i + 1]) * P0(p['m'] + p['a'] - i + 1) for i in _rng(p)),
    _b202_rhs,
    _gen_b201,
    B201_DOMAIN,
))


# ---------------------------------------------------------------------------
# 新框架的附加恒等式


def _full_ratio(p: Params) -> float:
    """Γ(a+b+2m−1) / (Γ(m)Γ(a+m)Γ(b+m)Γ(a+b+m))"""
    a, b, m = p['a'], p['b'], p['m']
    return G([a + b + 2 * m - 1], [m, a + m, b + m, a + b + m])


def _inner(p: Params, den_shift: str, power: int = 1) -> Iterable[Tuple[int, float]]:
    """(i, Γ(a+b−i+2m−1)/(Γ(x−i+m) i^power))，x 为 a 或 b"""
    a, b, m = p['a'], p['b'], p['m']
    x = a if den_shift == 'a' else b
    for i in range(1, int(m)):
        yield i, G([a + b - i + 2 * m - 1], [x - i + m]) / i ** power


def _bn0_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    yield _full_ratio(p) * (P1(a + b + 2 * m - 1) - P1(a + b + m) - P1(a + m)
                            + (P0(a + b + m) - P0(a + b + 2 * m - 1) + P0(a + m)) ** 2)


register(Identity(
    'Bn0',
    lambda p: ((P0(p['a'] + i) ** 2 - P1(p['a'] + i)) * _lemma_den(p, i) for i in _rng(p)),
    _bn0_rhs,
    _gen_mab,
    (M_OK, A_NONNEG, B_NONNEG),
))


def _bn1_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    pref = G([], [m, b + m, a + b + m])
    for _, term in _inner(p, 'a'):
        yield -pref * term
    yield P0(m) * _full_ratio(p)


register(Identity(
    'Bn1',
    lambda p: (P0(i) * _lemma_den(p, i) for i in _rng(p)),
    _bn1_rhs,
    _gen_mab,
    (M_OK, A_NONNEG, B_NONNEG),
))


def _bn2_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    pref = G([], [m, b + m, a + b + m])
    for i, term in _inner(p, 'a'):
        yield pref * term * (-P0(a + b + m) + P0(a + b - i + 2 * m - 1) - P0(b + m))
    yield _full_ratio(p) * P0(m) * (P0(a + b + m) - P0(a + b + 2 * m - 1) + P0(b + m))


register(Identity(
    'Bn2',
    lambda p: (P0(i) * P0(p['b'] - i + p['m'] + 1) * _lemma_den(p, i) for i in _rng(p)),
    _bn2_rhs,
    _gen_mab,
    (M_OK, A_NONNEG, B_NONNEG),
))


def _bn3_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    pref = G([], [m, b + m, a + b + m])
    for i, term in _inner(p, 'a'):
        yield pref * term * (-P0(a + b + m) + P0(a + b - i + 2 * m - 1) - P0(a - i + m))
    yield _full_ratio(p) * P0(m) * (P0(a + b + m) - P0(a + b + 2 * m - 1) + P0(a + m))


register(Identity(
    'Bn3',
    lambda p: (P0(i) * P0(p['a'] + i) * _lemma_den(p, i) for i in _rng(p)),
    _bn3_rhs,
    _gen_mab,
    (M_OK, A_NONNEG, B_NONNEG),
))


def _bn4_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    pref = 2 * G([], [m, b + m, a + b + m])
    for i, term in _inner(p, 'a'):
        yield pref * term * (P0(i) - P0(m) - P0(1))
    yield _full_ratio(p) * (P0(m) ** 2 - P1(m))


register(Identity(
    'Bn4',
    lambda p: ((P0(i) ** 2 - P1(i)) * _lemma_den(p, i) for i in _rng(p)),
    _bn4_rhs,
    _gen_mab,
    (M_OK, A_NONNEG, B_NONNEG),
))


def _bn5_rhs(p: Params) -> Iterable[float]:
    a, b, m = p['a'], p['b'], p['m']
    over_a = G([], [m, a + b + m, a + m])
    over_b = G([], [m, a + b + m, b + m])
    for _, term in _inner(p, 'b', 2):
        yield -over_a * term
    for _, term in _inner(p, 'a', 2):
        yield -over_b * term
    for _, term in _inner(p, 'b'):
        yield -over_a * P0(m) * term
    for _, term in _inner(p, 'a'):
        yield -over_b * P0(m) * term
    yield _full_ratio(p) * (P0(m) ** 2 - P1(m) + P1(1))


register(Identity(
    'Bn5',
    lambda p: (P0(i) * P0(p['m'] - i + 1) * _lemma_den(p, i) for i in _rng(p)),
    _bn5_rhs,
    _gen_mab,
    (M_OK, A_NONNEG, B_NONNEG),
))


def _gen_bn6(rng):
    params = _gen_mabc(rng)
    params['c'] = _real(rng, 0.1, 10.0)
    return params


def _bn6_inner(p: Params) -> Iterable[Tuple[int, float]]:
    """(i, Γ(b+c−i+m)/(Γ(c−i+m) i))"""
    b, c, m = p['b'], p['c'], p['m']
    for i in range(1, int(m)):
        yield i, G([b + c - i + m], [c - i + m]) / i


def _bn6_rhs(p: Params) -> Iterable[float]:
    b, c, m = p['b'], p['c'], p['m']
    pref = G([b + 1, c, c + m], [m, b + c + 1])
    for _, term in _bn6_inner(p):
        yield -pref * term
    yield G([b + 1, c, b + c + m], [m, b + c + 1]) * (P0(b + c + m) - P0(b + c + 1) + P0(m))


register(Identity(
    'Bn6',
    lambda p: (G([p['c'] - i + p['m'], p['a'] + p['b'] + i + p['m']], [i, p['m'] - i + 1]) * P0(i)
               for i in _rng(p)),
    _bn6_rhs,
    _gen_bn6,
    (M_OK, A_NONNEG, B_NONNEG, C_POS),
    status='unresolved',
    note="右边不含 a，m=1 时两边已不相等",
))


def _bn7_rhs(p: Params) -> Iterable[float]:
    b, c, m = p['b'], p['c'], p['m']
    pref = 2 * G([b + 1, c, c + m], [m, b + c + 1])
    for i, term in _bn6_inner(p):
        yield -pref * term * P0(b + c - i + m)
        yield pref * term * P0(i)
        yield -pref * term * (-P0(b + c + 1) + P0(m) + P0(1))
    shift = P0(b + c + m) - P0(b + c + 1) + P0(m)
    yield G([b + 1, c, b + c + m], [m, b + c + 1]) * (P1(b + c + m) - P1(b + c + 1) - P1(m) + shift * shift)


register(Identity(
    'Bn7',
    lambda p: (G([p['c'] - i + p['m'], p['a'] + p['b'] + i + p['m']], [p['a'] + i, p['m'] - i + 1])
               * (P0(i) ** 2 - P1(i)) for i in _rng(p)),
    _bn7_rhs,
    _gen_bn6,
    (M_OK, A_NONNEG, B_NONNEG, C_POS),
    status='unresolved',
    note="与 Bn6 同源，m=1 时两边已不相等",
))


def _bn8_rhs(p: Params) -> Iterable[float]:
    a, b, c, m = p['a'], p['b'], p['c'], p['m']
    yield G([c + m, a + b + m], [a, m + 1]) * P0(a + b + m) * (P0(c + m) - P0(c))
    for i in _rng(p):
        yield (G([c + m, a + b + m, b + m + 1, c], [a + i, c + i, m - i + 1, b - i + m + 1]) / i
               * (P0(a + b + m) - P0(b - i + m + 1) + P0(b + m + 1)))


def _gen_bn8(rng):
    params = _gen_bn6(rng)
    params['a'] = _real(rng, 0.1, 10.0)
    return params


register(Identity(
    'Bn8',
    lambda p: (G([p['c'] - i + p['m'], p['a'] + p['b'] + i + p['m']], [p['a'] + i, p['m'] - i + 1])
               * P0(p['a'] + p['b'] + i + p['m']) / i for i in _rng(p)),
    _bn8_rhs,
    _gen_bn8,
    (M_OK, A_POS, B_NONNEG, C_POS),
))


# ---------------------------------------------------------------------------
# 化简过程中的内层和与多伽马函数基本关系


def _gen_s4(rng):
    m = _int(rng, 2, 12)
    return {'m': m, 'k': _int(rng, 1, m - 1), 'a': _real(rng, 0.0, 8.0)}


def _s4_weight(p: Params, j: int) -> float:
    a, M = p['a'], p['m'] - p['k']
    return G([2 * M + 2 * a - 2 * j + 1], [2 * M - 2 * j + 1])


def _s4_lhs(p: Params, power: int) -> Iterable[float]:
    a, M = p['a'], p['m'] - p['k']
    for j in range(1, int(M) + 1):
        yield _s4_weight(p, j) * (1 / (1 + a - j + 2 * M) ** power - 1 / (j + 0.5) ** power)


def _s4r_rhs(p: Params) -> Iterable[float]:
    a, M = p['a'], p['m'] - p['k']
    yield G([2 * a + 2 * M + 2], [2 * M + 2]) * (P0(a + 1) - P0(a + 2 * M + 1)
                                                 - 2 * (2 * a + 1) / (2 * a + 2 * M + 1) + 2)


S4_DOMAIN = (M_OK, ('1 <= k < m', lambda p: 1 <= p['k'] < p['m']), A_NONNEG)

register(Identity(
    's_4r',
    lambda p: _s4_lhs(p, 1),
    _s4r_rhs,
    _gen_s4,
    S4_DOMAIN,
))


def _gen_s5(rng):
    m = _int(rng, 2, 8)
    return {'m': m, 'k': _int(rng, 1, m - 1), 'a': _real(rng, 0.1, 5.0)}


def _s5r_rhs(p: Params) -> Iterable[float]:
    a, M = p['a'], p['m'] - p['k']
    pref = G([2 * M + 2 * a + 2], [2 * M + 2])
    for j in range(1, int(M) + 1):
        coeff = (-_div(4 * a * a - 1, a + j - 1) - (1 - 4 * a * a) / (a + j)
                 - _div(4 * a * a - 6 * a + 2, -2 * a - 2 * j + 3) - 2 * a * (2 * a + 1) / (2 * a + 2 * j + 1)
                 + 1 / (a + 2 * j) - (2 - 8 * a) / (2 * a + 2 * j - 1) - _div(1, -a - 2 * j + 1))
        shift = (P0(j + 0.5) - P0(a + j + 0.5) + P0(a + M + 1) + P0(a + M + 1.5) + P0(j)
                 - P0(a + j) - P0(M + 1) - P0(M + 1.5))
        tail = (a + j) / (j * (a + 2 * j) ** 2) + (
            a * (2 * a - 1) * (2 * j - 1) / (j * (a + j) ** 2) - 2 * a * (2 * a + 1) / (a + j + 0.5) ** 2
            + (2 * j - 1) / (a + 2 * j - 1) ** 2) / (2 * a + 2 * j - 1)
        yield pref * (coeff * shift + tail)


register(Identity(
    's_5r',
    lambda p: _s4_lhs(p, 2),
    _s5r_rhs,
    _gen_s5,
    S4_DOMAIN + (('a != 1/2', lambda p: p['a'] != 0.5),),
    note="a = 1/2 时右边第三项为 0/0",
))


def _gen_s6(rng):
    m = _int(rng, 3, 12)
    return {'m': m, 'k': _int(rng, 1, m - 2), 'a': _real(rng, 0.0, 6.0), 'b': _real(rng, 0.0, 6.0)}


def _s6r_lhs(p: Params) -> Iterable[float]:
    a, b, k, m = p['a'], p['b'], p['k'], p['m']
    for j in range(1, int(m - k)):
        yield (_sign(j) * G([a + b - j - k + m], [m - k - j])
               * (1 / (a + b - j - 2 * k + 2 * m - 1) ** 2 - 1 / j ** 2))


def _s6r_rhs(p: Params) -> Iterable[float]:
    a, b, k, m = p['a'], p['b'], p['k'], p['m']
    pref = G([a + b - k + m], [m - k])
    for j in range(1, int(m - k)):
        coeff = (1 / (a + b - j - k + m) - _div(1, a + b - 2 * j - 2 * k + 2 * m)
                 - _div(1, a + b - 2 * j - 2 * k + 2 * m - 1))
        shift = P0(m - k) - P0(a + b - j - k + m) - P0(a + b - k + m) - P0(m - k - j)
        yield pref * (coeff * shift + _div(1, (a + b - 2 * j - 2 * k + 2 * m - 1) ** 2))


register(Identity(
    's6r',
    _s6r_lhs,
    _s6r_rhs,
    _gen_s6,
    (M_OK, ('1 <= k <= m − 2', lambda p: 1 <= p['k'] <= p['m'] - 2), A_NONNEG, B_NONNEG),
    status='unresolved',
    note="左边交错号 (−1)^j 在右边没有对应，最小规模处即不相等",
))

register(Identity(
    'pl0',
    lambda p: [P0(p['l'])],
    lambda p: [-EULER_GAMMA] + [1 / k for k in range(1, int(p['l']))],
    lambda rng: {'l': _int(rng, 1, 60)},
    (('l 为正整数', lambda p: p['l'] >= 1 and float(p['l']).is_integer()),),
))

register(Identity(
    'm_poly0',
    lambda p: [P0(p['m'] * p['k'])],
    lambda p: [math.log(p['m'])] + [P0(p['k'] + i / p['m']) / p['m'] for i in range(int(p['m']))],
    lambda rng: {'m': _int(rng, 1, 10), 'k': _real(rng, 0.1, 10.0)},
    (M_OK, ('k > 0', lambda p: p['k'] > 0)),
))

register(Identity(
    'm_poly1',
    lambda p: [P1(p['m'] * p['k'])],
    lambda p: [P1(p['k'] + i / p['m']) / p['m'] ** 2 for i in range(int(p['m']))],
    lambda rng: {'m': _int(rng, 1, 10), 'k': _real(rng, 0.1, 10.0)},
    (M_OK, ('k > 0', lambda p: p['k'] > 0)),
))


# ---------------------------------------------------------------------------
# 检查与扫描


@dataclass
class IdentityCase:
    """一个恒等式在一组参数上的检查"""
    id: str
    params: Params
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    residual: Optional[float] = None
    condition: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'params': self.params,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'residual': self.residual,
            'condition': self.condition,
        }


def get_identity(identity_id: str) -> Identity:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise DomainError(f"未登记的恒等式: {identity_id}") from None


def _evaluate(side: Side, params: Params) -> CompensatedSum:
    return CompensatedSum().extend(side(params))


def check_identity(case: IdentityCase) -> float:
    """计算两边并返回相对残差 |lhs−rhs| / max(1, |lhs|, |rhs|)

    结果同时写回 case 的 lhs、rhs、residual、condition 字段。
    """
    identity = get_identity(case.id)
    identity.check_domain(case.params)
    left = _evaluate(identity.lhs, case.params)
    right = _evaluate(identity.rhs, case.params)
    case.lhs, case.rhs = left.value, right.value
    case.residual = abs(case.lhs - case.rhs) / max(1.0, abs(case.lhs), abs(case.rhs))
    case.condition = max(left.condition, right.condition)
    return case.residual


@dataclass
class IdentitySummary:
    """一个恒等式的扫描汇总"""
    id: str
    status: str
    cases: List[IdentityCase] = field(default_factory=list)
    failures: List[IdentityCase] = field(default_factory=list)
    ill_conditioned: List[IdentityCase] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.cases), default=0.0)

    @property
    def max_condition(self) -> float:
        return max((c.condition for c in self.cases), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'status': self.status,
            'n_cases': len(self.cases),
            'max_residual': self.max_residual,
            'max_condition': self.max_condition,
            'failures': len(self.failures),
        }


@dataclass
class SweepReport:
    """恒等式扫描报告"""
    seed: int
    tolerance: float
    summaries: List[IdentitySummary] = field(default_factory=list)

    def by_status(self, status: str) -> List[IdentitySummary]:
        return [s for s in self.summaries if s.status == status]

    @property
    def failures(self) -> List[IdentityCase]:
        """只统计 verified 恒等式的失败"""
        return [c for s in self.by_status('verified') for c in s.failures]

    @property
    def passed(self) -> bool:
        return not self.failures

    def cases(self) -> Iterable[Tuple[str, IdentityCase]]:
        for summary in self.summaries:
            for case in summary.cases:
                yield summary.status, case


def _case_rng(seed: int, identity_id: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(identity_id.encode('utf-8'))])


def _sweep_one(identity: Identity, n_cases: int, seed: int, settings: Settings) -> IdentitySummary:
    tol = settings.tolerances
    rng = _case_rng(seed, identity.id)
    summary = IdentitySummary(identity.id, identity.status)
    for _ in range(n_cases):
        case = IdentityCase(identity.id, identity.generate(rng))
        residual = check_identity(case)
        summary.cases.append(case)
        if case.condition > tol.condition_limit:
            summary.ill_conditioned.append(case)
        if residual > tol.identity:
            summary.failures.append(case)
    if summary.failures:
        if identity.status == 'verified':
            logger.warning("恒等式 %s 失败 %d/%d 次，最大残差 %.3g",
                           identity.id, len(summary.failures), n_cases, summary.max_residual)
        elif identity.status == 'unresolved':
            logger.warning("未解决的恒等式 %s 最大残差 %.3g: %s",
                           identity.id, summary.max_residual, identity.note)
    logger.info("恒等式 %s: %d 组参数，最大残差 %.3g", identity.id, n_cases, summary.max_residual)
    return summary


def sweep(ids: Optional[List[str]] = None, n_cases: int = 25, seed: int = 0,
          settings: Optional[Settings] = None) -> SweepReport:
    """对一组恒等式做带种子的参数扫描

    Args:
        ids: 恒等式编号列表，默认全部
        n_cases: 每个恒等式的参数组数
        seed: 随机种子
        settings: 容差与线程数

    Returns:
        按编号顺序排列的 SweepReport
    """
    if n_cases < 1:
        raise DomainError(f"n_cases 必须为正: {n_cases}")
    settings = settings or Settings()
    identities = [get_identity(i) for i in (ids or list(REGISTRY))]
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        summaries = list(pool.map(lambda ident: _sweep_one(ident, n_cases, seed, settings), identities))
    return SweepReport(seed, settings.tolerances.identity, summaries)


def write_jsonl(report: SweepReport, path: str) -> int:
    """每个检查写一行 JSON，返回行数"""
    count = 0
    with open(path, 'w', encoding='utf-8') as f:
        for status, case in report.cases():
            row = case.to_dict()
            row['status'] = status
            f.write(json.dumps(row, ensure_ascii=False) + '\n')
            count += 1
    return count
