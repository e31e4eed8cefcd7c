"""有限和恒等式测试"""
import json
import math

import mpmath
import numpy as np
import pytest

from fermion_entropy.core.config import Settings
from fermion_entropy.core.exceptions import DomainError
from fermion_entropy.core.identities import (REGISTRY, STATUSES, IdentityCase, check_identity, get_identity,
                                             hyper_terminating, phi, sweep, write_jsonl)

VERIFIED_IDS = [i for i, identity in REGISTRY.items() if identity.status == 'verified']
UNRESOLVED_IDS = ['B72', 'Bn6', 'Bn7', 's6r']

def test_registry():
    """测试登记表"""
    assert len(REGISTRY) > 40
    for identity in REGISTRY.values():
        assert identity.status in STATUSES
    assert [i for i in REGISTRY if i not in VERIFIED_IDS] == UNRESOLVED_IDS
    for identity_id in UNRESOLVED_IDS:
        assert get_identity(identity_id).note, f"{identity_id} 缺少说明"
    with pytest.raises(DomainError):
        get_identity('no_such_identity')

def test_chu_vandermonde():
    """测试 m=2, n=3 时两边均为 3"""
    case = IdentityCase('chu_vandermonde', {'m': 2, 'n': 3})
    residual = check_identity(case)
    assert case.lhs == pytest.approx(3.0)
    assert case.rhs == pytest.approx(3.0)
    assert residual < 1e-15

def test_lemma1():
    """测试 m=1, a=2, b=3, c=1 时两边均为 1/24"""
    case = IdentityCase('lemma1', {'m': 1, 'a': 2, 'b': 3, 'c': 1})
    check_identity(case)
    assert case.lhs == pytest.approx(1 / 24, rel=1e-14)
    assert case.rhs == pytest.approx(1 / 24, rel=1e-14)
    assert case.condition >= 1.0

def test_transformation():
    """测试单位自变量变换公式在非整数参数处成立"""
    case = IdentityCase('tf1', {'m': 3, 'a': 1.5, 'b': 2.5, 'c': 0.5})
    assert check_identity(case) < 1e-12

def test_b71_ratio_coefficient():
    """测试 B71 在 m=2, a=2, b=3 时两边相等"""
    case = IdentityCase('B71', {'m': 2, 'a': 2.0, 'b': 3.0})
    residual = check_identity(case)
    expected = float(mpmath.digamma(3) * mpmath.digamma(4) + 2 * mpmath.digamma(4) * mpmath.digamma(5))
    assert case.lhs == pytest.approx(expected, rel=1e-13)
    assert case.rhs == pytest.approx(expected, rel=1e-12)
    assert residual < 1e-12

@pytest.mark.parametrize("params,expected", [
    ({'m': 1, 'a': 1, 'b': 1, 'c': 1.0, 'd': 1}, 1.25),
    ({'m': 2, 'a': 1, 'b': 1, 'c': 1.0, 'd': 1}, 19 / 36),
    ({'m': 1, 'a': 2, 'b': 1, 'c': 1.0, 'd': 1}, 7 / 12),
])
def test_tf4_small(params, expected):
    """测试 tf4 在小参数处的精确值"""
    case = IdentityCase('tf4', params)
    check_identity(case)
    assert case.lhs == pytest.approx(expected, rel=1e-13)
    assert case.rhs == pytest.approx(expected, rel=1e-13)

def test_s5r_small():
    """测试 s_5r 在 m=2, k=1, a=1 时两边均为 −2/3"""
    case = IdentityCase('s_5r', {'m': 2, 'k': 1, 'a': 1.0})
    check_identity(case)
    assert case.lhs == pytest.approx(-2 / 3, rel=1e-13)
    assert case.rhs == pytest.approx(-2 / 3, rel=1e-12)
    with pytest.raises(DomainError):
        check_identity(IdentityCase('s_5r', {'m': 2, 'k': 1, 'a': 0.5}))

def test_full_registry_sweep():
    """测试默认扫描全部恒等式时通过"""
    settings = Settings()
    settings.threads = 4
    report = sweep(None, n_cases=25, seed=0, settings=settings)
    assert len(report.summaries) == len(REGISTRY)
    assert report.passed, f"失败: {sorted({c.id for c in report.failures})}"
    assert len(report.by_status('verified')) == len(VERIFIED_IDS)

def test_domain_violation():
    """测试违反定义域的参数"""
    with pytest.raises(DomainError):
        check_identity(IdentityCase('lemma1', {'m': 1, 'a': -1, 'b': 3, 'c': 1}))
    with pytest.raises(DomainError):
        check_identity(IdentityCase('ofgi', {'m': 1.5, 'a': 1, 'b': 1}))

def test_hyper_terminating():
    """测试终止超几何级数"""
    # 2F1(−2, 1; 1; 1) = (1−1)^2 = 0
    assert hyper_terminating([-2, 1], [1]) == pytest.approx(0.0, abs=1e-15)
    # Chu–Vandermonde: 2F1(−n, b; c; 1) = (c−b)_n/(c)_n
    assert hyper_terminating([-3, 2.5], [4.0]) == pytest.approx(1.5 * 2.5 * 3.5 / (4 * 5 * 6), rel=1e-14)
    with pytest.raises(DomainError):
        hyper_terminating([0.5, 1.5], [2.0])

def test_phi():
    """测试 Gamma 比值函数 phi 有限"""
    assert math.isfinite(phi(1.0, 2.0, 3.0, 1.0, 2.0))

def test_b1_sweep():
    """测试 B1 在 100 组参数上的残差"""
    report = sweep(['B1'], n_cases=100, seed=7)
    summary = report.summaries[0]
    assert len(summary.cases) == 100
    assert summary.max_residual <= 1e-10
    assert report.passed

@pytest.mark.parametrize("identity_id", VERIFIED_IDS)
def test_verified_identities(identity_id):
    """测试每个已验证的恒等式在默认扫描下成立"""
    report = sweep([identity_id], n_cases=25, seed=0)
    assert report.passed
    summary = report.summaries[0]
    assert summary.max_residual <= 1e-8, f"{identity_id} 最大残差 {summary.max_residual}"

def test_sweep_reproducible():
    """测试相同种子得到相同参数，且与线程数无关"""
    settings = Settings()
    settings.threads = 4
    first = sweep(['B1', 'lemma1', 'ofgi'], n_cases=5, seed=3)
    second = sweep(['B1', 'lemma1', 'ofgi'], n_cases=5, seed=3, settings=settings)
    assert [s.id for s in first.summaries] == ['B1', 'lemma1', 'ofgi']
    for a, b in zip(first.summaries, second.summaries):
        assert [c.params for c in a.cases] == [c.params for c in b.cases]
        assert [c.residual for c in a.cases] == [c.residual for c in b.cases]

    other = sweep(['lemma1'], n_cases=5, seed=4)
    assert [c.params for c in other.summaries[0].cases] != [c.params for c in first.summaries[1].cases]

def test_unresolved_not_failures():
    """测试未解决的恒等式不计入失败"""
    report = sweep(UNRESOLVED_IDS, n_cases=5, seed=0)
    assert report.passed
    assert report.failures == []
    assert len(report.by_status('unresolved')) == 4

def test_invalid_cases():
    """测试参数组数必须为正"""
    with pytest.raises(DomainError):
        sweep(['B1'], n_cases=0)

def test_write_jsonl(tmp_path):
    """测试 JSON lines 输出"""
    report = sweep(['B1', 'chu_vandermonde'], n_cases=3, seed=7)
    path = tmp_path / "residuals.jsonl"
    count = write_jsonl(report, str(path))
    assert count == 6
    rows = [json.loads(line) for line in path.read_text(encoding='utf-8').splitlines()]
    assert len(rows) == 6
    assert set(rows[0]) == {'id', 'params', 'lhs', 'rhs', 'residual', 'condition', 'status'}
    assert rows[0]['id'] == 'B1'
    assert rows[0]['status'] == 'verified'
    assert all(np.isfinite(r['residual']) for r in rows)
