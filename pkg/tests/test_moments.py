"""精确矩与渐近式测试"""
import math

import numpy as np
import pytest

from fermion_entropy.core.exceptions import DomainError
from fermion_entropy.core.kernel import EnsembleSpec
from fermion_entropy.core.moments import (LN2, AsymptoticPoint, MomentReport, asymptotic_point, entropy_v,
                                          exact_report, gaussian_density, mean_exact, standardize,
                                          variance_asymptotic, variance_coefficients, variance_exact)
from fermion_entropy.core.specfun import ZETA2

SMALLEST_VARIANCE = 7 / 12 - ZETA2 / 3

def test_smallest_case_a():
    """测试 m=n=1 的情形 A"""
    spec = EnsembleSpec('A', 1, 1)
    assert mean_exact(spec) == pytest.approx(0.5, abs=1e-14)
    assert variance_exact(spec) == pytest.approx(SMALLEST_VARIANCE, rel=1e-12)

def test_smallest_case_b():
    """测试 m=n=p=1 的情形 B"""
    spec = EnsembleSpec('B', 1, 1, 1)
    assert mean_exact(spec) == pytest.approx(0.5, abs=1e-14)
    assert variance_exact(spec) == pytest.approx(SMALLEST_VARIANCE, rel=1e-12)

@pytest.mark.parametrize("case,m,n,p", [('A', 2, 2, None), ('A', 3, 8, None), ('B', 2, 5, 3), ('B', 4, 4, 4)])
def test_ranges(case, m, n, p):
    """测试均值在 [0, m ln2] 内且方差为正"""
    spec = EnsembleSpec(case, m, n, p)
    assert 0 < mean_exact(spec) < m * LN2
    assert variance_exact(spec) > 0

def test_particle_hole_symmetry():
    """测试 p 与 m+n−p 给出相同的矩"""
    first = EnsembleSpec('B', 2, 5, 3)
    second = EnsembleSpec('B', 2, 5, 4)
    assert mean_exact(first) == pytest.approx(mean_exact(second), rel=1e-13)
    assert variance_exact(first) == pytest.approx(variance_exact(second), rel=1e-12)

def test_variance_coefficients():
    """测试 m=n=p=1 的方差系数"""
    c = variance_coefficients(1, 1, 1)
    assert c['c0'] == pytest.approx(1 / 3)
    assert c['c1'] == pytest.approx(1 / 3)
    assert c['c2'] == pytest.approx(1 / 12)
    assert c['c3'] == 0
    assert c['c4'] == pytest.approx(-5 / 12)

def test_entropy_v():
    """测试单个本征值的熵贡献"""
    assert entropy_v(0.0) == pytest.approx(-LN2)
    assert entropy_v(1.0) == 0.0
    assert entropy_v(-1.0) == 0.0
    values = entropy_v(np.array([-0.5, 0.5]))
    assert values[0] == pytest.approx(values[1])

def test_report():
    """测试 MomentReport"""
    report = exact_report(EnsembleSpec('A', 1, 1))
    assert report.method == 'closed_form'
    data = report.to_dict()
    assert data['spec'] == {'case': 'A', 'm': 1, 'n': 1}
    assert data['mean'] == pytest.approx(0.5)
    with pytest.raises(DomainError):
        MomentReport(0.5, -1.0, 'closed_form', 0.0, report.spec)
    with pytest.raises(DomainError):
        MomentReport(0.5, 0.1, 'guess', 0.0, report.spec)

def test_asymptotic_leading():
    """测试主阶渐近式"""
    assert variance_asymptotic(AsymptoticPoint(0.5), 'A') == pytest.approx(0.5 * (0.75 + math.log(0.5)))
    # f2 = 1/2 时对数项消失
    point = AsymptoticPoint(0.25, 0.5)
    assert variance_asymptotic(point, 'B') == pytest.approx(0.25 + 0.0625 + math.log(0.75))
    with pytest.raises(DomainError):
        variance_asymptotic(AsymptoticPoint(0.25), 'B')
    with pytest.raises(DomainError):
        variance_asymptotic(AsymptoticPoint(0.25, 0.5, 'corrected', 100), 'A')

def test_asymptotic_point_validation():
    """测试渐近点的定义域"""
    with pytest.raises(DomainError):
        AsymptoticPoint(0.6)
    with pytest.raises(DomainError):
        AsymptoticPoint(0.3, 0.2)
    with pytest.raises(DomainError):
        AsymptoticPoint(0.3, 0.4, 'corrected')
    with pytest.raises(DomainError):
        AsymptoticPoint(0.3, order='next')

def test_asymptotic_case_b_agrees():
    """测试情形 B 大维数时精确值趋于渐近式"""
    spec = EnsembleSpec('B', 40, 120, 80)
    exact = variance_exact(spec)
    leading = variance_asymptotic(asymptotic_point(spec), 'B')
    corrected = variance_asymptotic(asymptotic_point(spec, 'corrected'), 'B')
    assert leading == pytest.approx(exact, abs=1e-4)
    assert corrected == pytest.approx(exact, abs=1e-5)

def test_asymptotic_case_a_converges():
    """测试情形 A 的误差随维数减小"""
    errors = []
    for m in (5, 20, 80):
        spec = EnsembleSpec('A', m, 3 * m)
        errors.append(abs(variance_exact(spec) - variance_asymptotic(asymptotic_point(spec), 'A')))
    assert errors[0] > errors[1] > errors[2]
    limit = variance_asymptotic(AsymptoticPoint(0.25), 'A')
    assert errors[2] < 0.05 * limit

def test_standardize():
    """测试标准化与正态密度"""
    spec = EnsembleSpec('A', 1, 1)
    x = standardize([0.5, 0.5 + math.sqrt(SMALLEST_VARIANCE)], spec)
    np.testing.assert_allclose(x, [0.0, 1.0], atol=1e-12)
    assert gaussian_density(0.0) == pytest.approx(1 / math.sqrt(2 * math.pi))
