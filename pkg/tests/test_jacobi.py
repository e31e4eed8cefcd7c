"""Jacobi 多项式与求积规则测试"""
import numpy as np
import pytest
from scipy import integrate, special

from fermion_entropy.core.exceptions import DomainError
from fermion_entropy.core.jacobi import (JacobiBasis, composite_rule, gauss_jacobi_rule, jacobi_eval,
                                         jacobi_norm, jacobi_series_bernstein, jacobi_series_power,
                                         jacobi_table, norm_h)
from fermion_entropy.core.kernel import EnsembleSpec

PARAMETERS = [(0, 0), (1, 0), (2, 3), (0.5, 4.0), (6, 1)]
POINTS = np.linspace(-1.0, 1.0, 9)

@pytest.mark.parametrize("alpha,beta", PARAMETERS)
def test_recurrence_matches_scipy(alpha, beta):
    """测试三项递推与 scipy 一致"""
    for k in range(8):
        expected = special.eval_jacobi(k, alpha, beta, POINTS)
        np.testing.assert_allclose(jacobi_eval(k, alpha, beta, POINTS), expected, rtol=1e-12, atol=1e-12)

@pytest.mark.parametrize("alpha,beta", PARAMETERS)
def test_table_matches_eval(alpha, beta):
    """测试批量表与单独求值一致"""
    table = jacobi_table(6, alpha, beta, POINTS)
    assert table.shape == (7, POINTS.size)
    for k in range(7):
        np.testing.assert_allclose(table[k], jacobi_eval(k, alpha, beta, POINTS), rtol=1e-14, atol=1e-14)

@pytest.mark.parametrize("alpha,beta", [(0, 0), (2, 3), (1, 5)])
def test_series_forms(alpha, beta):
    """测试两种显式级数形式与递推一致"""
    for k in range(6):
        for x in (-0.9, -0.2, 0.35, 1.0):
            value = jacobi_eval(k, alpha, beta, x)
            assert jacobi_series_power(k, alpha, beta, x) == pytest.approx(value, rel=1e-10, abs=1e-10)
            assert jacobi_series_bernstein(k, alpha, beta, x) == pytest.approx(value, rel=1e-10, abs=1e-10)

def test_endpoint_value():
    """测试 J_k(1) = (alpha+1)_k / k!"""
    assert jacobi_eval(3, 2, 1, 1.0) == pytest.approx(3 * 4 * 5 / 6)
    assert jacobi_eval(0, 2, 1, 0.3) == 1.0

@pytest.mark.parametrize("alpha,beta", [(0, 0), (2, 1), (3, 3)])
def test_norm(alpha, beta):
    """测试归一化常数与数值积分一致"""
    for k in range(5):
        def integrand(x):
            return ((1 - x) / 2) ** alpha * ((1 + x) / 2) ** beta * jacobi_eval(k, alpha, beta, x) ** 2
        expected, _ = integrate.quad(integrand, -1, 1, epsabs=1e-13, epsrel=1e-13)
        assert jacobi_norm(k, alpha, beta) == pytest.approx(expected, rel=1e-10)

def test_norm_h():
    """测试按系综的归一化常数"""
    spec_a = EnsembleSpec('A', 2, 3)
    assert norm_h(1, spec_a) == pytest.approx(0.5 * jacobi_norm(2, 1, 1))
    spec_b = EnsembleSpec('B', 2, 5, 3)
    assert norm_h(1, spec_b) == pytest.approx(jacobi_norm(1, 2, 1))
    with pytest.raises(DomainError):
        norm_h(2, spec_b)

def test_orthogonality():
    """测试不同次数的多项式正交"""
    rule = gauss_jacobi_rule(12, 2.0, 1.0)
    table = jacobi_table(5, 2.0, 1.0, rule.nodes)
    gram = (table * rule.weights) @ table.T
    off_diagonal = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off_diagonal)) < 1e-12

@pytest.mark.parametrize("alpha,beta", [(0, 0), (1.5, 0.5), (4, 2)])
def test_gauss_jacobi_exactness(alpha, beta):
    """测试 Gauss–Jacobi 规则对 2n−1 次多项式精确"""
    order = 6
    rule = gauss_jacobi_rule(order, alpha, beta)
    assert len(rule) == order
    assert np.all(np.diff(rule.nodes) > 0)
    for degree in range(2 * order):
        expected, _ = integrate.quad(lambda x: (1 - x) ** alpha * (1 + x) ** beta * x ** degree, -1, 1,
                                     epsabs=1e-14, epsrel=1e-13)
        assert rule.integrate(rule.nodes ** degree) == pytest.approx(expected, rel=1e-11, abs=1e-13)

def test_composite_rule_log_singularity():
    """测试复合规则对端点对数奇点的积分"""
    rule = composite_rule(20)
    # ∫_{-1}^{1} ln((1+x)/2) dx = −2
    assert rule.integrate(np.log(rule.plus_half)) == pytest.approx(-2.0, rel=1e-12)
    # 按 y=(1+x)/2 换元为 2∫_0^1 y ln²y dy = 1/2
    assert rule.integrate(rule.plus_half * np.log(rule.plus_half) ** 2) == pytest.approx(0.5, rel=1e-12)
    np.testing.assert_allclose(rule.plus_half + rule.minus_half, 1.0, rtol=0, atol=1e-15)
    assert rule.integrate(np.ones(len(rule))) == pytest.approx(2.0, rel=1e-14)

def test_basis():
    """测试多项式基"""
    basis = JacobiBasis.build(1.0, 2.0, 4)
    assert len(basis.norms) == 5
    assert basis.norms[3] == pytest.approx(jacobi_norm(3, 1.0, 2.0))
    np.testing.assert_allclose(basis.evaluate(POINTS), jacobi_table(4, 1.0, 2.0, POINTS))

def test_invalid_parameters():
    """测试无效参数"""
    with pytest.raises(DomainError):
        jacobi_eval(2, -1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        jacobi_eval(-1, 0.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        gauss_jacobi_rule(0, 0.0, 0.0)
    with pytest.raises(DomainError):
        composite_rule(10, ratio=1.5)

def test_parity():
    """测试 J_k^{(a,b)}(−x) = (−1)^k J_k^{(b,a)}(x)"""
    rng = np.random.default_rng(1)
    for _ in range(50):
        k = int(rng.integers(0, 31))
        a, b = rng.uniform(0.0, 10.0, 2)
        x = rng.uniform(-1.0, 1.0)
        expected = (-1) ** k * jacobi_eval(k, b, a, x)
        scale = max(1.0, abs(jacobi_eval(k, a, b, 1.0)), abs(jacobi_eval(k, b, a, 1.0)))
        assert jacobi_eval(k, a, b, -x) == pytest.approx(expected, rel=1e-11, abs=1e-11 * scale)

def test_known_values():
    """测试低次多项式与归一化常数的已知值"""
    assert jacobi_eval(1, 0, 0, 0.5) == pytest.approx(0.5)
    assert jacobi_eval(2, 0, 0, 1.0) == pytest.approx(1.0)
    assert jacobi_norm(0, 0, 0) == pytest.approx(2.0)
    assert jacobi_norm(1, 1, 0) == pytest.approx(0.5)
    assert norm_h(0, EnsembleSpec('A', 1, 1)) == pytest.approx(1.0)
    rule = gauss_jacobi_rule(1, 0.0, 0.0)
    assert rule.nodes[0] == pytest.approx(0.0, abs=1e-15)
    assert rule.weights[0] == pytest.approx(2.0)
    assert gauss_jacobi_rule(5, 0.0, 0.0).integrate(gauss_jacobi_rule(5, 0.0, 0.0).nodes ** 4) == pytest.approx(0.4)
