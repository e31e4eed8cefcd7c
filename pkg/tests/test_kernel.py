"""关联核测试"""
import numpy as np
import pytest
from scipy import integrate

from fermion_entropy.core.exceptions import DomainError
from fermion_entropy.core.kernel import (EnsembleSpec, KernelContext, density_one_point, kernel_diag_cd,
                                         kernel_diagonal, kernel_eval, kernel_matrix)

SPECS = [
    EnsembleSpec('A', 1, 1),
    EnsembleSpec('A', 2, 3),
    EnsembleSpec('A', 3, 5),
    EnsembleSpec('B', 1, 1, 1),
    EnsembleSpec('B', 2, 4, 2),
    EnsembleSpec('B', 3, 7, 4),
]

def test_spec_parameters():
    """测试系综参数"""
    spec = EnsembleSpec('A', 2, 5)
    assert (spec.gamma, spec.a, spec.b) == (2, 3, 3)
    assert spec.support == (0.0, 1.0)
    assert spec.degrees == (0, 2)

    spec = EnsembleSpec('B', 2, 6, 4)
    assert (spec.gamma, spec.a, spec.b) == (1, 2, 2)
    assert spec.support == (-1.0, 1.0)
    assert spec.degrees == (0, 1)
    assert EnsembleSpec.from_dict(spec.to_dict()) == spec

def test_spec_validation():
    """测试无效的系综参数"""
    with pytest.raises(DomainError):
        EnsembleSpec('A', 0, 1)
    with pytest.raises(DomainError):
        EnsembleSpec('A', 3, 2)
    with pytest.raises(DomainError):
        EnsembleSpec('A', 1, 2, 1)
    with pytest.raises(DomainError):
        EnsembleSpec('B', 2, 4)
    with pytest.raises(DomainError):
        EnsembleSpec('B', 2, 4, 1)
    with pytest.raises(DomainError):
        EnsembleSpec('B', 2, 4, 5)
    with pytest.raises(DomainError):
        EnsembleSpec('C', 1, 1)

@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_density_normalized(spec):
    """测试单点密度积分为 1"""
    ctx = KernelContext.build(spec)
    low, high = spec.support
    total, _ = integrate.quad(lambda x: density_one_point(ctx, x), low, high, epsabs=1e-12, epsrel=1e-12)
    assert total == pytest.approx(1.0, rel=1e-9)

@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_kernel_symmetric(spec):
    """测试 K(x,y) = K(y,x)"""
    ctx = KernelContext.build(spec)
    low, high = spec.support
    xs = np.linspace(low, high, 7)
    ys = xs[::-1]
    np.testing.assert_allclose(kernel_eval(ctx, xs, ys), kernel_eval(ctx, ys, xs), rtol=1e-14)

@pytest.mark.parametrize("spec", SPECS[:2] + SPECS[3:5], ids=lambda s: s.label)
def test_reproducing(spec):
    """测试投影性质 ∫K(x,z)K(z,y)dz = K(x,y)"""
    ctx = KernelContext.build(spec)
    low, high = spec.support
    x, y = low + 0.3 * (high - low), low + 0.8 * (high - low)
    value, _ = integrate.quad(lambda z: kernel_eval(ctx, x, z) * kernel_eval(ctx, z, y), low, high,
                              epsabs=1e-12, epsrel=1e-12)
    assert value == pytest.approx(kernel_eval(ctx, x, y), rel=1e-8, abs=1e-10)

@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_matrix_and_diagonal(spec):
    """测试核矩阵、对角值与逐点求值一致"""
    ctx = KernelContext.build(spec)
    low, high = spec.support
    x = np.linspace(low, high, 5)
    plus_half, minus_half = (1 + x) / 2, (1 - x) / 2
    matrix = kernel_matrix(ctx, plus_half, minus_half)
    expected = kernel_eval(ctx, x[:, None], x[None, :])
    np.testing.assert_allclose(matrix, expected, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(kernel_diagonal(ctx, plus_half, minus_half), np.diag(expected),
                               rtol=1e-12, atol=1e-14)

@pytest.mark.parametrize("spec", SPECS[3:], ids=lambda s: s.label)
def test_christoffel_darboux(spec):
    """测试 Christoffel–Darboux 对角公式与直接求和一致"""
    ctx = KernelContext.build(spec)
    x = np.linspace(-0.95, 0.95, 11)
    weight = ((1 - x) / 2) ** spec.a * ((1 + x) / 2) ** spec.b
    np.testing.assert_allclose(weight * kernel_diag_cd(ctx, x), kernel_eval(ctx, x, x), rtol=1e-11)

def test_christoffel_darboux_case_a():
    """测试情形 A 不支持汇合公式"""
    ctx = KernelContext.build(EnsembleSpec('A', 2, 3))
    with pytest.raises(DomainError):
        kernel_diag_cd(ctx, 0.5)

def test_scalar_and_support():
    """测试标量输入与支撑检查"""
    ctx = KernelContext.build(EnsembleSpec('B', 1, 1, 1))
    # a=b=0, m=1 时 K(x,x) = 1/h_0 = 1/2
    assert isinstance(kernel_eval(ctx, 0.2, 0.2), float)
    assert kernel_eval(ctx, 0.2, 0.2) == pytest.approx(0.5)
    assert density_one_point(ctx, -1.0) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        kernel_eval(ctx, 1.5, 0.0)

    ctx = KernelContext.build(EnsembleSpec('A', 1, 2))
    with pytest.raises(DomainError):
        density_one_point(ctx, -0.1)
