"""纠缠熵统计核心模块"""

from .config import Settings, load_settings, save_settings
from .exceptions import ConfigError, DomainError, FermionEntropyError, TuningError
from .kernel import EnsembleSpec, KernelContext, density_one_point, kernel_eval
from .moments import (AsymptoticPoint, MomentReport, asymptotic_point, exact_report,
                      mean_exact, variance_asymptotic, variance_exact)
from .oracles import (mean_quadrature, mean_summation, sweep_specs, variance_quadrature,
                      variance_summation, verify_spec, verify_sweep)
from .identities import IdentityCase, check_identity, sweep
from .sampler import (GaussianCheck, SampleBatch, estimate, load_batch, sample_matrix_caseA,
                      sample_matrix_caseB, sample_mcmc, save_batch)

__all__ = [
    'Settings', 'load_settings', 'save_settings',
    'FermionEntropyError', 'DomainError', 'TuningError', 'ConfigError',
    'EnsembleSpec', 'KernelContext', 'kernel_eval', 'density_one_point',
    'MomentReport', 'AsymptoticPoint', 'mean_exact', 'variance_exact', 'exact_report',
    'asymptotic_point', 'variance_asymptotic',
    'mean_summation', 'variance_summation', 'mean_quadrature', 'variance_quadrature',
    'verify_spec', 'verify_sweep', 'sweep_specs',
    'IdentityCase', 'check_identity', 'sweep',
    'SampleBatch', 'GaussianCheck', 'sample_mcmc', 'sample_matrix_caseB', 'sample_matrix_caseA',
    'estimate', 'save_batch', 'load_batch',
]
