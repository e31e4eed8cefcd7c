"""异常类型"""


class FermionEntropyError(Exception):
    """本包所有异常的基类"""


class DomainError(FermionEntropyError, ValueError):
    """参数超出定义域或违反前置条件"""


class TuningError(FermionEntropyError, RuntimeError):
    """MCMC 自适应后接受率仍超出允许范围"""


class ConfigError(FermionEntropyError, ValueError):
    """配置文件或环境变量无效"""
