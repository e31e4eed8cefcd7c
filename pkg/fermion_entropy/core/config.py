"""配置管理模块"""
import os
import logging
from dataclasses import dataclass, field, asdict, fields
from typing import Any, Dict, Optional, Tuple

import yaml

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_DIR = os.path.expanduser("~/.fermion_entropy")
DEFAULTS_FILE = os.path.join(os.path.dirname(os.path.dirname(__file__)), "config", "defaults.yaml")
THREADS_ENV = "FENT_THREADS"


@dataclass
class Tolerances:
    """验证容差"""
    verify_abs: float = 1e-8
    verify_rel: float = 1e-10
    mean_abs: float = 1e-9
    identity: float = 1e-8
    condition_limit: float = 1e8


@dataclass
class QuadratureSettings:
    """数值积分设置"""
    order_offset: int = 40
    error_step: int = 20
    grading_levels: int = 15
    grading_ratio: float = 0.1


@dataclass
class SamplerSettings:
    """采样器设置"""
    chains: int = 1000
    target_acceptance: float = 0.4
    acceptance_bounds: Tuple[float, float] = (0.1, 0.7)
    burn_in_factor: int = 10000
    thinning_factor: int = 100
    adapt_interval: int = 50
    initial_step: float = 0.1


@dataclass
class Settings:
    """全局设置"""
    threads: int = 1
    tolerances: Tolerances = field(default_factory=Tolerances)
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    sampler: SamplerSettings = field(default_factory=SamplerSettings)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['sampler']['acceptance_bounds'] = list(self.sampler.acceptance_bounds)
        return data


def _read_yaml(path: str) -> Dict[str, Any]:
    """读取 YAML 文件，文件为空时返回空字典"""
    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"配置文件 {path} 解析失败: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"配置文件 {path} 顶层必须是映射")
    return data


def _merge_section(target: Any, values: Dict[str, Any], section: str) -> None:
    known = {f.name for f in fields(target)}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(f"未知配置项: {section}.{key}")
        if key == 'acceptance_bounds':
            if len(value) != 2 or not 0.0 <= value[0] < value[1] <= 1.0:
                raise ConfigError(f"acceptance_bounds 无效: {value}")
            value = (float(value[0]), float(value[1]))
        setattr(target, key, value)


def _apply(settings: Settings, data: Dict[str, Any], source: str) -> None:
    sections = {
        'tolerances': settings.tolerances,
        'quadrature': settings.quadrature,
        'sampler': settings.sampler,
    }
    for key, value in data.items():
        if key == 'threads':
            settings.threads = int(value)
        elif key in sections:
            if not isinstance(value, dict):
                raise ConfigError(f"{source} 中 {key} 必须是映射")
            _merge_section(sections[key], value, key)
        else:
            raise ConfigError(f"未知配置项: {key} ({source})")


def load_settings(config_dir: Optional[str] = None) -> Settings:
    """加载配置

    先读取包内默认配置，再叠加 config_dir/config.yaml 中的用户配置，
    最后应用环境变量 FENT_THREADS。

    Args:
        config_dir: 配置文件目录，默认为 ~/.fermion_entropy

    Returns:
        合并后的 Settings
    """
    settings = Settings()
    _apply(settings, _read_yaml(DEFAULTS_FILE), DEFAULTS_FILE)

    config_dir = config_dir if config_dir else DEFAULT_CONFIG_DIR
    user_file = os.path.join(config_dir, "config.yaml")
    if os.path.exists(user_file):
        logger.info("读取用户配置 %s", user_file)
        _apply(settings, _read_yaml(user_file), user_file)

    env_threads = os.environ.get(THREADS_ENV)
    if env_threads:
        try:
            settings.threads = int(env_threads)
        except ValueError as e:
            raise ConfigError(f"环境变量 {THREADS_ENV} 必须是整数: {env_threads}") from e

    if settings.threads < 1:
        raise ConfigError(f"线程数必须为正: {settings.threads}")
    return settings


def save_settings(settings: Settings, config_dir: Optional[str] = None) -> str:
    """将配置写入 config_dir/config.yaml，返回文件路径"""
    config_dir = config_dir if config_dir else DEFAULT_CONFIG_DIR
    if not os.path.exists(config_dir):
        os.makedirs(config_dir)
    path = os.path.join(config_dir, "config.yaml")
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(settings.to_dict(), f, allow_unicode=True, sort_keys=False)
    return path
